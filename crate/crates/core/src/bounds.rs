//! Closed-form bounds that appear in the theory; informational only.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("{0} must be at least 1")]
    Parameter(&'static str),
    #[error("bound overflows u64")]
    Overflow,
}

/// Wall size that guarantees a zero subwall of size `t` when labels come from
/// a group of order `m`: `n_{3t+1} = 3(t+1)` and `n_i = 3(n_{i+1}+1)·m`,
/// returning `n_0`.
pub fn thomassen_bound(m: u64, t: u64) -> Result<u64, BoundError> {
    thomassen_sequence(m, t).map(|seq| seq[0])
}

/// The whole recursion `[n_0, n_1, ..., n_{3t+1}]`.
pub fn thomassen_sequence(m: u64, t: u64) -> Result<Vec<u64>, BoundError> {
    if m == 0 {
        return Err(BoundError::Parameter("m"));
    }
    if t == 0 {
        return Err(BoundError::Parameter("t"));
    }
    let steps = t.checked_mul(3).and_then(|x| x.checked_add(1)).ok_or(BoundError::Overflow)?;
    let mut n = t.checked_add(1).and_then(|x| x.checked_mul(3)).ok_or(BoundError::Overflow)?;
    let mut seq = vec![n];
    for _ in 0..steps {
        n = n
            .checked_add(1)
            .and_then(|x| x.checked_mul(3))
            .and_then(|x| x.checked_mul(m))
            .ok_or(BoundError::Overflow)?;
        seq.push(n);
    }
    seq.reverse();
    Ok(seq)
}

/// Hitting-set bound `50k^4` for non-zero cycles.
pub fn wollan_bound(k: u64) -> Result<u64, BoundError> {
    k.checked_pow(4).and_then(|x| x.checked_mul(50)).ok_or(BoundError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recursion_values() {
        assert_eq!(thomassen_sequence(2, 1).unwrap(), vec![9330, 1554, 258, 42, 6]);
        assert_eq!(thomassen_sequence(1, 1).unwrap(), vec![606, 201, 66, 21, 6]);
        assert_eq!(thomassen_bound(2, 1).unwrap(), 9330);
        assert_eq!(wollan_bound(2).unwrap(), 800);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(thomassen_bound(0, 1), Err(BoundError::Parameter("m")));
        assert_eq!(thomassen_bound(2, 0), Err(BoundError::Parameter("t")));
        assert_eq!(thomassen_bound(1000, 20), Err(BoundError::Overflow));
        assert_eq!(wollan_bound(u64::MAX), Err(BoundError::Overflow));
    }
}
