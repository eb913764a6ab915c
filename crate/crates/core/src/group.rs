//! Finite Abelian groups presented as products of cyclic groups.
//!
//! Elements are residue tuples. Internally every element also has a dense
//! integer code (mixed radix, first factor most significant), so code order
//! coincides with lexicographic order on residue tuples. Hot loops in the
//! enumerators work on codes.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Largest group order accepted by [`Group::new`].
pub const MAX_GROUP_ORDER: u64 = 1_000_000;

/// Dense element code, `0..group.order()`.
pub type Code = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("a group needs at least one cyclic factor")]
    NoFactors,
    #[error("modulus {0} is below 2")]
    ModulusTooSmall(i64),
    #[error("group order exceeds {MAX_GROUP_ORDER}")]
    TooLarge,
    #[error("element has {got} residues but the group has {expected} factors")]
    Arity { expected: usize, got: usize },
    #[error("residue {value} at position {index} is not in [0, {modulus})")]
    Residue { index: usize, value: i64, modulus: u32 },
    #[error("{0}")]
    Range(String),
}

/// Z_{m_1} x ... x Z_{m_r}.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr", into = "GroupRepr")]
pub struct Group {
    moduli: Vec<u32>,
    strides: Vec<u32>,
    order: u32,
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    moduli: Vec<i64>,
}

impl TryFrom<GroupRepr> for Group {
    type Error = GroupError;
    fn try_from(repr: GroupRepr) -> Result<Self, Self::Error> {
        Group::new(&repr.moduli)
    }
}

impl From<Group> for GroupRepr {
    fn from(g: Group) -> Self {
        GroupRepr { moduli: g.moduli.iter().map(|&m| i64::from(m)).collect() }
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moduli.iter().map(|m| format!("Z{m}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// A residue tuple. Serialized as a plain JSON array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(Vec<u32>);

impl GroupElement {
    pub fn residues(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Group {
    /// Builds `Z_{m_1} x ... x Z_{m_r}`; every modulus must be at least 2 and
    /// the order at most [`MAX_GROUP_ORDER`].
    pub fn new(moduli: &[i64]) -> Result<Self, GroupError> {
        if moduli.is_empty() {
            return Err(GroupError::NoFactors);
        }
        let mut order: u64 = 1;
        for &m in moduli {
            if m < 2 {
                return Err(GroupError::ModulusTooSmall(m));
            }
            order = order.saturating_mul(m as u64);
            if order > MAX_GROUP_ORDER {
                return Err(GroupError::TooLarge);
            }
        }
        let moduli: Vec<u32> = moduli.iter().map(|&m| m as u32).collect();
        let mut strides = vec![1u32; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1];
        }
        Ok(Group { moduli, strides, order: order as u32 })
    }

    /// The cyclic group Z_m.
    pub fn cyclic(m: u32) -> Result<Self, GroupError> {
        Self::new(&[i64::from(m)])
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Validates a residue tuple; residues must already be reduced.
    pub fn element(&self, residues: &[i64]) -> Result<GroupElement, GroupError> {
        if residues.len() != self.rank() {
            return Err(GroupError::Arity { expected: self.rank(), got: residues.len() });
        }
        for (index, (&value, &modulus)) in residues.iter().zip(&self.moduli).enumerate() {
            if value < 0 || value >= i64::from(modulus) {
                return Err(GroupError::Residue { index, value, modulus });
            }
        }
        Ok(GroupElement(residues.iter().map(|&r| r as u32).collect()))
    }

    /// Reduces arbitrary integers into an element.
    pub fn reduce(&self, residues: &[i64]) -> Result<GroupElement, GroupError> {
        if residues.len() != self.rank() {
            return Err(GroupError::Arity { expected: self.rank(), got: residues.len() });
        }
        Ok(GroupElement(
            residues
                .iter()
                .zip(&self.moduli)
                .map(|(&r, &m)| r.rem_euclid(i64::from(m)) as u32)
                .collect(),
        ))
    }

    /// Checks that `x` is a reduced tuple of the right length.
    pub fn check(&self, x: &GroupElement) -> Result<(), GroupError> {
        if x.0.len() != self.rank() {
            return Err(GroupError::Arity { expected: self.rank(), got: x.0.len() });
        }
        for (index, (&value, &modulus)) in x.0.iter().zip(&self.moduli).enumerate() {
            if value >= modulus {
                return Err(GroupError::Residue { index, value: i64::from(value), modulus });
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.check(x).is_ok()
    }

    pub fn encode(&self, x: &GroupElement) -> Code {
        x.0.iter().zip(&self.strides).map(|(&r, &s)| r * s).sum()
    }

    pub fn decode(&self, code: Code) -> GroupElement {
        GroupElement(
            self.strides
                .iter()
                .zip(&self.moduli)
                .map(|(&s, &m)| (code / s) % m)
                .collect(),
        )
    }

    pub fn add_codes(&self, a: Code, b: Code) -> Code {
        let mut out = 0;
        for (&s, &m) in self.strides.iter().zip(&self.moduli) {
            out += (((a / s) % m + (b / s) % m) % m) * s;
        }
        out
    }

    pub fn neg_code(&self, a: Code) -> Code {
        let mut out = 0;
        for (&s, &m) in self.strides.iter().zip(&self.moduli) {
            out += ((m - (a / s) % m) % m) * s;
        }
        out
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.moduli)
                .map(|((&x, &y), &m)| (x + y) % m)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(a.0.iter().zip(&self.moduli).map(|(&x, &m)| (m - x) % m).collect())
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn is_zero(&self, a: &GroupElement) -> bool {
        a.0.iter().all(|&r| r == 0)
    }

    /// `n·y`; a negative `n` means `|n|·(-y)` and `0·y = 0`.
    pub fn scalar_mul(&self, y: &GroupElement, n: i64) -> Result<GroupElement, GroupError> {
        self.check(y)?;
        Ok(self.mul_unchecked(y, n))
    }

    fn mul_unchecked(&self, y: &GroupElement, n: i64) -> GroupElement {
        GroupElement(
            y.0.iter()
                .zip(&self.moduli)
                .map(|(&r, &m)| {
                    let m = i128::from(m);
                    (i128::from(r) * i128::from(n)).rem_euclid(m) as u32
                })
                .collect(),
        )
    }

    /// Least `n >= 1` with `n·x = 0`.
    pub fn element_order(&self, x: &GroupElement) -> Result<u64, GroupError> {
        self.check(x)?;
        Ok(x.0
            .iter()
            .zip(&self.moduli)
            .map(|(&r, &m)| u64::from(m / gcd(u64::from(r), u64::from(m)) as u32))
            .fold(1, lcm))
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|c| self.decode(c))
    }

    /// `{x : 2x = 0}` in lexicographic order.
    pub fn gamma2(&self) -> Vec<GroupElement> {
        // Per factor the solutions are 0 and, for even moduli, m/2.
        let per_factor: Vec<Vec<u32>> = self
            .moduli
            .iter()
            .map(|&m| if m % 2 == 0 { vec![0, m / 2] } else { vec![0] })
            .collect();
        let mut out = vec![Vec::new()];
        for choices in &per_factor {
            let mut next = Vec::with_capacity(out.len() * choices.len());
            for prefix in &out {
                for &c in choices {
                    let mut p: Vec<u32> = prefix.clone();
                    p.push(c);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(GroupElement).collect()
    }

    /// Whether `d` lies in the cyclic subgroup generated by `y`.
    pub fn in_cyclic_subgroup(&self, d: &GroupElement, y: &GroupElement) -> bool {
        // Solve n·y_i = d_i (mod m_i) per factor and merge the congruences on n.
        let mut residue: i128 = 0;
        let mut modulus: i128 = 1;
        for ((&a, &b), &m) in y.0.iter().zip(&d.0).zip(&self.moduli) {
            let (a, b, m) = (i128::from(a), i128::from(b), i128::from(m));
            let g = gcd_i(a, m);
            if b % g != 0 {
                return false;
            }
            let mg = m / g;
            let r = (b / g) * mod_inverse(a / g, mg) % mg;
            match merge_congruences(residue, modulus, r, mg) {
                Some((nr, nm)) => {
                    residue = nr;
                    modulus = nm;
                }
                None => return false,
            }
        }
        true
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn gcd_i(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i(b, a % b)
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Inverse of `a` modulo `m` for coprime `a, m` (`m = 1` gives 0).
fn mod_inverse(a: i128, m: i128) -> i128 {
    if m == 1 {
        return 0;
    }
    let (_, x, _) = ext_gcd(a.rem_euclid(m), m);
    x.rem_euclid(m)
}

fn merge_congruences(r1: i128, m1: i128, r2: i128, m2: i128) -> Option<(i128, i128)> {
    let (g, p, _) = ext_gcd(m1, m2);
    if (r2 - r1) % g != 0 {
        return None;
    }
    let l = m1 / g * m2;
    let k = ((r2 - r1) / g * p).rem_euclid(m2 / g);
    Some(((r1 + m1 * k).rem_euclid(l), l))
}

/// A falsifying pair for the group condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub x: GroupElement,
    pub y: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EppVerdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Decides whether for all `x` and all `y != 0` some `n` in `[0, order(y))`
/// satisfies `2x + n·y = target`. On failure the witness is the
/// lexicographically smallest falsifying pair `(x, y)`.
pub fn epp_condition(g: &Group, target: &GroupElement) -> Result<EppVerdict, GroupError> {
    g.check(target)?;
    // The values target - 2x form the coset target + 2Γ. It lies inside <y>
    // iff target and every 2·e_i do, so a y is falsifiable iff one of those
    // generators escapes <y>.
    let generators: Vec<GroupElement> = std::iter::once(target.clone())
        .chain((0..g.rank()).map(|i| {
            let mut e = vec![0u32; g.rank()];
            e[i] = 2 % g.moduli[i];
            GroupElement(e)
        }))
        .collect();
    let bad_ys: Vec<GroupElement> = g
        .elements()
        .skip(1)
        .filter(|y| generators.iter().any(|d| !g.in_cyclic_subgroup(d, y)))
        .collect();
    if bad_ys.is_empty() {
        return Ok(EppVerdict { holds: true, witness: None });
    }
    for x in g.elements() {
        let d = g.sub(target, &g.add(&x, &x));
        if let Some(y) = bad_ys.iter().find(|y| !g.in_cyclic_subgroup(&d, y)) {
            return Ok(EppVerdict { holds: false, witness: Some(Witness { x, y: y.clone() }) });
        }
    }
    unreachable!("every falsifiable y admits some x")
}

/// The mod-m form: all edges labelled 1 in Z_m, paths of length `d mod m`.
pub fn epp_mod(d: i64, m: i64) -> Result<EppVerdict, GroupError> {
    if m < 2 {
        return Err(GroupError::Range(format!("m must be at least 2, got {m}")));
    }
    if d < 0 || d >= m {
        return Err(GroupError::Range(format!("d = {d} is outside [0, {m})")));
    }
    let g = Group::new(&[m])?;
    let target = g.element(&[d])?;
    epp_condition(&g, &target)
}

/// The lexicographically smallest `δ` with `2δ = -target`, if any.
pub fn halve_negate(g: &Group, target: &GroupElement) -> Result<Option<GroupElement>, GroupError> {
    g.check(target)?;
    let mut out = Vec::with_capacity(g.rank());
    for (&t, &m) in target.0.iter().zip(&g.moduli) {
        let want = (m - t) % m;
        if m % 2 == 1 {
            // 2 is invertible: δ = want · (m+1)/2.
            out.push(((u64::from(want) * u64::from(m.div_ceil(2))) % u64::from(m)) as u32);
        } else if want % 2 == 0 {
            // Solutions are want/2 and want/2 + m/2; take the smaller.
            out.push((want / 2) % (m / 2));
        } else {
            return Ok(None);
        }
    }
    Ok(Some(GroupElement(out)))
}

/// Non-zero cycles have the property iff the group has no element of order 2.
pub fn nonzero_cycles_epp(g: &Group) -> bool {
    g.moduli.iter().all(|m| m % 2 == 1)
}
