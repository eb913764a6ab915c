//! Zero-subwall extraction.
//!
//! Row passes bucket the column vertices of the first rows by prefix weight
//! and keep the columns of the largest bucket. Diagonal passes do the same
//! along staircase diagonals, over rows instead of columns. Re-walling then
//! turns diagonals into the rows of a new wall, joined by one-step
//! connectors, and every connector and attachment is checked exactly; the
//! result is re-verified before it is returned.

use super::{Pos, Wall, WallError};
use crate::group::{Code, GroupElement};
use serde_json::json;
use std::collections::HashMap;

/// Connectors between diagonals `a` and `a + 1` (1-based) sit at 1-based
/// ordinals `i` with `i + a + 2 ≡ 0 (mod 4)`, i.e. `base(a) + 4k`.
const CONNECTOR_PERIOD: usize = 4;

fn connector_base(a: usize) -> usize {
    if a % 2 == 1 {
        a
    } else {
        a + 2
    }
}

/// Outcome of one row pass.
#[derive(Debug, Clone)]
pub struct RowPass {
    pub wall: Wall,
    pub class: GroupElement,
    /// Surviving brick columns, as indices into the input wall.
    pub kept_columns: Vec<usize>,
    /// `(prefix weight, number of column vertices)` in code order.
    pub bucket_sizes: Vec<(GroupElement, usize)>,
}

/// Outcome of one diagonal pass.
#[derive(Debug, Clone)]
pub struct DiagonalPass {
    pub active_rows: Vec<usize>,
    pub class: GroupElement,
    pub bucket_sizes: Vec<(GroupElement, usize)>,
}

/// Largest bucket, ties to the smallest code.
fn largest_class(codes: impl Iterator<Item = Code>) -> (Option<Code>, Vec<(Code, usize)>) {
    let mut counts: HashMap<Code, usize> = HashMap::new();
    for c in codes {
        *counts.entry(c).or_default() += 1;
    }
    let mut sizes: Vec<(Code, usize)> = counts.into_iter().collect();
    sizes.sort_unstable();
    let best = sizes.iter().max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0))).map(|&(c, _)| c);
    (best, sizes)
}

/// Pigeonhole on row `row`: buckets the row's column vertices by their
/// prefix weight from the row's first vertex and keeps the brick columns
/// that contain a vertex of the largest bucket. Row subpaths between the
/// surviving bucket vertices are zero afterwards.
pub fn row_normalize(w: &Wall, row: usize, keep: usize) -> Result<RowPass, WallError> {
    let s = w.skeleton();
    if row > s.n {
        return Err(WallError::RowOutOfRange(row));
    }
    let g = w.group();
    let walk = w.row_walk(row);
    let mut prefix = Vec::with_capacity(walk.len());
    let mut acc = 0;
    prefix.push(0);
    for pair in walk.windows(2) {
        acc = g.add_codes(acc, w.walk_code(pair)?);
        prefix.push(acc);
    }
    let carries_column = |p: Pos| s.has_vertical(p) || (p.0 > 0 && s.has_vertical((p.0 - 1, p.1)));
    let columns: Vec<(Pos, Code)> =
        walk.iter().zip(&prefix).filter(|(p, _)| carries_column(**p)).map(|(&p, &c)| (p, c)).collect();
    let (best, sizes) = largest_class(columns.iter().map(|&(_, c)| c));
    let best = best.ok_or_else(|| WallError::Invalid(format!("row {row} has no column vertices")))?;
    let mut kept: Vec<usize> = columns.iter().filter(|&&(_, c)| c == best).map(|&(p, _)| p.1 / 2).collect();
    kept.dedup();
    if kept.len() < keep.max(2) {
        return Err(WallError::Pigeonhole { kept: kept.len(), keep: keep.max(2) });
    }
    let wall = if kept.len() == s.m + 1 { w.clone() } else { w.select_columns(&kept)? };
    Ok(RowPass {
        wall,
        class: g.decode(best),
        kept_columns: kept,
        bucket_sizes: sizes.into_iter().map(|(c, k)| (g.decode(c), k)).collect(),
    })
}

/// Skeleton walk of the 1-based diagonal `j`: from `(0, 2j-2)` it goes one
/// step down and one step right per row, until the bottom row or the right
/// border stops it. Empty if the start is not in the wall.
pub fn diagonal_walk(w: &Wall, j: usize) -> Vec<Pos> {
    let s = w.skeleton();
    let mut walk = Vec::new();
    if j == 0 || !s.exists((0, 2 * j - 2)) {
        return walk;
    }
    walk.push((0, 2 * j - 2));
    for r in 1..=s.n {
        let enter = (r, 2 * j + r - 3);
        if !s.exists(enter) {
            break;
        }
        walk.push(enter);
        let leave = (r, 2 * j + r - 2);
        if !s.exists(leave) {
            break;
        }
        walk.push(leave);
    }
    walk
}

/// A diagonal with prefix weights and a position index.
struct Diagonal {
    walk: Vec<Pos>,
    prefix: Vec<Code>,
    at: HashMap<Pos, usize>,
}

impl Diagonal {
    fn new(w: &Wall, j: usize) -> Result<Diagonal, WallError> {
        let walk = diagonal_walk(w, j);
        let g = w.group();
        let mut prefix = Vec::with_capacity(walk.len());
        let mut acc = 0;
        if !walk.is_empty() {
            prefix.push(0);
        }
        for pair in walk.windows(2) {
            acc = g.add_codes(acc, w.walk_code(pair)?);
            prefix.push(acc);
        }
        let at = walk.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        Ok(Diagonal { walk, prefix, at })
    }

    fn q(&self, p: Pos) -> Option<Code> {
        self.at.get(&p).map(|&k| self.prefix[k])
    }
}

fn leave(a: usize, r: usize) -> Pos {
    (r, 2 * a + r - 2)
}

fn enter(a: usize, r: usize) -> Option<Pos> {
    (r >= 1).then(|| (r, 2 * a + r - 3))
}

/// Pigeonhole along diagonal `j`: buckets the active rows at which the
/// diagonal leaves a row by the prefix weight there, and keeps the rows of
/// the largest bucket.
pub fn diagonal_normalize(
    w: &Wall,
    active_rows: &[usize],
    j: usize,
    keep: usize,
) -> Result<DiagonalPass, WallError> {
    let n = w.rows();
    if j == 0 {
        return Err(WallError::Diagonal("diagonals are numbered from 1".into()));
    }
    if 3 * j > n + 1 {
        return Err(WallError::Diagonal(format!("diagonal {j} needs at least {} vertex rows", 3 * j)));
    }
    let d = Diagonal::new(w, j)?;
    if d.walk.is_empty() {
        return Err(WallError::Diagonal(format!("diagonal {j} starts outside the wall")));
    }
    let hits: Vec<(usize, Code)> =
        active_rows.iter().filter_map(|&r| d.q(leave(j, r)).map(|c| (r, c))).collect();
    let (best, sizes) = largest_class(hits.iter().map(|&(_, c)| c));
    let g = w.group();
    let Some(best) = best else {
        return Err(WallError::Pigeonhole { kept: 0, keep });
    };
    let rows: Vec<usize> = hits.iter().filter(|&&(_, c)| c == best).map(|&(r, _)| r).collect();
    if rows.len() < keep {
        return Err(WallError::Pigeonhole { kept: rows.len(), keep });
    }
    Ok(DiagonalPass {
        active_rows: rows,
        class: g.decode(best),
        bucket_sizes: sizes.into_iter().map(|(c, k)| (g.decode(c), k)).collect(),
    })
}

#[derive(Debug, Clone)]
pub enum ExtractionResult {
    Success { wall: Wall },
    Insufficient { pass: String, reason: String },
}

#[derive(Debug, Clone)]
pub struct PassStats {
    pub pass: String,
    pub class: GroupElement,
    pub bucket_sizes: Vec<(GroupElement, usize)>,
    pub kept: usize,
}

#[derive(Debug, Clone)]
pub struct ExtractionReport {
    pub result: ExtractionResult,
    /// Input rows carrying the connectors of the output, in order.
    pub rows_selected: Vec<usize>,
    /// Input brick columns that survived the row passes.
    pub cols_selected: Vec<usize>,
    pub diagonals_processed: Vec<usize>,
    pub passes: Vec<PassStats>,
}

impl ExtractionReport {
    pub fn wall(&self) -> Option<&Wall> {
        match &self.result {
            ExtractionResult::Success { wall } => Some(wall),
            ExtractionResult::Insufficient { .. } => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let result = match &self.result {
            ExtractionResult::Success { wall } => json!({
                "status": "success",
                "rows": wall.rows(),
                "cols": wall.cols(),
                "zero": wall.is_zero_wall(),
                "wall": wall.to_file(),
            }),
            ExtractionResult::Insufficient { pass, reason } => {
                json!({"status": "insufficient", "pass": pass, "reason": reason})
            }
        };
        let passes: Vec<_> = self
            .passes
            .iter()
            .map(|p| json!({"pass": p.pass, "class": p.class, "kept": p.kept, "buckets": p.bucket_sizes}))
            .collect();
        json!({
            "result": result,
            "rows_selected": self.rows_selected,
            "cols_selected": self.cols_selected,
            "diagonals_processed": self.diagonals_processed,
            "passes": passes,
        })
    }
}

/// Runs the extraction adaptively for a zero wall of size `target`. The
/// output has `target + 1` rows and `max(target, 2)` brick columns unless the
/// input is already a zero wall of sufficient size, in which case it is
/// returned unchanged. Any returned wall is a validated zero subwall of `w`.
pub fn extract_zero_subwall(w: &Wall, target: usize) -> Result<ExtractionReport, WallError> {
    if target == 0 {
        return Err(WallError::Diagonal("target size must be at least 1".into()));
    }
    w.validate()?;
    let mut report = ExtractionReport {
        result: ExtractionResult::Insufficient { pass: String::new(), reason: String::new() },
        rows_selected: Vec::new(),
        cols_selected: (0..=w.cols()).collect(),
        diagonals_processed: Vec::new(),
        passes: Vec::new(),
    };
    if w.size() >= target && w.is_zero_wall() {
        report.rows_selected = (0..=w.rows()).collect();
        report.result = ExtractionResult::Success { wall: w.clone() };
        return Ok(report);
    }
    let insufficient = |mut report: ExtractionReport, pass: String, reason: String| {
        report.result = ExtractionResult::Insufficient { pass, reason };
        Ok(report)
    };

    let mut cur = w.clone();
    for row in 0..(3 * target + 1).min(w.rows() + 1) {
        match row_normalize(&cur, row, 2) {
            Ok(pass) => {
                report.cols_selected = pass.kept_columns.iter().map(|&c| report.cols_selected[c]).collect();
                report.passes.push(PassStats {
                    pass: format!("row {row}"),
                    class: pass.class,
                    bucket_sizes: pass.bucket_sizes,
                    kept: pass.kept_columns.len(),
                });
                cur = pass.wall;
            }
            Err(e) => return insufficient(report, format!("row {row}"), e.to_string()),
        }
    }

    let mut active: Vec<usize> = (0..=cur.rows()).collect();
    let mut kappa = Vec::with_capacity(target + 1);
    for j in 1..=target + 1 {
        match diagonal_normalize(&cur, &active, j, 1) {
            Ok(pass) => {
                report.passes.push(PassStats {
                    pass: format!("diagonal {j}"),
                    class: pass.class.clone(),
                    bucket_sizes: pass.bucket_sizes,
                    kept: pass.active_rows.len(),
                });
                report.diagonals_processed.push(j);
                kappa.push(cur.group().encode(&pass.class));
                active = pass.active_rows;
            }
            Err(e) => return insufficient(report, format!("diagonal {j}"), e.to_string()),
        }
    }

    let (wall, rows) = match assemble(&cur, target, &active, &kappa) {
        Ok(x) => x,
        Err(reason) => return insufficient(report, "re-walling".into(), reason),
    };
    report.rows_selected = rows;
    if !wall.is_zero_wall() || !wall.is_subwall_of(w) {
        return insufficient(report, "verification".into(), "assembled wall failed the zero check".into());
    }
    report.result = ExtractionResult::Success { wall };
    Ok(report)
}

/// Builds the output wall with diagonals `1..=t+1` as rows. `kappa[a-1]` is
/// the common prefix weight of diagonal `a` at every attachment.
fn assemble(w: &Wall, t: usize, active: &[usize], kappa: &[Code]) -> Result<(Wall, Vec<usize>), String> {
    let c = t.max(2);
    let diags: Vec<Diagonal> = (1..=t + 1).map(|a| Diagonal::new(w, a)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let accepts = |r: usize, a: usize| -> bool {
        let (da, db) = (&diags[a - 1], &diags[a]);
        let (Some(from), Some(to)) = (Some(leave(a, r)), enter(a + 1, r)) else {
            return false;
        };
        da.q(from) == Some(kappa[a - 1])
            && db.q(to) == Some(kappa[a])
            && w.walk_code(&[from, to]).map(|x| x == 0).unwrap_or(false)
    };

    // connector_row[a-1][k]: input row of the k-th connector of layer a.
    let mut connector_row = vec![vec![usize::MAX; c + 1]; t];
    let last = (1..=t).map(|a| connector_base(a) + CONNECTOR_PERIOD * c).max().unwrap_or(0);
    let mut rows_iter = active.iter().copied();
    let mut rows = Vec::new();
    for i in 1..=last {
        let layers: Vec<(usize, usize)> = (1..=t)
            .filter(|&a| i >= connector_base(a) && (i - connector_base(a)).is_multiple_of(CONNECTOR_PERIOD))
            .map(|a| (a, (i - connector_base(a)) / CONNECTOR_PERIOD))
            .filter(|&(_, k)| k <= c)
            .collect();
        if layers.is_empty() {
            continue;
        }
        let r = loop {
            match rows_iter.next() {
                Some(r) if layers.iter().all(|&(a, _)| accepts(r, a)) => break r,
                Some(_) => continue,
                None => return Err(format!("ran out of rows at connector ordinal {i}")),
            }
        };
        rows.push(r);
        for (a, k) in layers {
            connector_row[a - 1][k] = r;
        }
    }

    // Attachment of output position (row, j) on diagonal row+1.
    let out = super::Skeleton { n: t, m: c };
    let mut node_of: HashMap<Pos, Pos> = HashMap::new();
    for row in 0..=t {
        let a = row + 1;
        let d = &diags[row];
        let mut prev: Option<usize> = None;
        for j in 0..out.width() {
            let p = (row, j);
            if !out.exists(p) {
                continue;
            }
            let pos = if out.has_vertical(p) {
                leave(a, connector_row[row][j / 2])
            } else if row > 0 && out.has_vertical((row - 1, j)) {
                enter(a, connector_row[row - 1][j / 2]).ok_or("connector on the top row")?
            } else {
                let k = prev.ok_or("row starts without an attachment")? + 1;
                *d.walk.get(k).ok_or("diagonal ends too early")?
            };
            let k = *d.at.get(&pos).ok_or_else(|| format!("{pos:?} is not on diagonal {a}"))?;
            if prev.is_some_and(|q| q >= k) {
                return Err(format!("attachments out of order on diagonal {a}"));
            }
            prev = Some(k);
            node_of.insert(p, pos);
        }
    }

    let wall = w
        .compose(
            t,
            c,
            |p| node_of[&p],
            |a, b| {
                let (x, y) = (node_of[&a], node_of[&b]);
                if a.0 == b.0 {
                    let d = &diags[a.0];
                    d.walk[d.at[&x]..=d.at[&y]].to_vec()
                } else {
                    vec![x, y]
                }
            },
        )
        .map_err(|e| e.to_string())?;
    Ok((wall, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    fn labelled(n: usize, m: usize, modulus: i64, f: impl Fn(usize) -> i64) -> Wall {
        let g = Group::new(&[modulus]).unwrap();
        let w = Wall::elementary(&g, n, m).unwrap();
        let host = w.host().rebuild(&[], |k, _| Some(g.reduce(&[f(k)]).unwrap())).unwrap();
        w.with_host(host).unwrap()
    }

    #[test]
    fn connector_rule() {
        for a in 1..10 {
            assert_eq!((connector_base(a) + a + 2) % 4, 0);
            assert!(connector_base(a) >= a);
        }
    }

    #[test]
    fn row_pass_all_zero_keeps_everything() {
        let w = labelled(4, 5, 2, |_| 0);
        let pass = row_normalize(&w, 1, 2).unwrap();
        assert_eq!(pass.kept_columns, (0..=5).collect::<Vec<_>>());
    }

    #[test]
    fn row_pass_constant_one_top_row() {
        // Top-row column vertices sit at even positions: every prefix is even.
        let w = labelled(4, 4, 2, |_| 1);
        let pass = row_normalize(&w, 0, 2).unwrap();
        assert_eq!(pass.kept_columns, vec![0, 1, 2, 3, 4]);
        assert_eq!(pass.bucket_sizes.len(), 1);
        // An interior row uses every position, so prefixes alternate.
        let pass = row_normalize(&w, 1, 2).unwrap();
        assert_eq!(pass.bucket_sizes.iter().map(|b| b.1).collect::<Vec<_>>(), vec![5, 5]);
        assert_eq!(pass.kept_columns, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn row_pass_zeroes_row_segments() {
        // Every kept column has a vertex on the row sharing one prefix weight,
        // so the row segments between them are zero.
        let w = labelled(5, 8, 3, |k| (k * 7 % 5) as i64);
        let pass = row_normalize(&w, 2, 2).unwrap();
        let nw = &pass.wall;
        let s = nw.skeleton();
        let g = nw.group();
        let walk = nw.row_walk(2);
        let mut per_column: Vec<Vec<Code>> = vec![Vec::new(); nw.cols() + 1];
        let mut acc = 0;
        for (idx, &p) in walk.iter().enumerate() {
            if idx > 0 {
                acc = g.add_codes(acc, nw.walk_code(&walk[idx - 1..=idx]).unwrap());
            }
            if s.has_vertical(p) || s.has_vertical((1, p.1)) {
                per_column[p.1 / 2].push(acc);
            }
        }
        let common = per_column[0].iter().any(|&x| per_column.iter().all(|c| c.contains(&x)));
        assert!(common);
        assert!(nw.is_subwall_of(&w));
        assert_eq!(pass.kept_columns.len(), nw.cols() + 1);
    }

    #[test]
    fn diagonal_constant_one_all_even() {
        // Each row adds one down step and one right step, so every leave
        // prefix is even.
        let w = labelled(12, 12, 2, |_| 1);
        let rows: Vec<usize> = (0..=12).collect();
        let pass = diagonal_normalize(&w, &rows, 1, 1).unwrap();
        assert_eq!(pass.active_rows, rows);
        assert_eq!(pass.bucket_sizes, vec![(w.group().zero(), 13)]);
        assert!(diagonal_normalize(&w, &rows, 5, 1).is_err());
        assert!(diagonal_normalize(&w, &rows, 0, 1).is_err());
    }

    #[test]
    fn diagonal_walk_shape() {
        let w = labelled(4, 4, 2, |_| 0);
        let d = diagonal_walk(&w, 2);
        assert_eq!(&d[..5], &[(0, 2), (1, 2), (1, 3), (2, 3), (2, 4)]);
        assert_eq!(d.last(), Some(&(4, 6)));
    }

    #[test]
    fn all_zero_wall_returns_itself() {
        let w = labelled(10, 10, 2, |_| 0);
        let r = extract_zero_subwall(&w, 2).unwrap();
        let out = r.wall().unwrap();
        assert!(out.is_zero_wall() && out.size() >= 2);
    }

    #[test]
    fn assembly_on_nearly_zero_wall() {
        let w0 = labelled(30, 30, 2, |_| 0);
        let bad = w0.path((30, 59), (30, 60)).unwrap().edges[0];
        let w = labelled(30, 30, 2, |k| i64::from(k == bad));
        assert!(!w.is_zero_wall());
        for t in 1..=3 {
            let r = extract_zero_subwall(&w, t).unwrap();
            let out = r.wall().unwrap_or_else(|| panic!("{:?}", r.result));
            assert_eq!((out.rows(), out.cols()), (t, t.max(2)));
            assert!(out.is_zero_wall() && out.is_subwall_of(&w));
            out.validate().unwrap();
        }
    }

    #[test]
    fn constant_one_is_insufficient() {
        let w = labelled(40, 40, 2, |_| 1);
        let r = extract_zero_subwall(&w, 1).unwrap();
        assert!(matches!(r.result, ExtractionResult::Insufficient { .. }));
    }
}
