//! Cayley-table representation of finite quasigroups and loops.
//!
//! Elements are the indices `0..n`. Tables are dense row-major arrays: row `x`
//! lists `x·0, x·1, …`. Division tables and the maps `alpha`, `beta` (with
//! `x·alpha(x) = x = beta(x)·x`) are derived once at construction.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure;

/// A validated finite quasigroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasigroupTable {
    order: usize,
    table: Vec<usize>,
    /// `left_div[a*n + b]` solves `a·x = b`.
    left_div: Vec<usize>,
    /// `right_div[b*n + a]` solves `y·a = b`.
    right_div: Vec<usize>,
    alpha: Vec<usize>,
    beta: Vec<usize>,
}

impl QuasigroupTable {
    /// Validates a square of rows and derives the division tables.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Malformed {
                line: 0,
                message: "order must be positive".into(),
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Malformed {
                    line: x,
                    message: format!("row {x} has {} entries, expected {n}", row.len()),
                });
            }
            for &v in row {
                if v >= n {
                    return Err(Error::Malformed {
                        line: x,
                        message: format!("entry {v} out of range 0..{n}"),
                    });
                }
            }
            table.extend_from_slice(row);
        }
        Self::from_flat(n, table)
    }

    /// Builds the table `x·y = op(x, y)`.
    pub fn from_fn(n: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let v = op(x, y);
                if v >= n {
                    return Err(Error::Malformed {
                        line: x,
                        message: format!("entry {v} out of range 0..{n}"),
                    });
                }
                table.push(v);
            }
        }
        Self::from_flat(n, table)
    }

    /// Validates a flat row-major table with entries already in range.
    pub fn from_flat(n: usize, table: Vec<usize>) -> Result<Self> {
        if n == 0 || table.len() != n * n {
            return Err(Error::Malformed {
                line: 0,
                message: format!("expected {} entries for order {n}", n * n),
            });
        }
        const UNSET: usize = usize::MAX;
        let mut left_div = vec![UNSET; n * n];
        let mut right_div = vec![UNSET; n * n];
        for a in 0..n {
            for x in 0..n {
                let b = table[a * n + x];
                if b >= n {
                    return Err(Error::Malformed {
                        line: a,
                        message: format!("entry {b} out of range 0..{n}"),
                    });
                }
                let slot = &mut left_div[a * n + b];
                if *slot != UNSET {
                    return Err(Error::NotLatin {
                        axis: "row",
                        index: a,
                        entry: b,
                    });
                }
                *slot = x;
            }
        }
        for a in 0..n {
            for y in 0..n {
                let b = table[y * n + a];
                let slot = &mut right_div[b * n + a];
                if *slot != UNSET {
                    return Err(Error::NotLatin {
                        axis: "column",
                        index: a,
                        entry: b,
                    });
                }
                *slot = y;
            }
        }
        let alpha = (0..n).map(|x| left_div[x * n + x]).collect();
        let beta = (0..n).map(|x| right_div[x * n + x]).collect();
        Ok(QuasigroupTable {
            order: n,
            table,
            left_div,
            right_div,
            alpha,
            beta,
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y]
    }

    /// The unique `x` with `a·x = b`.
    #[inline]
    pub fn ldiv(&self, a: usize, b: usize) -> usize {
        self.left_div[a * self.order + b]
    }

    /// The unique `y` with `y·a = b`.
    #[inline]
    pub fn rdiv(&self, b: usize, a: usize) -> usize {
        self.right_div[b * self.order + a]
    }

    #[inline]
    pub fn alpha(&self, x: usize) -> usize {
        self.alpha[x]
    }

    #[inline]
    pub fn beta(&self, x: usize) -> usize {
        self.beta[x]
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.table[x * self.order..(x + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn as_flat(&self) -> &[usize] {
        &self.table
    }

    /// The two-sided neutral element, if any.
    pub fn is_loop(&self) -> Option<usize> {
        let n = self.order;
        (0..n).find(|&e| (0..n).all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order;
        (0..n).all(|x| (x + 1..n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Lexicographically least triple with `(xy)z != x(yz)`, if any.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_associative(&self) -> bool {
        self.associativity_violation().is_none()
    }

    /// Relabels elements by the permutation `perm` (old index -> new index).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order;
        if perm.len() != n {
            return Err(Error::CarrierMismatch {
                left: n,
                right: perm.len(),
            });
        }
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[perm[x] * n + perm[y]] = perm[self.mul(x, y)];
            }
        }
        Self::from_flat(n, table)
    }
}

/// The maps with `x·alpha(x) = x` and `beta(x)·x = x`.
pub fn alpha_beta(q: &QuasigroupTable) -> (Vec<usize>, Vec<usize>) {
    (q.alpha.clone(), q.beta.clone())
}

/// Which of the two F-laws failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FLaw {
    /// `x·(y·z) = (x·y)·(alpha(x)·z)`
    Left,
    /// `(z·y)·x = (z·beta(x))·(y·x)`
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FViolation {
    pub law: FLaw,
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

/// Scans all triples in lexicographic order and reports the first one that
/// breaks either F-law (left law checked before right law at each triple).
pub fn check_f_laws(q: &QuasigroupTable) -> std::result::Result<(), FViolation> {
    let n = q.order();
    for x in 0..n {
        let ax = q.alpha(x);
        let bx = q.beta(x);
        for y in 0..n {
            let xy = q.mul(x, y);
            let yx = q.mul(y, x);
            for z in 0..n {
                if q.mul(x, q.mul(y, z)) != q.mul(xy, q.mul(ax, z)) {
                    return Err(FViolation {
                        law: FLaw::Left,
                        x,
                        y,
                        z,
                    });
                }
                if q.mul(q.mul(z, y), x) != q.mul(q.mul(z, bx), yx) {
                    return Err(FViolation {
                        law: FLaw::Right,
                        x,
                        y,
                        z,
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn is_f_quasigroup(q: &QuasigroupTable) -> bool {
    check_f_laws(q).is_ok()
}

/// The on-disk text form of a (possibly pointed) table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableFile {
    pub comments: Vec<String>,
    pub table: QuasigroupTable,
    pub point: Option<usize>,
}

impl TableFile {
    pub fn new(table: QuasigroupTable) -> Self {
        TableFile {
            comments: Vec::new(),
            table,
            point: None,
        }
    }

    pub fn pointed(table: QuasigroupTable, point: usize) -> Self {
        TableFile {
            comments: Vec::new(),
            table,
            point: Some(point),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut comments = Vec::new();
        let mut body: Vec<(usize, &str)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(c) = line.strip_prefix('#') {
                comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
            } else if !line.is_empty() {
                body.push((i + 1, line));
            }
        }
        let mut lines = body.into_iter();
        let (order_line, order_text) = lines.next().ok_or(Error::Malformed {
            line: 0,
            message: "missing order line".into(),
        })?;
        let n: usize = order_text.parse().map_err(|_| Error::Malformed {
            line: order_line,
            message: format!("bad order {order_text:?}"),
        })?;
        if n == 0 {
            return Err(Error::Malformed {
                line: order_line,
                message: "order must be positive".into(),
            });
        }
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, text) = lines.next().ok_or(Error::Malformed {
                line: order_line,
                message: format!("expected {n} rows"),
            })?;
            rows.push(parse_indices(ln, text, n)?);
        }
        let mut point = None;
        for (ln, text) in lines {
            match text.strip_prefix("point") {
                Some(rest) if point.is_none() => {
                    let k: usize = rest.trim().parse().map_err(|_| Error::Malformed {
                        line: ln,
                        message: format!("bad point line {text:?}"),
                    })?;
                    if k >= n {
                        return Err(Error::Malformed {
                            line: ln,
                            message: format!("point {k} out of range 0..{n}"),
                        });
                    }
                    point = Some(k);
                }
                _ => {
                    return Err(Error::Malformed {
                        line: ln,
                        message: format!("unexpected line {text:?}"),
                    })
                }
            }
        }
        let table = QuasigroupTable::from_rows(&rows)?;
        Ok(TableFile {
            comments,
            table,
            point,
        })
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        out.push_str(&serialize_table(&self.table));
        if let Some(k) = self.point {
            let _ = writeln!(out, "point {k}");
        }
        out
    }
}

pub(crate) fn parse_indices(line: usize, text: &str, n: usize) -> Result<Vec<usize>> {
    let row = text
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::Malformed {
                line,
                message: format!("bad index {tok:?}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if row.len() != n {
        return Err(Error::Malformed {
            line,
            message: format!("expected {n} entries, found {}", row.len()),
        });
    }
    if let Some(&bad) = row.iter().find(|&&v| v >= n) {
        return Err(Error::Malformed {
            line,
            message: format!("index {bad} out of range 0..{n}"),
        });
    }
    Ok(row)
}

/// Parses the table format, ignoring any `point` line.
pub fn parse_table(text: &str) -> Result<QuasigroupTable> {
    TableFile::parse(text).map(|f| f.table)
}

/// Order line followed by one line per row.
pub fn serialize_table(q: &QuasigroupTable) -> String {
    let mut out = format!("{}\n", q.order());
    for x in 0..q.order() {
        let row: Vec<String> = q.row(x).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// A quasigroup with a designated two-sided neutral element, written additively.
///
/// The nucleus, Moufang center, center and exponent are computed on first use.
#[derive(Clone, Debug)]
pub struct LoopTable {
    base: QuasigroupTable,
    zero: usize,
    neg: Vec<usize>,
    left_neg: Vec<usize>,
    nucleus: OnceLock<Vec<bool>>,
    moufang_center: OnceLock<Vec<bool>>,
    exponent: OnceLock<usize>,
}

impl PartialEq for LoopTable {
    fn eq(&self, other: &Self) -> bool {
        self.zero == other.zero && self.base == other.base
    }
}

impl Eq for LoopTable {}

impl LoopTable {
    pub fn new(base: QuasigroupTable) -> Result<Self> {
        let zero = base.is_loop().ok_or(Error::NotALoop)?;
        Ok(Self::from_parts(base, zero))
    }

    /// Uses `zero` as the neutral element, failing if it is not one.
    pub fn with_zero(base: QuasigroupTable, zero: usize) -> Result<Self> {
        let n = base.order();
        if zero >= n || (0..n).any(|x| base.mul(zero, x) != x || base.mul(x, zero) != x) {
            return Err(Error::NotALoop);
        }
        Ok(Self::from_parts(base, zero))
    }

    fn from_parts(base: QuasigroupTable, zero: usize) -> Self {
        let n = base.order();
        let neg = (0..n).map(|x| base.ldiv(x, zero)).collect();
        let left_neg = (0..n).map(|x| base.rdiv(zero, x)).collect();
        LoopTable {
            base,
            zero,
            neg,
            left_neg,
            nucleus: OnceLock::new(),
            moufang_center: OnceLock::new(),
            exponent: OnceLock::new(),
        }
    }

    pub fn from_fn(n: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        Self::new(QuasigroupTable::from_fn(n, op)?)
    }

    #[inline]
    pub fn base(&self) -> &QuasigroupTable {
        &self.base
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.base.order()
    }

    #[inline]
    pub fn zero(&self) -> usize {
        self.zero
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.base.mul(x, y)
    }

    /// The right inverse of `x` (`x + neg(x) = 0`); two-sided on diassociative loops.
    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.neg[x]
    }

    /// `x + (-y)`.
    #[inline]
    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg[y])
    }

    pub fn negs(&self) -> &[usize] {
        &self.neg
    }

    pub fn has_two_sided_inverses(&self) -> bool {
        self.neg == self.left_neg
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// Left-associated `m`-fold sum, using `neg(x)` for negative `m`.
    pub fn power_unchecked(&self, x: usize, m: i64) -> usize {
        let base = if m < 0 { self.neg[x] } else { x };
        let mut acc = self.zero;
        for _ in 0..m.unsigned_abs() {
            acc = self.add(acc, base);
        }
        acc
    }

    /// `m`-fold sum of `x`; fails if left- and right-associated evaluation disagree.
    pub fn power(&self, x: usize, m: i64) -> Result<usize> {
        let base = if m < 0 { self.neg[x] } else { x };
        let mut left = self.zero;
        let mut right = self.zero;
        for _ in 0..m.unsigned_abs() {
            left = self.add(left, base);
            right = self.add(base, right);
        }
        if left != right {
            return Err(Error::NotDiassociative { x, m });
        }
        Ok(left)
    }

    /// Least `k >= 1` with `kx = 0` under left-associated powers.
    pub fn element_order(&self, x: usize) -> Option<usize> {
        let mut acc = x;
        for k in 1..=self.order() {
            if acc == self.zero {
                return Some(k);
            }
            acc = self.add(acc, x);
        }
        None
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        *self.exponent.get_or_init(|| {
            self.elements()
                .filter_map(|x| self.element_order(x))
                .fold(1, num_integer::lcm)
        })
    }

    pub fn nucleus_mask(&self) -> &[bool] {
        self.nucleus.get_or_init(|| structure::nucleus_scan(self))
    }

    pub fn moufang_center_mask(&self) -> &[bool] {
        self.moufang_center
            .get_or_init(|| structure::moufang_center_scan(self))
    }

    #[inline]
    pub fn in_nucleus(&self, x: usize) -> bool {
        self.nucleus_mask()[x]
    }

    #[inline]
    pub fn in_moufang_center(&self, x: usize) -> bool {
        self.moufang_center_mask()[x]
    }

    #[inline]
    pub fn in_center(&self, x: usize) -> bool {
        self.in_nucleus(x) && self.in_moufang_center(x)
    }

    pub fn nucleus(&self) -> Vec<usize> {
        mask_members(self.nucleus_mask())
    }

    pub fn moufang_center(&self) -> Vec<usize> {
        mask_members(self.moufang_center_mask())
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements().filter(|&x| self.in_center(x)).collect()
    }

    /// Closure of `gens` together with zero under addition, as a membership mask.
    pub fn generated_mask(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order()];
        let mut members = Vec::new();
        mask[self.zero] = true;
        members.push(self.zero);
        let mut frontier: Vec<usize> = Vec::new();
        for &g in gens {
            if !mask[g] {
                mask[g] = true;
                members.push(g);
                frontier.push(g);
            }
        }
        while let Some(d) = frontier.pop() {
            let mut i = 0;
            while i < members.len() {
                let m = members[i];
                for s in [self.add(m, d), self.add(d, m)] {
                    if !mask[s] {
                        mask[s] = true;
                        members.push(s);
                        frontier.push(s);
                    }
                }
                i += 1;
            }
        }
        mask
    }

    /// Restricts the table to `members` (which must be closed and contain zero).
    /// Returns the subloop on `0..members.len()` and the embedding into `self`.
    pub fn subloop(&self, members: &[usize]) -> Result<(LoopTable, Vec<usize>)> {
        let mut embed = members.to_vec();
        embed.sort_unstable();
        embed.dedup();
        let mut index = vec![usize::MAX; self.order()];
        for (i, &m) in embed.iter().enumerate() {
            index[m] = i;
        }
        if index[self.zero] == usize::MAX {
            return Err(Error::InvalidForm("subloop must contain zero".into()));
        }
        let k = embed.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &embed {
            for &b in &embed {
                let s = index[self.add(a, b)];
                if s == usize::MAX {
                    return Err(Error::InvalidForm(format!(
                        "subset not closed: {a} + {b} = {}",
                        self.add(a, b)
                    )));
                }
                table.push(s);
            }
        }
        let sub = LoopTable::with_zero(QuasigroupTable::from_flat(k, table)?, index[self.zero])?;
        Ok((sub, embed))
    }

    /// Lexicographically least triple breaking `((x+y)+x)+z = x+(y+(x+z))`.
    pub fn moufang_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.order();
        for x in 0..n {
            for y in 0..n {
                let xyx = self.add(self.add(x, y), x);
                for z in 0..n {
                    if self.add(xyx, z) != self.add(x, self.add(y, self.add(x, z))) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_moufang(&self) -> bool {
        self.moufang_violation().is_none()
    }

    /// Moufang loops are diassociative, so a passing Moufang scan settles it;
    /// otherwise every 2-generated subloop is checked directly.
    pub fn is_diassociative(&self) -> bool {
        self.is_moufang() || self.is_diassociative_direct()
    }

    /// Checks associativity inside every subloop generated by two elements.
    pub fn is_diassociative_direct(&self) -> bool {
        self.diassociativity_violation().is_none()
    }

    /// A pair whose generated subloop is not associative, if any.
    pub fn diassociativity_violation(&self) -> Option<(usize, usize)> {
        let n = self.order();
        let mut seen: HashSet<Vec<bool>> = HashSet::new();
        for a in 0..n {
            for b in a..n {
                let mask = self.generated_mask(&[a, b]);
                if seen.contains(&mask) {
                    continue;
                }
                let members = mask_members(&mask);
                let assoc = members.iter().all(|&x| {
                    members.iter().all(|&y| {
                        let xy = self.add(x, y);
                        members
                            .iter()
                            .all(|&z| self.add(xy, z) == self.add(x, self.add(y, z)))
                    })
                });
                if !assoc {
                    return Some((a, b));
                }
                seen.insert(mask);
            }
        }
        None
    }
}

pub(crate) fn mask_members(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zn(n: usize) -> QuasigroupTable {
        QuasigroupTable::from_fn(n, |x, y| (x + y) % n).unwrap()
    }

    fn linear5(a: usize, b: usize, c: usize) -> QuasigroupTable {
        QuasigroupTable::from_fn(5, |x, y| (a * x + b * y + c) % 5).unwrap()
    }

    #[test]
    fn parse_examples() {
        let z2 = parse_table("2\n0 1\n1 0").unwrap();
        assert_eq!(z2.rows(), vec![vec![0, 1], vec![1, 0]]);
        let triv = parse_table("1\n0").unwrap();
        assert_eq!(triv.order(), 1);
        assert!(matches!(
            parse_table("2\n0 0\n1 1"),
            Err(Error::NotLatin { .. })
        ));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_table(""), Err(Error::Malformed { .. })));
        assert!(matches!(parse_table("2\n0 1"), Err(Error::Malformed { .. })));
        assert!(matches!(
            parse_table("2\n0 1\n1 2"),
            Err(Error::Malformed { .. })
        ));
        assert!(matches!(
            parse_table("2\n0 1 0\n1 0"),
            Err(Error::Malformed { .. })
        ));
        assert!(matches!(
            parse_table("2\n0 1\n1 0\nbogus"),
            Err(Error::Malformed { .. })
        ));
        assert!(matches!(
            parse_table("0\n"),
            Err(Error::Malformed { .. })
        ));
    }

    #[test]
    fn table_file_with_comments_and_point() {
        let text = "# Z3\n3\n0 1 2\n1 2 0\n2 0 1\npoint 2\n";
        let file = TableFile::parse(text).unwrap();
        assert_eq!(file.comments, vec!["Z3".to_string()]);
        assert_eq!(file.point, Some(2));
        assert_eq!(file.serialize(), text);
    }

    #[test]
    fn alpha_beta_examples() {
        let (a, b) = alpha_beta(&zn(4));
        assert_eq!(a, vec![0; 4]);
        assert_eq!(b, vec![0; 4]);
        // 2x + 3a = x  =>  a = 3x;  2b + 3x = x  =>  b = 4x  (mod 5)
        let (a, b) = alpha_beta(&linear5(2, 3, 0));
        assert_eq!(a, (0..5).map(|x| 3 * x % 5).collect::<Vec<_>>());
        assert_eq!(b, (0..5).map(|x| 4 * x % 5).collect::<Vec<_>>());
    }

    #[test]
    fn division_tables_invert_translations() {
        let q = linear5(2, 3, 1);
        for x in 0..5 {
            for b in 0..5 {
                assert_eq!(q.mul(x, q.ldiv(x, b)), b);
                assert_eq!(q.mul(q.rdiv(b, x), x), b);
            }
        }
    }

    #[test]
    fn linear_quasigroups_are_f() {
        assert!(is_f_quasigroup(&zn(4)));
        assert!(is_f_quasigroup(&linear5(2, 3, 0)));
        assert!(is_f_quasigroup(&linear5(2, 3, 1)));
    }

    const LOOP5: [[usize; 5]; 5] = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ];

    fn loop5() -> QuasigroupTable {
        QuasigroupTable::from_rows(&LOOP5.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn f_law_witness_is_lexicographically_least() {
        let q = loop5();
        let v = check_f_laws(&q).unwrap_err();
        let m = |a: usize, b: usize| LOOP5[a][b];
        let mut first = None;
        'scan: for x in 0..5 {
            for y in 0..5 {
                for z in 0..5 {
                    if m(x, m(y, z)) != m(m(x, y), m(q.alpha(x), z)) {
                        first = Some((FLaw::Left, x, y, z));
                        break 'scan;
                    }
                    if m(m(z, y), x) != m(m(z, q.beta(x)), m(y, x)) {
                        first = Some((FLaw::Right, x, y, z));
                        break 'scan;
                    }
                }
            }
        }
        assert_eq!(first, Some((v.law, v.x, v.y, v.z)));
    }

    #[test]
    fn non_group_loop_of_order_five() {
        let l = LoopTable::new(loop5()).unwrap();
        let (x, y, z) = l.moufang_violation().unwrap();
        assert_ne!(
            l.add(l.add(l.add(x, y), x), z),
            l.add(x, l.add(y, l.add(x, z)))
        );
        assert!(!l.is_diassociative());
        assert!(l.diassociativity_violation().is_some());
    }

    #[test]
    fn loop_basics() {
        let l = LoopTable::new(zn(4)).unwrap();
        assert_eq!(l.zero(), 0);
        assert_eq!(l.power(1, 3).unwrap(), 3);
        assert_eq!(l.power(3, 0).unwrap(), 0);
        assert_eq!(l.power(1, -1).unwrap(), 3);
        assert_eq!(l.exponent(), 4);
        assert!(l.has_two_sided_inverses());
        assert!(l.is_moufang());
        assert!(l.is_diassociative_direct());
        assert!(matches!(
            LoopTable::new(linear5(2, 3, 0)),
            Err(Error::NotALoop)
        ));
    }

    #[test]
    fn subloop_restriction() {
        let l = LoopTable::new(zn(6)).unwrap();
        let mask = l.generated_mask(&[2]);
        assert_eq!(mask_members(&mask), vec![0, 2, 4]);
        let (sub, embed) = l.subloop(&[0, 2, 4]).unwrap();
        assert_eq!(embed, vec![0, 2, 4]);
        assert_eq!(sub.order(), 3);
        assert_eq!(sub.add(1, 2), 0);
        assert!(l.subloop(&[0, 1]).is_err());
    }

    #[test]
    fn relabel_keeps_latin() {
        let q = zn(3);
        let r = q.relabel(&[2, 0, 1]).unwrap();
        assert_eq!(r.is_loop(), Some(2));
    }
}
