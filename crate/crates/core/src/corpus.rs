//! Deterministic test structures: small groups, the commutative Moufang loop
//! of order 81, linear F-quasigroups, and exhaustive Latin-square search.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::cayley::{is_f_quasigroup, LoopTable, QuasigroupTable, TableFile};
use crate::endo::{endo_compose, enumerate_automorphisms, EndoContext};
use crate::equivalence::{build_fq, ArithmeticForm, PointedFQ};
use crate::error::{Error, Result};
use crate::structure;

pub fn cyclic(n: usize) -> LoopTable {
    LoopTable::from_fn(n, |x, y| (x + y) % n).expect("cyclic group")
}

/// Dihedral group of order `2k`; `i + k s` encodes `r^i s^s`.
pub fn dihedral(k: usize) -> LoopTable {
    LoopTable::from_fn(2 * k, |p, q| {
        let (i, s) = (p % k, p / k);
        let (j, t) = (q % k, q / k);
        let r = if s == 0 { (i + j) % k } else { (i + k - j) % k };
        r + k * ((s + t) % 2)
    })
    .expect("dihedral group")
}

/// Quaternion group; index `4 s + w` encodes `(-1)^s` times unit `w` of
/// `1, i, j, k`.
pub fn quaternion() -> LoopTable {
    // unit products: (sign, unit)
    const UNITS: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    LoopTable::from_fn(8, |p, q| {
        let (s, w) = (p / 4, p % 4);
        let (t, z) = (q / 4, q % 4);
        let (sign, unit) = UNITS[w][z];
        4 * ((s + t + sign) % 2) + unit
    })
    .expect("quaternion group")
}

/// `A × B` with index `x |B| + y`.
pub fn direct_product(a: &LoopTable, b: &LoopTable) -> LoopTable {
    let m = b.order();
    let zero = a.zero() * m + b.zero();
    let q = QuasigroupTable::from_fn(a.order() * m, |p, q| {
        a.add(p / m, q / m) * m + b.add(p % m, q % m)
    })
    .expect("product of loops");
    LoopTable::with_zero(q, zero).expect("product of loops")
}

/// The validated group corpus, in a fixed order.
pub fn group_tables() -> Vec<(String, LoopTable)> {
    let mut out: Vec<(String, LoopTable)> = (1..=9).map(|n| (format!("z{n}"), cyclic(n))).collect();
    let z2 = cyclic(2);
    let z2xz2 = direct_product(&z2, &z2);
    out.push(("z2xz2".into(), z2xz2.clone()));
    out.push(("z2xz2xz2".into(), direct_product(&z2xz2, &z2)));
    out.push(("z4xz2".into(), direct_product(&cyclic(4), &z2)));
    out.push(("z3xz3".into(), direct_product(&cyclic(3), &cyclic(3))));
    out.push(("s3".into(), dihedral(3)));
    out.push(("d4".into(), dihedral(4)));
    out.push(("q8".into(), quaternion()));
    out.push(("s3xz3".into(), direct_product(&dihedral(3), &cyclic(3))));
    for (name, l) in &out {
        assert!(l.base().is_associative(), "{name} is not a group");
    }
    out
}

/// The commutative Moufang loop on `Z_3^4`, index `27a + 9b + 3c + d`.
pub fn cml81() -> Result<LoopTable> {
    let split = |x: usize| [x / 27, x / 9 % 3, x / 3 % 3, x % 3];
    let l = LoopTable::from_fn(81, |p, q| {
        let [a, b, c, d] = split(p);
        let [a2, b2, c2, d2] = split(q);
        let twist = (3 + a - a2) * (9 + b * c2 - b2 * c) % 3;
        let d3 = (d + d2 + twist) % 3;
        27 * ((a + a2) % 3) + 9 * ((b + b2) % 3) + 3 * ((c + c2) % 3) + d3
    })
    .map_err(|e| Error::ConstructionInvalid(e.to_string()))?;
    let fail = |what: &str| Err(Error::ConstructionInvalid(what.to_string()));
    if !l.base().is_commutative() {
        return fail("not commutative");
    }
    if let Some((x, y, z)) = l.moufang_violation() {
        return fail(&format!("Moufang identity fails at ({x}, {y}, {z})"));
    }
    if l.base().is_associative() {
        return fail("associative");
    }
    if l.exponent() != 3 || l.elements().any(|x| l.power_unchecked(x, 3) != l.zero()) {
        return fail("exponent is not 3");
    }
    if !structure::is_nk_loop(&l) {
        return fail("not an NK-loop");
    }
    Ok(l)
}

/// Chein double `M(G, 2)`: `G` on indices `0..n`, `G u` on `n..2n`.
pub fn chein_double(g: &LoopTable) -> LoopTable {
    let n = g.order();
    let inv = |x: usize| g.neg(x);
    let zero = g.zero();
    let q = QuasigroupTable::from_fn(2 * n, |p, q| match (p < n, q < n) {
        (true, true) => g.add(p, q),
        (true, false) => n + g.add(q - n, p),
        (false, true) => n + g.add(p - n, inv(q)),
        (false, false) => g.add(inv(q - n), p - n),
    })
    .expect("Chein double");
    LoopTable::with_zero(q, zero).expect("Chein double")
}

/// Automorphism pairs `(f, g)` with `fg = gf` both satisfying (F), crossed
/// with the nucleus, in lexicographic order; at most `cap` forms.
pub fn enumerate_forms(l: &LoopTable, cap: usize) -> Result<Vec<ArithmeticForm>> {
    let ctx = EndoContext::new(l);
    if !ctx.is_nk() {
        return Err(Error::NotNkLoop);
    }
    let mut auts = enumerate_automorphisms(l)?;
    auts.sort();
    let good: Vec<_> = auts
        .into_iter()
        .filter(|f| ctx.condition_f(f).holds)
        .collect();
    let nucleus = l.nucleus();
    let mut out = Vec::new();
    for f in &good {
        for g in &good {
            if endo_compose(f, g)? != endo_compose(g, f)? {
                continue;
            }
            for &e in &nucleus {
                if out.len() == cap {
                    return Ok(out);
                }
                out.push(ArithmeticForm::new(l.clone(), f.clone(), g.clone(), e));
            }
        }
    }
    Ok(out)
}

/// Visits every Latin square of order `n` whose first row is `first` and,
/// when `reduced`, whose first column is `0..n`.
fn latin_squares_from(n: usize, first: &[usize], reduced: bool, visit: &mut dyn FnMut(&[usize])) {
    let mut cells = vec![0usize; n * n];
    cells[..n].copy_from_slice(first);
    let mut row_used = vec![0u32; n];
    let mut col_used = vec![0u32; n];
    for (c, &v) in first.iter().enumerate() {
        row_used[0] |= 1 << v;
        col_used[c] |= 1 << v;
    }
    #[allow(clippy::too_many_arguments)]
    fn fill(
        n: usize,
        reduced: bool,
        pos: usize,
        cells: &mut [usize],
        row_used: &mut [u32],
        col_used: &mut [u32],
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if pos == n * n {
            visit(cells);
            return;
        }
        let (r, c) = (pos / n, pos % n);
        let mut free = !(row_used[r] | col_used[c]) & ((1u32 << n) - 1);
        if reduced && c == 0 {
            free &= 1 << r;
        }
        while free != 0 {
            let v = free.trailing_zeros() as usize;
            free &= free - 1;
            cells[pos] = v;
            row_used[r] |= 1 << v;
            col_used[c] |= 1 << v;
            fill(n, reduced, pos + 1, cells, row_used, col_used, visit);
            row_used[r] &= !(1 << v);
            col_used[c] &= !(1 << v);
        }
    }
    fill(n, reduced, n, &mut cells, &mut row_used, &mut col_used, visit);
}

/// Loops on `0..n` with neutral element 0 whose first row and column are the
/// identity, i.e. reduced Latin squares, in lexicographic order.
pub fn reduced_loops(n: usize) -> Vec<LoopTable> {
    if n == 0 {
        return Vec::new();
    }
    let first: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    latin_squares_from(n, &first, true, &mut |cells| {
        let q = QuasigroupTable::from_flat(n, cells.to_vec()).expect("Latin square");
        out.push(LoopTable::with_zero(q, 0).expect("reduced square"));
    });
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Every Latin square of order `n` (at most 8) that satisfies `keep`, in
/// lexicographic order of the flattened table.
pub fn latin_squares_where(
    n: usize,
    keep: impl Fn(&QuasigroupTable) -> bool + Sync,
) -> Vec<QuasigroupTable> {
    assert!(n <= 8, "exhaustive Latin-square search is limited to order 8");
    if n == 0 {
        return Vec::new();
    }
    permutations(n)
        .par_iter()
        .flat_map_iter(|first| {
            let mut found = Vec::new();
            latin_squares_from(n, first, false, &mut |cells| {
                let q = QuasigroupTable::from_flat(n, cells.to_vec()).expect("Latin square");
                if keep(&q) {
                    found.push(q);
                }
            });
            found
        })
        .collect()
}

pub fn count_latin_squares(n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    permutations(n)
        .par_iter()
        .map(|first| {
            let mut count = 0usize;
            latin_squares_from(n, first, false, &mut |_| count += 1);
            count
        })
        .sum()
}

/// All F-quasigroups of order `n ≤ 5`.
pub fn search_f_quasigroups(n: usize) -> Vec<QuasigroupTable> {
    assert!(n <= 5, "F-quasigroup search is limited to order 5");
    latin_squares_where(n, is_f_quasigroup)
}

/// Every pointing of every F-quasigroup of order `n`.
pub fn pointed_f_quasigroups(n: usize) -> Vec<PointedFQ> {
    search_f_quasigroups(n)
        .into_iter()
        .flat_map(|q| (0..n).map(move |a| PointedFQ::new_unchecked(q.clone(), a)))
        .collect()
}

/// All loop tables of order `n` (every Latin square with a neutral element).
pub fn search_loops(n: usize) -> Vec<LoopTable> {
    latin_squares_where(n, |q| q.is_loop().is_some())
        .into_iter()
        .map(|q| LoopTable::new(q).expect("has a neutral element"))
        .collect()
}

/// A small set of linear F-quasigroups `a x + b y + c` over cyclic groups.
pub fn linear_f_quasigroups() -> Vec<(String, PointedFQ)> {
    let specs: [(usize, usize, usize, usize); 5] =
        [(5, 2, 3, 0), (5, 2, 3, 1), (7, 3, 5, 2), (4, 3, 3, 1), (9, 2, 5, 4)];
    specs
        .iter()
        .map(|&(n, a, b, c)| {
            let l = cyclic(n);
            let scale = |k: usize| crate::endo::Endo::new((0..n).map(|x| k * x % n).collect());
            let form = ArithmeticForm::new(l, scale(a), scale(b), c);
            let q = build_fq(&form).expect("linear form over a cyclic group");
            let name = if c == 0 {
                format!("z{n}-{a}x{b}y")
            } else {
                format!("z{n}-{a}x{b}y{c}")
            };
            (name, PointedFQ::new_unchecked(q, 0))
        })
        .collect()
}

/// Writes the corpus as `.tbl` files into `dir`, returning the paths.
pub fn write_corpus(dir: &Path, include_cml81: bool) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut files: Vec<(String, TableFile)> = group_tables()
        .into_iter()
        .map(|(name, l)| (name, TableFile::new(l.base().clone())))
        .collect();
    files.push(("m12".into(), TableFile::new(chein_double(&dihedral(3)).base().clone())));
    if include_cml81 {
        files.push(("cml81".into(), TableFile::new(cml81()?.base().clone())));
    }
    for (name, p) in linear_f_quasigroups() {
        files.push((name, TableFile::pointed(p.q, p.point)));
    }
    let mut out = Vec::new();
    for (name, mut file) in files {
        file.comments.push(name.clone());
        let path = dir.join(format!("{name}.tbl"));
        std::fs::write(&path, file.serialize())?;
        out.push(path);
    }
    Ok(out)
}
