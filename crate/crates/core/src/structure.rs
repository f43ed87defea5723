//! Subloop invariants (nucleus, Moufang center, center, `M(Q)`), normality,
//! quotients, the multiplication and inner mapping groups, and the NK-loop
//! structural facts.

use std::collections::HashSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::{LoopTable, QuasigroupTable};
use crate::error::{Error, Result};

/// Default cap on the size of an enumerated permutation group.
pub const DEFAULT_GROUP_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetKind {
    Nucleus,
    MoufangCenter,
    Center,
    MSet,
    Subloop,
    NormalSubloop,
}

/// A named subset of a table's carrier, as an ascending index list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetWitness {
    pub members: Vec<usize>,
    pub kind: SubsetKind,
    pub parent_order: usize,
}

impl SubsetWitness {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.parent_order];
        for &m in &self.members {
            mask[m] = true;
        }
        mask
    }
}

pub(crate) fn nucleus_scan(l: &LoopTable) -> Vec<bool> {
    let n = l.order();
    (0..n)
        .map(|a| {
            (0..n).all(|x| {
                let ax = l.add(a, x);
                let xa = l.add(x, a);
                (0..n).all(|y| {
                    let xy = l.add(x, y);
                    l.add(ax, y) == l.add(a, xy)
                        && l.add(xa, y) == l.add(x, l.add(a, y))
                        && l.add(xy, a) == l.add(x, l.add(y, a))
                })
            })
        })
        .collect()
}

pub(crate) fn moufang_center_scan(l: &LoopTable) -> Vec<bool> {
    let n = l.order();
    (0..n)
        .map(|a| {
            let aa = l.add(a, a);
            (0..n).all(|x| {
                let ax = l.add(a, x);
                (0..n).all(|y| l.add(aa, l.add(x, y)) == l.add(ax, l.add(a, y)))
            })
        })
        .collect()
}

pub fn nucleus(l: &LoopTable) -> SubsetWitness {
    SubsetWitness {
        members: l.nucleus(),
        kind: SubsetKind::Nucleus,
        parent_order: l.order(),
    }
}

pub fn moufang_center(l: &LoopTable) -> SubsetWitness {
    SubsetWitness {
        members: l.moufang_center(),
        kind: SubsetKind::MoufangCenter,
        parent_order: l.order(),
    }
}

pub fn center(l: &LoopTable) -> SubsetWitness {
    SubsetWitness {
        members: l.center(),
        kind: SubsetKind::Center,
        parent_order: l.order(),
    }
}

/// `M(Q) = { a : (x·a)·(y·x) = (x·y)·(a·x) for all x, y }`.
pub fn m_set(q: &QuasigroupTable) -> SubsetWitness {
    let n = q.order();
    let members = (0..n)
        .filter(|&a| {
            (0..n).all(|x| {
                let xa = q.mul(x, a);
                let ax = q.mul(a, x);
                (0..n).all(|y| q.mul(xa, q.mul(y, x)) == q.mul(q.mul(x, y), ax))
            })
        })
        .collect();
    SubsetWitness {
        members,
        kind: SubsetKind::MSet,
        parent_order: n,
    }
}

/// Elements commuting with everything.
pub fn commutant(l: &LoopTable) -> Vec<usize> {
    l.elements()
        .filter(|&a| l.elements().all(|x| l.add(a, x) == l.add(x, a)))
        .collect()
}

pub fn is_subloop(l: &LoopTable, members: &[usize]) -> bool {
    let mut mask = vec![false; l.order()];
    for &m in members {
        mask[m] = true;
    }
    mask[l.zero()]
        && members
            .iter()
            .all(|&a| members.iter().all(|&b| mask[l.add(a, b)]))
}

/// The standard generators of the inner mapping group:
/// `T_x(z) = (x+z)/x`, `L_{x,y}(z) = (x+y)\(x+(y+z))`, `R_{x,y}(z) = ((z+x)+y)/(x+y)`.
pub fn inner_generators(l: &LoopTable) -> Vec<Vec<usize>> {
    let q = l.base();
    let n = l.order();
    let mut gens: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        gens.push((0..n).map(|z| q.rdiv(l.add(x, z), x)).collect());
        for y in 0..n {
            let xy = l.add(x, y);
            gens.push(
                (0..n)
                    .map(|z| q.ldiv(xy, l.add(x, l.add(y, z))))
                    .collect(),
            );
            gens.push(
                (0..n)
                    .map(|z| q.rdiv(l.add(l.add(z, x), y), xy))
                    .collect(),
            );
        }
    }
    gens.sort_unstable();
    gens.dedup();
    gens
}

/// A subloop is normal iff it is invariant under every inner mapping; the
/// standard generators suffice.
pub fn is_normal_subloop(l: &LoopTable, s: &SubsetWitness) -> bool {
    if !is_subloop(l, &s.members) {
        return false;
    }
    let mask = s.mask();
    inner_generators(l)
        .iter()
        .all(|g| s.members.iter().all(|&m| mask[g[m]]))
}

/// Cosets of a normal subloop (or of `M(Q)`) and the induced table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientTable {
    /// Cosets sorted by least member, each ascending.
    pub cosets: Vec<Vec<usize>>,
    pub table: QuasigroupTable,
    pub projection: Vec<usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Least congruence of `q` identifying all of `subset`, as a class index per
/// element (classes numbered by least member).
fn congruence_closure(q: &QuasigroupTable, subset: &[usize]) -> Vec<usize> {
    let n = q.order();
    let mut uf = UnionFind::new(n);
    let mut work: Vec<(usize, usize)> = Vec::new();
    if let Some(&first) = subset.first() {
        for &s in &subset[1..] {
            if uf.union(first, s) {
                work.push((first, s));
            }
        }
    }
    while let Some((a, b)) = work.pop() {
        for c in 0..n {
            for (p, r) in [(q.mul(c, a), q.mul(c, b)), (q.mul(a, c), q.mul(b, c))] {
                if uf.union(p, r) {
                    work.push((p, r));
                }
            }
        }
    }
    let mut class_of_root = vec![usize::MAX; n];
    let mut next = 0;
    let mut projection = vec![0; n];
    for (x, slot) in projection.iter_mut().enumerate() {
        let r = uf.find(x);
        if class_of_root[r] == usize::MAX {
            class_of_root[r] = next;
            next += 1;
        }
        *slot = class_of_root[r];
    }
    projection
}

/// Quotient of `q` by the congruence generated by `subset`; fails with
/// `NotNormal` when `subset` is not exactly one class of that congruence.
pub fn quotient_by_subset(q: &QuasigroupTable, subset: &[usize]) -> Result<QuotientTable> {
    if subset.is_empty() {
        return Err(Error::NotNormal("empty subset".into()));
    }
    let projection = congruence_closure(q, subset);
    let k = projection.iter().max().map_or(0, |m| m + 1);
    let mut cosets = vec![Vec::new(); k];
    for (x, &c) in projection.iter().enumerate() {
        cosets[c].push(x);
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if cosets[projection[sorted[0]]] != sorted {
        return Err(Error::NotNormal(format!(
            "generated congruence class {:?} differs from subset",
            cosets[projection[sorted[0]]]
        )));
    }
    let reps: Vec<usize> = cosets.iter().map(|c| c[0]).collect();
    let mut table = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            table.push(projection[q.mul(a, b)]);
        }
    }
    let n = q.order();
    for x in 0..n {
        for y in 0..n {
            if projection[q.mul(x, y)] != table[projection[x] * k + projection[y]] {
                return Err(Error::NotNormal(format!(
                    "coset product ill-defined at ({x}, {y})"
                )));
            }
        }
    }
    Ok(QuotientTable {
        cosets,
        table: QuasigroupTable::from_flat(k, table)?,
        projection,
    })
}

/// Quotient of a loop by a normal subloop.
pub fn quotient(l: &LoopTable, s: &SubsetWitness) -> Result<QuotientTable> {
    if !s.contains(l.zero()) {
        return Err(Error::NotNormal("subloop must contain zero".into()));
    }
    quotient_by_subset(l.base(), &s.members)
}

/// A finite permutation group, elements sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationGroup {
    pub degree: usize,
    pub elements: Vec<Vec<usize>>,
}

impl PermutationGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Closure of `generators` under composition, breadth first.
pub fn permutation_closure(
    degree: usize,
    generators: &[Vec<usize>],
    cap: usize,
) -> Result<PermutationGroup> {
    let gens: Vec<Vec<u16>> = generators
        .iter()
        .map(|g| g.iter().map(|&v| v as u16).collect())
        .collect();
    let identity: Vec<u16> = (0..degree as u16).collect();
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    let mut order: Vec<Vec<u16>> = vec![identity.clone()];
    seen.insert(identity);
    let mut head = 0;
    while head < order.len() {
        let p = order[head].clone();
        head += 1;
        for g in &gens {
            let composed: Vec<u16> = p.iter().map(|&i| g[i as usize]).collect();
            if !seen.contains(&composed) {
                if order.len() >= cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                seen.insert(composed.clone());
                order.push(composed);
            }
        }
    }
    let mut elements: Vec<Vec<usize>> = order
        .into_iter()
        .map(|p| p.into_iter().map(usize::from).collect())
        .collect();
    elements.sort_unstable();
    Ok(PermutationGroup { degree, elements })
}

fn translations(l: &LoopTable) -> Vec<Vec<usize>> {
    let n = l.order();
    let mut gens: Vec<Vec<usize>> = Vec::with_capacity(2 * n);
    for x in 0..n {
        gens.push((0..n).map(|y| l.add(x, y)).collect());
        gens.push((0..n).map(|y| l.add(y, x)).collect());
    }
    gens.sort_unstable();
    gens.dedup();
    gens
}

/// The group generated by all left and right translations.
pub fn multiplication_group(l: &LoopTable, cap: usize) -> Result<PermutationGroup> {
    permutation_closure(l.order(), &translations(l), cap)
}

/// The stabilizer of zero in the multiplication group.
pub fn inner_mappings(l: &LoopTable, cap: usize) -> Result<PermutationGroup> {
    let mlt = multiplication_group(l, cap)?;
    let zero = l.zero();
    Ok(PermutationGroup {
        degree: mlt.degree,
        elements: mlt.elements.into_iter().filter(|p| p[zero] == zero).collect(),
    })
}

pub fn is_automorphism(l: &LoopTable, map: &[usize]) -> bool {
    let n = l.order();
    let mut hit = vec![false; n];
    for &v in map {
        if v >= n || std::mem::replace(&mut hit[v], true) {
            return false;
        }
    }
    (0..n).all(|x| (0..n).all(|y| map[l.add(x, y)] == l.add(map[x], map[y])))
}

pub fn is_a_loop_with_cap(l: &LoopTable, cap: usize) -> Result<bool> {
    Ok(inner_mappings(l, cap)?
        .elements
        .iter()
        .all(|p| is_automorphism(l, p)))
}

/// Every inner mapping is an automorphism. Fails only if the multiplication
/// group exceeds the default cap.
pub fn is_a_loop(l: &LoopTable) -> Result<bool> {
    is_a_loop_with_cap(l, DEFAULT_GROUP_CAP)
}

/// For each `x`, some `(u, v)` with `u` in the nucleus, `v` in the Moufang
/// center and `x = u + v = v + u`; `None` if some `x` has no decomposition.
pub fn nk_decomposition(l: &LoopTable) -> Option<Vec<(usize, usize)>> {
    let q = l.base();
    let nucleus = l.nucleus();
    l.elements()
        .map(|x| {
            nucleus.iter().find_map(|&u| {
                let v = q.ldiv(u, x);
                (l.in_moufang_center(v) && l.add(v, u) == x).then_some((u, v))
            })
        })
        .collect()
}

pub fn is_nk_loop(l: &LoopTable) -> bool {
    nk_decomposition(l).is_some()
}

/// One checked fact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactRow {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl FactRow {
    pub fn new(name: &str, pass: bool, witness: Option<Value>) -> Self {
        FactRow {
            name: name.to_string(),
            pass,
            witness,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FactReport {
    pub rows: Vec<FactRow>,
}

impl FactReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn push(&mut self, name: &str, pass: bool, witness: Option<Value>) {
        self.rows.push(FactRow::new(name, pass, witness));
    }

    pub fn failures(&self) -> impl Iterator<Item = &FactRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

fn map_back(embed: &[usize], members: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = members.iter().map(|&i| embed[i]).collect();
    out.sort_unstable();
    out
}

fn quotient_row(
    report: &mut FactReport,
    name: &str,
    l: &LoopTable,
    s: &SubsetWitness,
    check: impl Fn(&LoopTable) -> std::result::Result<(), Value>,
) {
    match quotient(l, s).and_then(|qt| LoopTable::new(qt.table)) {
        Ok(ql) => match check(&ql) {
            Ok(()) => report.push(name, true, None),
            Err(w) => report.push(name, false, Some(w)),
        },
        Err(e) => report.push(name, false, Some(json!(e.to_string()))),
    }
}

/// Checks the structural facts every NK-loop satisfies, one report row each.
pub fn verify_nk_facts(l: &LoopTable) -> FactReport {
    let mut report = FactReport::default();
    let decomposition = nk_decomposition(l);
    report.push(
        "nk_decomposition",
        decomposition.is_some(),
        decomposition
            .as_ref()
            .map(|d| json!(d.iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>())),
    );

    let moufang = l.moufang_violation();
    report.push("moufang", moufang.is_none(), moufang.map(|t| json!([t.0, t.1, t.2])));

    match is_a_loop(l) {
        Ok(pass) => report.push("a_loop", pass, None),
        Err(e) => report.push("a_loop", false, Some(json!(e.to_string()))),
    }

    let bad3 = l
        .elements()
        .find(|&x| !l.in_nucleus(l.power_unchecked(x, 3)));
    report.push("three_x_in_nucleus", bad3.is_none(), bad3.map(|x| json!(x)));

    let n_set = nucleus(l);
    let k_set = moufang_center(l);
    let z_set = center(l);

    report.push("nucleus_normal", is_normal_subloop(l, &n_set), None);
    quotient_row(
        &mut report,
        "quotient_by_nucleus_commutative_moufang_exponent_3",
        l,
        &n_set,
        |ql| {
            if !ql.base().is_commutative() {
                return Err(json!("not commutative"));
            }
            if let Some(t) = ql.moufang_violation() {
                return Err(json!({"moufang": [t.0, t.1, t.2]}));
            }
            match ql.elements().find(|&x| ql.power_unchecked(x, 3) != ql.zero()) {
                Some(x) => Err(json!({"3x_nonzero": x})),
                None => Ok(()),
            }
        },
    );

    report.push("moufang_center_normal", is_normal_subloop(l, &k_set), None);
    quotient_row(
        &mut report,
        "quotient_by_moufang_center_associative",
        l,
        &k_set,
        |ql| match ql.base().associativity_violation() {
            Some(t) => Err(json!([t.0, t.1, t.2])),
            None => Ok(()),
        },
    );

    report.push("center_normal", is_normal_subloop(l, &z_set), None);

    let chain = (|| -> Result<Value> {
        let (nl, n_embed) = l.subloop(&n_set.members)?;
        let (kl, k_embed) = l.subloop(&k_set.members)?;
        Ok(json!({
            "center": z_set.members,
            "center_of_nucleus": map_back(&n_embed, &nl.center()),
            "moufang_center_of_nucleus": map_back(&n_embed, &nl.moufang_center()),
            "center_of_moufang_center": map_back(&k_embed, &kl.center()),
            "nucleus_of_moufang_center": map_back(&k_embed, &kl.nucleus()),
        }))
    })();
    match chain {
        Ok(v) => {
            let z = &v["center"];
            let pass = [
                "center_of_nucleus",
                "moufang_center_of_nucleus",
                "center_of_moufang_center",
                "nucleus_of_moufang_center",
            ]
            .iter()
            .all(|k| &v[*k] == z);
            report.push("center_chain", pass, (!pass).then_some(v));
        }
        Err(e) => report.push("center_chain", false, Some(json!(e.to_string()))),
    }

    let comm = commutant(l);
    let pass = comm == k_set.members;
    report.push(
        "moufang_center_is_commutant",
        pass,
        (!pass).then(|| json!({"commutant": comm, "moufang_center": k_set.members})),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zn(n: usize) -> LoopTable {
        LoopTable::from_fn(n, |x, y| (x + y) % n).unwrap()
    }

    /// S3 as D3: index i + 3s for r^i s^s.
    fn s3() -> LoopTable {
        LoopTable::from_fn(6, |a, b| {
            let (i, s) = (a % 3, a / 3);
            let (j, t) = (b % 3, b / 3);
            let k = if s == 0 { (i + j) % 3 } else { (i + 3 - j) % 3 };
            k + 3 * ((s + t) % 2)
        })
        .unwrap()
    }

    #[test]
    fn group_subsets() {
        let g = s3();
        assert_eq!(nucleus(&g).members, (0..6).collect::<Vec<_>>());
        assert_eq!(moufang_center(&g).members, vec![0]);
        assert_eq!(center(&g).members, vec![0]);
        assert_eq!(m_set(g.base()).members, vec![0]);
        let z4 = zn(4);
        assert_eq!(moufang_center(&z4).len(), 4);
        assert_eq!(m_set(z4.base()).len(), 4);
    }

    #[test]
    fn quotient_z4_by_two() {
        let z4 = zn(4);
        let s = SubsetWitness {
            members: vec![0, 2],
            kind: SubsetKind::Subloop,
            parent_order: 4,
        };
        assert!(is_normal_subloop(&z4, &s));
        let qt = quotient(&z4, &s).unwrap();
        assert_eq!(qt.cosets, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(qt.table.rows(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(qt.projection, vec![0, 1, 0, 1]);
    }

    #[test]
    fn non_normal_subgroup_of_s3() {
        let g = s3();
        // {e, s} with s a reflection
        let s = SubsetWitness {
            members: vec![0, 3],
            kind: SubsetKind::Subloop,
            parent_order: 6,
        };
        assert!(is_subloop(&g, &s.members));
        assert!(!is_normal_subloop(&g, &s));
        assert!(matches!(quotient(&g, &s), Err(Error::NotNormal(_))));
        let rot = SubsetWitness {
            members: vec![0, 1, 2],
            kind: SubsetKind::Subloop,
            parent_order: 6,
        };
        assert!(is_normal_subloop(&g, &rot));
        assert_eq!(quotient(&g, &rot).unwrap().table.order(), 2);
    }

    #[test]
    fn inner_mappings_of_groups() {
        let z4 = zn(4);
        let inn = inner_mappings(&z4, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(inn.elements, vec![vec![0, 1, 2, 3]]);
        assert!(is_a_loop(&z4).unwrap());

        let g = s3();
        let mlt = multiplication_group(&g, DEFAULT_GROUP_CAP).unwrap();
        // Mlt(G) = G×G / Z(G) acting by x -> a x b
        assert_eq!(mlt.len(), 36);
        let inn = inner_mappings(&g, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(inn.len(), 6);
        // inner automorphisms x -> a^-1 x a
        for p in &inn.elements {
            assert!(is_automorphism(&g, p));
        }
        assert!(is_a_loop(&g).unwrap());
        assert!(matches!(
            multiplication_group(&g, 10),
            Err(Error::GroupTooLarge { cap: 10 })
        ));
    }

    #[test]
    fn standard_generators_generate_inner_mapping_group() {
        for l in [zn(5), s3()] {
            let inn = inner_mappings(&l, DEFAULT_GROUP_CAP).unwrap();
            let gen = permutation_closure(l.order(), &inner_generators(&l), DEFAULT_GROUP_CAP)
                .unwrap();
            assert_eq!(inn, gen);
        }
    }

    #[test]
    fn nk_and_facts_on_small_groups() {
        for l in [zn(6), s3()] {
            let d = nk_decomposition(&l).unwrap();
            for (x, &(u, v)) in d.iter().enumerate() {
                assert_eq!(l.add(u, v), x);
                assert_eq!(l.add(v, u), x);
            }
            let report = verify_nk_facts(&l);
            assert!(report.all_pass(), "{report:?}");
        }
    }

    #[test]
    fn m_set_quotient_of_linear_quasigroup() {
        let q = QuasigroupTable::from_fn(5, |x, y| (2 * x + 3 * y + 1) % 5).unwrap();
        let m = m_set(&q);
        assert_eq!(m.len(), 5);
        let qt = quotient_by_subset(&q, &m.members).unwrap();
        assert_eq!(qt.table.order(), 1);
    }
}
