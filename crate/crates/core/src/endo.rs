//! Endomorphisms of finite loops: enumeration, the pointwise ring operations,
//! and the central / quasicentral / special classifications.

use serde::Serialize;

use crate::cayley::LoopTable;
use crate::error::{Error, Result};
use crate::structure;

/// Default cap on backtracking nodes during endomorphism enumeration.
pub const DEFAULT_SEARCH_CAP: usize = 50_000_000;

/// A self-map of a loop's carrier, stored as its image vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Endo {
    map: Vec<usize>,
}

impl Endo {
    pub fn new(map: Vec<usize>) -> Self {
        Endo { map }
    }

    pub fn identity(n: usize) -> Self {
        Endo {
            map: (0..n).collect(),
        }
    }

    /// The constant map onto the loop's zero.
    pub fn zero(l: &LoopTable) -> Self {
        Endo {
            map: vec![l.zero(); l.order()],
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.map
    }

    pub fn is_bijective(&self) -> bool {
        let mut hit = vec![false; self.map.len()];
        self.map
            .iter()
            .all(|&v| v < hit.len() && !std::mem::replace(&mut hit[v], true))
    }

    pub fn inverse(&self) -> Option<Endo> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &v) in self.map.iter().enumerate() {
            inv[v] = x;
        }
        Some(Endo { map: inv })
    }
}

fn same_carrier(n: usize, m: usize) -> Result<()> {
    if n == m {
        Ok(())
    } else {
        Err(Error::CarrierMismatch { left: n, right: m })
    }
}

pub fn is_endomorphism(l: &LoopTable, f: &Endo) -> bool {
    let n = l.order();
    f.len() == n
        && f.map.iter().all(|&v| v < n)
        && (0..n).all(|x| (0..n).all(|y| f.apply(l.add(x, y)) == l.add(f.apply(x), f.apply(y))))
}

/// `(f + g)(x) = f(x) + g(x)`. The result need not be an endomorphism.
pub fn endo_add(l: &LoopTable, f: &Endo, g: &Endo) -> Result<Endo> {
    same_carrier(l.order(), f.len())?;
    same_carrier(f.len(), g.len())?;
    Ok(Endo {
        map: (0..f.len()).map(|x| l.add(f.apply(x), g.apply(x))).collect(),
    })
}

/// `(-f)(x) = -f(x)`.
pub fn endo_neg(l: &LoopTable, f: &Endo) -> Result<Endo> {
    same_carrier(l.order(), f.len())?;
    Ok(Endo {
        map: f.map.iter().map(|&v| l.neg(v)).collect(),
    })
}

/// `(fg)(x) = f(g(x))`.
pub fn endo_compose(f: &Endo, g: &Endo) -> Result<Endo> {
    same_carrier(f.len(), g.len())?;
    Ok(Endo {
        map: g.map.iter().map(|&v| f.apply(v)).collect(),
    })
}

/// Greedy generating set: scanning upward, keep each element not already in
/// the subloop generated by those kept so far.
pub fn generating_set(l: &LoopTable) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut mask = l.generated_mask(&[]);
    for x in l.elements() {
        if !mask[x] {
            gens.push(x);
            mask = l.generated_mask(&gens);
        }
    }
    gens
}

const UNSET: usize = usize::MAX;

/// Extends a partial homomorphism after new definitions, checking every pair
/// of defined elements once. Returns false on conflict.
fn propagate(
    l: &LoopTable,
    map: &mut [usize],
    defined: &mut Vec<usize>,
    mut next: usize,
) -> bool {
    while next < defined.len() {
        let d = defined[next];
        next += 1;
        let mut i = 0;
        while i < next {
            let a = defined[i];
            i += 1;
            for (s, img) in [
                (l.add(a, d), l.add(map[a], map[d])),
                (l.add(d, a), l.add(map[d], map[a])),
            ] {
                if map[s] == UNSET {
                    map[s] = img;
                    defined.push(s);
                } else if map[s] != img {
                    return false;
                }
            }
        }
    }
    true
}

/// The unique endomorphism sending `gens[i]` to `images[i]`, if one exists.
/// `gens` must generate the loop.
pub fn extend_from_generators(l: &LoopTable, gens: &[usize], images: &[usize]) -> Option<Endo> {
    let n = l.order();
    let mut map = vec![UNSET; n];
    map[l.zero()] = l.zero();
    let mut defined = vec![l.zero()];
    if !propagate(l, &mut map, &mut defined, 0) {
        return None;
    }
    for (&g, &img) in gens.iter().zip(images) {
        if map[g] == UNSET {
            let start = defined.len();
            map[g] = img;
            defined.push(g);
            if !propagate(l, &mut map, &mut defined, start) {
                return None;
            }
        } else if map[g] != img {
            return None;
        }
    }
    (defined.len() == n).then_some(Endo { map })
}

/// Backtracking over images of `gens`, with `candidates[i]` the allowed images
/// of `gens[i]`. Results sorted.
pub fn enumerate_with_candidates(
    l: &LoopTable,
    gens: &[usize],
    candidates: &[Vec<usize>],
    cap: usize,
) -> Result<Vec<Endo>> {
    struct Search<'a> {
        l: &'a LoopTable,
        gens: &'a [usize],
        candidates: &'a [Vec<usize>],
        nodes: usize,
        cap: usize,
        out: Vec<Endo>,
    }

    impl Search<'_> {
        fn go(&mut self, depth: usize, map: &[usize], defined: &[usize]) -> Result<()> {
            if depth == self.gens.len() {
                if defined.len() == self.l.order() {
                    self.out.push(Endo { map: map.to_vec() });
                }
                return Ok(());
            }
            let g = self.gens[depth];
            for &img in &self.candidates[depth] {
                self.nodes += 1;
                if self.nodes > self.cap {
                    return Err(Error::SearchTooLarge { cap: self.cap });
                }
                let mut map = map.to_vec();
                let mut defined = defined.to_vec();
                let start = defined.len();
                if map[g] != UNSET {
                    if map[g] != img {
                        continue;
                    }
                } else {
                    map[g] = img;
                    defined.push(g);
                }
                if propagate(self.l, &mut map, &mut defined, start) {
                    self.go(depth + 1, &map, &defined)?;
                }
            }
            Ok(())
        }
    }

    let n = l.order();
    let mut map = vec![UNSET; n];
    map[l.zero()] = l.zero();
    let mut defined = vec![l.zero()];
    propagate(l, &mut map, &mut defined, 0);
    let mut search = Search {
        l,
        gens,
        candidates,
        nodes: 0,
        cap,
        out: Vec::new(),
    };
    search.go(0, &map, &defined)?;
    let mut out = search.out;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn enumerate_endomorphisms_with_cap(l: &LoopTable, cap: usize) -> Result<Vec<Endo>> {
    let gens = generating_set(l);
    let all: Vec<usize> = l.elements().collect();
    let candidates = vec![all; gens.len()];
    enumerate_with_candidates(l, &gens, &candidates, cap)
}

/// All endomorphisms, sorted lexicographically by image vector.
pub fn enumerate_endomorphisms(l: &LoopTable) -> Result<Vec<Endo>> {
    enumerate_endomorphisms_with_cap(l, DEFAULT_SEARCH_CAP)
}

pub fn enumerate_automorphisms(l: &LoopTable) -> Result<Vec<Endo>> {
    Ok(enumerate_endomorphisms(l)?
        .into_iter()
        .filter(Endo::is_bijective)
        .collect())
}

/// All quasicentral endomorphisms, found by restricting each generator image
/// to `(m g) \ z` for `z` central and `m` over one period.
pub fn enumerate_quasicentral(l: &LoopTable) -> Result<Vec<Endo>> {
    let ctx = EndoContext::shallow(l.clone());
    let gens = generating_set(l);
    let center = l.center();
    let q = l.base();
    let mut out = Vec::new();
    for m in 0..ctx.exponent {
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                let mg = ctx.power(g, m as i64);
                let mut c: Vec<usize> = center.iter().map(|&z| q.ldiv(mg, z)).collect();
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        for f in enumerate_with_candidates(l, &gens, &candidates, DEFAULT_SEARCH_CAP)? {
            if ctx.is_m_quasicentral(&f, m as i64) {
                out.push(f);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Residues `m` (mod the loop exponent) for which `mx + f(x)` is central for all `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasicentralWitness {
    pub endo: Endo,
    pub witnesses_m: Vec<usize>,
}

impl QuasicentralWitness {
    pub fn is_quasicentral(&self) -> bool {
        !self.witnesses_m.is_empty()
    }

    pub fn is_central(&self) -> bool {
        self.witnesses_m.first() == Some(&0)
    }
}

/// Outcome of the condition (F) scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionF {
    pub holds: bool,
    /// first `x` with `-x + f(x)` outside the Moufang center
    pub k_failure: Option<usize>,
    /// first `x` with `x + f(x)` outside the nucleus
    pub n_failure: Option<usize>,
    pub preserves_moufang_center: bool,
    pub preserves_nucleus: bool,
}

#[derive(Clone)]
struct MoufangPart {
    ctx: EndoContext,
    embed: Vec<usize>,
    index: Vec<usize>,
}

/// Precomputed data for classifying many endomorphisms of one loop.
#[derive(Clone)]
pub struct EndoContext {
    l: LoopTable,
    exponent: usize,
    /// `powers[x * exponent + m] = m x`
    powers: Vec<usize>,
    nk: bool,
    moufang: Option<Box<MoufangPart>>,
}

impl EndoContext {
    /// Context including the Moufang-center subloop, needed for `is_special`.
    pub fn new(l: &LoopTable) -> Self {
        let mut ctx = Self::shallow(l.clone());
        ctx.nk = structure::is_nk_loop(l);
        let members = l.moufang_center();
        if let Ok((kl, embed)) = l.subloop(&members) {
            let mut index = vec![UNSET; l.order()];
            for (i, &m) in embed.iter().enumerate() {
                index[m] = i;
            }
            ctx.moufang = Some(Box::new(MoufangPart {
                ctx: Self::shallow(kl),
                embed,
                index,
            }));
        }
        ctx
    }

    fn shallow(l: LoopTable) -> Self {
        let exponent = l.exponent();
        let mut powers = Vec::with_capacity(l.order() * exponent);
        for x in l.elements() {
            let mut acc = l.zero();
            for _ in 0..exponent {
                powers.push(acc);
                acc = l.add(acc, x);
            }
        }
        EndoContext {
            l,
            exponent,
            powers,
            nk: false,
            moufang: None,
        }
    }

    pub fn loop_table(&self) -> &LoopTable {
        &self.l
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn is_nk(&self) -> bool {
        self.nk
    }

    /// `m x`, valid on power-associative loops.
    #[inline]
    pub fn power(&self, x: usize, m: i64) -> usize {
        let r = m.rem_euclid(self.exponent as i64) as usize;
        self.powers[x * self.exponent + r]
    }

    pub fn is_central(&self, f: &Endo) -> bool {
        f.map.iter().all(|&v| self.l.in_center(v))
    }

    pub fn is_m_quasicentral(&self, f: &Endo, m: i64) -> bool {
        self.l
            .elements()
            .all(|x| self.l.in_center(self.l.add(self.power(x, m), f.apply(x))))
    }

    pub fn witnesses(&self, f: &Endo) -> Vec<usize> {
        (0..self.exponent)
            .filter(|&m| self.is_m_quasicentral(f, m as i64))
            .collect()
    }

    pub fn quasicentral_witnesses(&self, f: &Endo) -> QuasicentralWitness {
        QuasicentralWitness {
            endo: f.clone(),
            witnesses_m: self.witnesses(f),
        }
    }

    pub fn is_quasicentral(&self, f: &Endo) -> bool {
        (0..self.exponent).any(|m| self.is_m_quasicentral(f, m as i64))
    }

    /// `f` restricted to the Moufang center, reindexed on that subloop, when
    /// `f` maps the Moufang center into itself.
    pub fn restrict_to_moufang_center(&self, f: &Endo) -> Option<Endo> {
        let part = self.moufang.as_ref()?;
        part.embed
            .iter()
            .map(|&k| {
                let i = part.index[f.apply(k)];
                (i != UNSET).then_some(i)
            })
            .collect::<Option<Vec<_>>>()
            .map(Endo::new)
    }

    /// Quasicentral witnesses of `f` restricted to the Moufang-center subloop,
    /// computed against that subloop's own center and exponent.
    pub fn moufang_center_witnesses(&self, f: &Endo) -> Option<Vec<usize>> {
        let part = self.moufang.as_ref()?;
        let r = self.restrict_to_moufang_center(f)?;
        Some(part.ctx.witnesses(&r))
    }

    pub fn moufang_center_context(&self) -> Option<&EndoContext> {
        self.moufang.as_ref().map(|p| &p.ctx)
    }

    /// Image in the Moufang center, quasicentral restriction there, and the
    /// nucleus mapped into itself.
    pub fn is_special(&self, f: &Endo) -> Result<bool> {
        if !self.nk {
            return Err(Error::NotNkLoop);
        }
        let l = &self.l;
        if !f.map.iter().all(|&v| l.in_moufang_center(v)) {
            return Ok(false);
        }
        if !l
            .elements()
            .filter(|&x| l.in_nucleus(x))
            .all(|x| l.in_nucleus(f.apply(x)))
        {
            return Ok(false);
        }
        Ok(self
            .moufang_center_witnesses(f)
            .is_some_and(|w| !w.is_empty()))
    }

    pub fn condition_f(&self, f: &Endo) -> ConditionF {
        let l = &self.l;
        let k_failure = l
            .elements()
            .find(|&x| !l.in_moufang_center(l.add(l.neg(x), f.apply(x))));
        let n_failure = l
            .elements()
            .find(|&x| !l.in_nucleus(l.add(x, f.apply(x))));
        let preserves_moufang_center = l
            .elements()
            .filter(|&x| l.in_moufang_center(x))
            .all(|x| l.in_moufang_center(f.apply(x)));
        let preserves_nucleus = l
            .elements()
            .filter(|&x| l.in_nucleus(x))
            .all(|x| l.in_nucleus(f.apply(x)));
        ConditionF {
            holds: k_failure.is_none() && n_failure.is_none(),
            k_failure,
            n_failure,
            preserves_moufang_center,
            preserves_nucleus,
        }
    }

    /// `x -> -x + f(x)` without any checks.
    pub fn delta_raw(&self, f: &Endo) -> Endo {
        let l = &self.l;
        Endo::new(l.elements().map(|x| l.add(l.neg(x), f.apply(x))).collect())
    }

    /// `h(x) = -x + f(x)` for `f` satisfying (F); verified to be special.
    pub fn delta_map(&self, f: &Endo) -> Result<Endo> {
        let cond = self.condition_f(f);
        if !cond.holds {
            return Err(Error::InvalidForm(format!(
                "condition (F) fails: {cond:?}"
            )));
        }
        let h = self.delta_raw(f);
        if !is_endomorphism(&self.l, &h) || !self.is_special(&h)? {
            return Err(Error::InvariantViolation(
                "-x + f(x) is not a special endomorphism".into(),
            ));
        }
        Ok(h)
    }
}

pub fn is_central(l: &LoopTable, f: &Endo) -> bool {
    f.as_slice().iter().all(|&v| l.in_center(v))
}

pub fn is_m_quasicentral(l: &LoopTable, f: &Endo, m: i64) -> bool {
    EndoContext::shallow(l.clone()).is_m_quasicentral(f, m)
}

pub fn quasicentral_witnesses(l: &LoopTable, f: &Endo) -> QuasicentralWitness {
    EndoContext::shallow(l.clone()).quasicentral_witnesses(f)
}

pub fn is_special(l: &LoopTable, f: &Endo) -> Result<bool> {
    EndoContext::new(l).is_special(f)
}

pub fn satisfies_condition_f(l: &LoopTable, f: &Endo) -> ConditionF {
    EndoContext::shallow(l.clone()).condition_f(f)
}

pub fn delta_map(l: &LoopTable, f: &Endo) -> Result<Endo> {
    EndoContext::new(l).delta_map(f)
}
