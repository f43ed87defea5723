//! Instance checks of the ring-theoretic facts about central, quasicentral
//! and special endomorphisms, run over enumerated endomorphism sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::LoopTable;
use crate::endo::{
    endo_add, endo_compose, endo_neg, enumerate_endomorphisms_with_cap, enumerate_quasicentral,
    is_endomorphism, Endo, EndoContext, DEFAULT_SEARCH_CAP,
};
use crate::error::{Error, Result};

/// Which endomorphisms a suite draws its instances from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Universe {
    /// Every endomorphism.
    All,
    /// Only quasicentral endomorphisms. Allowed when the nucleus equals the
    /// center and the Moufang center is the whole loop, so that every special
    /// endomorphism and every endomorphism satisfying (F) is quasicentral.
    Quasicentral,
}

#[derive(Clone, Debug)]
pub struct LemmaOptions {
    pub universe: Universe,
    pub max_pairs: usize,
    pub max_triples: usize,
    pub seed: u64,
    pub search_cap: usize,
}

impl Default for LemmaOptions {
    fn default() -> Self {
        LemmaOptions {
            universe: Universe::All,
            max_pairs: 300_000,
            max_triples: 50_000,
            seed: 0xF00D,
            search_cap: DEFAULT_SEARCH_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaRow {
    pub lemma: String,
    pub applicable: bool,
    pub instances_checked: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LemmaReport {
    pub rows: Vec<LemmaRow>,
    pub endomorphisms: usize,
    pub quasicentral: usize,
    pub central: usize,
    pub special: Option<usize>,
    pub condition_f: Option<usize>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn row(&self, lemma: &str) -> Option<&LemmaRow> {
        self.rows.iter().find(|r| r.lemma == lemma)
    }
}

struct Tally {
    row: LemmaRow,
}

impl Tally {
    fn new(lemma: &str) -> Self {
        Tally {
            row: LemmaRow {
                lemma: lemma.to_string(),
                applicable: true,
                instances_checked: 0,
                pass: true,
                counterexample: None,
            },
        }
    }

    fn not_applicable(lemma: &str) -> LemmaRow {
        let mut t = Self::new(lemma);
        t.row.applicable = false;
        t.row
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.row.instances_checked += 1;
        if !ok && self.row.pass {
            self.row.pass = false;
            self.row.counterexample = Some(witness());
        }
    }

    fn done(self) -> LemmaRow {
        self.row
    }
}

/// All index pairs in order when there are at most `cap`, else `cap` seeded samples.
fn pairs(len: usize, cap: usize, rng: &mut ChaCha8Rng) -> Vec<[usize; 2]> {
    if len * len <= cap {
        (0..len).flat_map(|a| (0..len).map(move |b| [a, b])).collect()
    } else if len == 0 {
        Vec::new()
    } else {
        (0..cap)
            .map(|_| [rng.gen_range(0..len), rng.gen_range(0..len)])
            .collect()
    }
}

fn triples(len: usize, cap: usize, rng: &mut ChaCha8Rng) -> Vec<[usize; 3]> {
    if len.saturating_pow(3) <= cap {
        (0..len)
            .flat_map(|a| (0..len).flat_map(move |b| (0..len).map(move |c| [a, b, c])))
            .collect()
    } else if len == 0 {
        Vec::new()
    } else {
        (0..cap)
            .map(|_| {
                [
                    rng.gen_range(0..len),
                    rng.gen_range(0..len),
                    rng.gen_range(0..len),
                ]
            })
            .collect()
    }
}

fn add(l: &LoopTable, f: &Endo, g: &Endo) -> Endo {
    endo_add(l, f, g).expect("same carrier")
}

fn neg(l: &LoopTable, f: &Endo) -> Endo {
    endo_neg(l, f).expect("same carrier")
}

fn comp(f: &Endo, g: &Endo) -> Endo {
    endo_compose(f, g).expect("same carrier")
}

fn w2(f: &Endo, g: &Endo) -> Value {
    json!({"f": f, "g": g})
}

fn w3(f: &Endo, g: &Endo, h: &Endo) -> Value {
    json!({"f": f, "g": g, "h": h})
}

/// Closure and ring axioms for a set `s` of endomorphisms under the pointwise
/// operations, with `member` deciding membership of results.
#[allow(clippy::too_many_arguments)]
fn ring_rows(
    lemma: &str,
    corollary: &str,
    l: &LoopTable,
    s: &[Endo],
    member: &dyn Fn(&Endo) -> bool,
    unity: Option<&Endo>,
    opts: &LemmaOptions,
    rng: &mut ChaCha8Rng,
) -> (LemmaRow, LemmaRow) {
    let zero = Endo::zero(l);
    let mut t = Tally::new(lemma);
    t.check(member(&zero), || json!("zero endomorphism not in set"));
    for f in s {
        let nf = neg(l, f);
        t.check(is_endomorphism(l, &nf) && member(&nf), || json!({"neg_not_closed": f}));
        t.check(add(l, f, &nf) == zero, || json!({"f_plus_neg_f_nonzero": f}));
        t.check(add(l, f, &zero) == *f, || json!({"f_plus_zero": f}));
    }
    for [a, b] in pairs(s.len(), opts.max_pairs, rng) {
        let (f, g) = (&s[a], &s[b]);
        let fg = add(l, f, g);
        t.check(is_endomorphism(l, &fg) && member(&fg), || {
            json!({"sum_not_closed": w2(f, g)})
        });
        t.check(fg == add(l, g, f), || json!({"sum_not_commutative": w2(f, g)}));
        let prod = comp(f, g);
        t.check(member(&prod), || json!({"product_not_closed": w2(f, g)}));
    }
    let mut c = Tally::new(corollary);
    if let Some(one) = unity {
        for f in s {
            c.check(comp(one, f) == *f && comp(f, one) == *f, || {
                json!({"unity_fails": f})
            });
        }
    }
    for [a, b, d] in triples(s.len(), opts.max_triples, rng) {
        let (f, g, h) = (&s[a], &s[b], &s[d]);
        t.check(add(l, f, &add(l, g, h)) == add(l, &add(l, f, g), h), || {
            json!({"sum_not_associative": w3(f, g, h)})
        });
        c.check(comp(f, &comp(g, h)) == comp(&comp(f, g), h), || {
            json!({"product_not_associative": w3(f, g, h)})
        });
        c.check(comp(f, &add(l, g, h)) == add(l, &comp(f, g), &comp(f, h)), || {
            json!({"left_distributivity": w3(f, g, h)})
        });
        c.check(comp(&add(l, f, g), h) == add(l, &comp(f, h), &comp(g, h)), || {
            json!({"right_distributivity": w3(f, g, h)})
        });
    }
    (t.done(), c.done())
}

/// Runs every applicable lemma on `l`, reporting instance counts and the
/// first counterexample per lemma.
pub fn check_lemma_suite(l: &LoopTable, opts: &LemmaOptions) -> Result<LemmaReport> {
    let ctx = EndoContext::new(l);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let e = ctx.exponent() as i64;

    let endos = match opts.universe {
        Universe::All => enumerate_endomorphisms_with_cap(l, opts.search_cap)?,
        Universe::Quasicentral => {
            if l.nucleus() != l.center() || l.moufang_center().len() != l.order() {
                return Err(Error::InvalidForm(
                    "quasicentral universe needs N = Z and K = Q".into(),
                ));
            }
            enumerate_quasicentral(l)?
        }
    };
    let witnesses: Vec<Vec<usize>> = endos.iter().map(|f| ctx.witnesses(f)).collect();
    let qend: Vec<usize> = (0..endos.len()).filter(|&i| !witnesses[i].is_empty()).collect();
    let zend: Vec<Endo> = endos
        .iter()
        .filter(|f| ctx.is_central(f))
        .cloned()
        .collect();

    let mut report = LemmaReport {
        endomorphisms: endos.len(),
        quasicentral: qend.len(),
        central: zend.len(),
        ..Default::default()
    };

    // central endomorphisms form an associative ring
    let (cend, cend_cor) = ring_rows(
        "cend-ring",
        "cend-ring-corollary",
        l,
        &zend,
        &|f| is_endomorphism(l, f) && ctx.is_central(f),
        None,
        opts,
        &mut rng,
    );
    report.rows.push(cend);
    report.rows.push(cend_cor);

    // 0-quasicentral iff central; ZEnd within QEnd; identity is (-1)-quasicentral
    let mut t = Tally::new("quasi");
    for (f, w) in endos.iter().zip(&witnesses) {
        let central = ctx.is_central(f);
        t.check((w.first() == Some(&0)) == central, || json!({"f": f, "witnesses": w}));
        t.check(!central || !w.is_empty(), || json!({"central_not_quasicentral": f}));
    }
    let id = Endo::identity(l.order());
    t.check(ctx.is_m_quasicentral(&id, -1), || json!("identity not (-1)-quasicentral"));
    report.rows.push(t.done());

    // fg is (-mn)-quasicentral
    let mut t = Tally::new("quasi2");
    for [a, b] in pairs(qend.len(), opts.max_pairs, &mut rng) {
        let (i, j) = (qend[a], qend[b]);
        let fg = comp(&endos[i], &endos[j]);
        let wfg = ctx.witnesses(&fg);
        for &m in &witnesses[i] {
            for &n in &witnesses[j] {
                let target = (-(m as i64) * (n as i64)).rem_euclid(e) as usize;
                t.check(wfg.binary_search(&target).is_ok(), || {
                    json!({"f": endos[i], "g": endos[j], "m": m, "n": n, "fg_witnesses": wfg})
                });
            }
        }
    }
    report.rows.push(t.done());

    // commutative lemmas, on the loop itself or on its Moufang center
    let commutative = if l.base().is_commutative() {
        Some(EndoContext::new(l))
    } else {
        match ctx.moufang_center_context() {
            Some(k) if k.loop_table().base().is_commutative() => {
                Some(EndoContext::new(k.loop_table()))
            }
            _ => None,
        }
    };
    match commutative {
        Some(cctx) => {
            let (comm, comm2, cor) = commutative_rows(&cctx, opts, &mut rng)?;
            report.rows.push(comm);
            report.rows.push(comm2);
            report.rows.push(cor);
        }
        None => {
            report.rows.push(Tally::not_applicable("quasi-comm"));
            report.rows.push(Tally::not_applicable("quasi-comm2"));
            report.rows.push(Tally::not_applicable("quasi-comm-ring"));
        }
    }

    // with kx central for all x (some k in 1..=3), witnesses can be taken in {0, 1, -1}
    let k_hyp = (1..=3).find(|&k| l.elements().all(|x| l.in_center(ctx.power(x, k))));
    if k_hyp.is_some() {
        let mut t = Tally::new("quasi-3");
        let allowed = [0usize, 1 % e as usize, (e - 1) as usize];
        for &i in &qend {
            let w = &witnesses[i];
            t.check(w.iter().any(|m| allowed.contains(m)), || {
                json!({"f": endos[i], "witnesses": w})
            });
            if let Some(inv) = endos[i].inverse() {
                t.check(ctx.is_quasicentral(&inv), || json!({"inverse_not_quasicentral": endos[i]}));
            }
        }
        report.rows.push(t.done());
    } else {
        report.rows.push(Tally::not_applicable("quasi-3"));
    }

    if !ctx.is_nk() {
        for name in ["special", "send-ring", "h-send", "send-commute", "aut-F"] {
            report.rows.push(Tally::not_applicable(name));
        }
        return Ok(report);
    }

    let send: Vec<Endo> = endos
        .iter()
        .filter(|f| ctx.is_special(f).unwrap_or(false))
        .cloned()
        .collect();
    report.special = Some(send.len());
    let (special, send_ring) = ring_rows(
        "special",
        "send-ring",
        l,
        &send,
        &|f| is_endomorphism(l, f) && ctx.is_special(f).unwrap_or(false),
        None,
        opts,
        &mut rng,
    );
    report.rows.push(special);
    report.rows.push(send_ring);

    let fends: Vec<&Endo> = endos.iter().filter(|f| ctx.condition_f(f).holds).collect();
    report.condition_f = Some(fends.len());
    let deltas: Vec<Endo> = fends.iter().map(|f| ctx.delta_raw(f)).collect();

    let mut t = Tally::new("h-send");
    for (f, h) in fends.iter().zip(&deltas) {
        t.check(is_endomorphism(l, h), || json!({"not_endomorphism": f}));
        t.check(ctx.is_special(h).unwrap_or(false), || json!({"not_special": f}));
        let two = ctx
            .moufang_center_context()
            .zip(ctx.restrict_to_moufang_center(h))
            .map(|(k, r)| k.is_m_quasicentral(&r, 2));
        t.check(two == Some(true), || json!({"restriction_not_2_quasicentral": f}));
    }
    report.rows.push(t.done());

    let mut t = Tally::new("send-commute");
    for [a, b] in pairs(fends.len(), opts.max_pairs, &mut rng) {
        let (f, g) = (fends[a], fends[b]);
        let (h, k) = (&deltas[a], &deltas[b]);
        let fg_commute = comp(f, g) == comp(g, f);
        let hk_commute = comp(h, k) == comp(k, h);
        t.check(fg_commute == hk_commute, || w2(f, g));
    }
    report.rows.push(t.done());

    let fauts: Vec<(&Endo, Endo, Endo, Endo)> = fends
        .iter()
        .zip(&deltas)
        .filter_map(|(f, h)| {
            let inv = f.inverse()?;
            let p = ctx.delta_raw(&inv);
            Some((*f, inv, h.clone(), p))
        })
        .collect();
    let zero = Endo::zero(l);
    let mut t = Tally::new("aut-F");
    for (f, inv, h, p) in &fauts {
        t.check(ctx.condition_f(inv).holds, || json!({"inverse_fails_F": f}));
        t.check(
            ctx.is_special(h).unwrap_or(false) && ctx.is_special(p).unwrap_or(false),
            || json!({"not_special": f}),
        );
        t.check(comp(h, p) == comp(p, h), || json!({"hp_ne_ph": f}));
        t.check(add(l, &add(l, h, p), &comp(h, p)) == zero, || {
            json!({"h_plus_p_plus_hp_nonzero": f})
        });
    }
    for [a, b] in pairs(fauts.len(), opts.max_pairs, &mut rng) {
        let (f, _, h, p) = &fauts[a];
        let (g, _, k, q) = &fauts[b];
        if comp(f, g) == comp(g, f) {
            let maps = [h, k, p, q];
            let all_commute = maps
                .iter()
                .all(|x| maps.iter().all(|y| comp(x, y) == comp(y, x)));
            t.check(all_commute, || w2(f, g));
        }
    }
    report.rows.push(t.done());
    Ok(report)
}

/// Negation, sums, and the unital ring structure of quasicentral
/// endomorphisms of a commutative loop.
fn commutative_rows(
    cctx: &EndoContext,
    opts: &LemmaOptions,
    rng: &mut ChaCha8Rng,
) -> Result<(LemmaRow, LemmaRow, LemmaRow)> {
    let c = cctx.loop_table();
    let e = cctx.exponent() as i64;
    let qend = enumerate_quasicentral(c)?;
    let wit: Vec<Vec<usize>> = qend.iter().map(|f| cctx.witnesses(f)).collect();

    let mut t = Tally::new("quasi-comm");
    for (f, w) in qend.iter().zip(&wit) {
        let nf = neg(c, f);
        t.check(is_endomorphism(c, &nf), || json!({"neg_not_endomorphism": f}));
        for &m in w {
            t.check(cctx.is_m_quasicentral(&nf, -(m as i64)), || {
                json!({"neg_witness": f, "m": m})
            });
        }
    }
    for [a, b] in pairs(qend.len(), opts.max_pairs, rng) {
        let (f, g) = (&qend[a], &qend[b]);
        let s = add(c, f, g);
        t.check(is_endomorphism(c, &s), || json!({"sum_not_endomorphism": w2(f, g)}));
        let ws = cctx.witnesses(&s);
        for &m in &wit[a] {
            for &n in &wit[b] {
                let target = ((m + n) as i64).rem_euclid(e) as usize;
                t.check(ws.binary_search(&target).is_ok(), || {
                    json!({"f": f, "g": g, "m": m, "n": n})
                });
            }
        }
    }
    let id = Endo::identity(c.order());
    let (comm2, cor) = ring_rows(
        "quasi-comm2",
        "quasi-comm-ring",
        c,
        &qend,
        &|f| is_endomorphism(c, f) && cctx.is_quasicentral(f),
        Some(&id),
        opts,
        rng,
    );
    Ok((t.done(), comm2, cor))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zn(n: usize) -> LoopTable {
        LoopTable::from_fn(n, |x, y| (x + y) % n).unwrap()
    }

    #[test]
    fn z4_suite_passes() {
        let report = check_lemma_suite(&zn(4), &LemmaOptions::default()).unwrap();
        assert!(report.all_pass(), "{report:#?}");
        assert_eq!(report.endomorphisms, 4);
        assert_eq!(report.central, 4);
        assert_eq!(report.special, Some(4));
    }

    #[test]
    fn s3_suite_degenerate_rings() {
        let s3 = LoopTable::from_fn(6, |a, b| {
            let (i, s) = (a % 3, a / 3);
            let (j, t) = (b % 3, b / 3);
            let k = if s == 0 { (i + j) % 3 } else { (i + 3 - j) % 3 };
            k + 3 * ((s + t) % 2)
        })
        .unwrap();
        let report = check_lemma_suite(&s3, &LemmaOptions::default()).unwrap();
        assert!(report.all_pass(), "{report:#?}");
        assert_eq!(report.central, 1);
        assert_eq!(report.special, Some(1));
        assert_eq!(report.quasicentral, 2);
    }

    #[test]
    fn sampling_is_deterministic() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(pairs(1000, 10, &mut a), pairs(1000, 10, &mut b));
        assert_eq!(pairs(3, 10, &mut a).len(), 9);
        assert_eq!(triples(2, 10, &mut a).len(), 8);
    }

    #[test]
    fn quasicentral_universe_rejected_on_groups() {
        let s3 = LoopTable::from_fn(6, |a, b| {
            let (i, s) = (a % 3, a / 3);
            let (j, t) = (b % 3, b / 3);
            let k = if s == 0 { (i + j) % 3 } else { (i + 3 - j) % 3 };
            k + 3 * ((s + t) % 2)
        })
        .unwrap();
        let opts = LemmaOptions {
            universe: Universe::Quasicentral,
            ..Default::default()
        };
        assert!(check_lemma_suite(&s3, &opts).is_err());
        // Z5: N = Z = K = Q, so the restricted universe is allowed
        assert!(check_lemma_suite(&zn(5), &opts).unwrap().all_pass());
    }
}
