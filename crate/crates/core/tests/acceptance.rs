//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::time::Instant;

use rayon::prelude::*;

use fquasi::cayley::{is_f_quasigroup, LoopTable, QuasigroupTable};
use fquasi::corpus::{self, cml81, enumerate_forms, group_tables, reduced_loops};
use fquasi::endo::{enumerate_endomorphisms, Endo};
use fquasi::equivalence::{
    build_fq, check_fm_mc, recover_form, rho, roundtrip_fq, roundtrip_fq_with, roundtrip_module,
    PointedFQ,
};
use fquasi::lemmas::{check_lemma_suite, LemmaOptions, Universe};
use fquasi::structure::{self, verify_nk_facts};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    match failures.first() {
        None => Outcome { pass: true, detail },
        Some(first) => Outcome {
            pass: false,
            detail: format!("{detail}; {} failures, first: {first}", failures.len()),
        },
    }
}

/// Every pointing of every F-quasigroup of order 1 through 5.
fn small_pointed() -> Vec<PointedFQ> {
    (1..=5).flat_map(corpus::pointed_f_quasigroups).collect()
}

/// Pointed F-quasigroups built from the enumerated forms of each group, at
/// most 500 per group.
fn form_pointed() -> Vec<(String, PointedFQ)> {
    let mut out = Vec::new();
    for (name, l) in group_tables() {
        let forms = enumerate_forms(&l, 500).expect("forms of a group");
        for (i, form) in forms.iter().enumerate() {
            let q = build_fq(form).expect("enumerated form is valid");
            out.push((format!("{name}#{i}"), PointedFQ::new_unchecked(q, l.zero())));
        }
    }
    out
}

fn describe(p: &PointedFQ) -> String {
    format!("{:?} at {}", p.q.rows(), p.point)
}

fn criterion_recovery(small: &[PointedFQ]) -> Outcome {
    let failures: Vec<String> = small
        .par_iter()
        .filter_map(|p| {
            let forms = match recover_form(p) {
                Ok(f) => f,
                Err(e) => return Some(format!("{}: {e}", describe(p))),
            };
            for r in &forms {
                if !structure::is_nk_loop(&r.form.loop_table) {
                    return Some(format!("{}: loop of ({}, {}) not NK", describe(p), r.u, r.v));
                }
                match build_fq(&r.form) {
                    Ok(t) if t == p.q => {}
                    _ => return Some(format!("{}: ({}, {}) does not rebuild", describe(p), r.u, r.v)),
                }
            }
            None
        })
        .collect();
    let per_order: Vec<usize> = (1..=5)
        .map(|n| small.iter().filter(|p| p.q.order() == n).count() / n)
        .collect();
    outcome(
        &failures,
        format!("F-quasigroups by order 1..5 = {per_order:?}, {} pointings", small.len()),
    )
}

fn criterion_roundtrip(small: &[PointedFQ], built: &[(String, PointedFQ)]) -> Outcome {
    let all: Vec<(String, &PointedFQ)> = small
        .iter()
        .map(|p| (describe(p), p))
        .chain(built.iter().map(|(n, p)| (n.clone(), p)))
        .collect();
    let failures: Vec<String> = all
        .par_iter()
        .flat_map_iter(|(name, p)| {
            let mut bad = Vec::new();
            let fq = roundtrip_fq(p);
            if !fq.pass {
                bad.push(format!("{name}: sigma(rho(P)) differs: {:?}", fq.witness));
            }
            match rho(p, None) {
                Ok(pm) => {
                    let m = roundtrip_module(&pm);
                    if !m.pass {
                        bad.push(format!("{name}: rho(sigma(M)) differs: {:?}", m.witness));
                    }
                }
                Err(e) => bad.push(format!("{name}: rho failed: {e}")),
            }
            for r in recover_form(p).unwrap_or_default() {
                let t = roundtrip_fq_with(p, &r.form);
                if !t.pass {
                    bad.push(format!("{name}: form ({}, {}) round trip: {:?}", r.u, r.v, t.witness));
                }
            }
            bad
        })
        .collect();
    outcome(&failures, format!("{} pointed F-quasigroups", all.len()))
}

const LEMMAS: [&str; 10] = [
    "cend-ring",
    "quasi",
    "quasi2",
    "quasi-comm",
    "quasi-comm2",
    "quasi-3",
    "special",
    "h-send",
    "send-commute",
    "aut-F",
];

fn criterion_lemmas(k81: &LoopTable) -> Outcome {
    let mut loops: Vec<(String, LoopTable, Universe)> = group_tables()
        .into_iter()
        .map(|(n, l)| (n, l, Universe::All))
        .collect();
    loops.push(("cml81 moufang center".into(), k81.clone(), Universe::Quasicentral));
    let mut failures = Vec::new();
    let mut instances = 0usize;
    for (name, l, universe) in &loops {
        let opts = LemmaOptions {
            universe: *universe,
            ..Default::default()
        };
        match check_lemma_suite(l, &opts) {
            Ok(report) => {
                for lemma in LEMMAS {
                    match report.row(lemma) {
                        Some(row) => {
                            instances += row.instances_checked;
                            if !row.pass {
                                failures.push(format!("{name} {lemma}: {:?}", row.counterexample));
                            }
                        }
                        None => failures.push(format!("{name}: no row for {lemma}")),
                    }
                }
                for row in report.rows.iter().filter(|r| !r.pass) {
                    if !LEMMAS.contains(&row.lemma.as_str()) {
                        failures.push(format!("{name} {}: {:?}", row.lemma, row.counterexample));
                    }
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    outcome(
        &failures,
        format!("{} loops, {instances} lemma instances", loops.len()),
    )
}

fn criterion_structure(
    cml: &LoopTable,
    small: &[PointedFQ],
    built: &[(String, PointedFQ)],
) -> Outcome {
    let mut failures = Vec::new();
    let mut loops: Vec<(String, LoopTable)> = group_tables();
    loops.push(("cml81".into(), cml.clone()));
    for (name, l) in &loops {
        let report = verify_nk_facts(l);
        for row in report.failures() {
            failures.push(format!("{name} {}: {:?}", row.name, row.witness));
        }
    }
    let mut tables: Vec<QuasigroupTable> = small
        .iter()
        .map(|p| p.q.clone())
        .chain(built.iter().map(|(_, p)| p.q.clone()))
        .chain(corpus::linear_f_quasigroups().into_iter().map(|(_, p)| p.q))
        .collect();
    tables.sort_by(|a, b| a.as_flat().cmp(b.as_flat()));
    tables.dedup();
    let bad: Vec<String> = tables
        .par_iter()
        .filter_map(|q| {
            let m = structure::m_set(q);
            match structure::quotient_by_subset(q, &m.members) {
                Ok(qt) if qt.table.is_associative() => None,
                Ok(_) => Some(format!("{:?}: Q/M(Q) not associative", q.rows())),
                Err(e) => Some(format!("{:?}: {e}", q.rows())),
            }
        })
        .collect();
    failures.extend(bad);
    outcome(
        &failures,
        format!("{} NK-loops, {} F-quasigroups", loops.len(), tables.len()),
    )
}

fn criterion_class_m(small: &[PointedFQ], built: &[(String, PointedFQ)]) -> Outcome {
    let all: Vec<&PointedFQ> = small.iter().chain(built.iter().map(|(_, p)| p)).collect();
    let failures: Vec<String> = all
        .par_iter()
        .flat_map_iter(|p| {
            let mut bad = Vec::new();
            for r in recover_form(p).unwrap_or_default() {
                match rho(p, Some(&r.form)) {
                    Ok(pm) => {
                        let axioms = pm.module.verify_module_axioms();
                        let class = pm.module.verify_class_m();
                        for row in axioms.failures().chain(class.failures()) {
                            bad.push(format!("{}: {} fails: {:?}", describe(p), row.name, row.witness));
                        }
                        if !pm.is_nuclearly_pointed() {
                            bad.push(format!("{}: point {} not nuclear", describe(p), pm.point));
                        }
                    }
                    Err(e) => bad.push(format!("{}: {e}", describe(p))),
                }
            }
            let fm = check_fm_mc(p);
            for row in fm.failures() {
                bad.push(format!("{}: biconditional {}: {:?}", describe(p), row.name, row.witness));
            }
            bad
        })
        .collect();
    outcome(&failures, format!("{} pointed F-quasigroups, every recovered form", all.len()))
}

/// Every self-map of the carrier, kept when it is a homomorphism.
fn all_maps_oracle(l: &LoopTable) -> Vec<Endo> {
    let n = l.order();
    let total = n.pow(n as u32);
    let mut out = Vec::new();
    let mut map = vec![0usize; n];
    for code in 0..total {
        let mut c = code;
        for slot in map.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        let hom = (0..n).all(|x| (0..n).all(|y| map[l.add(x, y)] == l.add(map[x], map[y])));
        if hom {
            out.push(Endo::new(map.clone()));
        }
    }
    out
}

/// `alpha`, `beta` found by search, then both laws on every triple.
fn literal_f_oracle(q: &QuasigroupTable) -> bool {
    let n = q.order();
    let m = |a, b| q.mul(a, b);
    let alpha: Vec<usize> = (0..n).map(|x| (0..n).find(|&a| m(x, a) == x).unwrap()).collect();
    let beta: Vec<usize> = (0..n).map(|x| (0..n).find(|&b| m(b, x) == x).unwrap()).collect();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if m(x, m(y, z)) != m(m(x, y), m(alpha[x], z)) {
                    return false;
                }
                if m(m(z, y), x) != m(m(z, beta[x]), m(y, x)) {
                    return false;
                }
            }
        }
    }
    true
}

fn criterion_oracles() -> Outcome {
    let mut failures = Vec::new();
    let loops: Vec<LoopTable> = (1..=6).flat_map(reduced_loops).collect();
    let bad: Vec<String> = loops
        .par_iter()
        .filter_map(|l| {
            let mut fast = enumerate_endomorphisms(l).ok()?;
            fast.sort();
            let slow = all_maps_oracle(l);
            (fast != slow).then(|| format!("{:?}: {} vs {}", l.base().rows(), fast.len(), slow.len()))
        })
        .collect();
    failures.extend(bad);
    let squares: Vec<QuasigroupTable> =
        (1..=4).flat_map(|n| corpus::latin_squares_where(n, |_| true)).collect();
    for q in &squares {
        if is_f_quasigroup(q) != literal_f_oracle(q) {
            failures.push(format!("{:?}: F-law classification differs", q.rows()));
        }
    }
    outcome(
        &failures,
        format!("{} loops of order <= 6, {} squares of order <= 4", loops.len(), squares.len()),
    )
}

fn criterion_cml81(cml: &LoopTable) -> Outcome {
    let mut failures = Vec::new();
    if !cml.base().is_commutative() {
        failures.push("not commutative".into());
    }
    if !cml.is_moufang() {
        failures.push("not Moufang".into());
    }
    if cml.base().is_associative() {
        failures.push("associative".into());
    }
    if cml.exponent() != 3 {
        failures.push(format!("exponent {}", cml.exponent()));
    }
    if !structure::is_nk_loop(cml) {
        failures.push("not NK".into());
    }
    match structure::is_a_loop(cml) {
        Ok(true) => {}
        Ok(false) => failures.push("not an A-loop".into()),
        Err(e) => failures.push(format!("A-loop check: {e}")),
    }
    outcome(
        &failures,
        format!(
            "|N| = {}, |K| = {}, |Z| = {}",
            cml.nucleus().len(),
            cml.moufang_center().len(),
            cml.center().len()
        ),
    )
}

fn main() {
    let start = Instant::now();
    let cml = cml81().expect("CML81 construction");
    let k = cml.moufang_center();
    let (k81, _) = cml.subloop(&k).expect("Moufang center is a subloop");
    let small = small_pointed();
    let built = form_pointed();

    type Run<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(&str, Run)> = vec![
        ("1 small-order form recovery", Box::new(|| criterion_recovery(&small))),
        ("2 round-trip identity", Box::new(|| criterion_roundtrip(&small, &built))),
        ("3 lemma suites", Box::new(|| criterion_lemmas(&k81))),
        ("4 structural facts", Box::new(|| criterion_structure(&cml, &small, &built))),
        ("5 class membership", Box::new(|| criterion_class_m(&small, &built))),
        ("6 oracle equivalences", Box::new(criterion_oracles)),
        ("7 CML81 self-verification", Box::new(|| criterion_cml81(&cml))),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let t = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "{} criterion {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance total {:.1}s", start.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}
