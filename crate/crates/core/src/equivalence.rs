//! Arithmetic forms `x·y = (f(x) + e) + g(y)` over NK-loops, their recovery
//! from pointed F-quasigroups, and the maps `rho` and `sigma` between pointed
//! F-quasigroups and pointed generalized modules.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::{check_f_laws, FLaw, LoopTable, QuasigroupTable, TableFile};
use crate::endo::{endo_compose, is_endomorphism, Endo, EndoContext};
use crate::error::{Error, Result};
use crate::genmodule::{GenModule, PointedGenModule};
use crate::structure::{self, FactReport};

/// Loop, two automorphisms and a nuclear element.
#[derive(Clone, Debug, PartialEq)]
pub struct ArithmeticForm {
    pub loop_table: LoopTable,
    pub f: Endo,
    pub g: Endo,
    pub e: usize,
}

impl ArithmeticForm {
    pub fn new(loop_table: LoopTable, f: Endo, g: Endo, e: usize) -> Self {
        ArithmeticForm {
            loop_table,
            f,
            g,
            e,
        }
    }

    /// `(G, Id, Id, 0)`.
    pub fn identity(loop_table: LoopTable) -> Self {
        let n = loop_table.order();
        let e = loop_table.zero();
        Self::new(loop_table, Endo::identity(n), Endo::identity(n), e)
    }

    /// One row per condition a form must satisfy.
    pub fn verify(&self) -> FactReport {
        let l = &self.loop_table;
        let n = l.order();
        let mut report = FactReport::default();
        let sized = self.f.len() == n && self.g.len() == n && self.e < n;
        report.push(
            "carrier",
            sized,
            (!sized).then(|| json!({"order": n, "f": self.f.len(), "g": self.g.len(), "e": self.e})),
        );
        if !sized {
            return report;
        }
        report.push("nk_loop", structure::is_nk_loop(l), None);
        for (name, h) in [("f_automorphism", &self.f), ("g_automorphism", &self.g)] {
            report.push(name, h.is_bijective() && is_endomorphism(l, h), None);
        }
        let fg = endo_compose(&self.f, &self.g).expect("same carrier");
        let gf = endo_compose(&self.g, &self.f).expect("same carrier");
        let differs = l.elements().find(|&x| fg.apply(x) != gf.apply(x));
        report.push("fg_eq_gf", differs.is_none(), differs.map(|x| json!({"x": x})));
        report.push(
            "e_in_nucleus",
            l.in_nucleus(self.e),
            (!l.in_nucleus(self.e)).then(|| json!({"e": self.e})),
        );
        for (tag, h) in [("f", &self.f), ("g", &self.g)] {
            let bad = l.elements().find(|&x| !l.in_nucleus(l.add(x, h.apply(x))));
            report.push(
                &format!("x_plus_{tag}_in_nucleus"),
                bad.is_none(),
                bad.map(|x| json!({"x": x})),
            );
            let bad = l
                .elements()
                .find(|&x| !l.in_moufang_center(l.add(l.neg(x), h.apply(x))));
            report.push(
                &format!("neg_x_plus_{tag}_in_moufang_center"),
                bad.is_none(),
                bad.map(|x| json!({"x": x})),
            );
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.verify().all_pass()
    }

    /// `(f(x) + e) + g(y)` with no validation.
    pub fn table_unchecked(&self) -> Result<QuasigroupTable> {
        let l = &self.loop_table;
        QuasigroupTable::from_fn(l.order(), |x, y| {
            l.add(l.add(self.f.apply(x), self.e), self.g.apply(y))
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "loop": self.loop_table.base().rows(),
            "zero": self.loop_table.zero(),
            "f": self.f,
            "g": self.g,
            "e": self.e,
        })
    }
}

/// Builds the F-quasigroup of a verified form.
pub fn build_fq(form: &ArithmeticForm) -> Result<QuasigroupTable> {
    let report = form.verify();
    if let Some(row) = report.failures().next() {
        return Err(Error::InvalidForm(match &row.witness {
            Some(w) => format!("{} ({w})", row.name),
            None => row.name.clone(),
        }));
    }
    let q = form.table_unchecked()?;
    if let Err(v) = check_f_laws(&q) {
        return Err(Error::InvariantViolation(format!(
            "form table breaks the {:?} F-law at ({}, {}, {})",
            v.law, v.x, v.y, v.z
        )));
    }
    Ok(q)
}

/// An F-quasigroup with a chosen element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedFQ {
    pub q: QuasigroupTable,
    pub point: usize,
}

impl PointedFQ {
    pub fn new(q: QuasigroupTable, point: usize) -> Result<Self> {
        if point >= q.order() {
            return Err(Error::Malformed {
                line: 0,
                message: format!("point {point} out of range"),
            });
        }
        if let Err(v) = check_f_laws(&q) {
            return Err(Error::NotFQuasigroup {
                law: match v.law {
                    FLaw::Left => "left",
                    FLaw::Right => "right",
                },
                x: v.x,
                y: v.y,
                z: v.z,
            });
        }
        Ok(PointedFQ { q, point })
    }

    /// Skips the F-law scan; for inputs already known to be F-quasigroups.
    pub fn new_unchecked(q: QuasigroupTable, point: usize) -> Self {
        PointedFQ { q, point }
    }

    /// Parses a table file; the point defaults to 0.
    pub fn parse(text: &str) -> Result<Self> {
        let file = TableFile::parse(text)?;
        let point = file.point.unwrap_or(0);
        Self::new(file.table, point)
    }

    pub fn serialize(&self) -> String {
        TableFile::pointed(self.q.clone(), self.point).serialize()
    }

    /// `a ∈ M(Q)`.
    pub fn in_m_set(&self) -> bool {
        structure::m_set(&self.q).contains(self.point)
    }
}

/// A recovered form together with the isotope parameters that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct RecoveredForm {
    pub u: usize,
    pub v: usize,
    pub form: ArithmeticForm,
}

impl RecoveredForm {
    pub fn to_json(&self) -> Value {
        json!({"u": self.u, "v": self.v, "form": self.form.to_json()})
    }
}

/// The principal isotope `x∘y = (x/u)·(v\y)` with `v·u = a`, if it gives an
/// arithmetic form reproducing the table.
fn candidate(p: &PointedFQ, u: usize) -> Option<RecoveredForm> {
    let q = &p.q;
    let a = p.point;
    let v = q.rdiv(a, u);
    let iso = QuasigroupTable::from_fn(q.order(), |x, y| q.mul(q.rdiv(x, u), q.ldiv(v, y))).ok()?;
    let l = LoopTable::with_zero(iso, a).ok()?;
    if !structure::is_nk_loop(&l) {
        return None;
    }
    let e = q.mul(a, a);
    // f(x) + e = x·a and e + g(y) = a·y
    let f = Endo::new(l.elements().map(|x| l.base().rdiv(q.mul(x, a), e)).collect());
    let g = Endo::new(l.elements().map(|y| l.base().ldiv(e, q.mul(a, y))).collect());
    let form = ArithmeticForm::new(l, f, g, e);
    if !form.is_valid() {
        return None;
    }
    match form.table_unchecked() {
        Ok(t) if t == *q => Some(RecoveredForm { u, v, form }),
        _ => None,
    }
}

/// Every arithmetic form obtainable from a principal isotope with neutral
/// element `a`, ordered by `(u, v)`.
pub fn recover_form(p: &PointedFQ) -> Result<Vec<RecoveredForm>> {
    let n = p.q.order();
    let found: Vec<RecoveredForm> = (0..n)
        .into_par_iter()
        .filter_map(|u| candidate(p, u))
        .collect();
    if found.is_empty() {
        return Err(Error::NoneFound { point: p.point });
    }
    Ok(found)
}

/// The least recovered form.
pub fn canonical_form(p: &PointedFQ) -> Result<RecoveredForm> {
    let n = p.q.order();
    (0..n)
        .find_map(|u| candidate(p, u))
        .ok_or(Error::NoneFound { point: p.point })
}

/// The pointed module of a form: `phi = -x + f(x)`, `psi = -x + g(x)`,
/// `mu = -x + f^-1(x)`, `nu = -x + g^-1(x)`, pointed at `e`.
pub fn module_of_form(form: &ArithmeticForm) -> Result<PointedGenModule> {
    let l = &form.loop_table;
    let report = form.verify();
    if let Some(row) = report.failures().next() {
        return Err(Error::InvalidForm(row.name.clone()));
    }
    let ctx = EndoContext::new(l);
    let f_inv = form.f.inverse().expect("verified bijective");
    let g_inv = form.g.inverse().expect("verified bijective");
    let images = [
        ctx.delta_raw(&form.f),
        ctx.delta_raw(&form.g),
        ctx.delta_raw(&f_inv),
        ctx.delta_raw(&g_inv),
    ];
    let module = GenModule::new(l.clone(), images)?;
    PointedGenModule::new(module, form.e)
}

/// `rho` with the canonical recovered form, or with `form` when given (it
/// must reproduce the table).
pub fn rho(p: &PointedFQ, form: Option<&ArithmeticForm>) -> Result<PointedGenModule> {
    match form {
        Some(form) => {
            let t = build_fq(form)?;
            if t != p.q || form.loop_table.zero() != p.point {
                return Err(Error::InvalidForm(
                    "form does not reproduce the pointed table".into(),
                ));
            }
            module_of_form(form)
        }
        None => module_of_form(&canonical_form(p)?.form),
    }
}

/// The form `(Q, z + x z, z + y z, point)` induced by a pointed module.
pub fn sigma_form(pm: &PointedGenModule) -> Result<ArithmeticForm> {
    let m = &pm.module;
    let class = m.verify_class_m();
    if !class.all_pass() {
        let names: Vec<&str> = class.failures().map(|r| r.name.as_str()).collect();
        return Err(Error::NotInClassM(names.join(", ")));
    }
    if !pm.is_nuclearly_pointed() {
        return Err(Error::NotNuclearlyPointed { point: pm.point });
    }
    let l = m.loop_table();
    let shift = |h: &Endo| Endo::new(l.elements().map(|z| l.add(z, h.apply(z))).collect());
    let f = shift(m.phi());
    let g = shift(m.psi());
    for (name, fwd, back) in [("f", &f, shift(m.mu())), ("g", &g, shift(m.nu()))] {
        let id = Endo::identity(l.order());
        if endo_compose(fwd, &back)? != id || endo_compose(&back, fwd)? != id {
            return Err(Error::InvariantViolation(format!(
                "{name} is not inverted by its companion"
            )));
        }
    }
    let form = ArithmeticForm::new(l.clone(), f, g, pm.point);
    let report = form.verify();
    if let Some(row) = report.failures().next() {
        return Err(Error::InvariantViolation(format!(
            "induced form fails {}",
            row.name
        )));
    }
    Ok(form)
}

pub fn sigma(pm: &PointedGenModule) -> Result<PointedFQ> {
    let form = sigma_form(pm)?;
    let q = build_fq(&form)?;
    Ok(PointedFQ::new_unchecked(q, form.loop_table.zero()))
}

/// Verdict of a round trip, with the first difference on failure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundTrip {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl RoundTrip {
    fn ok() -> Self {
        RoundTrip {
            pass: true,
            witness: None,
        }
    }

    fn fail(witness: Value) -> Self {
        RoundTrip {
            pass: false,
            witness: Some(witness),
        }
    }

    fn error(e: &Error) -> Self {
        Self::fail(json!({"error": e.kind(), "message": e.to_string()}))
    }
}

fn first_table_difference(a: &QuasigroupTable, b: &QuasigroupTable) -> Option<Value> {
    if a.order() != b.order() {
        return Some(json!({"order": [a.order(), b.order()]}));
    }
    let n = a.order();
    (0..n * n).find_map(|i| {
        let (x, y) = (i / n, i % n);
        (a.mul(x, y) != b.mul(x, y))
            .then(|| json!({"x": x, "y": y, "left": a.mul(x, y), "right": b.mul(x, y)}))
    })
}

fn compare_fq(p: &PointedFQ, back: &PointedFQ) -> RoundTrip {
    if let Some(w) = first_table_difference(&p.q, &back.q) {
        return RoundTrip::fail(json!({"table": w}));
    }
    if p.point != back.point {
        return RoundTrip::fail(json!({"point": [p.point, back.point]}));
    }
    RoundTrip::ok()
}

/// `sigma(rho(P)) = P` using the canonical form.
pub fn roundtrip_fq(p: &PointedFQ) -> RoundTrip {
    match rho(p, None).and_then(|pm| sigma(&pm)) {
        Ok(back) => compare_fq(p, &back),
        Err(e) => RoundTrip::error(&e),
    }
}

/// `sigma(rho(P)) = P` using the given form for `rho`.
pub fn roundtrip_fq_with(p: &PointedFQ, form: &ArithmeticForm) -> RoundTrip {
    match rho(p, Some(form)).and_then(|pm| sigma(&pm)) {
        Ok(back) => compare_fq(p, &back),
        Err(e) => RoundTrip::error(&e),
    }
}

/// `rho(sigma(PM)) = PM`, with `rho` computed from the form `sigma` induces.
pub fn roundtrip_module(pm: &PointedGenModule) -> RoundTrip {
    let back = sigma_form(pm).and_then(|form| {
        let p = PointedFQ::new_unchecked(build_fq(&form)?, form.loop_table.zero());
        rho(&p, Some(&form))
    });
    let back = match back {
        Ok(b) => b,
        Err(e) => return RoundTrip::error(&e),
    };
    let (a, b) = (&pm.module, &back.module);
    if a.loop_table() != b.loop_table() {
        let w = first_table_difference(a.loop_table().base(), b.loop_table().base())
            .unwrap_or_else(|| json!({"zero": [a.loop_table().zero(), b.loop_table().zero()]}));
        return RoundTrip::fail(json!({"loop": w}));
    }
    for (name, (x, y)) in ["phi", "psi", "mu", "nu"]
        .iter()
        .zip(a.images().iter().zip(b.images()))
    {
        if let Some(z) = (0..x.len()).find(|&z| x.apply(z) != y.apply(z)) {
            return RoundTrip::fail(
                json!({"image": name, "z": z, "left": x.apply(z), "right": y.apply(z)}),
            );
        }
    }
    if pm.point != back.point {
        return RoundTrip::fail(json!({"point": [pm.point, back.point]}));
    }
    RoundTrip::ok()
}

/// For each recovered form: `a ∈ M(Q)` exactly when `e` is central in the loop.
pub fn check_fm_mc(p: &PointedFQ) -> FactReport {
    let mut report = FactReport::default();
    let in_m = p.in_m_set();
    match recover_form(p) {
        Ok(forms) => {
            for r in forms {
                let e_central = r.form.loop_table.in_center(r.form.e);
                report.push(
                    &format!("u{}_v{}", r.u, r.v),
                    in_m == e_central,
                    Some(json!({"point_in_m": in_m, "e": r.form.e, "e_in_center": e_central})),
                );
            }
        }
        Err(e) => report.push("recover_form", false, Some(json!(e.to_string()))),
    }
    report
}
