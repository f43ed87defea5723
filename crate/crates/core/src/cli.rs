//! The `fquasi` command line. Every invocation prints one JSON document on
//! stdout; exit code 0 means every requested check passed, 1 means some check
//! failed, 2 means the input could not be used.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cayley::{check_f_laws, LoopTable, QuasigroupTable, TableFile};
use crate::corpus;
use crate::endo::{enumerate_automorphisms, enumerate_endomorphisms};
use crate::equivalence::{
    check_fm_mc, recover_form, rho, roundtrip_fq, roundtrip_fq_with, roundtrip_module, sigma,
    PointedFQ,
};
use crate::error::{Error, Result};
use crate::genmodule::PointedGenModule;
use crate::lemmas::{check_lemma_suite, LemmaOptions, Universe};
use crate::structure::{self, FactReport, DEFAULT_GROUP_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Tier {
    Fast,
    Slow,
}

#[derive(Parser, Debug)]
#[command(name = "fquasi", version, about = "F-quasigroups, NK-loops and generalized modules")]
pub struct Cli {
    /// Which expensive scans are allowed (order-5 search, CML81 work)
    #[arg(long, value_enum, default_value = "fast", global = true)]
    pub tier: Tier,

    /// Seed for every randomized sample
    #[arg(long, default_value_t = 0xF00D, global = true)]
    pub seed: u64,

    /// Worker threads (default: all cores); output does not depend on it
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run predicates on a table file
    Check {
        path: PathBuf,
        #[arg(long)]
        quasigroup: bool,
        #[arg(long = "loop")]
        is_loop: bool,
        #[arg(long)]
        moufang: bool,
        #[arg(long)]
        f: bool,
        #[arg(long)]
        nk: bool,
        #[arg(long)]
        a_loop: bool,
        #[arg(long)]
        lemmas: bool,
    },
    /// Report nucleus, Moufang center, center, M(Q), quotients and endomorphism counts
    Analyze { path: PathBuf },
    /// Pointed F-quasigroup to pointed module
    Rho {
        path: PathBuf,
        /// Overrides the point stored in the file
        #[arg(long)]
        point: Option<usize>,
        /// Index into the recovered forms (default: the first)
        #[arg(long)]
        form: Option<usize>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Pointed module to pointed F-quasigroup
    Sigma {
        path: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check both round trips on files or directories of `.tbl` / `.mod` files
    Roundtrip {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Also round-trip through every recovered form, not only the first
        #[arg(long)]
        all_forms: bool,
    },
    /// Exhaustive search over Latin squares of a given order
    Search {
        order: usize,
        #[arg(long, value_enum, default_value = "f")]
        kind: SearchKind,
        /// Include the tables in the output
        #[arg(long)]
        tables: bool,
    },
    /// Write the corpus of table files into a directory
    Corpus { dir: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchKind {
    F,
    Loops,
    All,
}

/// Result of one invocation: exit code and the JSON document to print.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub output: Value,
}

impl Outcome {
    fn verdict(pass: bool, output: Value) -> Self {
        Outcome {
            code: if pass { 0 } else { 1 },
            output,
        }
    }

    fn error(e: &Error) -> Self {
        Outcome {
            code: 2,
            output: json!({"error": e.kind(), "message": e.to_string()}),
        }
    }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            emit(&e.to_string());
            return 0;
        }
        Err(e) => {
            let msg = e.to_string();
            emit(&format!("{}\n", json!({"error": "Usage", "message": msg.trim()})));
            return 2;
        }
    };
    let outcome = execute(&cli);
    let text = serde_json::to_string_pretty(&outcome.output).expect("JSON values serialize");
    emit(&format!("{text}\n"));
    outcome.code
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

pub fn execute(cli: &Cli) -> Outcome {
    let work = || match dispatch(cli) {
        Ok(o) => o,
        Err(e) => Outcome::error(&e),
    };
    match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(e) => Outcome::error(&Error::Io(e.to_string())),
        },
        None => work(),
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Check {
            path,
            quasigroup,
            is_loop,
            moufang,
            f,
            nk,
            a_loop,
            lemmas,
        } => {
            let flags = CheckFlags {
                quasigroup: *quasigroup,
                is_loop: *is_loop,
                moufang: *moufang,
                f: *f,
                nk: *nk,
                a_loop: *a_loop,
                lemmas: *lemmas,
            };
            cmd_check(path, flags, cli.seed, cli.tier)
        }
        Command::Analyze { path } => cmd_analyze(path),
        Command::Rho {
            path,
            point,
            form,
            out,
        } => cmd_rho(path, *point, *form, out.as_deref()),
        Command::Sigma { path, out } => cmd_sigma(path, out.as_deref()),
        Command::Roundtrip { paths, all_forms } => cmd_roundtrip(paths, *all_forms),
        Command::Search {
            order,
            kind,
            tables,
        } => cmd_search(*order, *kind, *tables, cli.tier),
        Command::Corpus { dir } => cmd_corpus(dir),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn is_module_text(text: &str) -> bool {
    text.lines().any(|l| l.trim_start().starts_with("phi:"))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckFlags {
    pub quasigroup: bool,
    pub is_loop: bool,
    pub moufang: bool,
    pub f: bool,
    pub nk: bool,
    pub a_loop: bool,
    pub lemmas: bool,
}

fn as_loop(q: &QuasigroupTable) -> std::result::Result<LoopTable, Value> {
    LoopTable::new(q.clone()).map_err(|e| json!({"error": e.kind()}))
}

/// Largest order whose lemma suite runs in the fast tier.
pub const FAST_LEMMA_ORDER: usize = 12;

fn cmd_check(path: &Path, flags: CheckFlags, seed: u64, tier: Tier) -> Result<Outcome> {
    let file = TableFile::parse(&read(path)?)?;
    let q = &file.table;
    if flags.lemmas && tier == Tier::Fast && q.order() > FAST_LEMMA_ORDER {
        return Err(Error::SearchTooLarge { cap: FAST_LEMMA_ORDER });
    }
    let mut report = FactReport::default();
    let none_requested = !(flags.is_loop
        || flags.moufang
        || flags.f
        || flags.nk
        || flags.a_loop
        || flags.lemmas);
    if flags.quasigroup || none_requested {
        report.push("quasigroup", true, None);
    }
    if flags.f {
        match check_f_laws(q) {
            Ok(()) => report.push("f_quasigroup", true, None),
            Err(v) => report.push("f_quasigroup", false, Some(json!(v))),
        }
    }
    let needs_loop = flags.is_loop || flags.moufang || flags.nk || flags.a_loop || flags.lemmas;
    let mut lemma_report = None;
    if needs_loop {
        match as_loop(q) {
            Err(w) => {
                for (on, name) in [
                    (flags.is_loop, "loop"),
                    (flags.moufang, "moufang"),
                    (flags.nk, "nk_loop"),
                    (flags.a_loop, "a_loop"),
                    (flags.lemmas, "lemmas"),
                ] {
                    if on {
                        report.push(name, false, Some(w.clone()));
                    }
                }
            }
            Ok(l) => {
                if flags.is_loop {
                    report.push("loop", true, Some(json!({"zero": l.zero()})));
                }
                if flags.moufang {
                    let v = l.moufang_violation();
                    report.push("moufang", v.is_none(), v.map(|t| json!([t.0, t.1, t.2])));
                }
                if flags.nk {
                    report.push("nk_loop", structure::is_nk_loop(&l), None);
                }
                if flags.a_loop {
                    match structure::is_a_loop_with_cap(&l, DEFAULT_GROUP_CAP) {
                        Ok(pass) => report.push("a_loop", pass, None),
                        Err(e) => report.push("a_loop", false, Some(json!(e.to_string()))),
                    }
                }
                if flags.lemmas {
                    let opts = LemmaOptions {
                        universe: lemma_universe(&l),
                        seed,
                        ..Default::default()
                    };
                    match check_lemma_suite(&l, &opts) {
                        Ok(r) => {
                            report.push("lemmas", r.all_pass(), None);
                            lemma_report = Some(r);
                        }
                        Err(e) => report.push("lemmas", false, Some(json!(e.to_string()))),
                    }
                }
            }
        }
    }
    let pass = report.all_pass();
    let mut out = json!({
        "file": path.display().to_string(),
        "order": q.order(),
        "pass": pass,
        "checks": report.rows,
    });
    if let Some(r) = lemma_report {
        out["lemmas"] = json!(r);
    }
    Ok(Outcome::verdict(pass, out))
}

/// Every endomorphism for small loops; only the quasicentral ones for
/// larger loops where that restriction loses nothing.
pub fn lemma_universe(l: &LoopTable) -> Universe {
    if l.order() > 32 && l.nucleus() == l.center() && l.moufang_center().len() == l.order() {
        Universe::Quasicentral
    } else {
        Universe::All
    }
}

fn cmd_analyze(path: &Path) -> Result<Outcome> {
    let file = TableFile::parse(&read(path)?)?;
    let q = &file.table;
    let m = structure::m_set(q);
    let m_quotient = structure::quotient_by_subset(q, &m.members).map(|qt| {
        json!({"order": qt.table.order(), "associative": qt.table.is_associative()})
    });
    let mut out = json!({
        "file": path.display().to_string(),
        "order": q.order(),
        "commutative": q.is_commutative(),
        "associative": q.is_associative(),
        "f_quasigroup": check_f_laws(q).is_ok(),
        "m_set": m.members,
        "m_quotient": match m_quotient {
            Ok(v) => v,
            Err(e) => json!({"error": e.kind()}),
        },
    });
    if let Ok(l) = LoopTable::new(q.clone()) {
        let subset = |s: structure::SubsetWitness| {
            let quotient = structure::quotient(&l, &s).map(|qt| qt.table.order()).ok();
            json!({"size": s.len(), "members": s.members, "quotient_order": quotient})
        };
        let endos = match enumerate_endomorphisms(&l) {
            Ok(v) => json!(v.len()),
            Err(e) => json!({"error": e.kind()}),
        };
        let auts = match enumerate_automorphisms(&l) {
            Ok(v) => json!(v.len()),
            Err(e) => json!({"error": e.kind()}),
        };
        out["loop"] = json!({
            "zero": l.zero(),
            "exponent": l.exponent(),
            "moufang": l.is_moufang(),
            "nk_loop": structure::is_nk_loop(&l),
            "nucleus": subset(structure::nucleus(&l)),
            "moufang_center": subset(structure::moufang_center(&l)),
            "center": subset(structure::center(&l)),
            "endomorphisms": endos,
            "automorphisms": auts,
        });
    }
    Ok(Outcome::verdict(true, out))
}

fn write_or_inline(out: Option<&Path>, text: String) -> Result<Value> {
    match out {
        Some(p) => {
            std::fs::write(p, &text)?;
            Ok(json!(p.display().to_string()))
        }
        None => Ok(json!(text)),
    }
}

fn cmd_rho(
    path: &Path,
    point: Option<usize>,
    form_index: Option<usize>,
    out: Option<&Path>,
) -> Result<Outcome> {
    let mut p = PointedFQ::parse(&read(path)?)?;
    if let Some(a) = point {
        p = PointedFQ::new(p.q, a)?;
    }
    let forms = recover_form(&p)?;
    let k = form_index.unwrap_or(0);
    let chosen = forms.get(k).ok_or(Error::NoneFound { point: p.point })?;
    let pm = rho(&p, Some(&chosen.form))?;
    let conditions = json!({
        "form": chosen.form.verify().rows,
        "module_axioms": pm.module.verify_module_axioms().rows,
        "class_m": pm.module.verify_class_m().rows,
        "nuclearly_pointed": pm.is_nuclearly_pointed(),
        "centrally_pointed": pm.is_centrally_pointed(),
    });
    let verified = chosen.form.is_valid()
        && pm.module.verify_module_axioms().all_pass()
        && pm.module.is_in_class_m()
        && pm.is_nuclearly_pointed();
    let module = write_or_inline(out, pm.serialize())?;
    Ok(Outcome::verdict(
        verified,
        json!({
            "form": chosen.to_json(),
            "forms_recovered": forms.len(),
            "verified": verified,
            "conditions": conditions,
            "module": module,
        }),
    ))
}

fn cmd_sigma(path: &Path, out: Option<&Path>) -> Result<Outcome> {
    let pm = PointedGenModule::parse(&read(path)?)?;
    let p = sigma(&pm)?;
    let f_ok = check_f_laws(&p.q).is_ok();
    let table = write_or_inline(out, p.serialize())?;
    Ok(Outcome::verdict(
        f_ok,
        json!({"f_quasigroup": f_ok, "point": p.point, "table": table}),
    ))
}

fn collect_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|e| {
                    e.extension()
                        .is_some_and(|x| x == "tbl" || x == "mod")
                })
                .collect();
            entries.sort();
            out.extend(entries);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn roundtrip_table(file: &TableFile, all_forms: bool) -> Value {
    if let Err(v) = check_f_laws(&file.table) {
        return json!({"skipped": "not an F-quasigroup", "witness": v});
    }
    let points: Vec<usize> = match file.point {
        Some(a) => vec![a],
        None => (0..file.table.order()).collect(),
    };
    let mut cases = Vec::new();
    for a in points {
        let p = PointedFQ::new_unchecked(file.table.clone(), a);
        let fq = roundtrip_fq(&p);
        let module = rho(&p, None).map(|pm| roundtrip_module(&pm));
        let mut case = json!({
            "point": a,
            "fq": fq,
            "module": match module {
                Ok(r) => json!(r),
                Err(e) => json!({"pass": false, "witness": {"error": e.kind()}}),
            },
            "fm_mc": check_fm_mc(&p).all_pass(),
        });
        if all_forms {
            let per_form: Vec<Value> = match recover_form(&p) {
                Ok(forms) => forms
                    .iter()
                    .map(|r| json!({"u": r.u, "v": r.v, "fq": roundtrip_fq_with(&p, &r.form)}))
                    .collect(),
                Err(e) => vec![json!({"error": e.kind()})],
            };
            case["forms"] = json!(per_form);
        }
        cases.push(case);
    }
    json!({"cases": cases})
}

fn case_passes(v: &Value) -> bool {
    if v.get("skipped").is_some() {
        return true;
    }
    if let Some(cases) = v.get("cases").and_then(Value::as_array) {
        return cases.iter().all(|c| {
            c["fq"]["pass"] == json!(true)
                && c["module"]["pass"] == json!(true)
                && c["fm_mc"] == json!(true)
                && c.get("forms").and_then(Value::as_array).is_none_or(|fs| {
                    fs.iter().all(|f| f["fq"]["pass"] == json!(true))
                })
        });
    }
    v.get("pass") == Some(&json!(true))
}

fn cmd_roundtrip(paths: &[PathBuf], all_forms: bool) -> Result<Outcome> {
    let files = collect_files(paths)?;
    let mut results = Vec::new();
    let (mut passed, mut failed, mut skipped) = (0usize, 0usize, 0usize);
    for path in files {
        let text = read(&path)?;
        let result = if is_module_text(&text) {
            match PointedGenModule::parse(&text) {
                Ok(pm) => json!(roundtrip_module(&pm)),
                Err(e) => json!({"pass": false, "witness": {"error": e.kind(), "message": e.to_string()}}),
            }
        } else {
            match TableFile::parse(&text) {
                Ok(file) => roundtrip_table(&file, all_forms),
                Err(e) => json!({"pass": false, "witness": {"error": e.kind(), "message": e.to_string()}}),
            }
        };
        if result.get("skipped").is_some() {
            skipped += 1;
        } else if case_passes(&result) {
            passed += 1;
        } else {
            failed += 1;
        }
        results.push(json!({"file": path.display().to_string(), "result": result}));
    }
    Ok(Outcome::verdict(
        failed == 0,
        json!({
            "summary": {"passed": passed, "failed": failed, "skipped": skipped, "all_pass": failed == 0},
            "files": results,
        }),
    ))
}

fn cmd_search(order: usize, kind: SearchKind, tables: bool, tier: Tier) -> Result<Outcome> {
    let limit = if tier == Tier::Slow { 5 } else { 4 };
    if order > limit {
        return Err(Error::SearchTooLarge { cap: limit });
    }
    let found: Vec<QuasigroupTable> = match kind {
        SearchKind::F => corpus::search_f_quasigroups(order),
        SearchKind::Loops => corpus::search_loops(order)
            .into_iter()
            .map(|l| l.base().clone())
            .collect(),
        SearchKind::All => corpus::latin_squares_where(order, |_| true),
    };
    let mut out = json!({"order": order, "kind": format!("{kind:?}").to_lowercase(), "count": found.len()});
    if tables {
        out["tables"] = json!(found.iter().map(|q| q.rows()).collect::<Vec<_>>());
    }
    Ok(Outcome::verdict(true, out))
}

fn cmd_corpus(dir: &Path) -> Result<Outcome> {
    let paths = corpus::write_corpus(dir, true)?;
    let names: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
    Ok(Outcome::verdict(true, json!({"written": names})))
}
