//! Generalized modules over the ring generated by `x, y, u, v`: an NK-loop
//! together with the actions `phi, psi, mu, nu` of the four generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::cayley::{parse_indices, serialize_table, LoopTable, TableFile};
use crate::endo::{is_endomorphism, Endo, EndoContext};
use crate::error::{Error, Result};
use crate::polyring::{check_images, Evaluator, Images, Monomial};
use crate::structure::{self, FactReport};
use crate::Poly;

/// Seed for the sampled polynomial pairs used by [`GenModule::verify_module_axioms`].
pub const DEFAULT_AXIOM_SEED: u64 = 0xF00D;

const NAMES: [&str; 4] = ["phi", "psi", "mu", "nu"];

#[derive(Clone)]
pub struct GenModule {
    ctx: EndoContext,
    images: Images,
}

impl std::fmt::Debug for GenModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GenModule")
            .field("order", &self.ctx.loop_table().order())
            .field("zero", &self.ctx.loop_table().zero())
            .field("images", &self.images)
            .finish()
    }
}

impl PartialEq for GenModule {
    fn eq(&self, other: &Self) -> bool {
        self.loop_table() == other.loop_table() && self.images == other.images
    }
}

impl GenModule {
    /// Validates that the loop is NK and the images are pairwise commuting
    /// special endomorphisms.
    pub fn new(l: LoopTable, images: Images) -> Result<Self> {
        let ctx = EndoContext::new(&l);
        if !ctx.is_nk() {
            return Err(Error::NotNkLoop);
        }
        check_images(&ctx, &images)?;
        Ok(GenModule { ctx, images })
    }

    /// No validation; for inspecting structures that may violate the axioms.
    pub fn new_unchecked(l: LoopTable, images: Images) -> Self {
        GenModule {
            ctx: EndoContext::new(&l),
            images,
        }
    }

    /// The module with every generator acting as zero.
    pub fn trivial(l: LoopTable) -> Result<Self> {
        let z = Endo::zero(&l);
        Self::new(l, [z.clone(), z.clone(), z.clone(), z])
    }

    pub fn loop_table(&self) -> &LoopTable {
        self.ctx.loop_table()
    }

    pub fn images(&self) -> &Images {
        &self.images
    }

    pub fn phi(&self) -> &Endo {
        &self.images[0]
    }

    pub fn psi(&self) -> &Endo {
        &self.images[1]
    }

    pub fn mu(&self) -> &Endo {
        &self.images[2]
    }

    pub fn nu(&self) -> &Endo {
        &self.images[3]
    }

    pub fn context(&self) -> &EndoContext {
        &self.ctx
    }

    fn evaluator(&self) -> Evaluator<'_> {
        Evaluator::new(&self.ctx, &self.images)
    }

    /// `p·x`.
    pub fn scalar_mul(&self, p: &Poly, x: usize) -> usize {
        self.evaluator().at(p, x)
    }

    /// The map `x -> p·x`.
    pub fn action(&self, p: &Poly) -> Endo {
        self.evaluator().endo(p)
    }

    pub fn annihilator_contains(&self, p: &Poly) -> bool {
        let l = self.loop_table();
        l.elements().all(|x| self.scalar_mul(p, x) == l.zero())
    }

    /// Residues `m` with `m w + f(w)` central for every `w` in the Moufang center.
    pub fn axiom6_witnesses(&self, f: &Endo) -> Vec<usize> {
        let l = self.loop_table();
        let k = l.moufang_center();
        (0..self.ctx.exponent())
            .filter(|&m| {
                k.iter()
                    .all(|&w| l.in_center(l.add(self.ctx.power(w, m as i64), f.apply(w))))
            })
            .collect()
    }

    /// Ring elements used to check the axioms: the generators, their pairwise
    /// products, and seeded random polynomials of degree at most 2.
    pub fn axiom_samples(seed: u64) -> Vec<Poly> {
        let gens = Poly::generators();
        let mut out: Vec<Poly> = gens.to_vec();
        for a in &gens {
            for b in &gens {
                out.push(a.mul(b).expect("degree 2"));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..16 {
            out.push(random_poly(&mut rng));
        }
        out
    }

    pub fn verify_module_axioms(&self) -> FactReport {
        self.verify_module_axioms_with_seed(DEFAULT_AXIOM_SEED)
    }

    pub fn verify_module_axioms_with_seed(&self, seed: u64) -> FactReport {
        let l = self.loop_table();
        let samples = Self::axiom_samples(seed);
        let actions: Vec<Endo> = samples.iter().map(|p| self.action(p)).collect();
        let mut report = FactReport::default();

        report.push("nk_loop", self.ctx.is_nk(), None);

        let bad = samples
            .iter()
            .zip(&actions)
            .find(|(_, a)| !is_endomorphism(l, a));
        report.push(
            "axiom1_distributes_over_loop",
            bad.is_none(),
            bad.map(|(p, _)| json!({"poly": p.to_string()})),
        );

        let mut ax2 = None;
        let mut ax3 = None;
        'pairs: for (i, p) in samples.iter().enumerate() {
            for (j, q) in samples.iter().enumerate() {
                let sum = self.action(&p.add(q).expect("small coefficients"));
                let prod = self.action(&p.mul(q).expect("small degree"));
                for x in l.elements() {
                    let (px, qx) = (actions[i].apply(x), actions[j].apply(x));
                    if ax2.is_none() && sum.apply(x) != l.add(px, qx) {
                        ax2 = Some(json!({"a": p.to_string(), "b": q.to_string(), "x": x}));
                    }
                    if ax3.is_none() && actions[i].apply(qx) != prod.apply(x) {
                        ax3 = Some(json!({"a": p.to_string(), "b": q.to_string(), "x": x}));
                    }
                }
                if ax2.is_some() && ax3.is_some() {
                    break 'pairs;
                }
            }
        }
        report.push("axiom2_ring_addition", ax2.is_none(), ax2);
        report.push("axiom3_ring_multiplication", ax3.is_none(), ax3);

        let ax4 = samples.iter().zip(&actions).find_map(|(p, a)| {
            l.elements()
                .find(|&x| !l.in_moufang_center(a.apply(x)))
                .map(|x| json!({"poly": p.to_string(), "x": x, "image": a.apply(x)}))
        });
        report.push("axiom4_image_in_moufang_center", ax4.is_none(), ax4);

        let ax5 = samples.iter().zip(&actions).find_map(|(p, a)| {
            l.nucleus()
                .into_iter()
                .find(|&z| !l.in_nucleus(a.apply(z)))
                .map(|z| json!({"poly": p.to_string(), "z": z, "image": a.apply(z)}))
        });
        report.push("axiom5_nucleus_preserved", ax5.is_none(), ax5);

        let ax6 = samples
            .iter()
            .zip(&actions)
            .find(|(_, a)| self.axiom6_witnesses(a).is_empty())
            .map(|(p, _)| json!({"poly": p.to_string()}));
        report.push("axiom6_quasicentral_on_moufang_center", ax6.is_none(), ax6);
        report
    }

    pub fn verify_class_m(&self) -> FactReport {
        let l = self.loop_table();
        let mut report = FactReport::default();
        for (name, img) in [("condition1_x", self.phi()), ("condition1_y", self.psi())] {
            let bad = l
                .elements()
                .find(|&z| !l.in_nucleus(l.add(l.add(z, z), img.apply(z))));
            report.push(name, bad.is_none(), bad.map(|z| json!({"z": z})));
        }
        for (name, rel) in [
            ("condition2_x_u_annihilates", relation_xu()),
            ("condition3_y_v_annihilates", relation_yv()),
        ] {
            let bad = l
                .elements()
                .find(|&z| self.scalar_mul(&rel, z) != l.zero());
            report.push(name, bad.is_none(), bad.map(|z| json!({"z": z})));
        }
        report
    }

    pub fn is_in_class_m(&self) -> bool {
        self.verify_class_m().all_pass()
    }
}

/// `x + u + x u`.
pub fn relation_xu() -> Poly {
    Poly::parse("x + u + x*u").expect("static polynomial")
}

/// `y + v + y v`.
pub fn relation_yv() -> Poly {
    Poly::parse("y + v + y*v").expect("static polynomial")
}

fn random_poly(rng: &mut ChaCha8Rng) -> Poly {
    let mut p = Poly::zero();
    let terms = rng.gen_range(1..=4);
    for _ in 0..terms {
        let mut e = [0u8; 4];
        e[rng.gen_range(0..4)] += 1;
        if rng.gen_bool(0.5) {
            e[rng.gen_range(0..4)] += 1;
        }
        let c: i64 = loop {
            let c = rng.gen_range(-9..=9);
            if c != 0 {
                break c;
            }
        };
        let t = Poly::term(c.into(), Monomial(e)).expect("degree between 1 and 2");
        p = p.add(&t).expect("small coefficients");
    }
    p
}

/// A module with a chosen element.
#[derive(Clone, Debug, PartialEq)]
pub struct PointedGenModule {
    pub module: GenModule,
    pub point: usize,
}

impl PointedGenModule {
    pub fn new(module: GenModule, point: usize) -> Result<Self> {
        if point >= module.loop_table().order() {
            return Err(Error::Malformed {
                line: 0,
                message: format!("point {point} out of range"),
            });
        }
        Ok(PointedGenModule { module, point })
    }

    pub fn is_nuclearly_pointed(&self) -> bool {
        self.module.loop_table().in_nucleus(self.point)
    }

    pub fn is_centrally_pointed(&self) -> bool {
        self.module.loop_table().in_center(self.point)
    }

    /// Loop table, then one `name: images` line per generator, then `point k`.
    pub fn serialize(&self) -> String {
        let mut out = serialize_module_body(&self.module);
        out.push_str(&format!("point {}\n", self.point));
        out
    }

    /// Parses a module file; the point defaults to the loop's zero.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table_lines = Vec::new();
        let mut images: [Option<Vec<usize>>; 4] = Default::default();
        let mut pending: Vec<(usize, usize, &str)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            match NAMES
                .iter()
                .position(|name| line.strip_prefix(name).is_some_and(|r| r.starts_with(':')))
            {
                Some(k) => pending.push((i + 1, k, &line[NAMES[k].len() + 1..])),
                None => table_lines.push(raw),
            }
        }
        let file = TableFile::parse(&table_lines.join("\n"))?;
        let n = file.table.order();
        for (ln, k, rest) in pending {
            if images[k].is_some() {
                return Err(Error::Malformed {
                    line: ln,
                    message: format!("duplicate {} line", NAMES[k]),
                });
            }
            images[k] = Some(parse_indices(ln, rest, n)?);
        }
        let [phi, psi, mu, nu] = images;
        let take = |o: Option<Vec<usize>>, name: &str| {
            o.map(Endo::new).ok_or(Error::Malformed {
                line: 0,
                message: format!("missing {name} line"),
            })
        };
        let images = [
            take(phi, "phi")?,
            take(psi, "psi")?,
            take(mu, "mu")?,
            take(nu, "nu")?,
        ];
        let l = LoopTable::new(file.table)?;
        let point = file.point.unwrap_or(l.zero());
        Self::new(GenModule::new(l, images)?, point)
    }
}

fn serialize_module_body(m: &GenModule) -> String {
    let mut out = serialize_table(m.loop_table().base());
    for (name, img) in NAMES.iter().zip(m.images()) {
        let vals: Vec<String> = img.as_slice().iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("{name}: {}\n", vals.join(" ")));
    }
    out
}

/// Free-standing forms of the module predicates.
pub fn scalar_mul(m: &GenModule, p: &Poly, x: usize) -> usize {
    m.scalar_mul(p, x)
}

pub fn verify_module_axioms(m: &GenModule) -> FactReport {
    m.verify_module_axioms()
}

pub fn verify_class_m(m: &GenModule) -> FactReport {
    m.verify_class_m()
}

pub fn annihilator_contains(m: &GenModule, p: &Poly) -> bool {
    m.annihilator_contains(p)
}

pub fn is_nuclearly_pointed(pm: &PointedGenModule) -> bool {
    pm.is_nuclearly_pointed()
}

pub fn is_centrally_pointed(pm: &PointedGenModule) -> bool {
    pm.is_centrally_pointed()
}

/// `true` when the loop is NK; re-exported for callers validating raw input.
pub fn is_nk(l: &LoopTable) -> bool {
    structure::is_nk_loop(l)
}
