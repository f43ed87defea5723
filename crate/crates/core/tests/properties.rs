use proptest::prelude::*;

use fquasi::cayley::{QuasigroupTable, TableFile};
use fquasi::corpus::cyclic;
use fquasi::endo::{endo_compose, Endo, EndoContext};
use fquasi::equivalence::{recover_form, roundtrip_fq, roundtrip_module, rho, ArithmeticForm, PointedFQ};
use fquasi::polyring::{Evaluator, Monomial};
use fquasi::{build_fq, Poly, Poly64};

/// Isotopes of cyclic groups: `p((r[x] + c[y]) mod n)` for permutations `p, r, c`.
fn latin_square() -> impl Strategy<Value = QuasigroupTable> {
    (1usize..=7).prop_flat_map(|n| {
        let perm = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
        (Just(n), perm.clone(), perm.clone(), perm)
    })
    .prop_map(|(n, p, r, c)| {
        QuasigroupTable::from_fn(n, |x, y| p[(r[x] + c[y]) % n]).unwrap()
    })
}

fn monomial() -> impl Strategy<Value = Monomial> {
    // total degree <= 4, so triple products stay under the degree cap
    prop::array::uniform4(0u8..2)
        .prop_filter("constant", |e| e.iter().any(|&d| d > 0))
        .prop_map(Monomial)
}

fn poly64() -> impl Strategy<Value = Poly64> {
    prop::collection::vec((monomial(), -20i64..=20), 0..6).prop_map(|terms| {
        terms.into_iter().fold(Poly64::zero(), |acc, (m, c)| {
            if c == 0 {
                acc
            } else {
                acc.add(&Poly64::term(c, m).unwrap()).unwrap()
            }
        })
    })
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((monomial(), -1000i64..=1000), 0..6).prop_map(|terms| {
        terms.into_iter().fold(Poly::zero(), |acc, (m, c)| {
            if c == 0 {
                acc
            } else {
                acc.add(&Poly::term(c.into(), m).unwrap()).unwrap()
            }
        })
    })
}

/// A unit of `Z_n` chosen from a seed.
fn unit(n: usize, seed: usize) -> usize {
    let units: Vec<usize> = (1..n.max(2)).filter(|&k| gcd(k, n) == 1).collect();
    if n == 1 {
        return 0;
    }
    units[seed % units.len()]
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn scale(n: usize, k: usize) -> Endo {
    Endo::new((0..n).map(|x| k * x % n).collect())
}

proptest! {
    #[test]
    fn table_text_round_trip(q in latin_square(), point in 0usize..7) {
        let point = point % q.order();
        let file = TableFile::pointed(q.clone(), point);
        let back = TableFile::parse(&file.serialize()).unwrap();
        prop_assert_eq!(back.table, q);
        prop_assert_eq!(back.point, Some(point));
    }

    #[test]
    fn relabel_preserves_f_property(q in latin_square()) {
        let n = q.order();
        let perm: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let r = q.relabel(&perm).unwrap();
        prop_assert_eq!(fquasi::is_f_quasigroup(&q), fquasi::is_f_quasigroup(&r));
    }

    #[test]
    fn polynomial_text_round_trip(p in poly64(), b in poly()) {
        prop_assert_eq!(Poly64::parse(&p.to_string()).unwrap(), p);
        prop_assert_eq!(Poly::parse(&b.to_string()).unwrap(), b);
    }

    #[test]
    fn polynomial_ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn degree_cap_is_an_error(d in 7u8..=12) {
        let m = Poly::term(1.into(), Monomial([d, 0, 0, 0])).unwrap();
        let overflow = matches!(m.mul(&m), Err(fquasi::Error::DegreeOverflow { .. }));
        prop_assert!(overflow);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        n in 1usize..=12,
        ks in prop::array::uniform4(0usize..12),
        a in poly(),
        b in poly(),
    ) {
        let l = cyclic(n);
        let ctx = EndoContext::new(&l);
        let images = ks.map(|k| scale(n, k % n));
        let ev = Evaluator::new(&ctx, &images);
        let (ea, eb) = (ev.endo(&a), ev.endo(&b));
        let sum = ev.endo(&a.add(&b).unwrap());
        for x in 0..n {
            prop_assert_eq!(sum.apply(x), l.add(ea.apply(x), eb.apply(x)));
        }
        prop_assert_eq!(ev.endo(&a.mul(&b).unwrap()), endo_compose(&ea, &eb).unwrap());
        prop_assert_eq!(ev.endo_reversed(&a), ea);
    }

    #[test]
    fn linear_forms_round_trip(n in 1usize..=12, s in 0usize..8, t in 0usize..8, e in 0usize..12) {
        let (a, b, e) = (unit(n, s), unit(n, t), e % n);
        let form = ArithmeticForm::new(cyclic(n), scale(n, a), scale(n, b), e);
        let q = build_fq(&form).unwrap();
        for point in 0..n {
            let p = PointedFQ::new(q.clone(), point).unwrap();
            prop_assert!(roundtrip_fq(&p).pass);
            prop_assert!(roundtrip_module(&rho(&p, None).unwrap()).pass);
            for r in recover_form(&p).unwrap() {
                prop_assert_eq!(build_fq(&r.form).unwrap(), q.clone());
            }
        }
    }
}
