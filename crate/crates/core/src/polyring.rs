//! Sparse integer polynomials in the commuting indeterminates `x, y, u, v`
//! with zero constant term, i.e. elements of the ideal they generate, and
//! their evaluation as endomorphisms of a loop.
//!
//! The coefficient type is generic; [`crate::Poly`] uses arbitrary-precision
//! integers and [`crate::Poly64`] uses `i64` with checked arithmetic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, Signed, ToPrimitive};

use crate::cayley::LoopTable;
use crate::endo::{endo_compose, Endo, EndoContext};
use crate::error::{Error, Result};

/// Maximum total degree of any stored monomial.
pub const MAX_DEGREE: u32 = 12;

pub const VARIABLES: [char; 4] = ['x', 'y', 'u', 'v'];

/// Integer-like coefficient ring.
pub trait Coefficient:
    Clone
    + fmt::Debug
    + fmt::Display
    + Ord
    + Signed
    + Integer
    + CheckedAdd
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
{
}

impl<T> Coefficient for T where
    T: Clone
        + fmt::Debug
        + fmt::Display
        + Ord
        + Signed
        + Integer
        + CheckedAdd
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
{
}

/// Exponents of `(x, y, u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u8; 4]);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn generator(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Monomial(e)
    }

    fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let m = Monomial(std::array::from_fn(|i| self.0[i] + other.0[i]));
        if m.degree() > MAX_DEGREE {
            return Err(Error::DegreeOverflow { cap: MAX_DEGREE });
        }
        Ok(m)
    }
}

/// Graded lexicographic: higher total degree first, then larger exponent of
/// `x`, then `y`, `u`, `v`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (var, &e) in VARIABLES.iter().zip(&self.0) {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{var}")?;
            } else {
                write!(f, "{var}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Canonical sparse polynomial: no zero coefficients, no constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Default for Polynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `coeff * monomial`; rejects constants.
    pub fn term(coeff: C, monomial: Monomial) -> Result<Self> {
        if monomial.degree() == 0 {
            return Err(Error::PolyParse {
                pos: 0,
                message: "constant terms are not allowed".into(),
            });
        }
        if monomial.degree() > MAX_DEGREE {
            return Err(Error::DegreeOverflow { cap: MAX_DEGREE });
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(monomial, coeff);
        }
        Ok(Polynomial { terms })
    }

    pub fn generator(i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::generator(i), C::one());
        Polynomial { terms }
    }

    pub fn generators() -> [Self; 4] {
        std::array::from_fn(Self::generator)
    }

    pub fn x() -> Self {
        Self::generator(0)
    }

    pub fn y() -> Self {
        Self::generator(1)
    }

    pub fn u() -> Self {
        Self::generator(2)
    }

    pub fn v() -> Self {
        Self::generator(3)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    fn accumulate(terms: &mut BTreeMap<Monomial, C>, m: Monomial, c: C) -> Result<()> {
        let sum = match terms.get(&m) {
            Some(old) => old.checked_add(&c).ok_or(Error::CoefficientOverflow)?,
            None => c,
        };
        if sum.is_zero() {
            terms.remove(&m);
        } else {
            terms.insert(m, sum);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::accumulate(&mut terms, *m, c.clone())?;
        }
        Ok(Polynomial { terms })
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca.checked_mul(cb).ok_or(Error::CoefficientOverflow)?;
                Self::accumulate(&mut terms, ma.mul(mb)?, c)?;
            }
        }
        Ok(Polynomial { terms })
    }

    pub fn scale(&self, k: &C) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let p = c.checked_mul(k).ok_or(Error::CoefficientOverflow)?;
            if !p.is_zero() {
                terms.insert(*m, p);
            }
        }
        Ok(Polynomial { terms })
    }

    /// Parses e.g. `2*x^2*u - y*v + 3*x`. Whitespace is ignored; a nonzero
    /// constant term is rejected; `0` is the zero polynomial.
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).parse()
    }
}

impl<C: Coefficient> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            text,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.pos).map(|&(_, c)| c)
    }

    fn byte_pos(&self) -> usize {
        self.src.get(self.pos).map_or(self.text.len(), |&(b, _)| b)
    }

    fn err<T>(&self, message: &str) -> Result<T> {
        Err(Error::PolyParse {
            pos: self.byte_pos(),
            message: message.to_string(),
        })
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.src[start..self.pos].iter().map(|&(_, c)| c).collect())
    }

    fn parse<C: Coefficient>(mut self) -> Result<Polynomial<C>> {
        if self.src.is_empty() {
            return self.err("empty polynomial");
        }
        let mut terms = BTreeMap::new();
        let mut first = true;
        while self.peek().is_some() {
            let negative = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    false
                }
                Some('-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => return self.err("expected '+' or '-'"),
            };
            first = false;
            let term_start = self.byte_pos();
            let coeff = match self.digits() {
                Some(d) => {
                    let c = C::from_str_radix(&d, 10).or_else(|_| self.err("bad coefficient"))?;
                    if self.peek() == Some('*') {
                        self.pos += 1;
                        Some(c)
                    } else if matches!(self.peek(), None | Some('+') | Some('-')) {
                        if c.is_zero() {
                            continue;
                        }
                        return Err(Error::PolyParse {
                            pos: term_start,
                            message: "constant terms are not allowed".into(),
                        });
                    } else {
                        return self.err("expected '*' after coefficient");
                    }
                }
                None => None,
            };
            let mut exps = [0u32; 4];
            loop {
                let Some(var) = self.peek() else {
                    return self.err("expected variable");
                };
                let Some(i) = VARIABLES.iter().position(|&v| v == var) else {
                    return self.err("unknown variable");
                };
                self.pos += 1;
                let mut e = 1u32;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    e = match self.digits() {
                        Some(d) => d.parse().or_else(|_| self.err("bad exponent"))?,
                        None => return self.err("expected exponent"),
                    };
                }
                exps[i] = exps[i].saturating_add(e);
                if self.peek() == Some('*') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            let degree: u32 = exps.iter().sum();
            if degree == 0 {
                return Err(Error::PolyParse {
                    pos: term_start,
                    message: "constant terms are not allowed".into(),
                });
            }
            if degree > MAX_DEGREE {
                return Err(Error::DegreeOverflow { cap: MAX_DEGREE });
            }
            let m = Monomial(exps.map(|e| e as u8));
            let mut c = coeff.unwrap_or_else(C::one);
            if negative {
                c = -c;
            }
            Polynomial::accumulate(&mut terms, m, c)?;
        }
        Ok(Polynomial { terms })
    }
}

/// Images of the generators `x, y, u, v` as endomorphisms of one loop.
pub type Images = [Endo; 4];

fn coefficient_residue<C: Coefficient>(c: &C, exponent: usize) -> i64 {
    let e = C::from_usize(exponent).expect("exponent fits the coefficient type");
    c.mod_floor(&e).to_i64().expect("residue below exponent")
}

/// Evaluation `p -> λ(p)` for fixed generator images on a fixed loop.
pub struct Evaluator<'a> {
    ctx: &'a EndoContext,
    images: &'a Images,
}

impl<'a> Evaluator<'a> {
    pub fn new(ctx: &'a EndoContext, images: &'a Images) -> Self {
        Evaluator { ctx, images }
    }

    fn monomial_at(&self, m: &Monomial, mut x: usize) -> usize {
        for (img, &e) in self.images.iter().zip(&m.0).rev() {
            for _ in 0..e {
                x = img.apply(x);
            }
        }
        x
    }

    /// `λ(p)(x)`: terms summed in graded-lex order, each coefficient acting as
    /// a power reduced modulo the loop exponent.
    pub fn at<C: Coefficient>(&self, p: &Polynomial<C>, x: usize) -> usize {
        self.at_in_order(p.terms(), x)
    }

    fn at_in_order<'p, C: Coefficient + 'p>(
        &self,
        terms: impl Iterator<Item = (&'p Monomial, &'p C)>,
        x: usize,
    ) -> usize {
        let l = self.ctx.loop_table();
        let mut acc = l.zero();
        for (m, c) in terms {
            let k = coefficient_residue(c, self.ctx.exponent());
            acc = l.add(acc, self.ctx.power(self.monomial_at(m, x), k));
        }
        acc
    }

    pub fn endo<C: Coefficient>(&self, p: &Polynomial<C>) -> Endo {
        let l = self.ctx.loop_table();
        Endo::new(l.elements().map(|x| self.at(p, x)).collect())
    }

    /// Same as [`Self::endo`] but summing the terms in reverse order.
    pub fn endo_reversed<C: Coefficient>(&self, p: &Polynomial<C>) -> Endo {
        let l = self.ctx.loop_table();
        let terms: Vec<_> = p.terms().collect();
        Endo::new(
            l.elements()
                .map(|x| self.at_in_order(terms.iter().rev().copied(), x))
                .collect(),
        )
    }
}

const NAMES: [&str; 4] = ["phi", "psi", "mu", "nu"];

/// Checks the images are pairwise commuting special endomorphisms.
pub fn check_images(ctx: &EndoContext, images: &Images) -> Result<()> {
    let l = ctx.loop_table();
    for (img, name) in images.iter().zip(NAMES) {
        if img.len() != l.order() {
            return Err(Error::CarrierMismatch {
                left: l.order(),
                right: img.len(),
            });
        }
        if !crate::endo::is_endomorphism(l, img) || !ctx.is_special(img)? {
            return Err(Error::ImagesNotSpecial(name));
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if endo_compose(&images[i], &images[j])? != endo_compose(&images[j], &images[i])? {
                return Err(Error::ImagesNotCommuting {
                    first: NAMES[i],
                    second: NAMES[j],
                });
            }
        }
    }
    Ok(())
}

/// `λ(p)` after verifying the images.
pub fn evaluate<C: Coefficient>(p: &Polynomial<C>, images: &Images, l: &LoopTable) -> Result<Endo> {
    let ctx = EndoContext::new(l);
    check_images(&ctx, images)?;
    Ok(Evaluator::new(&ctx, images).endo(p))
}
