//! Free graded-commutative algebra for the Künneth square of a correspondence.
//!
//! Elements live in `Λ[f_1*, ..., f_b*] ⊗ Λ[e_1, ..., e_b] ⊗ Q[Q]` with
//! `deg f* = 1`, `deg e = 3`, `deg Q = 4`. Indices are zero-based.

use alloc::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::linalg::{int, Rational};
use crate::{Error, Result};

/// Bit width of the generator masks.
pub const MAX_GENERATORS: usize = 32;

/// Sign rule used when multiplying monomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `(a ⊗ b)(c ⊗ d) = (-1)^{|b||c|} ac ⊗ bd`, odd generators anticommute.
    Koszul,
    /// As `Koszul` without the exchange sign `(-1)^{|b||c|}`.
    NoExchangeSign,
    /// As `Koszul` but the degree-3 generators commute with each other
    /// (their squares still vanish).
    CommutingOdd,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Koszul => "koszul",
            Convention::NoExchangeSign => "no-exchange-sign",
            Convention::CommutingOdd => "commuting-odd",
        }
    }
}

/// `f*_F ⊗ e_E Q^q` for bitmasks `F`, `E`, generators in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub f: u32,
    pub e: u32,
    pub q: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { f: 0, e: 0, q: 0 };

    pub fn f_degree(self) -> u32 {
        self.f.count_ones()
    }

    pub fn e_side_degree(self) -> u32 {
        3 * self.e.count_ones() + 4 * self.q
    }

    pub fn degree(self) -> u32 {
        self.f_degree() + self.e_side_degree()
    }
}

/// Sign of sorting the concatenation of two increasing index sets.
fn reorder_sign(a: u32, b: u32) -> bool {
    let mut swaps = 0u32;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += (b & ((1u32 << i) - 1)).count_ones();
    }
    swaps % 2 == 1
}

/// Product of two monomials as a sign and monomial, or zero.
pub fn monomial_mul(x: Monomial, y: Monomial, conv: Convention) -> Option<(bool, Monomial)> {
    if x.f & y.f != 0 || x.e & y.e != 0 {
        return None;
    }
    let mut negative = reorder_sign(x.f, y.f);
    if conv != Convention::CommutingOdd {
        negative ^= reorder_sign(x.e, y.e);
    }
    if conv != Convention::NoExchangeSign {
        negative ^= (x.e_side_degree() * y.f_degree()) % 2 == 1;
    }
    Some((
        negative,
        Monomial {
            f: x.f | y.f,
            e: x.e | y.e,
            q: x.q + y.q,
        },
    ))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedElement {
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut x = Self::zero();
        x.add_term(m, c);
        x
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::ONE, Rational::one())
    }

    pub fn f(i: usize) -> Self {
        Self::monomial(Monomial { f: 1 << i, e: 0, q: 0 }, Rational::one())
    }

    pub fn e(i: usize) -> Self {
        Self::monomial(Monomial { f: 0, e: 1 << i, q: 0 }, Rational::one())
    }

    pub fn q_power(p: u32) -> Self {
        Self::monomial(Monomial { f: 0, e: 0, q: p }, Rational::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Rational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c * s);
        }
        out
    }

    /// Homogeneous degree, `None` for zero or mixed elements.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

pub fn graded_mul(x: &GradedElement, y: &GradedElement, conv: Convention) -> GradedElement {
    let mut out = GradedElement::zero();
    for (a, ca) in &x.terms {
        for (b, cb) in &y.terms {
            if let Some((negative, m)) = monomial_mul(*a, *b, conv) {
                let c = ca * cb;
                out.add_term(m, if negative { -c } else { c });
            }
        }
    }
    out
}

fn check_size(b3: usize) -> Result<()> {
    if b3 > MAX_GENERATORS {
        return Err(Error::CapExceeded {
            requested: b3,
            cap: MAX_GENERATORS,
        });
    }
    Ok(())
}

/// `Z = Σ f_i* ⊗ e_i`.
pub fn correspondence_class(b3: usize) -> Result<GradedElement> {
    check_size(b3)?;
    Ok((0..b3).fold(GradedElement::zero(), |acc, i| {
        acc.add(&graded_mul(
            &GradedElement::f(i),
            &GradedElement::e(i),
            Convention::Koszul,
        ))
    }))
}

/// `Z^2 · Q^(n-2)`.
pub fn kunneth_square(b3: usize, n: u32, conv: Convention) -> Result<GradedElement> {
    if b3 < 2 || n < 2 {
        return Err(Error::InvalidInput(alloc::format!(
            "need b3 >= 2 and n >= 2, got b3 = {b3}, n = {n}"
        )));
    }
    let z = correspondence_class(b3)?;
    let z2 = graded_mul(&z, &z, conv);
    Ok(graded_mul(&z2, &GradedElement::q_power(n - 2), conv))
}

/// Pairs the `f*` side of `gamma` with `f_i ∧ f_j`, leaving an element of
/// the `e`/`Q` algebra.
pub fn gamma_pushforward(gamma: &GradedElement, b3: usize, i: usize, j: usize) -> Result<GradedElement> {
    if i >= b3 || j >= b3 {
        return Err(Error::IndexOutOfRange);
    }
    let mut out = GradedElement::zero();
    if i == j {
        return Ok(out);
    }
    let (lo, hi, sign) = if i < j {
        (i, j, Rational::one())
    } else {
        (j, i, -Rational::one())
    };
    let mask = (1u32 << lo) | (1u32 << hi);
    for (m, c) in gamma.terms() {
        if m.f == mask {
            out.add_term(Monomial { f: 0, ..m }, c * &sign);
        }
    }
    Ok(out)
}

/// `f_i ∧ f_j ↦ Q^(n-2) e_i e_j`.
pub fn ogrady_image(i: usize, j: usize, n: u32, conv: Convention) -> GradedElement {
    let ee = graded_mul(&GradedElement::e(i), &GradedElement::e(j), conv);
    graded_mul(&GradedElement::q_power(n - 2), &ee, conv)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrReport {
    pub b3: usize,
    pub n: u32,
    pub convention: Convention,
    pub pairs: usize,
    /// Common coefficient of the `f_i* f_j* ⊗ e_i e_j Q^(n-2)`, if any.
    pub coefficient: Option<Rational>,
    pub uniform: bool,
    /// Only the degree-`(2, 6 + 4(n-2))` Künneth block survives.
    pub concentrated: bool,
    /// `xy = (-1)^{|x||y|} yx` on generators and `Z`.
    pub graded_commutative: bool,
    /// Every pushforward is the common coefficient times the O'Grady image.
    pub pushforward_matches: bool,
}

impl CorrReport {
    pub fn passed(&self) -> bool {
        self.uniform
            && self.concentrated
            && self.graded_commutative
            && self.pushforward_matches
            && self.coefficient.as_ref().is_some_and(|c| !c.is_zero())
    }
}

fn commutes_graded(x: &GradedElement, y: &GradedElement, conv: Convention) -> bool {
    let (Some(dx), Some(dy)) = (x.degree(), y.degree()) else {
        return true;
    };
    let yx = graded_mul(y, x, conv);
    let expected = if (dx * dy) % 2 == 1 { yx.scale(&int(-1)) } else { yx };
    graded_mul(x, y, conv) == expected
}

pub fn verify(b3: usize, n: u32, conv: Convention) -> Result<CorrReport> {
    let gamma = kunneth_square(b3, n, conv)?;
    let pairs = b3 * (b3 - 1) / 2;
    let mut coefficient: Option<Rational> = None;
    let mut uniform = true;
    for i in 0..b3 {
        for j in i + 1..b3 {
            let m = Monomial {
                f: (1 << i) | (1 << j),
                e: (1 << i) | (1 << j),
                q: n - 2,
            };
            let c = gamma.coefficient(m);
            match &coefficient {
                None => coefficient = Some(c),
                Some(c0) => uniform &= *c0 == c,
            }
        }
    }
    let concentrated = gamma
        .terms()
        .all(|(m, _)| m.f_degree() == 2 && m.e.count_ones() == 2 && m.q == n - 2 && m.f == m.e);
    let z = correspondence_class(b3)?;
    let gens = [
        GradedElement::f(0),
        GradedElement::f(1),
        GradedElement::e(0),
        GradedElement::e(1),
        GradedElement::q_power(1),
        z,
    ];
    let graded_commutative = gens.iter().all(|x| gens.iter().all(|y| commutes_graded(x, y, conv)));
    let c = coefficient.clone().unwrap_or_else(Rational::zero);
    let mut pushforward_matches = true;
    for i in 0..b3 {
        for j in 0..b3 {
            if i == j {
                continue;
            }
            let push = gamma_pushforward(&gamma, b3, i, j)?;
            pushforward_matches &= push == ogrady_image(i, j, n, conv).scale(&c);
        }
    }
    Ok(CorrReport {
        b3,
        n,
        convention: conv,
        pairs,
        coefficient,
        uniform,
        concentrated,
        graded_commutative,
        pushforward_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: Convention = Convention::Koszul;

    #[test]
    fn odd_squares_vanish() {
        let f1 = GradedElement::f(0);
        assert!(graded_mul(&f1, &f1, K).is_zero());
        let e1 = GradedElement::e(0);
        assert!(graded_mul(&e1, &e1, K).is_zero());
    }

    #[test]
    fn koszul_sign_on_tensor_products() {
        let a = graded_mul(&GradedElement::f(0), &GradedElement::e(0), K);
        let b = graded_mul(&GradedElement::f(1), &GradedElement::e(1), K);
        let ab = graded_mul(&a, &b, K);
        let m = Monomial { f: 0b11, e: 0b11, q: 0 };
        assert_eq!(ab, GradedElement::monomial(m, int(-1)));
    }

    #[test]
    fn odd_generators_anticommute() {
        let (e1, e2) = (GradedElement::e(0), GradedElement::e(1));
        assert_eq!(graded_mul(&e1, &e2, K), graded_mul(&e2, &e1, K).scale(&int(-1)));
        let q = GradedElement::q_power(1);
        assert_eq!(
            graded_mul(&q, &GradedElement::f(0), K),
            graded_mul(&GradedElement::f(0), &q, K)
        );
    }

    #[test]
    fn associativity_on_mixed_terms() {
        let x = GradedElement::f(0)
            .add(&GradedElement::e(1))
            .add(&GradedElement::q_power(1));
        let y = graded_mul(&GradedElement::f(1), &GradedElement::e(2), K).add(&GradedElement::e(0));
        let z = GradedElement::f(2).add(&GradedElement::e(3));
        assert_eq!(
            graded_mul(&graded_mul(&x, &y, K), &z, K),
            graded_mul(&x, &graded_mul(&y, &z, K), K)
        );
    }

    #[test]
    fn two_generators() {
        let r = verify(2, 2, K).unwrap();
        assert_eq!(r.pairs, 1);
        assert_eq!(r.coefficient, Some(int(-2)));
        assert!(r.passed());
    }

    #[test]
    fn kummer_case() {
        for n in [2, 3] {
            let r = verify(8, n, K).unwrap();
            assert_eq!(r.pairs, 28);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn pushforward_is_antisymmetric() {
        let g = kunneth_square(8, 2, K).unwrap();
        let a = gamma_pushforward(&g, 8, 0, 1).unwrap();
        let b = gamma_pushforward(&g, 8, 1, 0).unwrap();
        assert_eq!(a, b.scale(&int(-1)));
        assert_eq!(gamma_pushforward(&g, 8, 0, 8).err(), Some(Error::IndexOutOfRange));
    }

    #[test]
    fn broken_conventions_fail() {
        let r = verify(8, 2, Convention::NoExchangeSign).unwrap();
        assert!(!r.graded_commutative && !r.passed());
        let r = verify(8, 2, Convention::CommutingOdd).unwrap();
        assert_eq!(r.coefficient, Some(int(0)));
        assert!(!r.passed());
    }
}
