//! Clifford algebra of a diagonalized rational quadratic space.
//!
//! Blades are subsets of the orthogonal basis `e_1..e_h` encoded as bit masks
//! (bit `i` is `e_{i+1}`), always written with increasing indices. The product
//! of two blades is `sign * prod_{i in a & b} d_i` times the blade `a ^ b`,
//! where the sign is the parity of the transpositions needed to merge the two
//! sorted index lists.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::linalg::{Matrix, Rational};
use crate::qspace::QuadraticSpace;
use crate::{Error, Result};

/// Default ceiling on `h`; operators on the full algebra are `2^h` square.
pub const DEFAULT_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(u32);

impl Blade {
    pub const UNIT: Blade = Blade(0);

    pub fn from_mask(mask: u32) -> Self {
        Blade(mask)
    }

    /// Blade from 0-based basis indices; repeated indices are not allowed.
    pub fn from_indices(indices: &[usize]) -> Self {
        let mut mask = 0u32;
        for &i in indices {
            assert!(mask & (1 << i) == 0, "repeated blade index");
            mask |= 1 << i;
        }
        Blade(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_even(self) -> bool {
        self.grade().is_multiple_of(2)
    }

    /// 0-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 & (1 << i) != 0).collect()
    }
}

/// True when merging the sorted lists `a` then `b` takes an odd number of
/// transpositions, i.e. when the count of pairs `i in a, j in b, i > j` is odd.
fn reorder_is_odd(a: u32, b: u32) -> bool {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if j >= 31 { 0 } else { a >> (j + 1) };
        swaps += above.count_ones();
    }
    swaps % 2 == 1
}

/// Product of two blades against the diagonal values `d_i = (e_i, e_i)`.
pub fn blade_product(a: Blade, b: Blade, diag: &[Rational]) -> (Rational, Blade) {
    let mut coef = Rational::one();
    let mut common = a.0 & b.0;
    while common != 0 {
        let i = common.trailing_zeros() as usize;
        common &= common - 1;
        coef *= &diag[i];
    }
    if reorder_is_odd(a.0, b.0) {
        coef = -coef;
    }
    (coef, Blade(a.0 ^ b.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// Which graded piece an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    Full,
    Even,
    Odd,
}

impl Grading {
    fn flipped(self) -> Grading {
        match self {
            Grading::Even => Grading::Odd,
            Grading::Odd => Grading::Even,
            Grading::Full => Grading::Full,
        }
    }
}

/// Sparse element of a Clifford algebra on `dim` generators. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordElement {
    dim: usize,
    terms: BTreeMap<Blade, Rational>,
}

impl CliffordElement {
    pub fn zero(dim: usize) -> Self {
        CliffordElement {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, s: Rational) -> Self {
        Self::blade(dim, Blade::UNIT, s)
    }

    pub fn unit(dim: usize) -> Self {
        Self::scalar(dim, Rational::one())
    }

    pub fn blade(dim: usize, b: Blade, coef: Rational) -> Self {
        let mut x = Self::zero(dim);
        x.add_term(b, coef);
        x
    }

    /// Grade-1 element with the given coordinates in the orthogonal basis.
    pub fn vector(coords: &[Rational]) -> Self {
        let mut x = Self::zero(coords.len());
        for (i, c) in coords.iter().enumerate() {
            x.add_term(Blade(1 << i), c.clone());
        }
        x
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Blade, Rational)>) -> Result<Self> {
        let mut x = Self::zero(dim);
        for (b, c) in terms {
            if dim < 32 && b.0 >> dim != 0 {
                return Err(Error::SpaceMismatch);
            }
            x.add_term(b, c);
        }
        Ok(x)
    }

    fn add_term(&mut self, b: Blade, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(b).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Rational)> {
        self.terms.iter().map(|(b, c)| (*b, c))
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

    pub fn coefficient(&self, b: Blade) -> Rational {
        self.terms.get(&b).cloned().unwrap_or_else(Rational::zero)
    }

    /// The zero element counts as even.
    pub fn parity(&self) -> Parity {
        let even = self.terms.keys().all(|b| b.is_even());
        let odd = self.terms.keys().all(|b| !b.is_even());
        match (even, odd) {
            (true, _) => Parity::Even,
            (false, true) => Parity::Odd,
            _ => Parity::Mixed,
        }
    }

    pub fn grade_part(&self, grade: u32) -> Self {
        CliffordElement {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.grade() == grade)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    /// Coordinates of the grade-1 part in the orthogonal basis.
    pub fn vector_coords(&self) -> Vec<Rational> {
        (0..self.dim).map(|i| self.coefficient(Blade(1 << i))).collect()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.dim);
        }
        CliffordElement {
            dim: self.dim,
            terms: self.terms.iter().map(|(b, c)| (*b, c * s)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut x = self.clone();
        for (b, c) in &other.terms {
            x.add_term(*b, c.clone());
        }
        x
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut x = self.clone();
        for (b, c) in &other.terms {
            x.add_term(*b, -c);
        }
        x
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }
}

/// `Cliff(Q^h, diag(d_1..d_h))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordAlgebra {
    diag: Vec<Rational>,
}

impl CliffordAlgebra {
    pub fn new(diag: Vec<Rational>, cap: usize) -> Result<Self> {
        let h = diag.len();
        if h > cap || h > 30 {
            return Err(Error::CapExceeded {
                requested: h,
                cap: cap.min(30),
            });
        }
        Ok(CliffordAlgebra { diag })
    }

    pub fn from_space(space: &QuadraticSpace, cap: usize) -> Result<Self> {
        Self::new(space.diag_values().to_vec(), cap)
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[Rational] {
        &self.diag
    }

    pub fn total_dim(&self) -> usize {
        1 << self.dim()
    }

    pub fn even_dim(&self) -> usize {
        self.piece_dim(Grading::Even)
    }

    pub fn piece_dim(&self, g: Grading) -> usize {
        match g {
            Grading::Full => self.total_dim(),
            // For h = 0 the algebra is Q, all even.
            Grading::Even if self.dim() == 0 => 1,
            Grading::Odd if self.dim() == 0 => 0,
            _ => self.total_dim() / 2,
        }
    }

    /// Blades of the piece in increasing mask order.
    pub fn basis(&self, g: Grading) -> Vec<Blade> {
        (0..self.total_dim() as u32)
            .map(Blade)
            .filter(|b| match g {
                Grading::Full => true,
                Grading::Even => b.is_even(),
                Grading::Odd => !b.is_even(),
            })
            .collect()
    }

    /// Grade-1 element for a vector given in the original coordinates of
    /// `space`.
    pub fn vector_from_space(&self, space: &QuadraticSpace, x: &[Rational]) -> CliffordElement {
        CliffordElement::vector(&space.to_diagonal_coords(x))
    }

    pub fn basis_vector(&self, i: usize) -> CliffordElement {
        CliffordElement::blade(self.dim(), Blade(1 << i), Rational::one())
    }

    fn check(&self, x: &CliffordElement) -> Result<()> {
        if x.dim != self.dim() {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, x: &CliffordElement, y: &CliffordElement) -> Result<CliffordElement> {
        self.check(x)?;
        self.check(y)?;
        let mut acc: BTreeMap<Blade, Rational> = BTreeMap::new();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let (s, out) = blade_product(*a, *b, &self.diag);
                *acc.entry(out).or_insert_with(Rational::zero) += s * ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(CliffordElement {
            dim: self.dim(),
            terms: acc,
        })
    }

    /// Product of several elements, left to right.
    pub fn product(&self, factors: &[&CliffordElement]) -> Result<CliffordElement> {
        let mut acc = CliffordElement::unit(self.dim());
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    /// `(x, y)` for grade-1 elements, from the diagonal values.
    pub fn pairing(&self, x: &CliffordElement, y: &CliffordElement) -> Rational {
        (0..self.dim())
            .map(|i| x.coefficient(Blade(1 << i)) * y.coefficient(Blade(1 << i)) * &self.diag[i])
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Matrix of `x -> v * x` on the chosen piece, in the blade basis.
    pub fn left_mul_operator(&self, v: &CliffordElement, restrict: Grading) -> Result<Matrix> {
        self.check(v)?;
        let target = match (restrict, v.parity()) {
            (Grading::Full, _) => Grading::Full,
            (g, Parity::Even) => g,
            _ => return Err(Error::ParityViolation),
        };
        Ok(self.sandwich(&[v], &[], restrict, target))
    }

    /// Matrix of `x -> x * c` on the chosen source piece. Even `c` preserves
    /// the piece, odd `c` maps it to the other one.
    pub fn right_mul_operator(&self, c: &CliffordElement, restrict: Grading) -> Result<Matrix> {
        self.check(c)?;
        let target = self.target_piece(restrict, c.parity())?;
        Ok(self.sandwich(&[], &[c], restrict, target))
    }

    /// Matrix of `x -> l * x * r` from `source` to the piece it lands in.
    pub fn sandwich_operator(&self, l: &CliffordElement, r: &CliffordElement, source: Grading) -> Result<Matrix> {
        self.check(l)?;
        self.check(r)?;
        let total = self.mul(l, r)?;
        let target = self.target_piece(source, total.parity())?;
        if source != Grading::Full && (l.parity() == Parity::Mixed || r.parity() == Parity::Mixed) {
            return Err(Error::ParityViolation);
        }
        Ok(self.sandwich(&[l], &[r], source, target))
    }

    fn target_piece(&self, source: Grading, p: Parity) -> Result<Grading> {
        match (source, p) {
            (Grading::Full, _) => Ok(Grading::Full),
            (g, Parity::Even) => Ok(g),
            (g, Parity::Odd) => Ok(g.flipped()),
            _ => Err(Error::ParityViolation),
        }
    }

    fn sandwich(
        &self,
        left: &[&CliffordElement],
        right: &[&CliffordElement],
        source: Grading,
        target: Grading,
    ) -> Matrix {
        let src = self.basis(source);
        let dst = self.basis(target);
        let mut position = vec![usize::MAX; self.total_dim()];
        for (i, b) in dst.iter().enumerate() {
            position[b.0 as usize] = i;
        }
        let unit = CliffordElement::unit(self.dim());
        let l = left.first().copied().unwrap_or(&unit);
        let r = right.first().copied().unwrap_or(&unit);
        let mut m = Matrix::zeros(dst.len(), src.len());
        for (j, x) in src.iter().enumerate() {
            for (bl, cl) in &l.terms {
                let (s1, m1) = blade_product(*bl, *x, &self.diag);
                let c1 = s1 * cl;
                for (br, cr) in &r.terms {
                    let (s2, m2) = blade_product(m1, *br, &self.diag);
                    let row = position[m2.0 as usize];
                    debug_assert!(row != usize::MAX, "product left the target piece");
                    m[(row, j)] += &c1 * s2 * cr;
                }
            }
        }
        m
    }

    /// Element with the given coordinates on the blades of a piece.
    pub fn element_from_coords(&self, g: Grading, coords: &[Rational]) -> CliffordElement {
        let basis = self.basis(g);
        assert_eq!(basis.len(), coords.len());
        let mut x = CliffordElement::zero(self.dim());
        for (b, c) in basis.into_iter().zip(coords) {
            x.add_term(b, c.clone());
        }
        x
    }

    pub fn coords_in(&self, g: Grading, x: &CliffordElement) -> Vec<Rational> {
        self.basis(g).into_iter().map(|b| x.coefficient(b)).collect()
    }
}
