//! Hodge structures of hyper-Kähler type with rationally presented periods.
//!
//! The period line is spanned by `sigma = alpha + i beta` with `alpha`,
//! `beta` rational, orthogonal and of equal positive norm `N`. All Hodge
//! data is read off the rotation generator
//! `A(x) = (alpha, x) beta - (beta, x) alpha`, which acts on `sigma` by
//! `-iN`, on `sigma-bar` by `iN` and by zero on the orthogonal complement of
//! the plane. Its derivation extension to any tensor construction acts on the
//! `(p, q)` part by `-i (N/2)(p - q)`, so Hodge numbers are nullities of the
//! real operators `A^2 + ((N/2) m)^2`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::linalg::{Matrix, Rational, Subspace};
use crate::qspace::QuadraticSpace;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodPlane {
    alpha: Vec<Rational>,
    beta: Vec<Rational>,
    norm: Rational,
}

impl PeriodPlane {
    /// Checks `q(a,a) = q(b,b) > 0` and `q(a,b) = 0`.
    pub fn validate(space: &QuadraticSpace, alpha: Vec<Rational>, beta: Vec<Rational>) -> Result<Self> {
        let h = space.dim();
        for v in [&alpha, &beta] {
            if v.len() != h {
                return Err(Error::DimensionMismatch {
                    expected: h,
                    found: v.len(),
                });
            }
        }
        if Matrix::from_rows(
            alpha
                .iter()
                .cloned()
                .zip(beta.iter().cloned())
                .map(|(a, b)| alloc::vec![a, b])
                .collect(),
        )
        .map(|m| m.rank())
        .unwrap_or(0)
            < 2
        {
            return Err(Error::DependentVectors);
        }
        if !space.pairing(&alpha, &beta).is_zero() {
            return Err(Error::NotOrthogonal);
        }
        let na = space.norm(&alpha);
        if na != space.norm(&beta) {
            return Err(Error::UnequalNorm);
        }
        if !na.is_positive() {
            return Err(Error::NotPositive);
        }
        Ok(PeriodPlane { alpha, beta, norm: na })
    }

    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Rational] {
        &self.beta
    }

    pub fn norm(&self) -> &Rational {
        &self.norm
    }

    /// The same plane with the opposite orientation.
    pub fn reversed(&self) -> PeriodPlane {
        PeriodPlane {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
            norm: self.norm.clone(),
        }
    }

    /// Rotates the basis inside the plane: `(a alpha + b beta, -b alpha + a beta)`.
    /// With `a^2 + b^2 = 1` the norm is unchanged.
    pub fn rotated(&self, space: &QuadraticSpace, a: &Rational, b: &Rational) -> Result<PeriodPlane> {
        let alpha = self.alpha.iter().zip(&self.beta).map(|(x, y)| a * x + b * y).collect();
        let beta = self
            .alpha
            .iter()
            .zip(&self.beta)
            .map(|(x, y)| -(b * x) + a * y)
            .collect();
        Self::validate(space, alpha, beta)
    }

    /// Image of the plane under the reflection in the hyperplane orthogonal
    /// to `v`, a rational isometry. `v` must be anisotropic.
    pub fn reflected(&self, space: &QuadraticSpace, v: &[Rational]) -> Result<PeriodPlane> {
        let nv = space.norm(v);
        if nv.is_zero() {
            return Err(Error::NullReference);
        }
        let reflect = |x: &[Rational]| -> Vec<Rational> {
            let s = Rational::from_integer(2.into()) * space.pairing(x, v) / &nv;
            x.iter().zip(v).map(|(a, b)| a - &s * b).collect()
        };
        Self::validate(space, reflect(&self.alpha), reflect(&self.beta))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HKStructure {
    space: QuadraticSpace,
    period: PeriodPlane,
}

impl HKStructure {
    pub fn new(space: QuadraticSpace, alpha: Vec<Rational>, beta: Vec<Rational>) -> Result<Self> {
        let period = PeriodPlane::validate(&space, alpha, beta)?;
        Ok(HKStructure { space, period })
    }

    pub fn from_parts(space: QuadraticSpace, period: PeriodPlane) -> Result<Self> {
        let period = PeriodPlane::validate(&space, period.alpha, period.beta)?;
        Ok(HKStructure { space, period })
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn period(&self) -> &PeriodPlane {
        &self.period
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `q(sigma, sigma)` as (real, imaginary) parts.
    pub fn sigma_square(&self) -> (Rational, Rational) {
        let (a, b) = (&self.period.alpha, &self.period.beta);
        let re = self.space.norm(a) - self.space.norm(b);
        let im = Rational::from_integer(2.into()) * self.space.pairing(a, b);
        (re, im)
    }

    /// `q(sigma, sigma-bar) = q(alpha, alpha) + q(beta, beta)`.
    pub fn sigma_sigma_bar(&self) -> Rational {
        self.space.norm(&self.period.alpha) + self.space.norm(&self.period.beta)
    }

    /// Orthogonal complement of the period plane, i.e. the rational part of
    /// `H^{1,1}` for this period.
    pub fn plane_complement(&self) -> Subspace {
        self.space
            .orthogonal_complement(&[self.period.alpha.clone(), self.period.beta.clone()])
    }

    pub fn rotation_generator(&self) -> Matrix {
        rotation_generator(self)
    }
}

/// Matrix of `x -> q(alpha, x) beta - q(beta, x) alpha`.
pub fn rotation_generator(hk: &HKStructure) -> Matrix {
    let g = hk.space.gram();
    let ga = g.mul_vec(&hk.period.alpha);
    let gb = g.mul_vec(&hk.period.beta);
    let h = hk.dim();
    let mut m = Matrix::zeros(h, h);
    for i in 0..h {
        for j in 0..h {
            m[(i, j)] = &hk.period.beta[i] * &ga[j] - &hk.period.alpha[i] * &gb[j];
        }
    }
    m
}

/// Weight-1 structure: a rational space with `J^2 = -I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight1Structure {
    j: Matrix,
}

impl Weight1Structure {
    pub fn new(j: Matrix) -> Result<Self> {
        if !j.is_square() {
            return Err(Error::NotSquare {
                rows: j.rows(),
                cols: j.cols(),
            });
        }
        if j.rows() % 2 == 1 {
            return Err(Error::OddDimension(j.rows()));
        }
        let sq = &j * &j;
        if j.rows() > 0 && sq.scalar_value() != Some(-<Rational as num_traits::One>::one()) {
            return Err(Error::NotComplexStructure);
        }
        Ok(Weight1Structure { j })
    }

    pub fn dim(&self) -> usize {
        self.j.rows()
    }

    pub fn complex_dim(&self) -> usize {
        self.dim() / 2
    }

    pub fn j(&self) -> &Matrix {
        &self.j
    }

    pub fn spectrum(&self) -> HodgeTypeSpectrum {
        let mut dims = BTreeMap::new();
        dims.insert((1, 0), self.complex_dim());
        dims.insert((0, 1), self.complex_dim());
        HodgeTypeSpectrum { weight: 1, dims }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeTypeSpectrum {
    pub weight: u32,
    pub dims: BTreeMap<(u32, u32), usize>,
}

impl HodgeTypeSpectrum {
    pub fn get(&self, p: u32, q: u32) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.dims.iter().all(|(&(p, q), &d)| self.get(q, p) == d)
    }

    pub fn level(&self) -> u32 {
        hodge_level(self)
    }
}

/// Hodge numbers of the operator `op`, assumed to be the derivation extension
/// of a rotation generator with norm `n` to an ambient space of the given
/// weight: the `(p, q)` part is where `op` acts by `-i (n/2)(p - q)`.
pub fn type_spectrum(op: &Matrix, n: &Rational, weight: u32) -> Result<HodgeTypeSpectrum> {
    if !op.is_square() {
        return Err(Error::NotSquare {
            rows: op.rows(),
            cols: op.cols(),
        });
    }
    let ambient = op.rows();
    let sq = op * op;
    let half = n / Rational::from_integer(2.into());
    let mut dims = BTreeMap::new();
    let mut total = 0;
    for p in 0..=weight {
        let q = weight - p;
        if p < q {
            continue;
        }
        let m = Rational::from_integer((p - q).into());
        let nullity = if p == q {
            op.nullity()
        } else {
            let c = &half * &m;
            sq.shift_diagonal(&(&c * &c)).nullity()
        };
        if p == q {
            dims.insert((p, q), nullity);
        } else {
            if nullity % 2 == 1 {
                return Err(Error::InconsistentWeight);
            }
            dims.insert((p, q), nullity / 2);
            dims.insert((q, p), nullity / 2);
        }
        total += nullity;
    }
    if total != ambient {
        return Err(Error::InconsistentWeight);
    }
    Ok(HodgeTypeSpectrum { weight, dims })
}

pub fn hodge_level(spectrum: &HodgeTypeSpectrum) -> u32 {
    spectrum
        .dims
        .iter()
        .filter(|(_, &d)| d > 0)
        .map(|(&(p, q), _)| p.abs_diff(q))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn validation_cases() {
        let q = QuadraticSpace::from_diagonal_i64(&[1, 1, -1, -1, -1]).unwrap();
        let p = PeriodPlane::validate(&q, v(&[1, 0, 0, 0, 0]), v(&[0, 1, 0, 0, 0])).unwrap();
        assert_eq!(p.norm(), &int(1));
        assert_eq!(
            PeriodPlane::validate(&q, v(&[1, 0, 0, 0, 0]), v(&[1, 1, 0, 0, 0])),
            Err(Error::NotOrthogonal)
        );
        assert_eq!(
            PeriodPlane::validate(&q, v(&[1, 0, 0, 0, 0]), v(&[0, 2, 0, 0, 0])),
            Err(Error::UnequalNorm)
        );
        assert_eq!(
            PeriodPlane::validate(&q, v(&[0, 0, 1, 0, 0]), v(&[0, 0, 0, 1, 0])),
            Err(Error::NotPositive)
        );
        assert_eq!(
            PeriodPlane::validate(&q, v(&[1, 0, 0, 0, 0]), v(&[2, 0, 0, 0, 0])),
            Err(Error::DependentVectors)
        );
        let q = QuadraticSpace::from_diagonal_i64(&[2, 8, -1]).unwrap();
        let p = PeriodPlane::validate(&q, v(&[2, 0, 0]), v(&[0, 1, 0])).unwrap();
        assert_eq!(p.norm(), &int(8));
    }

    #[test]
    fn rotation_generator_on_plane_and_complement() {
        let q = QuadraticSpace::from_diagonal_i64(&[2, 8, -1]).unwrap();
        let hk = HKStructure::new(q, v(&[2, 0, 0]), v(&[0, 1, 0])).unwrap();
        let a = hk.rotation_generator();
        let n = hk.period().norm().clone();
        assert_eq!(a.mul_vec(hk.period().alpha()), v(&[0, 8, 0]));
        assert_eq!(a.mul_vec(hk.period().beta()), v(&[-16, 0, 0]));
        assert_eq!(a.mul_vec(&v(&[0, 0, 1])), v(&[0, 0, 0]));
        let g = hk.space().gram();
        assert!((&(&a.transpose() * g) + &(g * &a)).is_zero());
        assert_eq!(hk.sigma_square(), (int(0), int(0)));
        assert_eq!(hk.sigma_sigma_bar(), &n * int(2));
    }

    #[test]
    fn spectrum_of_h2() {
        let q = QuadraticSpace::from_diagonal_i64(&[1, 1, -1, -1, -1]).unwrap();
        let hk = HKStructure::new(q, v(&[1, 0, 0, 0, 0]), v(&[0, 1, 0, 0, 0])).unwrap();
        let spectrum = type_spectrum(&hk.rotation_generator(), hk.period().norm(), 2).unwrap();
        assert_eq!(spectrum.get(2, 0), 1);
        assert_eq!(spectrum.get(1, 1), 3);
        assert_eq!(spectrum.get(0, 2), 1);
        assert_eq!(hodge_level(&spectrum), 2);
        assert!(spectrum.is_symmetric());
    }

    #[test]
    fn wrong_weight_is_inconsistent() {
        let q = QuadraticSpace::from_diagonal_i64(&[1, 1, -1]).unwrap();
        let hk = HKStructure::new(q, v(&[1, 0, 0]), v(&[0, 1, 0])).unwrap();
        // Eigenvalues +-i with N = 1 sit at |p - q| = 2; weight 1 cannot host them.
        assert_eq!(
            type_spectrum(&hk.rotation_generator(), hk.period().norm(), 1),
            Err(Error::InconsistentWeight)
        );
    }

    #[test]
    fn weight_one_level() {
        let j = Matrix::from_i64(&[&[0, -1], &[1, 0]]);
        let w = Weight1Structure::new(j).unwrap();
        assert_eq!(hodge_level(&w.spectrum()), 1);
        assert_eq!(
            Weight1Structure::new(Matrix::identity(2)),
            Err(Error::NotComplexStructure)
        );
        assert_eq!(Weight1Structure::new(Matrix::identity(3)), Err(Error::OddDimension(3)));
    }

    #[test]
    fn reflection_and_rotation_keep_validity() {
        let q = QuadraticSpace::from_diagonal_i64(&[1, 1, -1, -1]).unwrap();
        let p = PeriodPlane::validate(&q, v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0])).unwrap();
        let r = p.reflected(&q, &v(&[1, 1, 1, 0])).unwrap();
        assert_eq!(r.norm(), p.norm());
        let rot = p
            .rotated(&q, &crate::linalg::frac(3, 5), &crate::linalg::frac(4, 5))
            .unwrap();
        assert_eq!(rot.norm(), p.norm());
        assert_eq!(p.reflected(&q, &v(&[1, 0, 1, 0])), Err(Error::NullReference));
    }
}
