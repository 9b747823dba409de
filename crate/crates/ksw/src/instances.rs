//! Seeded random instances. Every stream is a `ChaCha8Rng` keyed by the run
//! seed and a stream label, so instances do not depend on scheduling.

use ksw_core::hodge::{HKStructure, PeriodPlane};
use ksw_core::linalg::{frac, int};
use ksw_core::qspace::{unit_vector, QuadraticSpace};
use ksw_core::{Matrix, Rational};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub struct InstanceGen {
    rng: ChaCha8Rng,
}

impl InstanceGen {
    pub fn new(seed: u64, stream: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(seed.to_le_bytes());
        hasher.update(stream.as_bytes());
        let key: [u8; 32] = hasher.finalize().into();
        InstanceGen {
            rng: ChaCha8Rng::from_seed(key),
        }
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random_bool(0.5)
    }

    /// Numerator and denominator bounded by `bound`.
    pub fn rational(&mut self, bound: i64) -> Rational {
        frac(self.range(-bound, bound), self.range(1, bound))
    }

    pub fn rational_matrix(&mut self, rows: usize, cols: usize, bound: i64) -> Matrix {
        let data = (0..rows)
            .map(|_| (0..cols).map(|_| self.rational(bound)).collect())
            .collect();
        Matrix::from_rows(data).expect("rectangular")
    }

    /// Product of random integer `rows x r` and `r x cols` factors.
    pub fn low_rank_matrix(&mut self, rows: usize, cols: usize, r: usize) -> Matrix {
        let mut a = Matrix::zeros(rows, r);
        let mut b = Matrix::zeros(r, cols);
        for i in 0..rows {
            for k in 0..r {
                a[(i, k)] = int(self.range(-5, 5));
            }
        }
        for k in 0..r {
            for j in 0..cols {
                b[(k, j)] = int(self.range(-5, 5));
            }
        }
        &a * &b
    }

    /// Unit upper-triangular with entries in `-bound..=bound`.
    pub fn unipotent(&mut self, h: usize, bound: i64) -> Matrix {
        let mut p = Matrix::identity(h);
        for i in 0..h {
            for j in i + 1..h {
                p[(i, j)] = int(self.range(-bound, bound));
            }
        }
        p
    }

    /// A nonsingular rational matrix: unipotent times a random rational
    /// diagonal times a transposed unipotent.
    pub fn nonsingular(&mut self, h: usize) -> Matrix {
        let u = self.unipotent(h, 2);
        let l = self.unipotent(h, 2).transpose();
        let d: Vec<Rational> = (0..h)
            .map(|_| {
                let n = self.range(1, 6) * if self.coin() { 1 } else { -1 };
                frac(n, self.range(1, 6))
            })
            .collect();
        &(&u * &Matrix::diagonal(&d)) * &l
    }

    /// Two equal positive leading entries and a tail with at least one
    /// negative entry when `h >= 3`.
    pub fn diagonal_form(&mut self, h: usize) -> Vec<i64> {
        let c = self.range(1, 4);
        let mut d = vec![c, c];
        for i in 2..h {
            let m = self.range(1, 5);
            let neg = i == 2 || self.coin();
            d.push(if neg { -m } else { m });
        }
        d
    }

    /// A valid rational period on a scrambled mixed-signature form.
    ///
    /// The standard period `(e1, e2)` of a diagonal form is moved by up to two
    /// reflections and possibly a Pythagorean rotation, then the whole
    /// structure is rewritten through a unipotent congruence `P^T G P`.
    pub fn hk(&mut self, h: usize) -> HKStructure {
        let diag = self.diagonal_form(h);
        let space = QuadraticSpace::from_diagonal_i64(&diag).expect("nondegenerate");
        let mut period = PeriodPlane::validate(&space, unit_vector(h, 0), unit_vector(h, 1)).expect("valid period");
        for _ in 0..self.range(0, 2) {
            let v: Vec<Rational> = (0..h).map(|_| int(self.range(-2, 2))).collect();
            if !space.norm(&v).is_zero() {
                period = period.reflected(&space, &v).expect("anisotropic reflection");
            }
        }
        if self.coin() {
            let (a, b) = if self.coin() {
                (frac(3, 5), frac(4, 5))
            } else {
                (frac(-5, 13), frac(12, 13))
            };
            period = period.rotated(&space, &a, &b).expect("unit rotation");
        }
        let p = self.unipotent(h, 1);
        let pinv = p.inverse().expect("unipotent");
        let scrambled = space.congruent(&p).expect("nonsingular");
        HKStructure::new(scrambled, pinv.mul_vec(period.alpha()), pinv.mul_vec(period.beta())).expect("valid period")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = InstanceGen::new(1, "x").hk(5);
        let b = InstanceGen::new(1, "x").hk(5);
        assert_eq!(a.space().gram(), b.space().gram());
        assert_eq!(a.period().alpha(), b.period().alpha());
        let mut g = InstanceGen::new(1, "y");
        let c: Vec<i64> = (0..8).map(|_| g.range(0, 1000)).collect();
        let mut g = InstanceGen::new(1, "x");
        let d: Vec<i64> = (0..8).map(|_| g.range(0, 1000)).collect();
        assert_ne!(c, d);
    }

    #[test]
    fn periods_are_valid_and_mixed() {
        let mut g = InstanceGen::new(9, "hk");
        for h in 3..=7 {
            let hk = g.hk(h);
            let (p, n) = hk.space().signature();
            assert!(p >= 2 && n >= 1);
            assert!(g.nonsingular(h).inverse().is_ok());
        }
    }
}
