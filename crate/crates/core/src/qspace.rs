//! Rational quadratic spaces.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::{dot, primitive, Matrix, Rational, Subspace};
use crate::{Error, Result};

/// Nondegenerate symmetric bilinear form on `Q^h`, with a cached orthogonal
/// basis. Column `i` of `basis_change` is the `i`-th orthogonal basis vector
/// written in the original coordinates, and its norm is `diag_values[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpace {
    gram: Matrix,
    basis_change: Matrix,
    basis_change_inv: Matrix,
    diag_values: Vec<Rational>,
    signature: (usize, usize),
}

/// The inverse Gram matrix, read as an element of `Sym^2` of the space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseForm {
    components: Matrix,
}

impl InverseForm {
    pub fn components(&self) -> &Matrix {
        &self.components
    }
}

impl QuadraticSpace {
    pub fn new(gram: Matrix) -> Result<Self> {
        let (basis_change, diag_values) = diagonalize(&gram)?;
        let basis_change_inv = basis_change.inverse()?;
        let plus = diag_values.iter().filter(|d| d.is_positive()).count();
        let signature = (plus, diag_values.len() - plus);
        Ok(QuadraticSpace {
            gram,
            basis_change,
            basis_change_inv,
            diag_values,
            signature,
        })
    }

    pub fn diagonal(values: &[Rational]) -> Result<Self> {
        Self::new(Matrix::diagonal(values))
    }

    /// Diagonal form with integer entries, e.g. `from_diagonal_i64(&[1, 1, -1])`.
    pub fn from_diagonal_i64(values: &[i64]) -> Result<Self> {
        let vs: Vec<Rational> = values.iter().map(|&v| crate::linalg::int(v)).collect();
        Self::diagonal(&vs)
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn basis_change(&self) -> &Matrix {
        &self.basis_change
    }

    pub fn diag_values(&self) -> &[Rational] {
        &self.diag_values
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn pairing(&self, x: &[Rational], y: &[Rational]) -> Rational {
        dot(x, &self.gram.mul_vec(y))
    }

    pub fn norm(&self, x: &[Rational]) -> Rational {
        self.pairing(x, x)
    }

    /// Coordinates of `x` in the orthogonal basis.
    pub fn to_diagonal_coords(&self, x: &[Rational]) -> Vec<Rational> {
        self.basis_change_inv.mul_vec(x)
    }

    pub fn from_diagonal_coords(&self, y: &[Rational]) -> Vec<Rational> {
        self.basis_change.mul_vec(y)
    }

    pub fn determinant(&self) -> Rational {
        self.gram.determinant().expect("square Gram matrix")
    }

    /// Squarefree integer representing the determinant modulo nonzero
    /// rational squares, sign included.
    pub fn discriminant(&self) -> Result<BigInt> {
        // det(G) and the product of the diagonal entries differ by a square;
        // whichever has smaller prime factors decides.
        let det = self.determinant();
        let class = match square_class(core::iter::once(&det)) {
            Err(Error::DiscriminantTooLarge) => square_class(self.diag_values.iter())?,
            other => other?,
        };
        Ok(if det.is_negative() { -class } else { class })
    }

    pub fn inverse_form(&self) -> InverseForm {
        InverseForm {
            components: self.gram.inverse().expect("nondegenerate Gram matrix"),
        }
    }

    /// Orthogonal complement of the span of `vectors`.
    pub fn orthogonal_complement(&self, vectors: &[Vec<Rational>]) -> Subspace {
        let rows: Vec<Vec<Rational>> = vectors.iter().map(|v| self.gram.mul_vec(v)).collect();
        if rows.is_empty() {
            return Subspace::full(self.dim());
        }
        Matrix::from_rows(rows).expect("uniform vectors").kernel()
    }

    /// The form `P^T G P`; `p` must be nonsingular.
    pub fn congruent(&self, p: &Matrix) -> Result<QuadraticSpace> {
        if p.rows() != self.dim() || !p.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: p.rows(),
            });
        }
        if p.determinant()?.is_zero() {
            return Err(Error::Singular);
        }
        QuadraticSpace::new(&(&p.transpose() * &self.gram) * p)
    }
}

/// Symmetric elimination over the rationals: returns `T` and `d` with
/// `T^T G T = diag(d)`. Columns of `T` are primitive integer vectors.
pub fn diagonalize(gram: &Matrix) -> Result<(Matrix, Vec<Rational>)> {
    if !gram.is_square() {
        return Err(Error::NotSquare {
            rows: gram.rows(),
            cols: gram.cols(),
        });
    }
    if !gram.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let h = gram.rows();
    let mut a = gram.clone();
    let mut t = Matrix::identity(h);

    // Column operation col_i += s * col_j, applied as a congruence.
    fn add_col(a: &mut Matrix, t: &mut Matrix, i: usize, j: usize, s: &Rational) {
        let h = a.rows();
        for r in 0..h {
            let x = &t[(r, j)] * s;
            t[(r, i)] += x;
            let x = &a[(r, j)] * s;
            a[(r, i)] += x;
        }
        for c in 0..h {
            let x = &a[(j, c)] * s;
            a[(i, c)] += x;
        }
    }

    for i in 0..h {
        if a[(i, i)].is_zero() {
            let j = (i + 1..h).find(|&j| !a[(i, j)].is_zero()).ok_or(Error::Degenerate)?;
            add_col(&mut a, &mut t, i, j, &Rational::one());
            if a[(i, i)].is_zero() {
                // a_jj = -2 a_ij: subtracting twice from the sum gives -2 a_ij != 0.
                add_col(&mut a, &mut t, i, j, &-Rational::from_integer(2.into()));
            }
        }
        let pivot = a[(i, i)].clone();
        for j in i + 1..h {
            if a[(i, j)].is_zero() {
                continue;
            }
            let s = -(&a[(i, j)] / &pivot);
            add_col(&mut a, &mut t, j, i, &s);
        }
    }

    // Rescale each column to a primitive integer vector.
    let mut d = Vec::with_capacity(h);
    for i in 0..h {
        let col = t.column(i);
        let p = primitive(&col);
        let pos = col.iter().position(|x| !x.is_zero()).expect("nonsingular T");
        let s = Rational::from_integer(p[pos].clone()) / &col[pos];
        for (r, v) in p.into_iter().enumerate() {
            t[(r, i)] = Rational::from_integer(v);
        }
        d.push(&a[(i, i)] * &s * &s);
    }
    debug_assert_eq!(&(&t.transpose() * gram) * &t, Matrix::diagonal(&d));
    Ok((t, d))
}

/// Squarefree class of `|Π x|`: each numerator and denominator is reduced on
/// its own, and squarefree `a`, `b` combine to `ab / gcd(a, b)^2`.
fn square_class<'a>(factors: impl Iterator<Item = &'a Rational>) -> Result<BigInt> {
    let mut acc = BigInt::one();
    for x in factors {
        for part in [x.numer().abs(), x.denom().abs()] {
            let s = squarefree_part(&part)?;
            let g = acc.gcd(&s);
            acc = &acc * &s / (&g * &g);
        }
    }
    Ok(acc)
}

/// Squarefree part of a positive integer, by trial division. The cofactor
/// left after removing every prime below the cube root has at most two prime
/// factors, so a perfect-square test finishes the job exactly.
fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    const TRIAL_LIMIT: u64 = 1_000_000;
    let mut m = n.clone();
    let mut out = BigInt::one();
    let mut p: u64 = 2;
    loop {
        let pb = BigInt::from(p);
        if &pb * &pb * &pb > m {
            break;
        }
        if p > TRIAL_LIMIT {
            return Err(Error::DiscriminantTooLarge);
        }
        let mut e = 0;
        while (&m % &pb).is_zero() {
            m /= &pb;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = m.sqrt();
    if &r * &r == m {
        Ok(out)
    } else {
        Ok(out * m)
    }
}

/// Unit coordinate vector of length `h`.
pub fn unit_vector(h: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); h];
    v[i] = Rational::one();
    v
}
