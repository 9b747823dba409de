//! Dense rational matrices and fraction-free elimination.
//!
//! Elimination never works on rationals directly: every row is first scaled
//! to a primitive integer row (which leaves the row space and the kernel
//! unchanged) and then reduced with the fraction-free Gauss-Jordan scheme, in
//! which every intermediate entry is a minor of the integer matrix and every
//! division is exact.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact rational scalar, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn dot(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter()
        .zip(y)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// Square root of a rational that is a perfect square, `None` otherwise.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Rational::one())
    }

    pub fn scalar(n: usize, s: &Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    /// Integer matrix literal; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .expect("ragged matrix literal")
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.scalar_value().is_some_and(|s| s.is_one())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// `Some(s)` when the matrix equals `s * I`.
    pub fn scalar_value(&self) -> Option<Rational> {
        if !self.is_square() {
            return None;
        }
        let s = if self.rows == 0 {
            Rational::zero()
        } else {
            self[(0, 0)].clone()
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = &self[(i, j)];
                if (i == j && *x != s) || (i != j && !x.is_zero()) {
                    return None;
                }
            }
        }
        Some(s)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Adds `s` to every diagonal entry.
    pub fn shift_diagonal(&self, s: &Rational) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] += s;
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        Ok(self.mul_unchecked(rhs))
    }

    // Skips zero entries on both sides; Clifford and derivation operators are
    // very sparse.
    fn mul_unchecked(&self, rhs: &Matrix) -> Matrix {
        let nonzero: Vec<Vec<(usize, &Rational)>> = (0..rhs.rows)
            .map(|k| rhs.row(k).iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for &(j, b) in &nonzero[k] {
                    out.data[i * rhs.cols + j] += a * b;
                }
            }
        }
        out
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Matrix) -> Matrix {
        &(self * rhs) - &(rhs * self)
    }

    /// `self * rhs + rhs * self`.
    pub fn anticommutator(&self, rhs: &Matrix) -> Matrix {
        &(self * rhs) + &(rhs * self)
    }

    /// Submatrix of the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn nullity(&self) -> usize {
        self.cols - rank(self)
    }

    pub fn kernel(&self) -> Subspace {
        let (_, basis) = rank_and_kernel(self);
        Subspace::from_independent(self.cols, basis)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        invert(self)
    }

    pub fn determinant(&self) -> Result<Rational> {
        determinant(self)
    }

    /// Column space as a subspace of the target.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.rows, (0..self.cols).map(|j| self.column(j)).collect())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

/// Scales a rational vector to a primitive integer vector whose first
/// nonzero entry is positive. The zero vector is returned unchanged.
pub fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let ints = clear_denominators(v);
    make_primitive(ints)
}

fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

fn make_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    let flip = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in &mut v {
        *x = &*x / &g;
        if flip {
            *x = -&*x;
        }
    }
    v
}

fn to_rationals(v: Vec<BigInt>) -> Vec<Rational> {
    v.into_iter().map(Rational::from_integer).collect()
}

/// Integer row echelon data produced by fraction-free elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    /// Last pivot; in reduced mode every pivot row carries it on its pivot.
    scale: BigInt,
    swaps: usize,
}

/// Fraction-free elimination of integer rows. With `reduce_above` the result
/// is `scale` times the reduced row echelon form (Gauss-Jordan); otherwise it
/// is the Bareiss echelon form.
fn fraction_free(mut a: Vec<Vec<BigInt>>, cols: usize, reduce_above: bool) -> Echelon {
    let n = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    let mut swaps = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swaps += 1;
        }
        let (head, tail) = a.split_at_mut(r);
        let (pivot_row, below) = tail.split_first_mut().expect("pivot row");
        let piv = pivot_row[c].clone();
        let same_scale = piv == prev;
        let targets = below
            .iter_mut()
            .chain(if reduce_above { &mut head[..] } else { &mut [] }.iter_mut());
        for row in targets {
            let f = row[c].clone();
            if f.is_zero() {
                if same_scale {
                    continue;
                }
                for x in row.iter_mut() {
                    if !x.is_zero() {
                        *x = &*x * &piv / &prev;
                    }
                }
                continue;
            }
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                if y.is_zero() {
                    if !x.is_zero() && !same_scale {
                        *x = &*x * &piv / &prev;
                    }
                } else {
                    let num = &*x * &piv - &f * y;
                    *x = if prev.is_one() { num } else { num / &prev };
                }
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon {
        rows: a,
        pivots,
        scale: prev,
        swaps,
    }
}

fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows).map(|i| clear_denominators(m.row(i))).collect()
}

pub fn rank(m: &Matrix) -> usize {
    // Zero columns never carry a pivot; dropping them keeps wide stacked
    // operator matrices cheap.
    let live: Vec<usize> = (0..m.cols)
        .filter(|&j| (0..m.rows).any(|i| !m[(i, j)].is_zero()))
        .collect();
    let rows: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let row: Vec<Rational> = live.iter().map(|&j| m[(i, j)].clone()).collect();
            clear_denominators(&row)
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    fraction_free(rows, live.len(), false).pivots.len()
}

/// Rank and a kernel basis of primitive integer vectors (first nonzero entry
/// positive). Kernel vectors are indexed by the non-pivot columns, in order.
pub fn rank_and_kernel(m: &Matrix) -> (usize, Vec<Vec<Rational>>) {
    let ech = fraction_free(integer_rows(m), m.cols, true);
    let rank = ech.pivots.len();
    let mut is_pivot = vec![false; m.cols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut kernel = Vec::with_capacity(m.cols - rank);
    for f in (0..m.cols).filter(|&j| !is_pivot[j]) {
        let mut x = vec![BigInt::zero(); m.cols];
        x[f] = ech.scale.clone();
        for (s, &p) in ech.pivots.iter().enumerate() {
            x[p] = -&ech.rows[s][f];
        }
        kernel.push(to_rationals(make_primitive(x)));
    }
    (rank, kernel)
}

pub fn invert(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    // Row scaling by the denominators' lcm is undone at the end: if D*M has
    // inverse X then M^{-1} = X*D.
    let mut scales = Vec::with_capacity(n);
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let l = m.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let mut row: Vec<BigInt> = m.row(i).iter().map(|x| x.numer() * (&l / x.denom())).collect();
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            scales.push(l);
            row
        })
        .collect();
    let ech = fraction_free(rows, 2 * n, true);
    if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
        return Err(Error::Singular);
    }
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = Rational::new(&ech.rows[i][n + j] * &scales[j], ech.scale.clone());
        }
    }
    Ok(inv)
}

pub fn determinant(m: &Matrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if m.rows == 0 {
        return Ok(Rational::one());
    }
    let mut denom = BigInt::one();
    let rows: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let l = m.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            denom *= &l;
            m.row(i).iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let ech = fraction_free(rows, m.cols, false);
    if ech.pivots.len() < m.rows {
        return Ok(Rational::zero());
    }
    let sign = if ech.swaps % 2 == 1 {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    Ok(Rational::new(sign * ech.scale, denom))
}

/// Solves `basis * x = op * basis` for the matrix of `op` restricted to the
/// column span of `basis`, failing with `NotInvariant` if the span is not
/// invariant.
pub fn restrict_operator(op: &Matrix, basis: &Matrix) -> Result<Matrix> {
    if op.rows != op.cols || op.cols != basis.rows {
        return Err(Error::DimensionMismatch {
            expected: op.cols,
            found: basis.rows,
        });
    }
    let image = op * basis;
    let bt = basis.transpose();
    let normal = (&bt * basis).inverse()?;
    let restricted = &normal * &(&bt * &image);
    if basis * &restricted != image {
        return Err(Error::NotInvariant);
    }
    Ok(restricted)
}

/// A linear subspace of `Q^ambient` given by a basis of independent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = Rational::one();
                v
            })
            .collect();
        Subspace { ambient, basis }
    }

    /// Trusts the caller that `basis` is linearly independent.
    pub fn from_independent(ambient: usize, basis: Vec<Vec<Rational>>) -> Self {
        debug_assert!(basis.iter().all(|v| v.len() == ambient));
        Subspace { ambient, basis }
    }

    /// Span of arbitrary vectors, reduced to the canonical basis: the rows of
    /// the reduced echelon form, each scaled to a primitive integer vector.
    pub fn span(ambient: usize, vectors: Vec<Vec<Rational>>) -> Self {
        let rows: Vec<Vec<BigInt>> = vectors
            .iter()
            .map(|v| {
                assert_eq!(v.len(), ambient, "vector length");
                clear_denominators(v)
            })
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        let ech = fraction_free(rows, ambient, true);
        let basis = ech.rows.into_iter().map(|r| to_rationals(make_primitive(r))).collect();
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Basis vectors as columns of an `ambient x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient, &self.basis)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        rank(&Matrix::from_rows(vs).expect("uniform vectors")) == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        self.sum(other).dim() == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, vs)
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.dim() == other.dim() && self.contains_subspace(other)
    }

    pub fn map(&self, op: &Matrix) -> Subspace {
        Subspace::span(op.rows(), self.basis.iter().map(|v| op.mul_vec(v)).collect())
    }
}

/// Incremental echelon basis for growing a span one vector at a time.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    ambient: usize,
    rows: Vec<(usize, Vec<Rational>)>,
}

impl SpanBuilder {
    pub fn new(ambient: usize) -> Self {
        SpanBuilder {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current rows; the residue is zero iff `v` is
    /// already in the span.
    pub fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length");
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        let v = v.into_iter().map(|x| x * &inv).collect();
        self.rows.push((p, v));
        true
    }

    pub fn into_subspace(self) -> Subspace {
        Subspace::from_independent(self.ambient, self.rows.into_iter().map(|(_, v)| v).collect())
    }
}
