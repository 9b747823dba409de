//! Symmetric powers of a quadratic space as homogeneous polynomials.
//!
//! A vector `Σ c_M x^M` of `Sym^k` is stored by its coefficients on the
//! monomial basis, ordered lexicographically as sorted multisets. The
//! variable `x_i` stands for the `i`-th basis vector of the underlying space.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::hodge::{type_spectrum, HKStructure, HodgeTypeSpectrum};
use crate::linalg::{determinant, int, restrict_operator, Matrix, Rational, SpanBuilder, Subspace};
use crate::qspace::QuadraticSpace;
use crate::{Error, Result};

/// Ambient dimension of `Sym^5` of a seven-dimensional space.
pub const DEFAULT_SYM_CAP: usize = 462;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `C(h + k - 1, k)`.
pub fn sym_dim(h: usize, k: usize) -> usize {
    if h == 0 {
        return usize::from(k == 0);
    }
    binomial(h + k - 1, k)
}

/// `dim Sym^k - dim Sym^(k-2)`.
pub fn harmonic_dim(h: usize, k: usize) -> usize {
    sym_dim(h, k) - if k >= 2 { sym_dim(h, k - 2) } else { 0 }
}

/// Degree-`k` monomials in `h` variables as exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    h: usize,
    k: usize,
    exps: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(h: usize, k: usize) -> Self {
        let mut exps = Vec::with_capacity(sym_dim(h, k));
        fn walk(start: usize, h: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for i in start..h {
                cur[i] += 1;
                walk(i, h, left - 1, cur, out);
                cur[i] -= 1;
            }
        }
        if h > 0 || k == 0 {
            walk(0, h, k, &mut vec![0; h], &mut exps);
        }
        let index = exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        MonomialBasis { h, k, exps, index }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self, i: usize) -> &[u32] {
        &self.exps[i]
    }

    /// The monomial as a sorted list of variable indices.
    pub fn multiset(&self, i: usize) -> Vec<usize> {
        self.exps[i]
            .iter()
            .enumerate()
            .flat_map(|(v, &e)| core::iter::repeat_n(v, e as usize))
            .collect()
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `Sym^k` of a quadratic space with its contraction and `Q`-multiplication.
///
/// The contraction is `½ Σ G_ij ∂_i ∂_j` for the Gram matrix `G`; `Q` is the
/// element `Σ (G^-1)_ij x_i x_j` of `Sym^2` defined by the inverse form. Both
/// commute with the orthogonal group.
#[derive(Clone, Debug)]
pub struct SymTensorSpace {
    space: QuadraticSpace,
    k: usize,
    basis: MonomialBasis,
    lower: MonomialBasis,
    contraction: Matrix,
    q_mult: Matrix,
}

impl SymTensorSpace {
    pub fn new(space: &QuadraticSpace, k: usize) -> Result<Self> {
        Self::with_cap(space, k, DEFAULT_SYM_CAP)
    }

    pub fn with_cap(space: &QuadraticSpace, k: usize, cap: usize) -> Result<Self> {
        let h = space.dim();
        let dim = sym_dim(h, k);
        if dim > cap {
            return Err(Error::CapExceeded { requested: dim, cap });
        }
        let basis = MonomialBasis::new(h, k);
        let lower = MonomialBasis::new(h, k.saturating_sub(2));
        let (contraction, q_mult) = if k >= 2 {
            (
                contraction_matrix(space.gram(), &basis, &lower),
                q_mult_matrix(&space.inverse_form().components().clone(), &lower, &basis),
            )
        } else {
            (Matrix::zeros(0, basis.len()), Matrix::zeros(basis.len(), 0))
        };
        Ok(SymTensorSpace {
            space: space.clone(),
            k,
            basis,
            lower,
            contraction,
            q_mult,
        })
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn h(&self) -> usize {
        self.space.dim()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    /// `Sym^k -> Sym^(k-2)`; empty for `k < 2`.
    pub fn contraction(&self) -> &Matrix {
        &self.contraction
    }

    /// `Sym^(k-2) -> Sym^k`; empty for `k < 2`.
    pub fn q_mult(&self) -> &Matrix {
        &self.q_mult
    }

    pub fn lower_basis(&self) -> &MonomialBasis {
        &self.lower
    }
}

fn contraction_matrix(g: &Matrix, src: &MonomialBasis, dst: &MonomialBasis) -> Matrix {
    let h = src.h();
    let half = Rational::new(1.into(), 2.into());
    let mut m = Matrix::zeros(dst.len(), src.len());
    for col in 0..src.len() {
        let a = src.exponents(col);
        for i in 0..h {
            for j in i..h {
                let gij = &g[(i, j)];
                if gij.is_zero() {
                    continue;
                }
                let mut b = a.to_vec();
                let factor = if i == j {
                    if a[i] < 2 {
                        continue;
                    }
                    b[i] -= 2;
                    int(i64::from(a[i] * (a[i] - 1))) * &half
                } else {
                    if a[i] == 0 || a[j] == 0 {
                        continue;
                    }
                    b[i] -= 1;
                    b[j] -= 1;
                    // ½ (G_ij + G_ji) ∂_i ∂_j
                    int(i64::from(a[i] * a[j]))
                };
                let row = dst.index_of(&b).expect("lower monomial");
                m[(row, col)] += factor * gij;
            }
        }
    }
    m
}

fn q_mult_matrix(ginv: &Matrix, src: &MonomialBasis, dst: &MonomialBasis) -> Matrix {
    let h = src.h();
    let mut m = Matrix::zeros(dst.len(), src.len());
    for col in 0..src.len() {
        let a = src.exponents(col);
        for i in 0..h {
            for j in i..h {
                let c = &ginv[(i, j)];
                if c.is_zero() {
                    continue;
                }
                let mut b = a.to_vec();
                b[i] += 1;
                b[j] += 1;
                let row = dst.index_of(&b).expect("higher monomial");
                if i == j {
                    m[(row, col)] += c;
                } else {
                    m[(row, col)] += int(2) * c;
                }
            }
        }
    }
    m
}

/// `v^k` on the degree-`k` monomial basis.
pub fn vector_power(v: &[Rational], basis: &MonomialBasis) -> Vec<Rational> {
    let kf = factorial(basis.k() as u32);
    (0..basis.len())
        .map(|i| {
            let a = basis.exponents(i);
            let mut c = Rational::from_integer(kf.clone());
            for (x, &e) in v.iter().zip(a) {
                if e > 0 {
                    c = c * num_traits::pow(x.clone(), e as usize) / Rational::from_integer(factorial(e));
                }
            }
            c
        })
        .collect()
}

/// Derivation extension `Σ op_ri x_r ∂_i` of `op` to `Sym^k`.
pub fn derivation(op: &Matrix, basis: &MonomialBasis) -> Matrix {
    let h = basis.h();
    assert!(op.rows() == h && op.cols() == h, "operator size");
    let mut m = Matrix::zeros(basis.len(), basis.len());
    for col in 0..basis.len() {
        let a = basis.exponents(col);
        for i in (0..h).filter(|&i| a[i] > 0) {
            for r in 0..h {
                let c = &op[(r, i)];
                if c.is_zero() {
                    continue;
                }
                let mut b = a.to_vec();
                b[i] -= 1;
                b[r] += 1;
                let row = basis.index_of(&b).expect("monomial");
                m[(row, col)] += int(i64::from(a[i])) * c;
            }
        }
    }
    m
}

/// Multiplicative extension `Sym^k(op)`.
pub fn power_map(op: &Matrix, basis: &MonomialBasis) -> Matrix {
    let h = basis.h();
    assert!(op.rows() == h && op.cols() == h, "operator size");
    let mut m = Matrix::zeros(basis.len(), basis.len());
    for col in 0..basis.len() {
        let mut poly: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        poly.insert(vec![0; h], Rational::one());
        for i in basis.multiset(col) {
            let mut next = BTreeMap::new();
            for (mono, c) in &poly {
                for r in 0..h {
                    let t = &op[(r, i)];
                    if t.is_zero() {
                        continue;
                    }
                    let mut b = mono.clone();
                    b[r] += 1;
                    *next.entry(b).or_insert_with(Rational::zero) += c * t;
                }
            }
            poly = next;
        }
        for (mono, c) in poly {
            let row = basis.index_of(&mono).expect("monomial");
            m[(row, col)] = c;
        }
    }
    m
}

/// Kernel of the contraction, i.e. the harmonic part of `Sym^k`.
pub fn harmonic(sym: &SymTensorSpace) -> Subspace {
    if sym.k() < 2 {
        return Subspace::full(sym.dim());
    }
    sym.contraction().kernel()
}

/// Image of `Q^l · Harm^(k-2l)` inside `Sym^k`.
#[derive(Clone, Debug)]
pub struct Block {
    pub l: usize,
    pub subspace: Subspace,
}

/// The blocks are independent and fill `Sym^k`: the determinant of their
/// stacked bases is nonzero.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub k: usize,
    pub blocks: Vec<Block>,
    pub total: usize,
    pub minor: Rational,
}

impl Decomposition {
    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.subspace.dim()).collect()
    }
}

/// `Q^l` as a map `Sym^(k-2l) -> Sym^k`, built from the `q_mult` of each degree.
pub fn q_power(space: &QuadraticSpace, k: usize, l: usize) -> Result<Matrix> {
    let mut m = Matrix::identity(sym_dim(space.dim(), k - 2 * l));
    for step in 1..=l {
        let s = SymTensorSpace::with_cap(space, k - 2 * l + 2 * step, usize::MAX)?;
        m = s.q_mult() * &m;
    }
    Ok(m)
}

pub fn decompose(space: &QuadraticSpace, k: usize) -> Result<Decomposition> {
    decompose_with_cap(space, k, DEFAULT_SYM_CAP)
}

pub fn decompose_with_cap(space: &QuadraticSpace, k: usize, cap: usize) -> Result<Decomposition> {
    let top = SymTensorSpace::with_cap(space, k, cap)?;
    let mut blocks = Vec::new();
    let mut stacked = Vec::with_capacity(top.dim());
    for l in 0..=k / 2 {
        let lower = SymTensorSpace::with_cap(space, k - 2 * l, cap)?;
        let harm = harmonic(&lower);
        let qp = q_power(space, k, l)?;
        let image: Vec<Vec<Rational>> = harm.basis().iter().map(|v| qp.mul_vec(v)).collect();
        let sub = Subspace::span(top.dim(), image);
        if sub.dim() != harm.dim() {
            return Err(Error::DecompositionFailure);
        }
        stacked.extend(sub.basis().iter().cloned());
        blocks.push(Block { l, subspace: sub });
    }
    let total = stacked.len();
    if total != top.dim() {
        return Err(Error::DecompositionFailure);
    }
    let minor = determinant(&Matrix::from_rows(stacked)?)?;
    if minor.is_zero() {
        return Err(Error::DecompositionFailure);
    }
    Ok(Decomposition {
        k,
        blocks,
        total,
        minor,
    })
}

/// Outcome of spanning the harmonics by powers of isotropic vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicSpan {
    pub spans: bool,
    pub span_dim: usize,
    pub harmonic_dim: usize,
    pub height: u32,
    pub vectors_used: usize,
}

/// Heights searched before concluding that an indefinite form has no
/// rational zero of small height.
pub const EMPTY_SEARCH_HEIGHT: u32 = 8;

/// Heights are enumerated until the span reaches the harmonics, the point
/// budget runs out, or `EMPTY_SEARCH_HEIGHT` passes without any zero.
pub fn isotropic_span_check(sym: &SymTensorSpace) -> Result<IsotropicSpan> {
    isotropic_span_check_bounded(sym, 4_000_000)
}

/// As [`isotropic_span_check`], enumerating at most `max_points` integer
/// vectors in total.
pub fn isotropic_span_check_bounded(sym: &SymTensorSpace, max_points: u64) -> Result<IsotropicSpan> {
    let space = sym.space();
    let (p, n) = space.signature();
    if p == 0 || n == 0 {
        return Err(Error::NotApplicable);
    }
    let h = space.dim();
    let gram = integer_gram(space.gram());
    let harm = harmonic(sym);
    let mut span = SpanBuilder::new(sym.dim());
    let mut used = 0usize;
    let mut height = 0u32;
    let mut enumerated = 0u64;
    loop {
        let next = height + 1;
        let points = u64::from(2 * next + 1).checked_pow(h as u32);
        match points.and_then(|c| c.checked_add(enumerated)) {
            Some(total) if total <= max_points => enumerated = total,
            _ => break,
        }
        height = next;
        for v in shell(h, height as i64) {
            if quadratic_value(&gram, &v) != 0 {
                continue;
            }
            used += 1;
            let x: Vec<Rational> = v.iter().map(|&c| int(c)).collect();
            span.insert(vector_power(&x, sym.basis()));
            if span.dim() == harm.dim() {
                break;
            }
        }
        if span.dim() == harm.dim() {
            break;
        }
        if span.dim() == 0 && height >= EMPTY_SEARCH_HEIGHT {
            break;
        }
    }
    if used == 0 {
        return Err(Error::NotApplicable);
    }
    let span_dim = span.dim();
    let spanned = span.into_subspace();
    Ok(IsotropicSpan {
        spans: spanned.same_as(&harm),
        span_dim,
        harmonic_dim: harm.dim(),
        height,
        vectors_used: used,
    })
}

fn integer_gram(g: &Matrix) -> Vec<Vec<i128>> {
    let l = g.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    (0..g.rows())
        .map(|i| {
            g.row(i)
                .iter()
                .map(|x| (x.numer() * (&l / x.denom())).to_i128().expect("small Gram entries"))
                .collect()
        })
        .collect()
}

fn quadratic_value(g: &[Vec<i128>], v: &[i64]) -> i128 {
    let mut s = 0i128;
    for (i, row) in g.iter().enumerate() {
        if v[i] == 0 {
            continue;
        }
        for (j, &gij) in row.iter().enumerate() {
            s += i128::from(v[i]) * gij * i128::from(v[j]);
        }
    }
    s
}

/// Integer vectors of max-norm exactly `height` whose first nonzero entry is
/// positive, in lexicographic order.
fn shell(h: usize, height: i64) -> impl Iterator<Item = Vec<i64>> {
    let mut cur = vec![-height; h];
    let mut done = h == 0;
    core::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let v = cur.clone();
        // advance odometer
        let mut i = h;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if cur[i] < height {
                cur[i] += 1;
                break;
            }
            cur[i] = -height;
        }
        let on_shell = v.iter().any(|x| x.abs() == height);
        let positive = v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0);
        if on_shell && positive {
            return Some(v);
        }
    })
}

/// Matrix of the invariant symmetric form induced on `Sym^k` by a diagonal
/// form: `B(x^a, x^a) = Π a_i! d_i^a_i`, zero off the diagonal.
pub fn diagonal_invariant_form(diag: &[Rational], basis: &MonomialBasis) -> Vec<Rational> {
    (0..basis.len())
        .map(|i| {
            basis
                .exponents(i)
                .iter()
                .zip(diag)
                .fold(Rational::one(), |acc, (&e, d)| {
                    acc * Rational::from_integer(factorial(e)) * num_traits::pow(d.clone(), e as usize)
                })
        })
        .collect()
}

/// Basis `X_ab: e_a -> d_a e_b, e_b -> -d_b e_a` (`a < b`) of `so` of a
/// diagonal form.
pub fn so_generators(diag: &[Rational]) -> Vec<Matrix> {
    let h = diag.len();
    let mut out = Vec::new();
    for a in 0..h {
        for b in a + 1..h {
            let mut x = Matrix::zeros(h, h);
            x[(b, a)] = diag[a].clone();
            x[(a, b)] = -diag[b].clone();
            out.push(x);
        }
    }
    out
}

/// The part of `Sym^k` of Hodge level at most two, computed twice.
#[derive(Clone, Debug)]
pub struct LevelTwoPart {
    /// In the monomial basis of the original coordinates.
    pub subspace: Subspace,
    /// Dimension of the sum of the eigenspaces of level above two.
    pub high_level_dim: usize,
    /// Dimension of the smallest orthogonal-invariant subspace containing them.
    pub closure_dim: usize,
}

/// Kernel route: `W = Σ_{m>2} ker(D^2 + (N m / 2)^2)` for the derivation `D`
/// of the rotation generator collects the eigenvectors of level above two;
/// its closure `U` under `so(q)` is a sum of orthogonal blocks and the
/// level-at-most-two blocks are `U^⊥` under the invariant form. Image route:
/// `Q^((k-1)/2) · H^2`. The two must coincide and have dimension `h`.
pub fn level_two_part(hk: &HKStructure, k: usize) -> Result<LevelTwoPart> {
    level_two_part_with_cap(hk, k, DEFAULT_SYM_CAP)
}

pub fn level_two_part_with_cap(hk: &HKStructure, k: usize, cap: usize) -> Result<LevelTwoPart> {
    if k.is_multiple_of(2) {
        return Err(Error::InvalidInput("level filtration needs odd k".into()));
    }
    let space = hk.space();
    let h = space.dim();
    let dim = sym_dim(h, k);
    if dim > cap {
        return Err(Error::CapExceeded { requested: dim, cap });
    }
    let t = space.basis_change();
    let t_inv = t.inverse()?;
    let diag = space.diag_values().to_vec();
    let basis = MonomialBasis::new(h, k);

    // Kernel route, in diagonal coordinates.
    let a = &(&t_inv * &hk.rotation_generator()) * t;
    let d = derivation(&a, &basis);
    let d2 = &d * &d;
    let half_n = hk.period().norm() / int(2);
    let mut high = Subspace::zero(dim);
    for m in (4..=2 * k).step_by(2) {
        let c = &half_n * int(m as i64);
        let ker = d2.shift_diagonal(&(&c * &c)).kernel();
        high = high.sum(&ker);
    }
    let high_level_dim = high.dim();

    let gens: Vec<Matrix> = so_generators(&diag).iter().map(|x| derivation(x, &basis)).collect();
    let mut closure = SpanBuilder::new(dim);
    let mut queue: Vec<Vec<Rational>> = Vec::new();
    for v in high.basis() {
        if closure.insert(v.clone()) {
            queue.push(v.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for g in &gens {
            let w = g.mul_vec(&v);
            if closure.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    let closure = closure.into_subspace();
    let closure_dim = closure.dim();
    let form = diagonal_invariant_form(&diag, &basis);
    let pairing_rows: Vec<Vec<Rational>> = closure
        .basis()
        .iter()
        .map(|u| u.iter().zip(&form).map(|(x, b)| x * b).collect())
        .collect();
    let kernel_route = if pairing_rows.is_empty() {
        Subspace::full(dim)
    } else {
        Matrix::from_rows(pairing_rows)?.kernel()
    };

    // Image route, also in diagonal coordinates.
    let diag_space = QuadraticSpace::diagonal(&diag)?;
    let qp = q_power(&diag_space, k, (k - 1) / 2)?;
    let image_route = Subspace::span(dim, (0..h).map(|i| qp.column(i)).collect());

    if !kernel_route.same_as(&image_route) || image_route.dim() != h {
        return Err(Error::LevelMismatch {
            kernel_dim: kernel_route.dim(),
            image_dim: image_route.dim(),
        });
    }
    let back = power_map(t, &basis);
    Ok(LevelTwoPart {
        subspace: image_route.map(&back),
        high_level_dim,
        closure_dim,
    })
}

/// Hodge level of the weight-`2k` structure on each decomposition block.
#[derive(Clone, Debug)]
pub struct BlockLevel {
    pub l: usize,
    pub dim: usize,
    pub spectrum: HodgeTypeSpectrum,
    pub level: u32,
}

pub fn block_levels(hk: &HKStructure, dec: &Decomposition) -> Result<Vec<BlockLevel>> {
    let h = hk.dim();
    let basis = MonomialBasis::new(h, dec.k);
    let d = derivation(&hk.rotation_generator(), &basis);
    dec.blocks
        .iter()
        .map(|b| {
            let cols = b.subspace.basis().to_vec();
            let restricted = restrict_operator(&d, &Matrix::from_columns(basis.len(), &cols))?;
            let spectrum = type_spectrum(&restricted, hk.period().norm(), 2 * dec.k as u32)?;
            let level = spectrum.level();
            Ok(BlockLevel {
                l: b.l,
                dim: b.subspace.dim(),
                spectrum,
                level,
            })
        })
        .collect()
}

/// Whether `Harm^k` is carried into itself by the induced action of `g`.
pub fn harmonic_invariant_under(sym: &SymTensorSpace, g: &Matrix) -> bool {
    let harm = harmonic(sym);
    let m = power_map(g, sym.basis());
    harm.basis().iter().all(|v| harm.contains(&m.mul_vec(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frac;
    use crate::qspace::unit_vector;

    fn diag(v: &[i64]) -> QuadraticSpace {
        QuadraticSpace::from_diagonal_i64(v).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(sym_dim(5, 3), 35);
        assert_eq!(sym_dim(7, 3), 84);
        assert_eq!(sym_dim(7, 5), 462);
        assert_eq!(sym_dim(4, 0), 1);
        let s = SymTensorSpace::new(&diag(&[1, 2, 3, 4, 5]), 0).unwrap();
        assert_eq!((s.dim(), s.contraction().rows()), (1, 0));
    }

    #[test]
    fn multiset_lex_order() {
        let b = MonomialBasis::new(3, 2);
        let sets: Vec<_> = (0..b.len()).map(|i| b.multiset(i)).collect();
        assert_eq!(
            sets,
            vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2], vec![2, 2]]
        );
    }

    #[test]
    fn cap_is_enforced() {
        let s = diag(&[1, 1, 1, 1, 1, 1, 1, -1]);
        assert_eq!(
            SymTensorSpace::new(&s, 5).err(),
            Some(Error::CapExceeded {
                requested: 792,
                cap: DEFAULT_SYM_CAP
            })
        );
    }

    #[test]
    fn harmonic_dims() {
        let s = SymTensorSpace::new(&diag(&[1, 1, 1, -1, -1]), 3).unwrap();
        assert_eq!(harmonic(&s).dim(), 30);
        let s = SymTensorSpace::new(&diag(&[1, 1, -1]), 2).unwrap();
        assert_eq!(harmonic(&s).dim(), 5);
        let s = SymTensorSpace::new(&diag(&[1, 1, -1]), 1).unwrap();
        assert_eq!(harmonic(&s).dim(), 3);
    }

    #[test]
    fn q_is_not_harmonic_and_contracts_to_h() {
        let g = Matrix::from_rows(vec![
            vec![int(2), int(1), int(0)],
            vec![int(1), int(2), int(0)],
            vec![int(0), int(0), frac(-1, 3)],
        ])
        .unwrap();
        let s = SymTensorSpace::new(&QuadraticSpace::new(g).unwrap(), 2).unwrap();
        let q = s.q_mult().column(0);
        assert_eq!(s.contraction().mul_vec(&q), vec![int(3)]);
    }

    #[test]
    fn isotropic_powers_are_harmonic() {
        let s = SymTensorSpace::new(&diag(&[1, 1, -1, -2]), 3).unwrap();
        let p = vector_power(&[int(1), int(0), int(1), int(0)], s.basis());
        assert!(s.contraction().mul_vec(&p).iter().all(Zero::is_zero));
        let p = vector_power(&[int(1), int(1), int(0), int(1)], s.basis());
        assert!(s.contraction().mul_vec(&p).iter().all(Zero::is_zero));
    }

    #[test]
    fn decompositions() {
        let d = decompose(&diag(&[1, 1, 1, -1, -1]), 3).unwrap();
        assert_eq!(d.block_dims(), vec![30, 5]);
        let d = decompose(&diag(&[1, 2, -1, -3]), 4).unwrap();
        assert_eq!(d.block_dims(), vec![25, 9, 1]);
        assert_eq!(d.total, 35);
        let d = decompose(&diag(&[1, 1, -1]), 2).unwrap();
        assert_eq!(d.block_dims(), vec![5, 1]);
    }

    #[test]
    fn isotropic_spans() {
        let hyperbolic = Matrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]]);
        let s = SymTensorSpace::new(&QuadraticSpace::new(hyperbolic).unwrap(), 2).unwrap();
        assert!(isotropic_span_check(&s).unwrap().spans);
        let s = SymTensorSpace::new(&diag(&[1, 1, 1]), 2).unwrap();
        assert_eq!(isotropic_span_check(&s).err(), Some(Error::NotApplicable));
        // x^2 - 2y^2 has no rational zero.
        let s = SymTensorSpace::new(&diag(&[1, -2]), 2).unwrap();
        assert_eq!(isotropic_span_check(&s).err(), Some(Error::NotApplicable));
        // The cubic harmonics of x^2 + y^2 - z^2 need the zero (3, 4, 5).
        let s = SymTensorSpace::new(&diag(&[1, 1, -1]), 3).unwrap();
        let r = isotropic_span_check(&s).unwrap();
        assert!(r.spans && r.height >= 5, "{r:?}");
    }

    #[test]
    fn power_map_is_multiplicative_on_vectors() {
        let b = MonomialBasis::new(3, 3);
        let g = Matrix::from_i64(&[&[1, 2, 0], &[0, 1, -1], &[3, 0, 1]]);
        let v = [int(1), int(-2), int(5)];
        let gv = g.mul_vec(&v);
        assert_eq!(power_map(&g, &b).mul_vec(&vector_power(&v, &b)), vector_power(&gv, &b));
    }

    #[test]
    fn harmonic_invariant_under_swap() {
        let s = SymTensorSpace::new(&diag(&[2, 2, -1, -1]), 3).unwrap();
        let mut swap = Matrix::zeros(4, 4);
        swap[(0, 1)] = int(1);
        swap[(1, 0)] = int(1);
        swap[(2, 3)] = int(1);
        swap[(3, 2)] = int(1);
        assert!(harmonic_invariant_under(&s, &swap));
    }

    fn hk(d: &[i64]) -> HKStructure {
        let h = d.len();
        HKStructure::new(diag(d), unit_vector(h, 0), unit_vector(h, 1)).unwrap()
    }

    #[test]
    fn level_two_small() {
        let l = level_two_part(&hk(&[1, 1, -1]), 1).unwrap();
        assert_eq!(l.subspace.dim(), 3);
        assert_eq!(l.high_level_dim, 0);
        let l = level_two_part(&hk(&[1, 1, -1, -1, -1]), 3).unwrap();
        assert_eq!(l.subspace.dim(), 5);
        assert_eq!(l.closure_dim, 30);
    }

    #[test]
    fn block_levels_drop_by_four() {
        let hk = hk(&[1, 1, -1, -2]);
        let dec = decompose(hk.space(), 4).unwrap();
        let lv: Vec<u32> = block_levels(&hk, &dec).unwrap().iter().map(|b| b.level).collect();
        assert_eq!(lv, vec![8, 4, 0]);
    }
}
