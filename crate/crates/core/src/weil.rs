//! Quadratic endomorphisms of weight-one structures and Weil classes.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::hodge::{type_spectrum, HodgeTypeSpectrum, Weight1Structure};
use crate::linalg::{int, rational_sqrt, Matrix, Rational, Subspace};
use crate::{Error, Result};

/// `∧^k` of an `n`-dimensional space, basis `e_S` for `k`-subsets `S` in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct ExteriorPower {
    n: usize,
    k: usize,
    subsets: Vec<Vec<usize>>,
}

impl ExteriorPower {
    pub fn new(n: usize, k: usize) -> Self {
        let mut subsets = Vec::new();
        let mut current = Vec::with_capacity(k);
        fn walk(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                if n - i < k - cur.len() {
                    break;
                }
                cur.push(i);
                walk(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        walk(0, n, k, &mut current, &mut subsets);
        ExteriorPower { n, k, subsets }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.subsets.len()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.subsets.binary_search_by(|x| x.as_slice().cmp(s)).ok()
    }

    /// `D(v_1 ∧ ... ∧ v_k) = Σ_i v_1 ∧ ... ∧ op v_i ∧ ... ∧ v_k`.
    pub fn derivation(&self, op: &Matrix) -> Result<Matrix> {
        if op.rows() != self.n || op.cols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: op.rows(),
            });
        }
        let dim = self.dim();
        let mut m = Matrix::zeros(dim, dim);
        for (col, s) in self.subsets.iter().enumerate() {
            for (pos, &i) in s.iter().enumerate() {
                for r in 0..self.n {
                    let c = &op[(r, i)];
                    if c.is_zero() {
                        continue;
                    }
                    if r != i && s.contains(&r) {
                        continue;
                    }
                    let mut t = s.clone();
                    t[pos] = r;
                    // Moving `r` to its sorted place passes the entries strictly between `i` and `r`.
                    let (lo, hi) = if r < i { (r, i) } else { (i, r) };
                    let crossed = s.iter().filter(|&&x| lo < x && x < hi).count();
                    t.sort_unstable();
                    let row = self.index_of(&t).expect("subset");
                    if crossed % 2 == 0 {
                        m[(row, col)] += c;
                    } else {
                        m[(row, col)] -= c;
                    }
                }
            }
        }
        Ok(m)
    }
}

/// `φ` with `φ^2 = -d` commuting with `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticEndo {
    phi: Matrix,
    j: Matrix,
    d: Rational,
}

impl QuadraticEndo {
    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    pub fn j(&self) -> &Matrix {
        &self.j
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.phi.rows()
    }

    /// `φ J`, which squares to `d`.
    pub fn phi_j(&self) -> Matrix {
        &self.phi * &self.j
    }
}

pub fn check_quadratic_endo(w: &Weight1Structure, phi: &Matrix) -> Result<QuadraticEndo> {
    let j = w.j();
    if !phi.is_square() {
        return Err(Error::NotSquare {
            rows: phi.rows(),
            cols: phi.cols(),
        });
    }
    if phi.rows() != j.rows() {
        return Err(Error::DimensionMismatch {
            expected: j.rows(),
            found: phi.rows(),
        });
    }
    let sq = phi * phi;
    let d = match sq.scalar_value() {
        Some(s) => -s,
        None if phi.rows() == 0 => return Err(Error::NotQuadratic),
        None => return Err(Error::NonScalarSquare),
    };
    if !d.is_positive() {
        return Err(Error::NotQuadratic);
    }
    if !phi.commutator(j).is_zero() {
        return Err(Error::NotCommutingWithJ);
    }
    Ok(QuadraticEndo {
        phi: phi.clone(),
        j: j.clone(),
        d,
    })
}

/// Multiplicities `(a, b)` of `i√d` and `-i√d` on `H^{1,0}`.
pub fn weil_multiplicities(endo: &QuadraticEndo) -> Result<(usize, usize)> {
    let g = endo.dim() / 2;
    let pj = endo.phi_j();
    match rational_sqrt(&endo.d) {
        Some(m) => {
            let plus = pj.shift_diagonal(&m).nullity();
            let minus = pj.shift_diagonal(&-m).nullity();
            if !plus.is_multiple_of(2) || !minus.is_multiple_of(2) || plus + minus != endo.dim() {
                return Err(Error::WeilInconsistent);
            }
            Ok((plus / 2, minus / 2))
        }
        None => {
            if !pj.trace().is_zero() || !g.is_multiple_of(2) {
                return Err(Error::WeilInconsistent);
            }
            Ok((g / 2, g / 2))
        }
    }
}

/// `ker(D_φ^2 + 16 d)` inside `∧^4 V`, which is the `K`-line `∧^4_K V`.
pub fn weil_class_space(endo: &QuadraticEndo) -> Result<Subspace> {
    if endo.dim() != 8 {
        return Err(Error::UnexpectedDimension {
            expected: 8,
            found: endo.dim(),
        });
    }
    let ext = ExteriorPower::new(8, 4);
    let dphi = ext.derivation(&endo.phi)?;
    let op = (&dphi * &dphi).shift_diagonal(&(int(16) * &endo.d));
    let ker = op.kernel();
    if ker.dim() != 2 {
        return Err(Error::UnexpectedDimension {
            expected: 2,
            found: ker.dim(),
        });
    }
    Ok(ker)
}

/// Every generator lies in `ker D_J`, the `(2,2)` part of `∧^4 V`.
pub fn certify_22(classes: &Subspace, j: &Matrix) -> Result<bool> {
    let ext = ExteriorPower::new(j.rows(), 4);
    if classes.ambient() != ext.dim() {
        return Err(Error::DimensionMismatch {
            expected: ext.dim(),
            found: classes.ambient(),
        });
    }
    let dj = ext.derivation(j)?;
    Ok(classes.basis().iter().all(|v| dj.mul_vec(v).iter().all(Zero::is_zero)))
}

/// Dimension of the rational `(2,2)` classes in `∧^4 V`.
pub fn hodge_class_dimension(w: &Weight1Structure) -> usize {
    let ext = ExteriorPower::new(w.dim(), 4);
    if ext.dim() == 0 {
        return 0;
    }
    ext.derivation(w.j()).expect("square J").nullity()
}

/// Hodge numbers of the weight-four structure on `∧^4 V` read off `D_J`.
pub fn wedge4_spectrum(w: &Weight1Structure) -> Result<HodgeTypeSpectrum> {
    let ext = ExteriorPower::new(w.dim(), 4);
    let dj = ext.derivation(w.j())?;
    type_spectrum(&dj, &int(2), 4)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilReport {
    pub d: Rational,
    pub mult_plus: usize,
    pub mult_minus: usize,
    pub is_weil: bool,
    pub trace_phi_j_zero: bool,
    /// Present for eight-dimensional inputs only.
    pub weil_space_dim: Option<usize>,
    pub all_weil_classes_22: Option<bool>,
    pub hodge_class_dim: usize,
}

pub fn analyze(w: &Weight1Structure, phi: &Matrix) -> Result<WeilReport> {
    let endo = check_quadratic_endo(w, phi)?;
    let (a, b) = weil_multiplicities(&endo)?;
    let (weil_space_dim, all_22) = if endo.dim() == 8 {
        let space = weil_class_space(&endo)?;
        (Some(space.dim()), Some(certify_22(&space, w.j())?))
    } else {
        (None, None)
    };
    Ok(WeilReport {
        d: endo.d.clone(),
        mult_plus: a,
        mult_minus: b,
        is_weil: a == b,
        trace_phi_j_zero: endo.phi_j().trace().is_zero(),
        weil_space_dim,
        all_weil_classes_22: all_22,
        hodge_class_dim: hodge_class_dimension(w),
    })
}

/// `J` standard on `2x2` blocks and `φ = m_i J` on block `i`. The
/// multipliers must share one absolute value for `φ^2` to be scalar.
pub fn block_instance(multipliers: &[i64]) -> (Matrix, Matrix) {
    let n = 2 * multipliers.len();
    let mut j = Matrix::zeros(n, n);
    let mut phi = Matrix::zeros(n, n);
    for (b, &m) in multipliers.iter().enumerate() {
        let (r, s) = (2 * b, 2 * b + 1);
        j[(r, s)] = -Rational::one();
        j[(s, r)] = Rational::one();
        phi[(r, s)] = int(-m);
        phi[(s, r)] = int(m);
    }
    (j, phi)
}

/// Standard `J` on `4 * pairs` coordinates and `φ = [[0, -d], [1, 0]] ⊗ I_2`
/// on each group of two blocks, so `φ^2 = -d` for any `d`.
pub fn nonsquare_block_instance(d: i64, pairs: usize) -> (Matrix, Matrix) {
    let (j, _) = block_instance(&vec![1; 2 * pairs]);
    let n = 4 * pairs;
    let mut phi = Matrix::zeros(n, n);
    for t in 0..pairs {
        let o = 4 * t;
        for c in 0..2 {
            phi[(o + 2 + c, o + c)] = Rational::one();
            phi[(o + c, o + 2 + c)] = int(-d);
        }
    }
    (j, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frac;

    fn w1(j: Matrix) -> Weight1Structure {
        Weight1Structure::new(j).unwrap()
    }

    #[test]
    fn exterior_dims_and_order() {
        assert_eq!(ExteriorPower::new(8, 4).dim(), 70);
        assert_eq!(ExteriorPower::new(2, 4).dim(), 0);
        let e = ExteriorPower::new(4, 2);
        assert_eq!(e.subsets()[0], vec![0, 1]);
        assert_eq!(e.subsets()[5], vec![2, 3]);
    }

    #[test]
    fn derivation_of_identity_is_k() {
        let e = ExteriorPower::new(6, 3);
        assert_eq!(e.derivation(&Matrix::identity(6)).unwrap(), Matrix::scalar(20, &int(3)));
    }

    #[test]
    fn derivation_sign_on_swap() {
        // op: e0 -> e2; D(e0 ∧ e1) = e2 ∧ e1 = -e1 ∧ e2.
        let mut op = Matrix::zeros(3, 3);
        op[(2, 0)] = int(1);
        let e = ExteriorPower::new(3, 2);
        let d = e.derivation(&op).unwrap();
        let col: Vec<_> = d.column(e.index_of(&[0, 1]).unwrap());
        assert_eq!(col[e.index_of(&[1, 2]).unwrap()], int(-1));
        assert_eq!(col.iter().filter(|x| !x.is_zero()).count(), 1);
    }

    #[test]
    fn derivation_is_a_lie_morphism() {
        let a = Matrix::from_i64(&[&[1, 2, 0, -1], &[0, 3, 1, 0], &[2, 0, 0, 1], &[1, 1, 1, 1]]);
        let b = Matrix::from_i64(&[&[0, 1, 0, 0], &[-1, 0, 2, 0], &[0, 0, 1, 3], &[4, 0, 0, -2]]);
        let e = ExteriorPower::new(4, 2);
        let lhs = e.derivation(&a.commutator(&b)).unwrap();
        let rhs = e.derivation(&a).unwrap().commutator(&e.derivation(&b).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn quadratic_endo_checks() {
        let (j, _) = block_instance(&[1, 1]);
        let w = w1(j.clone());
        assert_eq!(check_quadratic_endo(&w, &j).unwrap().d(), &int(1));
        assert_eq!(check_quadratic_endo(&w, &j.scale(&int(3))).unwrap().d(), &int(9));
        assert_eq!(
            check_quadratic_endo(&w, &Matrix::identity(4)).err(),
            Some(Error::NotQuadratic)
        );
        let n = Matrix::from_i64(&[&[1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert_eq!(check_quadratic_endo(&w, &n).err(), Some(Error::NonScalarSquare));
        let mut c = j.clone();
        c[(0, 1)] = int(-2);
        c[(1, 0)] = frac(1, 2);
        assert_eq!(check_quadratic_endo(&w, &c).err(), Some(Error::NotCommutingWithJ));
    }

    #[test]
    fn phi_equal_j_is_unbalanced() {
        let (j, _) = block_instance(&[1; 4]);
        let w = w1(j.clone());
        let endo = check_quadratic_endo(&w, &j).unwrap();
        assert_eq!(weil_multiplicities(&endo).unwrap(), (4, 0));
        let space = weil_class_space(&endo).unwrap();
        assert_eq!(space.dim(), 2);
        assert!(!certify_22(&space, &j).unwrap());
    }

    #[test]
    fn balanced_block_instance() {
        let (j, phi) = block_instance(&[1, 1, -1, -1]);
        let r = analyze(&w1(j), &phi).unwrap();
        assert_eq!((r.mult_plus, r.mult_minus), (2, 2));
        assert!(r.is_weil && r.trace_phi_j_zero);
        assert_eq!(r.weil_space_dim, Some(2));
        assert_eq!(r.all_weil_classes_22, Some(true));
        assert!(r.hodge_class_dim >= 2);
    }

    #[test]
    fn hodge_class_dimension_matches_binomials() {
        // h^{2,2} of ∧^4 of a 4-dimensional H^{1,0}: C(4,2)^2 = 36.
        let (j, _) = block_instance(&[1; 4]);
        let w = w1(j);
        assert_eq!(hodge_class_dimension(&w), 36);
        let spectrum = wedge4_spectrum(&w).unwrap();
        assert_eq!(spectrum.get(2, 2), 36);
        assert_eq!((spectrum.get(4, 0), spectrum.get(3, 1)), (1, 16));
        let (j, _) = block_instance(&[1]);
        assert_eq!(hodge_class_dimension(&w1(j)), 0);
    }

    #[test]
    fn nonsquare_d() {
        let (j, phi) = nonsquare_block_instance(2, 2);
        let w = w1(j);
        let endo = check_quadratic_endo(&w, &phi).unwrap();
        assert_eq!(endo.d(), &int(2));
        assert_eq!(weil_multiplicities(&endo).unwrap(), (2, 2));
        let space = weil_class_space(&endo).unwrap();
        assert!(certify_22(&space, w.j()).unwrap());
    }

    #[test]
    fn rational_square_d() {
        let (j, phi) = block_instance(&[2, -2, 2, 2]);
        let endo = check_quadratic_endo(&w1(j), &phi).unwrap();
        assert_eq!(endo.d(), &int(4));
        assert_eq!(weil_multiplicities(&endo).unwrap(), (3, 1));
    }
}
