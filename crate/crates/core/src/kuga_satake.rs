//! Kuga-Satake complex structure on the even Clifford algebra.
//!
//! For a rationally presented period `(alpha, beta)` of norm `N`, the element
//! `e = alpha * beta / N` is even, rational and squares to `-1`. Left
//! multiplication by `e` is the complex structure `J`; right multiplications
//! commute with it and give the endomorphisms used throughout.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::clifford::{CliffordAlgebra, CliffordElement, Grading, Parity};
use crate::hodge::{HKStructure, Weight1Structure};
use crate::linalg::{rank, Matrix, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct KSStructure {
    base: HKStructure,
    algebra: CliffordAlgebra,
    alpha: CliffordElement,
    beta: CliffordElement,
    e: CliffordElement,
    j_even: Matrix,
}

impl KSStructure {
    pub fn build(base: HKStructure, cap: usize) -> Result<Self> {
        let algebra = CliffordAlgebra::from_space(base.space(), cap)?;
        let alpha = algebra.vector_from_space(base.space(), base.period().alpha());
        let beta = algebra.vector_from_space(base.space(), base.period().beta());
        let e = algebra.mul(&alpha, &beta)?.scale(&base.period().norm().recip());
        let j_even = algebra.left_mul_operator(&e, Grading::Even)?;
        Ok(KSStructure {
            base,
            algebra,
            alpha,
            beta,
            e,
            j_even,
        })
    }

    pub fn base(&self) -> &HKStructure {
        &self.base
    }

    pub fn algebra(&self) -> &CliffordAlgebra {
        &self.algebra
    }

    pub fn e(&self) -> &CliffordElement {
        &self.e
    }

    pub fn alpha(&self) -> &CliffordElement {
        &self.alpha
    }

    pub fn beta(&self) -> &CliffordElement {
        &self.beta
    }

    /// `J` on `C+`, in the even blade basis.
    pub fn j_even(&self) -> &Matrix {
        &self.j_even
    }

    pub fn j_on(&self, g: Grading) -> Matrix {
        self.algebra.left_mul_operator(&self.e, g).expect("e is even")
    }

    pub fn even_dim(&self) -> usize {
        self.algebra.even_dim()
    }

    /// Complex dimension of the torus built on `C+`, i.e. `2^(h-2)`.
    pub fn torus_complex_dim(&self) -> usize {
        self.even_dim() / 2
    }

    pub fn weight1(&self) -> Result<Weight1Structure> {
        Weight1Structure::new(self.j_even.clone())
    }

    /// Grade-1 element for a vector in the original coordinates.
    pub fn vector(&self, x: &[Rational]) -> CliffordElement {
        self.algebra.vector_from_space(self.base.space(), x)
    }

    /// First orthogonal basis vector not lying in the period plane.
    pub fn default_v0(&self) -> CliffordElement {
        let space = self.base.space();
        let t = space.basis_change();
        let (a, b) = (self.base.period().alpha(), self.base.period().beta());
        for i in 0..space.dim() {
            let col = t.column(i);
            let m = Matrix::from_rows(alloc::vec![a.to_vec(), b.to_vec(), col]).expect("uniform rows");
            if m.rank() == 3 {
                return self.algebra.basis_vector(i);
            }
        }
        // h = 2: the plane is everything.
        self.algebra.basis_vector(0)
    }

    pub fn grade_one_norm(&self, v: &CliffordElement) -> Result<Rational> {
        check_vector(v)?;
        Ok(self.algebra.pairing(v, v))
    }
}

fn check_vector(v: &CliffordElement) -> Result<()> {
    if v.terms().any(|(b, _)| b.grade() != 1) {
        return Err(Error::NotAVector);
    }
    Ok(())
}

/// `e = alpha * beta / N`.
pub fn build_e(hk: &HKStructure, cap: usize) -> Result<CliffordElement> {
    Ok(KSStructure::build(hk.clone(), cap)?.e)
}

pub fn ks_weight1(hk: &HKStructure, cap: usize) -> Result<Weight1Structure> {
    KSStructure::build(hk.clone(), cap)?.weight1()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub family: &'static str,
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommutatorReport {
    pub checks: Vec<IdentityCheck>,
}

impl CommutatorReport {
    fn record(&mut self, family: &'static str, name: String, passed: bool) {
        self.checks.push(IdentityCheck { family, name, passed });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn family_passed(&self, family: &str) -> bool {
        self.checks.iter().filter(|c| c.family == family).all(|c| c.passed)
    }

    /// Fails with the name of the first violated identity.
    pub fn ensure(&self) -> Result<()> {
        match self.checks.iter().find(|c| !c.passed) {
            Some(c) => Err(Error::CommutatorViolation(c.name.clone())),
            None => Ok(()),
        }
    }
}

pub const FAMILY_COMPLEMENT: &str = "complement-commutes";
pub const FAMILY_PLANE: &str = "plane-anticommutes";
pub const FAMILY_ROTATION: &str = "rotation-identities";
pub const FAMILY_RIGHT: &str = "right-multiplication";

/// Checks, on the full Clifford algebra:
/// (i) `L_w L_e = L_e L_w` for a basis `w` of the complement of the plane;
/// (ii) `L_v L_e = -L_e L_v` for `v` in `{alpha, beta}`;
/// (iii) `alpha e = beta`, `e alpha = -beta`, `beta e = -alpha`, `e beta = alpha`;
/// (iv) `R_c J = J R_c` for every `c` in `right`.
pub fn structure_commutators(ks: &KSStructure, right: &[CliffordElement]) -> Result<CommutatorReport> {
    let alg = &ks.algebra;
    let j_full = ks.j_on(Grading::Full);
    let mut report = CommutatorReport::default();

    for (k, w) in ks.base.plane_complement().basis().iter().enumerate() {
        let lw = alg.left_mul_operator(&ks.vector(w), Grading::Full)?;
        report.record(
            FAMILY_COMPLEMENT,
            format!("L_w{} L_e = L_e L_w{}", k + 1, k + 1),
            (&lw * &j_full) == (&j_full * &lw),
        );
    }
    for (name, v) in [("alpha", &ks.alpha), ("beta", &ks.beta)] {
        let lv = alg.left_mul_operator(v, Grading::Full)?;
        report.record(
            FAMILY_PLANE,
            format!("L_{name} L_e = -L_e L_{name}"),
            lv.anticommutator(&j_full).is_zero(),
        );
    }
    let (a, b, e) = (&ks.alpha, &ks.beta, &ks.e);
    let rotations = [
        ("alpha e = beta", alg.mul(a, e)?, b.clone()),
        ("e alpha = -beta", alg.mul(e, a)?, b.neg()),
        ("beta e = -alpha", alg.mul(b, e)?, a.neg()),
        ("e beta = alpha", alg.mul(e, b)?, a.clone()),
    ];
    for (name, lhs, rhs) in rotations {
        report.record(FAMILY_ROTATION, name.into(), lhs == rhs);
    }
    for (k, c) in right.iter().enumerate() {
        let rc = alg.right_mul_operator(c, Grading::Full)?;
        report.record(
            FAMILY_RIGHT,
            format!("R_c{} J = J R_c{}", k + 1, k + 1),
            rc.commutator(&j_full).is_zero(),
        );
    }
    Ok(report)
}

/// Matrix of `x -> v x v0` on `C+`.
pub fn endo_embedding(ks: &KSStructure, v: &CliffordElement, v0: &CliffordElement) -> Result<Matrix> {
    check_vector(v)?;
    if ks.grade_one_norm(v0)?.is_zero() {
        return Err(Error::NullReference);
    }
    if v.is_zero() {
        let n = ks.even_dim();
        return Ok(Matrix::zeros(n, n));
    }
    ks.algebra.sandwich_operator(v, v0, Grading::Even)
}

/// Rank of the linear map `v -> E_v` from `H^2` to `End(C+)`, computed by
/// stacking the flattened `E_{e_i}` for the orthogonal basis.
pub fn embedding_rank(ks: &KSStructure, v0: &CliffordElement) -> Result<usize> {
    let rows = (0..ks.algebra.dim())
        .map(|i| endo_embedding(ks, &ks.algebra.basis_vector(i), v0).map(|m| m.entries().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(rank(&Matrix::from_rows(rows)?))
}

pub const FAMILY_ENDO_PLANE: &str = "endo-plane-anticommutes";
pub const FAMILY_ENDO_COMPLEMENT: &str = "endo-complement-commutes";

/// `J E_v = -E_v J` for `v` in the plane, `J E_w = E_w J` on its complement.
pub fn endo_sign_laws(ks: &KSStructure, v0: &CliffordElement) -> Result<CommutatorReport> {
    let j = &ks.j_even;
    let mut report = CommutatorReport::default();
    for (name, v) in [("alpha", &ks.alpha), ("beta", &ks.beta)] {
        let ev = endo_embedding(ks, v, v0)?;
        report.record(
            FAMILY_ENDO_PLANE,
            format!("J E_{name} = -E_{name} J"),
            j.anticommutator(&ev).is_zero(),
        );
    }
    for (k, w) in ks.base.plane_complement().basis().iter().enumerate() {
        let ew = endo_embedding(ks, &ks.vector(w), v0)?;
        report.record(
            FAMILY_ENDO_COMPLEMENT,
            format!("J E_w{} = E_w{} J", k + 1, k + 1),
            j.commutator(&ew).is_zero(),
        );
    }
    Ok(report)
}

/// Right multiplication by `v0` from `C+` to `C-` and its inverse.
#[derive(Clone, Debug)]
pub struct OddEvenIso {
    pub forward: Matrix,
    pub inverse: Matrix,
}

impl OddEvenIso {
    /// Both compositions are the identity and `J_odd R = R J_even`.
    pub fn verify(&self, ks: &KSStructure) -> bool {
        let j_odd = ks.j_on(Grading::Odd);
        (&self.inverse * &self.forward).is_identity()
            && (&self.forward * &self.inverse).is_identity()
            && (&j_odd * &self.forward) == (&self.forward * &ks.j_even)
    }
}

pub fn odd_even_iso(ks: &KSStructure, v0: &CliffordElement) -> Result<OddEvenIso> {
    check_vector(v0)?;
    let n = ks.grade_one_norm(v0)?;
    if n.is_zero() {
        return Err(Error::NullReference);
    }
    debug_assert_eq!(v0.parity(), Parity::Odd);
    let forward = ks.algebra.right_mul_operator(v0, Grading::Even)?;
    let inverse = ks.algebra.right_mul_operator(v0, Grading::Odd)?.scale(&n.recip());
    Ok(OddEvenIso { forward, inverse })
}

/// Checks `e^2 = -1` on the element and `J^2 = -I` on `C+`.
pub fn complex_structure_holds(ks: &KSStructure) -> (bool, bool) {
    let e2 = ks.algebra.mul(&ks.e, &ks.e).expect("same algebra");
    let minus_one = CliffordElement::scalar(ks.algebra.dim(), -Rational::one());
    let j2 = &ks.j_even * &ks.j_even;
    (e2 == minus_one, j2.scalar_value() == Some(-Rational::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{Blade, DEFAULT_CAP};
    use crate::linalg::{frac, int};
    use crate::qspace::QuadraticSpace;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn ks(diag: &[i64], a: &[i64], b: &[i64]) -> KSStructure {
        let q = QuadraticSpace::from_diagonal_i64(diag).unwrap();
        KSStructure::build(HKStructure::new(q, v(a), v(b)).unwrap(), DEFAULT_CAP).unwrap()
    }

    #[test]
    fn e_for_standard_period() {
        let k = ks(&[1, 1, -1], &[1, 0, 0], &[0, 1, 0]);
        assert_eq!(k.e(), &CliffordElement::blade(3, Blade::from_indices(&[0, 1]), int(1)));
        assert_eq!(complex_structure_holds(&k), (true, true));
    }

    #[test]
    fn e_is_scale_invariant() {
        let k = ks(&[1, 1, -1, -1], &[2, 0, 0, 0], &[0, 2, 0, 0]);
        assert_eq!(k.e(), &CliffordElement::blade(4, Blade::from_indices(&[0, 1]), int(1)));
    }

    #[test]
    fn e_with_unequal_diagonal() {
        let k = ks(&[2, 8, -1], &[2, 0, 0], &[0, 1, 0]);
        assert_eq!(
            k.e(),
            &CliffordElement::blade(3, Blade::from_indices(&[0, 1]), frac(1, 4))
        );
        assert_eq!(complex_structure_holds(&k), (true, true));
    }

    #[test]
    fn counts() {
        let k = ks(&[1, 1, -1], &[1, 0, 0], &[0, 1, 0]);
        assert_eq!((k.even_dim(), k.torus_complex_dim()), (4, 2));
        let k = ks(&[1, 1, 1, -1, -1, -1], &[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0]);
        assert_eq!((k.even_dim(), k.torus_complex_dim()), (32, 16));
        assert_eq!(k.weight1().unwrap().complex_dim(), 16);
    }

    #[test]
    fn commutators_on_small_instance() {
        let k = ks(&[1, 1, -1], &[1, 0, 0], &[0, 1, 0]);
        let c = CliffordElement::blade(3, Blade::from_indices(&[2]), int(1));
        let r = structure_commutators(&k, &[c]).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert_eq!(r.checks.len(), 1 + 2 + 4 + 1);
        r.ensure().unwrap();
    }

    #[test]
    fn endo_of_v0_sends_unit_to_its_norm() {
        let k = ks(&[3, 3, -1, 2], &[1, 0, 0, 0], &[0, 1, 0, 0]);
        let v0 = k.default_v0();
        assert_eq!(v0, k.algebra().basis_vector(2));
        let m = endo_embedding(&k, &v0, &v0).unwrap();
        let unit_col = m.column(0);
        assert_eq!(unit_col[0], int(-1));
        assert!(unit_col[1..].iter().all(Zero::is_zero));
        assert_eq!(embedding_rank(&k, &v0).unwrap(), 4);
        assert!(endo_sign_laws(&k, &v0).unwrap().all_passed());
    }

    #[test]
    fn isotropic_v0_is_rejected() {
        let k = ks(&[1, 1, -1, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]);
        let v0 = k.vector(&v(&[0, 0, 1, 1]));
        assert_eq!(odd_even_iso(&k, &v0).err(), Some(Error::NullReference));
        assert_eq!(endo_embedding(&k, &v0, &v0).err(), Some(Error::NullReference));
    }

    #[test]
    fn odd_even_iso_in_dimension_two() {
        let k = ks(&[1, 1], &[1, 0], &[0, 1]);
        let v0 = k.algebra().basis_vector(0);
        let iso = odd_even_iso(&k, &v0).unwrap();
        // 1 -> e1, e1e2 -> -d1 e2
        assert_eq!(iso.forward, Matrix::from_i64(&[&[1, 0], &[0, -1]]));
        assert!(iso.verify(&k));
    }

    #[test]
    fn orientation_reversal_negates_e() {
        let q = QuadraticSpace::from_diagonal_i64(&[1, 1, -1, -3]).unwrap();
        let hk = HKStructure::new(q.clone(), v(&[3, 4, 0, 0]), v(&[-4, 3, 0, 0])).unwrap();
        let rev = HKStructure::from_parts(q, hk.period().reversed()).unwrap();
        let e = build_e(&hk, DEFAULT_CAP).unwrap();
        assert_eq!(build_e(&rev, DEFAULT_CAP).unwrap(), e.neg());
    }
}
