mod common;

use common::{hk_instance, instance, unipotent, Moves};
use ksw_core::betti::bound_exponent;
use ksw_core::clifford::{CliffordAlgebra, CliffordElement, Grading, DEFAULT_CAP};
use ksw_core::corr::{verify, Convention};
use ksw_core::hodge::{type_spectrum, HKStructure, Weight1Structure};
use ksw_core::kuga_satake::{
    complex_structure_holds, embedding_rank, endo_sign_laws, odd_even_iso, structure_commutators, KSStructure,
};
use ksw_core::linalg::{frac, int, rank_and_kernel};
use ksw_core::qspace::QuadraticSpace;
use ksw_core::sympow::{harmonic, sym_dim, SymTensorSpace};
use ksw_core::weil::{
    block_instance, check_quadratic_endo, hodge_class_dimension, weil_class_space, weil_multiplicities,
};
use ksw_core::{Matrix, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-100i64..=100, 1i64..=100).prop_map(|(n, d)| frac(n, d))
}

fn rational_matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(small_rational(), c), r)
            .prop_map(|rows| Matrix::from_rows(rows).unwrap())
    })
}

/// Low-rank integer matrices, so kernels are nontrivial.
fn low_rank_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=8, 1usize..=8, 1usize..=3).prop_flat_map(|(r, c, k)| {
        (
            proptest::collection::vec(proptest::collection::vec(-5i64..=5, k), r),
            proptest::collection::vec(proptest::collection::vec(-5i64..=5, c), k),
        )
            .prop_map(|(a, b)| {
                let a = Matrix::from_rows(a.into_iter().map(|r| r.into_iter().map(int).collect()).collect()).unwrap();
                let b = Matrix::from_rows(b.into_iter().map(|r| r.into_iter().map(int).collect()).collect()).unwrap();
                &a * &b
            })
    })
}

fn ks(hk: HKStructure) -> KSStructure {
    KSStructure::build(hk, DEFAULT_CAP).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_nullity(m in prop_oneof![rational_matrix(7), low_rank_matrix()]) {
        let (r, ker) = rank_and_kernel(&m);
        prop_assert_eq!(r + ker.len(), m.cols());
        prop_assert!(r <= m.rows().min(m.cols()));
        for v in &ker {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        let stacked = Matrix::from_rows(ker.clone());
        if let Ok(k) = stacked {
            prop_assert_eq!(k.rank(), ker.len());
        }
    }

    #[test]
    fn inverse_is_exact(m in rational_matrix(6)) {
        if let Ok(inv) = m.inverse() {
            prop_assert!((&m * &inv).is_identity());
            prop_assert!((&inv * &m).is_identity());
        } else if m.is_square() {
            prop_assert!(m.rank() < m.rows());
        }
    }

    #[test]
    fn diagonalization_is_a_congruence(d in common::diagonal_form(5), c in proptest::collection::vec(-2i64..=2, 10)) {
        let g = QuadraticSpace::from_diagonal_i64(&d).unwrap().congruent(&unipotent(5, &c)).unwrap();
        let t = g.basis_change();
        prop_assert_eq!(&(&t.transpose() * g.gram()) * t, Matrix::diagonal(g.diag_values()));
    }

    #[test]
    fn clifford_is_associative(d in common::diagonal_form(4), xs in proptest::collection::vec(-3i64..=3, 48)) {
        let alg = CliffordAlgebra::new(d.iter().map(|&x| int(x)).collect(), DEFAULT_CAP).unwrap();
        let el = |off: usize| alg.element_from_coords(Grading::Full, &xs[off..off + 16].iter().map(|&x| int(x)).collect::<Vec<_>>());
        let (a, b, c) = (el(0), el(16), el(32));
        let left = alg.mul(&alg.mul(&a, &b).unwrap(), &c).unwrap();
        let right = alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let v = CliffordElement::vector(&xs[..4].iter().map(|&x| int(x)).collect::<Vec<_>>());
        let v2 = alg.mul(&v, &v).unwrap();
        prop_assert_eq!(v2, CliffordElement::scalar(4, alg.pairing(&v, &v)));
    }

    #[test]
    fn ks_identities_h3_to_h6(hk in (3usize..=6).prop_flat_map(hk_instance)) {
        let k = ks(hk);
        prop_assert_eq!(complex_structure_holds(&k), (true, true));
        let c = k.algebra().basis_vector(k.algebra().dim() - 1);
        let r = structure_commutators(&k, &[c]).unwrap();
        prop_assert!(r.all_passed(), "{:?}", r);
        let v0 = k.default_v0();
        prop_assert_eq!(embedding_rank(&k, &v0).unwrap(), k.base().dim());
        prop_assert!(endo_sign_laws(&k, &v0).unwrap().all_passed());
        prop_assert!(odd_even_iso(&k, &v0).unwrap().verify(&k));
    }

    #[test]
    fn e_independent_of_plane_basis(d in common::diagonal_form(5), m in common::moves(5)) {
        let hk = instance(&d, &m);
        let rotated = hk.period().rotated(hk.space(), &frac(3, 5), &frac(4, 5)).unwrap();
        let hk2 = HKStructure::from_parts(hk.space().clone(), rotated).unwrap();
        let rotated = hk.period().rotated(hk.space(), &frac(-5, 13), &frac(12, 13)).unwrap();
        let hk3 = HKStructure::from_parts(hk.space().clone(), rotated).unwrap();
        let e = ks(hk.clone()).e().clone();
        prop_assert_eq!(ks(hk2).e().clone(), e.clone());
        prop_assert_eq!(ks(hk3).e().clone(), e);
    }

    #[test]
    fn orientation_reversal(hk in (3usize..=5).prop_flat_map(hk_instance)) {
        let rev = HKStructure::from_parts(hk.space().clone(), hk.period().reversed()).unwrap();
        let (a, b) = (ks(hk), ks(rev));
        prop_assert_eq!(b.e(), &a.e().neg());
        prop_assert_eq!(b.j_even(), &-a.j_even());
    }

    #[test]
    fn period_spectrum_is_1_h2_1(hk in (3usize..=8).prop_flat_map(hk_instance)) {
        let h = hk.dim();
        let s = type_spectrum(&hk.rotation_generator(), hk.period().norm(), 2).unwrap();
        prop_assert_eq!((s.get(2, 0), s.get(1, 1), s.get(0, 2)), (1, h - 2, 1));
    }

    #[test]
    fn weil_invariant_under_conjugation(signs in proptest::collection::vec(any::<bool>(), 4), c in proptest::collection::vec(-1i64..=1, 28)) {
        let mult: Vec<i64> = signs.iter().map(|&s| if s { 1 } else { -1 }).collect();
        let (j, phi) = block_instance(&mult);
        let p = &unipotent(8, &c).transpose() * &unipotent(8, &c[..28].iter().rev().cloned().collect::<Vec<_>>());
        let pinv = p.inverse().unwrap();
        let (j2, phi2) = (&(&p * &j) * &pinv, &(&p * &phi) * &pinv);
        let (w, w2) = (Weight1Structure::new(j).unwrap(), Weight1Structure::new(j2).unwrap());
        let (e, e2) = (check_quadratic_endo(&w, &phi).unwrap(), check_quadratic_endo(&w2, &phi2).unwrap());
        let (a, b) = weil_multiplicities(&e2).unwrap();
        prop_assert_eq!((a, b), weil_multiplicities(&e).unwrap());
        prop_assert_eq!(a == b, e2.phi_j().trace().is_zero());
        prop_assert_eq!(weil_class_space(&e2).unwrap().dim(), 2);
        prop_assert_eq!(hodge_class_dimension(&w2), hodge_class_dimension(&w));
    }

    #[test]
    fn bound_exponent_monotone_per_parity(b2 in 3u64..250) {
        for flag in [false, true] {
            prop_assert!(bound_exponent(b2, flag).unwrap() <= bound_exponent(b2 + 2, flag).unwrap());
        }
        prop_assert!(bound_exponent(b2, true).unwrap() >= bound_exponent(b2, false).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ks_identities_h7_h8(hk in (7usize..=8).prop_flat_map(hk_instance)) {
        let k = ks(hk);
        prop_assert_eq!(complex_structure_holds(&k), (true, true));
    }
}

#[test]
fn ks_identities_on_a_seven_dimensional_instance() {
    let m = Moves {
        reflections: vec![vec![1, 0, 1, 1, 0, 0, 1], vec![0, 1, -1, 0, 2, 1, 0]],
        rotate: true,
        congruence: (0..21).map(|i| [0, 1, -1][i % 3]).collect(),
    };
    let k = ks(instance(&[1, 1, 2, -1, -3, -1, -2], &m));
    let c = CliffordElement::from_terms(7, [(ksw_core::clifford::Blade::from_indices(&[2, 5]), int(3))]).unwrap();
    let r = structure_commutators(&k, &[c, k.algebra().basis_vector(4)]).unwrap();
    assert!(r.all_passed(), "{r:?}");
    let v0 = k.default_v0();
    assert_eq!(embedding_rank(&k, &v0).unwrap(), 7);
    assert!(endo_sign_laws(&k, &v0).unwrap().all_passed());
}

#[test]
fn contraction_is_surjective() {
    for h in 2..=7 {
        let d: Vec<i64> = (0..h)
            .map(|i| if i % 3 == 2 { -(i as i64) } else { i as i64 + 1 })
            .collect();
        let space = QuadraticSpace::from_diagonal_i64(&d).unwrap();
        for k in 2..=5 {
            if h == 7 && k == 5 {
                continue;
            }
            let s = SymTensorSpace::new(&space, k).unwrap();
            assert_eq!(harmonic(&s).dim() + sym_dim(h, k - 2), sym_dim(h, k), "h={h} k={k}");
        }
    }
}

#[test]
fn corr_uniform_up_to_ten_generators() {
    for b3 in 2..=10 {
        for n in 2..=4 {
            let r = verify(b3, n, Convention::Koszul).unwrap();
            assert!(r.passed(), "b3={b3} n={n}: {r:?}");
        }
    }
}
