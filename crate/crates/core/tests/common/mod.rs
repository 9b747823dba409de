#![allow(dead_code)]

use ksw_core::hodge::{HKStructure, PeriodPlane};
use ksw_core::linalg::{frac, int};
use ksw_core::qspace::{unit_vector, QuadraticSpace};
use ksw_core::{Matrix, Rational};
use num_traits::Zero;
use proptest::prelude::*;

/// A diagonal form with two equal positive leading entries and a mixed tail.
pub fn diagonal_form(h: usize) -> impl Strategy<Value = Vec<i64>> {
    let tail = proptest::collection::vec(prop_oneof![1i64..=5, -5i64..=-1], h - 2);
    (1i64..=4, tail).prop_map(|(c, tail)| {
        let mut d = vec![c, c];
        d.extend(tail);
        d
    })
}

/// Reflection vectors and an optional in-plane Pythagorean rotation.
#[derive(Clone, Debug)]
pub struct Moves {
    pub reflections: Vec<Vec<i64>>,
    pub rotate: bool,
    pub congruence: Vec<i64>,
}

pub fn moves(h: usize) -> impl Strategy<Value = Moves> {
    (
        proptest::collection::vec(proptest::collection::vec(-2i64..=2, h), 0..3),
        any::<bool>(),
        proptest::collection::vec(-1i64..=1, h * (h - 1) / 2),
    )
        .prop_map(|(reflections, rotate, congruence)| Moves {
            reflections,
            rotate,
            congruence,
        })
}

fn rats(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

/// Unit upper-triangular change of basis from the given off-diagonal entries.
pub fn unipotent(h: usize, entries: &[i64]) -> Matrix {
    let mut p = Matrix::identity(h);
    let mut it = entries.iter();
    for i in 0..h {
        for j in i + 1..h {
            p[(i, j)] = int(*it.next().unwrap_or(&0));
        }
    }
    p
}

/// Applies the moves to the standard period `(e_1, e_2)` of `diag`.
/// Isotropic reflection vectors are skipped. The final congruence rewrites the
/// form as `P^T G P` and the period as `P^-1 x`.
pub fn instance(diag: &[i64], m: &Moves) -> HKStructure {
    let h = diag.len();
    let space = QuadraticSpace::from_diagonal_i64(diag).unwrap();
    let mut period = PeriodPlane::validate(&space, unit_vector(h, 0), unit_vector(h, 1)).unwrap();
    for v in &m.reflections {
        let v = rats(v);
        if !space.norm(&v).is_zero() {
            period = period.reflected(&space, &v).unwrap();
        }
    }
    if m.rotate {
        period = period.rotated(&space, &frac(3, 5), &frac(4, 5)).unwrap();
    }
    let p = unipotent(h, &m.congruence);
    let pinv = p.inverse().unwrap();
    let space2 = space.congruent(&p).unwrap();
    let a = pinv.mul_vec(period.alpha());
    let b = pinv.mul_vec(period.beta());
    HKStructure::new(space2, a, b).unwrap()
}

pub fn hk_instance(h: usize) -> impl Strategy<Value = HKStructure> {
    (diagonal_form(h), moves(h)).prop_map(|(d, m)| instance(&d, &m))
}
