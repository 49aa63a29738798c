#![allow(dead_code)]

use proptest::prelude::*;
use qrframe::linalg::{CMatrix, CVector};
use qrframe::{DensityOperator, GroupElement, Space, C64};
use rand::rngs::StdRng;
use rand::SeedableRng;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn u1_element() -> impl Strategy<Value = GroupElement> {
    (0.0..2.0 * PI).prop_map(GroupElement::u1)
}

/// SU(2) elements over the double cover (ω up to 2π).
pub fn su2_element() -> impl Strategy<Value = GroupElement> {
    (0.0..2.0 * PI, 0.0..PI, 0.0..2.0 * PI).prop_map(|(w, t, p)| GroupElement::su2_polar(w, t, p))
}

pub fn random_density(space: &Space, seed: u64) -> DensityOperator {
    qrframe::random::density(space, space.dim(), &mut rng(seed))
}

/// `|v⟩` equals `|u⟩` up to a global phase.
pub fn phase_distance(u: &CVector, v: &CVector) -> f64 {
    let ov = u.dotc(v);
    if ov.norm() == 0.0 {
        return (u - v).norm();
    }
    let phase = ov / ov.norm();
    (u * phase - v).norm()
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn diag(entries: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(entries.len(), entries.iter().map(|&x| c(x))))
}
