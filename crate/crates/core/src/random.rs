//! Random group elements and states for tests and sweeps.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::group::{Group, GroupElement, Su2};
use crate::hilbert::{DensityOperator, Ket, Space};
use crate::linalg::{CMatrix, CVector, C64};

/// Haar-random group element.
pub fn element<R: Rng + ?Sized>(group: Group, rng: &mut R) -> GroupElement {
    match group {
        Group::U1 => GroupElement::u1(rng.random::<f64>() * std::f64::consts::TAU),
        Group::SU2 => {
            let q: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
            GroupElement::SU2(Su2::from_quaternion(q))
        }
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

pub fn ket<R: Rng + ?Sized>(space: &Space, rng: &mut R) -> Ket {
    let v = CVector::from_fn(space.dim(), |_, _| gaussian(rng));
    Ket::normalized(space.clone(), v).expect("gaussian vector is non-zero")
}

/// Random state `G G† / Tr` with `G` a `d × rank` Ginibre matrix.
pub fn density<R: Rng + ?Sized>(space: &Space, rank: usize, rng: &mut R) -> DensityOperator {
    let d = space.dim();
    let g = CMatrix::from_fn(d, rank.max(1), |_, _| gaussian(rng));
    let m = &g * g.adjoint();
    DensityOperator::from_positive(space.clone(), crate::linalg::hermitian_part(&m)).expect("Ginibre states are positive")
}

/// Random complex matrix, for linearity and superoperator checks.
pub fn matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| gaussian(rng))
}
