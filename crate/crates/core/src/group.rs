//! U(1) and SU(2) group elements and Haar quadrature grids.
//!
//! SU(2) elements are stored as the special-unitary matrix
//! `[[a, -conj(b)], [b, conj(a)]]`; polar and Euler angles are views.
//! Conventions: polar `U = exp(i ω n·J)`, Euler
//! `U = exp(-iαJz) exp(-iβJy) exp(-iγJz)`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::linalg::{gauss_legendre, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    U1,
    SU2,
}

/// Cayley–Klein pair of an SU(2) matrix, `|a|² + |b|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2 {
    pub a: C64,
    pub b: C64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupElement {
    U1(f64),
    SU2(Su2),
}

/// Polar angles `(ω, θ, φ)` of an SU(2) element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polar {
    pub omega: f64,
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// A parametrized description of a group element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Parametrization {
    U1 { theta: f64 },
    SU2Polar(Polar),
    SU2Euler(Euler),
}

impl From<Parametrization> for GroupElement {
    fn from(p: Parametrization) -> Self {
        match p {
            Parametrization::U1 { theta } => GroupElement::u1(theta),
            Parametrization::SU2Polar(p) => GroupElement::su2_polar(p.omega, p.theta, p.phi),
            Parametrization::SU2Euler(e) => GroupElement::su2_euler(e.alpha, e.beta, e.gamma),
        }
    }
}

pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl Su2 {
    pub const IDENTITY: Su2 = Su2 { a: C64::new(1.0, 0.0), b: C64::new(0.0, 0.0) };

    fn normalized(a: C64, b: C64) -> Su2 {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        Su2 { a: a / n, b: b / n }
    }

    /// Quaternion components `(q0, q1, q2, q3)` with `U = q0 I + i q·σ`.
    pub fn quaternion(&self) -> [f64; 4] {
        [self.a.re, self.b.im, -self.b.re, self.a.im]
    }

    pub fn from_quaternion(q: [f64; 4]) -> Su2 {
        Su2::normalized(C64::new(q[0], q[3]), C64::new(-q[2], q[1]))
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        [[self.a, -self.b.conj()], [self.b, self.a.conj()]]
    }

    pub fn mul(&self, o: &Su2) -> Su2 {
        Su2::normalized(
            self.a * o.a - self.b.conj() * o.b,
            self.b * o.a + self.a.conj() * o.b,
        )
    }

    pub fn inverse(&self) -> Su2 {
        Su2 { a: self.a.conj(), b: -self.b }
    }

    pub fn neg(&self) -> Su2 {
        Su2 { a: -self.a, b: -self.b }
    }

    /// `(σ, δ) = ((α+γ)/2, (α−γ)/2)` and `β`; exact for half-integer spins.
    pub fn euler_half_angles(&self) -> (f64, f64, f64) {
        let beta = 2.0 * self.b.norm().atan2(self.a.norm());
        let sigma = if self.a.norm() > 0.0 { -self.a.arg() } else { 0.0 };
        let delta = if self.b.norm() > 0.0 { self.b.arg() } else { 0.0 };
        (sigma, delta, beta)
    }
}

impl GroupElement {
    pub fn identity(group: Group) -> Self {
        match group {
            Group::U1 => GroupElement::U1(0.0),
            Group::SU2 => GroupElement::SU2(Su2::IDENTITY),
        }
    }

    pub fn u1(theta: f64) -> Self {
        GroupElement::U1(wrap_angle(theta))
    }

    pub fn su2_polar(omega: f64, theta: f64, phi: f64) -> Self {
        let (s, c) = (omega / 2.0).sin_cos();
        let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        GroupElement::SU2(Su2::from_quaternion([c, s * n[0], s * n[1], s * n[2]]))
    }

    pub fn su2_euler(alpha: f64, beta: f64, gamma: f64) -> Self {
        let (s, c) = (beta / 2.0).sin_cos();
        let a = C64::from_polar(c, -(alpha + gamma) / 2.0);
        let b = C64::from_polar(s, (alpha - gamma) / 2.0);
        GroupElement::SU2(Su2::normalized(a, b))
    }

    pub fn group(&self) -> Group {
        match self {
            GroupElement::U1(_) => Group::U1,
            GroupElement::SU2(_) => Group::SU2,
        }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.distance(&GroupElement::identity(self.group())) <= tol
    }

    pub fn theta(&self) -> Option<f64> {
        match self {
            GroupElement::U1(t) => Some(*t),
            GroupElement::SU2(_) => None,
        }
    }

    pub fn su2(&self) -> Option<&Su2> {
        match self {
            GroupElement::SU2(u) => Some(u),
            GroupElement::U1(_) => None,
        }
    }

    /// Polar view with `ω ∈ [0, 2π]`, `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    pub fn polar(&self) -> Option<Polar> {
        let u = self.su2()?;
        let q = u.quaternion();
        let v = (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
        let omega = 2.0 * v.atan2(q[0]);
        if v == 0.0 {
            return Some(Polar { omega, theta: 0.0, phi: 0.0 });
        }
        let theta = (q[3] / v).clamp(-1.0, 1.0).acos();
        let phi = if q[1] == 0.0 && q[2] == 0.0 { 0.0 } else { wrap_angle(q[2].atan2(q[1])) };
        Some(Polar { omega, theta, phi })
    }

    /// Polar view restricted to `ω ∈ [0, π]`; elements with `ω > π` are
    /// reported through `−U`, which acts identically on integer spins.
    pub fn polar_half_range(&self) -> Option<Polar> {
        let u = self.su2()?;
        let p = self.polar()?;
        if p.omega <= PI {
            Some(p)
        } else {
            GroupElement::SU2(u.neg()).polar()
        }
    }

    /// Euler view with `α ∈ [0, 2π)`, `β ∈ [0, π]`, `γ ∈ [0, 4π)`.
    pub fn euler(&self) -> Option<Euler> {
        let (sigma, delta, beta) = self.su2()?.euler_half_angles();
        let alpha = wrap_angle(sigma + delta);
        let gamma = (2.0 * sigma - alpha).rem_euclid(2.0 * TAU);
        Some(Euler { alpha, beta, gamma })
    }

    pub fn parametrization(&self) -> Parametrization {
        match self {
            GroupElement::U1(t) => Parametrization::U1 { theta: *t },
            GroupElement::SU2(_) => Parametrization::SU2Polar(self.polar().unwrap()),
        }
    }

    /// Distance between group elements (chordal for U(1), Frobenius for SU(2)).
    pub fn distance(&self, other: &GroupElement) -> f64 {
        match (self, other) {
            (GroupElement::U1(x), GroupElement::U1(y)) => (C64::cis(*x) - C64::cis(*y)).norm(),
            (GroupElement::SU2(u), GroupElement::SU2(v)) => {
                (2.0 * ((u.a - v.a).norm_sqr() + (u.b - v.b).norm_sqr())).sqrt()
            }
            _ => f64::INFINITY,
        }
    }

    /// Distance of the induced SO(3) rotations (ignores the sign of SU(2)).
    pub fn rotation_distance(&self, other: &GroupElement) -> f64 {
        match (self, other) {
            (GroupElement::SU2(u), GroupElement::SU2(_)) => {
                self.distance(other).min(GroupElement::SU2(u.neg()).distance(other))
            }
            _ => self.distance(other),
        }
    }
}

pub fn compose(g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    match (g, h) {
        (GroupElement::U1(x), GroupElement::U1(y)) => Ok(GroupElement::u1(x + y)),
        (GroupElement::SU2(u), GroupElement::SU2(v)) => Ok(GroupElement::SU2(u.mul(v))),
        _ => Err(Error::GroupMismatch { expected: g.group(), found: h.group() }),
    }
}

pub fn inverse(g: &GroupElement) -> GroupElement {
    match g {
        GroupElement::U1(x) => GroupElement::u1(-x),
        GroupElement::SU2(u) => GroupElement::SU2(u.inverse()),
    }
}

impl std::ops::Mul for GroupElement {
    type Output = GroupElement;

    /// Panics on mixed groups; use [`compose`] for a fallible product.
    fn mul(self, rhs: GroupElement) -> GroupElement {
        compose(&self, &rhs).expect("group elements from different groups")
    }
}

/// Node layout of an SU(2) product rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Su2Scheme {
    /// Trapezoid in ω, Gauss–Legendre in cos θ, uniform in φ.
    Polar,
    /// Uniform in α and γ, Gauss–Legendre in cos β.
    Euler,
}

/// Which part of SU(2) the grid covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cover {
    /// `ω ∈ [0, π]`; exact only for integer-spin integrands (SO(3)).
    Rotation,
    /// `ω ∈ [0, 2π]`; exact for all spins.
    Full,
}

/// Azimuth range of the polar axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Azimuth {
    /// `φ ∈ [0, 2π)`; the Haar measure.
    Full,
    /// `φ ∈ [0, π)` read literally from `φ/2 ∈ [0, π/2)`. Covers only half
    /// of the axis sphere, so it is not invariant; kept for comparison.
    Half,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridOptions {
    pub scheme: Su2Scheme,
    pub cover: Cover,
    pub azimuth: Azimuth,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { scheme: Su2Scheme::Polar, cover: Cover::Full, azimuth: Azimuth::Full }
    }
}

/// Quadrature rule for the normalized Haar measure.
///
/// A grid with bandlimit `L` integrates exactly every U(1) character with
/// `|k| ≤ 2L` and every SU(2) matrix element `D^J_{mm'}` with `J ≤ L`
/// (integer `J` only on the rotation cover).
#[derive(Debug, Clone, PartialEq)]
pub struct HaarGrid {
    pub group: Group,
    pub nodes: Vec<GroupElement>,
    pub weights: Vec<f64>,
    pub bandlimit: usize,
    pub options: GridOptions,
}

impl HaarGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, f64)> {
        self.nodes.iter().zip(self.weights.iter().copied())
    }

    /// Largest integrand degree integrated exactly: max `|k|` for U(1),
    /// max `2J` for SU(2).
    pub fn exact_degree(&self) -> usize {
        2 * self.bandlimit
    }

    pub fn handles_half_integer(&self) -> bool {
        self.group == Group::U1 || self.options.cover == Cover::Full
    }

    /// Refuse integrands this grid would only approximate.
    pub fn ensure_exact(&self, degree: usize, half_integer: bool) -> Result<()> {
        let half_ok = !half_integer || self.handles_half_integer();
        if degree <= self.exact_degree() && half_ok && self.options.azimuth == Azimuth::Full {
            Ok(())
        } else {
            Err(Error::InsufficientGrid {
                required: degree,
                available: self.exact_degree(),
                half_integer,
                full_cover: self.handles_half_integer(),
            })
        }
    }

    /// The grid `{f·g_i}` with unchanged weights.
    pub fn translated(&self, f: &GroupElement) -> Result<HaarGrid> {
        let nodes = self.nodes.iter().map(|g| compose(f, g)).collect::<Result<Vec<_>>>()?;
        Ok(HaarGrid { nodes, ..self.clone() })
    }

    /// Smallest default grid exact for the given degree.
    pub fn for_degree(group: Group, degree: usize, half_integer: bool) -> HaarGrid {
        let bandlimit = degree.div_ceil(2);
        let cover = if half_integer { Cover::Full } else { Cover::Rotation };
        haar_grid_with(group, bandlimit, GridOptions { cover, ..GridOptions::default() })
    }

    pub fn integrate<T, F>(&self, f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: Fn(&GroupElement) -> T,
    {
        self.iter().fold(T::default(), |acc, (g, w)| acc + f(g) * w)
    }
}

pub fn haar_grid(group: Group, bandlimit: usize) -> HaarGrid {
    haar_grid_with(group, bandlimit, GridOptions::default())
}

/// Signed-bandlimit entry point for callers holding user input.
pub fn haar_grid_checked(group: Group, bandlimit: i64, options: GridOptions) -> Result<HaarGrid> {
    if bandlimit < 0 {
        return Err(Error::InvalidArgument(format!("bandlimit must be non-negative, got {bandlimit}")));
    }
    Ok(haar_grid_with(group, bandlimit as usize, options))
}

pub fn haar_grid_with(group: Group, bandlimit: usize, options: GridOptions) -> HaarGrid {
    let (nodes, mut weights) = match group {
        Group::U1 => {
            let n = 2 * bandlimit + 1;
            let nodes = (0..n).map(|k| GroupElement::u1(TAU * k as f64 / n as f64)).collect();
            (nodes, vec![1.0; n])
        }
        Group::SU2 => match options.scheme {
            Su2Scheme::Polar => polar_nodes(bandlimit, options),
            Su2Scheme::Euler => euler_nodes(bandlimit, options),
        },
    };
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    // Fold the rounding residual into the largest weight so the sum is 1 to a few ulp.
    let residual = 1.0 - weights.iter().sum::<f64>();
    if let Some(w) = weights.iter_mut().max_by(|x, y| x.total_cmp(y)) {
        *w += residual;
    }
    HaarGrid { group, nodes, weights, bandlimit, options }
}

fn polar_nodes(bandlimit: usize, options: GridOptions) -> (Vec<GroupElement>, Vec<f64>) {
    // Omega nodes carry the sin²(ω/2) density; ω = 0 has zero weight and is dropped.
    let omega: Vec<(f64, f64)> = match options.cover {
        Cover::Rotation => {
            let m = bandlimit / 2 + 2;
            (1..=m)
                .map(|k| {
                    let w = if k == m { 0.5 } else { 1.0 };
                    let om = PI * k as f64 / m as f64;
                    (om, w * (om / 2.0).sin().powi(2))
                })
                .collect()
        }
        Cover::Full => {
            let n = bandlimit + 4;
            (1..n)
                .map(|k| {
                    let om = TAU * k as f64 / n as f64;
                    (om, (om / 2.0).sin().powi(2))
                })
                .collect()
        }
    };
    let (cos_theta, w_theta) = gauss_legendre(bandlimit + 1);
    let n_phi = 2 * bandlimit + 2;
    let phi_span = match options.azimuth {
        Azimuth::Full => TAU,
        Azimuth::Half => PI,
    };
    let mut nodes = Vec::with_capacity(omega.len() * cos_theta.len() * n_phi);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for &(om, wo) in &omega {
        for (ct, wt) in cos_theta.iter().zip(&w_theta) {
            let theta = ct.clamp(-1.0, 1.0).acos();
            for p in 0..n_phi {
                let phi = phi_span * p as f64 / n_phi as f64;
                nodes.push(GroupElement::su2_polar(om, theta, phi));
                weights.push(wo * wt);
            }
        }
    }
    (nodes, weights)
}

fn euler_nodes(bandlimit: usize, options: GridOptions) -> (Vec<GroupElement>, Vec<f64>) {
    let n_alpha = 2 * bandlimit + 1;
    let n_gamma = 2 * bandlimit + 2;
    let gamma_span = match options.cover {
        Cover::Rotation => TAU,
        Cover::Full => 2.0 * TAU,
    };
    let (cos_beta, w_beta) = gauss_legendre(bandlimit + 1);
    let mut nodes = Vec::with_capacity(n_alpha * n_gamma * cos_beta.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for i in 0..n_alpha {
        let alpha = TAU * i as f64 / n_alpha as f64;
        for (cb, wb) in cos_beta.iter().zip(&w_beta) {
            let beta = cb.clamp(-1.0, 1.0).acos();
            for k in 0..n_gamma {
                let gamma = gamma_span * k as f64 / n_gamma as f64;
                nodes.push(GroupElement::su2_euler(alpha, beta, gamma));
                weights.push(*wb);
            }
        }
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn u1_addition_wraps() {
        let g = compose(&GroupElement::u1(FRAC_PI_2), &GroupElement::u1(FRAC_PI_2)).unwrap();
        assert!((g.theta().unwrap() - PI).abs() < 1e-15);
        assert!((inverse(&GroupElement::u1(1.0)).theta().unwrap() - (TAU - 1.0)).abs() < 1e-15);
        assert_eq!(inverse(&GroupElement::u1(0.0)), GroupElement::u1(0.0));
    }

    #[test]
    fn mixed_groups_are_rejected() {
        let e = compose(&GroupElement::u1(0.0), &GroupElement::identity(Group::SU2));
        assert!(matches!(e, Err(Error::GroupMismatch { .. })));
    }

    #[test]
    fn polar_half_turn_squares_to_minus_identity() {
        let g = GroupElement::su2_polar(PI, 0.0, 0.0);
        let gg = compose(&g, &g).unwrap();
        let m = gg.su2().unwrap().matrix();
        assert!((m[0][0] + 1.0).norm() < 1e-15 && (m[1][1] + 1.0).norm() < 1e-15);
        let view = gg.polar_half_range().unwrap();
        assert!(view.omega.abs() < 1e-12);
        assert!(gg.rotation_distance(&GroupElement::identity(Group::SU2)) < 1e-12);
    }

    #[test]
    fn euler_inverse_is_conjugate_transpose() {
        let g = GroupElement::su2_euler(0.3, 1.1, 2.5);
        let m = g.su2().unwrap().matrix();
        let mi = inverse(&g).su2().unwrap().matrix();
        for i in 0..2 {
            for j in 0..2 {
                assert!((mi[i][j] - m[j][i].conj()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn polar_roundtrip() {
        let (om, th, ph) = (2.0, 0.7, 4.0);
        let p = GroupElement::su2_polar(om, th, ph).polar_half_range().unwrap();
        assert!((p.omega - om).abs() < 1e-12 && (p.theta - th).abs() < 1e-12 && (p.phi - ph).abs() < 1e-12);
    }

    #[test]
    fn euler_roundtrip_on_full_range() {
        let (a, b, c) = (5.0, 2.0, 10.0);
        let e = GroupElement::su2_euler(a, b, c).euler().unwrap();
        assert!((e.alpha - a).abs() < 1e-12 && (e.beta - b).abs() < 1e-12 && (e.gamma - c).abs() < 1e-12);
    }

    #[test]
    fn u1_grid_integrates_characters() {
        let grid = haar_grid(Group::U1, 2);
        assert_eq!(grid.len(), 5);
        for k in -4i32..=4 {
            let s: C64 = grid.iter().map(|(g, w)| C64::cis(k as f64 * g.theta().unwrap()) * w).sum();
            let expected = if k == 0 { 1.0 } else { 0.0 };
            assert!((s - expected).norm() < 1e-15, "k={k}");
        }
    }

    #[test]
    fn negative_bandlimit_is_an_argument_error() {
        assert!(matches!(
            haar_grid_checked(Group::U1, -1, GridOptions::default()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn su2_grid_weights_normalized() {
        for scheme in [Su2Scheme::Polar, Su2Scheme::Euler] {
            for cover in [Cover::Rotation, Cover::Full] {
                let g = haar_grid_with(Group::SU2, 3, GridOptions { scheme, cover, azimuth: Azimuth::Full });
                assert!((g.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
                assert!(g.weights.iter().all(|w| *w >= 0.0));
            }
        }
    }

    #[test]
    fn insufficient_grid_refuses() {
        let g = HaarGrid::for_degree(Group::SU2, 4, false);
        assert!(g.ensure_exact(4, false).is_ok());
        assert!(g.ensure_exact(6, false).is_err());
        assert!(g.ensure_exact(2, true).is_err());
    }
}
