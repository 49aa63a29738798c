//! Reference-frame state families and their overlap functions.

use crate::error::{Error, Result};
use crate::group::{inverse, compose, Group, GroupElement};
use crate::hilbert::{Ket, Representation, Space, SpaceSpec};
use crate::linalg::{ln_factorial, CVector, C64};

/// Poisson mass a truncated coherent state must retain.
pub const MIN_RETAINED_MASS: f64 = 0.9999;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameFamily {
    /// `|s;g⟩ = (s+1)^{-1/2} Σ_{k≤s} e^{ikg}|k⟩`.
    PhaseEigenstate { cutoff: usize },
    /// Coherent state of amplitude `s = sqrt⟨n⟩`, truncated at `cutoff` and
    /// renormalized.
    U1Coherent { amplitude: f64, cutoff: usize },
    /// Maximally entangled sectors `j = 0..=s` of the fiducial Cartesian frame.
    Su2Fiducial { max_spin: u32 },
    /// Spin coherent state `|j,j⟩` on the spin-`j` irrep.
    Su2Coherent { twice_j: u32 },
}

/// Poisson weights `e^{-s²} s^{2k} / k!` for `k = 0..=cutoff`.
pub fn poisson_weights(amplitude: f64, cutoff: usize) -> Vec<f64> {
    let mean = amplitude * amplitude;
    (0..=cutoff)
        .map(|k| {
            if mean == 0.0 {
                if k == 0 { 1.0 } else { 0.0 }
            } else {
                (-mean + k as f64 * mean.ln() - ln_factorial(k as u64)).exp()
            }
        })
        .collect()
}

/// Smallest cutoff retaining at least `mass` of the photon distribution.
pub fn coherent_cutoff(amplitude: f64, mass: f64) -> usize {
    let mean = amplitude * amplitude;
    let mut k = 0usize;
    let mut acc = 0.0;
    loop {
        let term = if mean == 0.0 {
            if k == 0 { 1.0 } else { 0.0 }
        } else {
            (-mean + k as f64 * mean.ln() - ln_factorial(k as u64)).exp()
        };
        acc += term;
        // Rounding can leave `acc` just short of `mass`; stop once the tail is negligible.
        if acc >= mass || (k as f64 > mean && term < (1.0 - mass) * 1e-3) {
            return k;
        }
        k += 1;
    }
}

/// `binom(2s+3, 3) = Σ_{j≤s} (2j+1)²`.
pub fn fiducial_dimension(max_spin: u32) -> usize {
    let s = max_spin as usize;
    (2 * s + 1) * (2 * s + 3) * (s + 1) / 3
}

impl FrameFamily {
    pub fn phase_eigenstate(cutoff: usize) -> Self {
        FrameFamily::PhaseEigenstate { cutoff }
    }

    /// Coherent frame; without a cutoff the smallest one retaining
    /// [`MIN_RETAINED_MASS`] is used, an explicit cutoff retaining less is refused.
    pub fn u1_coherent(amplitude: f64, cutoff: Option<usize>) -> Result<Self> {
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(Error::InvalidArgument(format!("coherent amplitude must be non-negative, got {amplitude}")));
        }
        let cutoff = match cutoff {
            None => coherent_cutoff(amplitude, MIN_RETAINED_MASS),
            Some(c) => {
                let mass: f64 = poisson_weights(amplitude, c).iter().sum();
                if mass < MIN_RETAINED_MASS {
                    return Err(Error::InvalidArgument(format!(
                        "cutoff {c} retains only {mass:.6} of the coherent state (need {MIN_RETAINED_MASS})"
                    )));
                }
                c
            }
        };
        Ok(FrameFamily::U1Coherent { amplitude, cutoff })
    }

    pub fn su2_fiducial(max_spin: u32) -> Self {
        FrameFamily::Su2Fiducial { max_spin }
    }

    pub fn su2_coherent(twice_j: u32) -> Self {
        FrameFamily::Su2Coherent { twice_j }
    }

    pub fn group(&self) -> Group {
        match self {
            FrameFamily::PhaseEigenstate { .. } | FrameFamily::U1Coherent { .. } => Group::U1,
            FrameFamily::Su2Fiducial { .. } | FrameFamily::Su2Coherent { .. } => Group::SU2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FrameFamily::PhaseEigenstate { .. } => "pe",
            FrameFamily::U1Coherent { .. } => "cs",
            FrameFamily::Su2Fiducial { .. } => "fiducial",
            FrameFamily::Su2Coherent { .. } => "coset",
        }
    }

    pub fn space_spec(&self) -> SpaceSpec {
        match *self {
            FrameFamily::PhaseEigenstate { cutoff } | FrameFamily::U1Coherent { cutoff, .. } => SpaceSpec::fock(cutoff),
            FrameFamily::Su2Fiducial { max_spin } => SpaceSpec::su2_fiducial(max_spin),
            FrameFamily::Su2Coherent { twice_j } => SpaceSpec::spin(twice_j),
        }
    }

    pub fn space(&self) -> Space {
        self.space_spec().into()
    }

    /// The normalization `D` of the covariant POVM built from this family's
    /// measurement states.
    pub fn dimension(&self) -> usize {
        match *self {
            FrameFamily::PhaseEigenstate { cutoff } | FrameFamily::U1Coherent { cutoff, .. } => cutoff + 1,
            FrameFamily::Su2Fiducial { max_spin } => fiducial_dimension(max_spin),
            FrameFamily::Su2Coherent { twice_j } => twice_j as usize + 1,
        }
    }

    /// Family whose projectors form the covariant measurement for this frame.
    /// Coherent U(1) frames are read out with phase-eigenstate projectors.
    pub fn measurement_family(&self) -> FrameFamily {
        match *self {
            FrameFamily::U1Coherent { cutoff, .. } => FrameFamily::PhaseEigenstate { cutoff },
            other => other,
        }
    }

    /// Whether `G(|e⟩⟨e|) = I/D` on the family's space.
    pub fn has_uniform_twirl(&self) -> bool {
        !matches!(self, FrameFamily::U1Coherent { .. })
    }

    /// Whether the family is a maximum-likelihood family (PE or fiducial).
    pub fn is_maximum_likelihood(&self) -> bool {
        matches!(self, FrameFamily::PhaseEigenstate { .. } | FrameFamily::Su2Fiducial { .. })
    }

    /// The identity-orientation state `|ψ(e)⟩`.
    pub fn fiducial_ket(&self) -> Ket {
        let space = self.space();
        let v = match *self {
            FrameFamily::PhaseEigenstate { cutoff } => {
                let amp = C64::from(1.0 / ((cutoff + 1) as f64).sqrt());
                CVector::from_element(cutoff + 1, amp)
            }
            FrameFamily::U1Coherent { amplitude, cutoff } => {
                let w = poisson_weights(amplitude, cutoff);
                let z: f64 = w.iter().sum();
                CVector::from_iterator(cutoff + 1, w.iter().map(|p| C64::from((p / z).sqrt())))
            }
            FrameFamily::Su2Fiducial { max_spin } => {
                let d = fiducial_dimension(max_spin) as f64;
                let mut v = CVector::zeros(space.dim());
                let mut off = 0;
                for j2 in (0..=max_spin as usize).map(|j| 2 * j) {
                    let n = j2 + 1;
                    // |j,m⟩ ⊗ |φ_{j,m}⟩ pairs index i with index i: position i·n + i.
                    for i in 0..n {
                        v[off + i * n + i] = C64::from((n as f64 / d).sqrt());
                    }
                    off += n * n;
                }
                v
            }
            FrameFamily::Su2Coherent { twice_j } => {
                let mut v = CVector::zeros(twice_j as usize + 1);
                v[0] = C64::from(1.0);
                v
            }
        };
        Ket::new(space, v).expect("frame states are normalized by construction")
    }

    /// `|ψ(g)⟩ = U(g)|ψ(e)⟩`.
    pub fn ket(&self, g: &GroupElement) -> Result<Ket> {
        let rep = Representation::new(&self.space());
        self.fiducial_ket().rotated(&rep, g)
    }

    /// Same as [`FrameFamily::ket`] with a caller-held representation.
    pub fn ket_with(&self, rep: &Representation, g: &GroupElement) -> Result<Ket> {
        self.fiducial_ket().rotated(rep, g)
    }

    /// `⟨ψ(e)|ψ(g)⟩` in closed form.
    pub fn overlap_from_identity(&self, g: &GroupElement) -> Result<C64> {
        if g.group() != self.group() {
            return Err(Error::GroupMismatch { expected: self.group(), found: g.group() });
        }
        Ok(match *self {
            FrameFamily::PhaseEigenstate { cutoff } => {
                let x = g.theta().unwrap();
                let s: C64 = (0..=cutoff).map(|k| C64::cis(k as f64 * x)).sum();
                s / (cutoff + 1) as f64
            }
            FrameFamily::U1Coherent { amplitude, cutoff } => {
                let x = g.theta().unwrap();
                let w = poisson_weights(amplitude, cutoff);
                let z: f64 = w.iter().sum();
                w.iter().enumerate().map(|(k, p)| C64::cis(k as f64 * x) * (p / z)).sum()
            }
            FrameFamily::Su2Fiducial { max_spin } => {
                let omega = g.polar().unwrap().omega;
                C64::from(fiducial_overlap(max_spin, omega))
            }
            FrameFamily::Su2Coherent { twice_j } => g.su2().unwrap().a.powu(twice_j),
        })
    }

    /// `⟨ψ(g)|ψ(h)⟩ = ⟨ψ(e)|ψ(g⁻¹h)⟩` in closed form.
    pub fn overlap_closed_form(&self, g: &GroupElement, h: &GroupElement) -> Result<C64> {
        self.overlap_from_identity(&compose(&inverse(g), h)?)
    }

    /// Weight of `U_S(g⁻¹)` in the decoherence map:
    /// `D |⟨φ(g)|ψ(e)⟩|²` with `φ` the measurement family and `ψ` this frame.
    pub fn decoherence_weight(&self, g: &GroupElement) -> Result<f64> {
        let d = self.dimension() as f64;
        let amp = match *self {
            FrameFamily::U1Coherent { amplitude, cutoff } => {
                let x = g.theta().ok_or(Error::GroupMismatch { expected: Group::U1, found: Group::SU2 })?;
                cs_pe_overlap(cutoff, amplitude, cutoff, 0.0, x)
            }
            _ => self.overlap_from_identity(g)?,
        };
        Ok(d * amp.norm_sqr())
    }
}

/// `D⁻¹ Σ_{|m|≤s} e^{imω} ((1+s)² − m²)`.
pub fn fiducial_overlap(max_spin: u32, omega: f64) -> f64 {
    let s = max_spin as i64;
    let d = fiducial_dimension(max_spin) as f64;
    (-s..=s).map(|m| (m as f64 * omega).cos() * ((1 + s).pow(2) - m * m) as f64).sum::<f64>() / d
}

/// The SU(2) character `Σ_{m=-j}^{j} e^{imω}` for `2j = twice_j`.
pub fn su2_character(twice_j: u32, omega: f64) -> f64 {
    (0..=twice_j).map(|i| ((twice_j as f64 / 2.0 - i as f64) * omega).cos()).sum()
}

/// `|⟨s;g|s;h⟩|² = (s+1)⁻² (1 − cos((s+1)x)) / (1 − cos x)`, `x = h − g`.
pub fn pe_overlap_squared(cutoff: usize, x: f64) -> f64 {
    let n = (cutoff + 1) as f64;
    let den = 1.0 - x.cos();
    if den.abs() < 1e-12 {
        // Near x = 0 mod 2π use the Fejér sum, which is smooth there.
        let s: f64 = (-(cutoff as i64)..=cutoff as i64)
            .map(|k| (n - k.unsigned_abs() as f64) * (k as f64 * x).cos())
            .sum();
        return s / (n * n);
    }
    (1.0 - (n * x).cos()) / den / (n * n)
}

/// `⟨s;g|t;h⟩_CS = (s+1)^{-1/2} Σ_{k≤s} √p_k e^{ik(h−g)}` with `p` the coherent
/// photon distribution truncated at `cs_cutoff` and renormalized.
pub fn cs_pe_overlap(pe_cutoff: usize, amplitude: f64, cs_cutoff: usize, g: f64, h: f64) -> C64 {
    let w = poisson_weights(amplitude, cs_cutoff);
    let z: f64 = w.iter().sum();
    let s: C64 = w
        .iter()
        .enumerate()
        .take(pe_cutoff + 1)
        .map(|(k, p)| C64::cis(k as f64 * (h - g)) * (p / z).sqrt())
        .sum();
    s / ((pe_cutoff + 1) as f64).sqrt()
}

/// `|⟨j;e|j;g⟩|² = cos^{4j}(β/2)`.
pub fn su2_coherent_overlap_squared(twice_j: u32, beta: f64) -> f64 {
    (beta / 2.0).cos().powi(2 * twice_j as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn phase_eigenstate_cutoff_one() {
        let f = FrameFamily::phase_eigenstate(1);
        let e = f.ket(&GroupElement::u1(0.0)).unwrap();
        let p = f.ket(&GroupElement::u1(PI)).unwrap();
        let r = 0.5f64.sqrt();
        assert!((e.vector()[0] - r).norm() < 1e-15 && (e.vector()[1] - r).norm() < 1e-15);
        assert!((p.vector()[1] + r).norm() < 1e-15);
        assert!(e.inner(&p).norm() < 1e-15);
        assert!(pe_overlap_squared(1, PI).abs() < 1e-15);
    }

    #[test]
    fn coherent_truncation() {
        let vac = FrameFamily::u1_coherent(0.0, None).unwrap().fiducial_ket();
        assert_eq!(vac.vector().len(), 1);
        let mass: f64 = poisson_weights(2.0, 21).iter().sum();
        assert!(mass >= MIN_RETAINED_MASS);
        assert!(FrameFamily::u1_coherent(2.0, Some(5)).is_err());
        let ket = FrameFamily::u1_coherent(2.0, Some(30)).unwrap().fiducial_ket();
        let mean: f64 = ket.vector().iter().enumerate().map(|(k, a)| k as f64 * a.norm_sqr()).sum();
        assert!((mean - 4.0).abs() < 1e-3);
    }

    #[test]
    fn fiducial_dimension_and_weights() {
        assert_eq!(fiducial_dimension(1), 10);
        let ket = FrameFamily::su2_fiducial(1).fiducial_ket();
        assert_eq!(ket.vector().len(), 10);
        // j = 0 carries 1/√10, each of the three j = 1 pairs √3/√10.
        let nz: Vec<f64> = ket.vector().iter().filter(|a| a.norm() > 0.0).map(|a| a.re).collect();
        assert_eq!(nz.len(), 4);
        assert!((nz[0] - 0.1f64.sqrt()).abs() < 1e-15);
        assert!(nz[1..].iter().all(|a| (a - 0.3f64.sqrt()).abs() < 1e-15));
        assert!((fiducial_overlap(1, PI) + 0.2).abs() < 1e-15);
    }

    #[test]
    fn trivial_fiducial_is_invariant() {
        let f = FrameFamily::su2_fiducial(0);
        let g = GroupElement::su2_polar(1.0, 2.0, 3.0);
        assert!((f.ket(&g).unwrap().inner(&f.fiducial_ket()).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spin_coherent_poles() {
        let f = FrameFamily::su2_coherent(2);
        let up = f.ket(&GroupElement::su2_euler(0.0, 0.0, 0.0)).unwrap();
        assert!((up.vector()[0] - 1.0).norm() < 1e-15);
        let down = f.ket(&GroupElement::su2_euler(0.0, PI, 0.0)).unwrap();
        assert!((down.vector()[2].norm() - 1.0).abs() < 1e-14);
        assert!(f.fiducial_ket().inner(&down).norm() < 1e-14);
        let half = f.overlap_from_identity(&GroupElement::su2_euler(0.0, PI / 2.0, 0.0)).unwrap();
        assert!((half - 0.5).norm() < 1e-15);
    }

    #[test]
    fn character_sum_matches_ratio_for_half_integer() {
        // Σ_m e^{imω} = sin((j+½)ω)/sin(ω/2).
        for tj in 0..6u32 {
            let om = 1.3;
            let j = tj as f64 / 2.0;
            let ratio = ((j + 0.5) * om).sin() / (om / 2.0).sin();
            assert!((su2_character(tj, om) - ratio).abs() < 1e-13);
        }
    }
}
