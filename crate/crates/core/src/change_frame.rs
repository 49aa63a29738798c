//! Relational measurement between two frames and the change-of-frame
//! procedure.
//!
//! Composite spaces are ordered `[S…, A, B]`; the post-measurement state
//! lives on `[S…, B]`.

use crate::channels::{quadrature_sum, sandwich_last, Channel, GTwirl, RecoverEncodeKernel};
use crate::error::{Error, Result};
use crate::frames::FrameFamily;
use crate::group::{compose, Group, GroupElement, HaarGrid};
use crate::hilbert::{partial_trace_matrix, DensityOperator, Ket, Representation, Space};
use crate::linalg::{self, CMatrix, CVector, C64};

/// Below this outcome density the post-measurement state is undefined.
pub const NULL_OUTCOME_TOL: f64 = 1e-14;

/// How the frame-B state in the projector is oriented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorOrdering {
    /// `|g⟩⟨g| ⊗ |gh⟩⟨gh|`: the covariant choice.
    GH,
    /// `|g⟩⟨g| ⊗ |hg⟩⟨hg|`: covariant only for central `h`.
    HG,
}

#[derive(Debug, Clone)]
pub struct InstrumentOutcome {
    pub outcome: GroupElement,
    /// `P(h) = Tr[E_h σ]`, a density with respect to the Haar measure.
    pub probability: f64,
    /// Normalized state on `S ⊗ B`; `None` for a null outcome.
    pub post_state: Option<DensityOperator>,
    /// Unnormalized `Tr_A[𝓜^h(σ)]`.
    pub raw: CMatrix,
}

/// The covariant relational measurement `{E_h}` and instrument `{𝓜^h}`.
#[derive(Debug, Clone)]
pub struct RelationalMeasurement {
    frame_a: FrameFamily,
    frame_b: FrameFamily,
    rep_a: Representation,
    rep_b: Representation,
    grid: HaarGrid,
    ordering: ProjectorOrdering,
}

impl RelationalMeasurement {
    /// Checks that both projector families twirl to `I/D` and that the grid
    /// integrates the instrument (quartic in the frame representations).
    pub fn new(frame_a: FrameFamily, frame_b: FrameFamily, grid: &HaarGrid) -> Result<Self> {
        Self::with_ordering(frame_a, frame_b, grid, ProjectorOrdering::GH)
    }

    pub fn with_ordering(
        frame_a: FrameFamily,
        frame_b: FrameFamily,
        grid: &HaarGrid,
        ordering: ProjectorOrdering,
    ) -> Result<Self> {
        for f in [frame_a, frame_b] {
            if !f.has_uniform_twirl() {
                return Err(Error::Unsupported(format!(
                    "{} states do not twirl to I/D; relational projectors need PE, fiducial or spin-coherent frames",
                    f.name()
                )));
            }
        }
        if frame_a.group() != frame_b.group() {
            return Err(Error::GroupMismatch { expected: frame_a.group(), found: frame_b.group() });
        }
        if grid.group != frame_a.group() {
            return Err(Error::GroupMismatch { expected: frame_a.group(), found: grid.group });
        }
        let m = RelationalMeasurement {
            frame_a,
            frame_b,
            rep_a: Representation::new(&frame_a.space()),
            rep_b: Representation::new(&frame_b.space()),
            grid: grid.clone(),
            ordering,
        };
        grid.ensure_exact(m.instrument_degree(), m.frames_space().mixed_parity())?;
        Ok(m)
    }

    /// Smallest default grid exact for the instrument.
    pub fn auto(frame_a: FrameFamily, frame_b: FrameFamily) -> Result<Self> {
        Self::auto_with_ordering(frame_a, frame_b, ProjectorOrdering::GH)
    }

    pub fn auto_with_ordering(frame_a: FrameFamily, frame_b: FrameFamily, ordering: ProjectorOrdering) -> Result<Self> {
        let ab = frame_a.space().tensor(&frame_b.space())?;
        let grid = HaarGrid::for_degree(frame_a.group(), 2 * ab.conjugation_degree(), ab.mixed_parity());
        Self::with_ordering(frame_a, frame_b, &grid, ordering)
    }

    pub fn frames_space(&self) -> Space {
        self.frame_a.space().tensor(&self.frame_b.space()).expect("same group checked")
    }

    /// Degree of `g ↦ Π σ Π`.
    pub fn instrument_degree(&self) -> usize {
        2 * self.frames_space().conjugation_degree()
    }

    /// Degree of `g ↦ Π`.
    pub fn effect_degree(&self) -> usize {
        self.frames_space().conjugation_degree()
    }

    pub fn grid(&self) -> &HaarGrid {
        &self.grid
    }

    pub fn frame_a(&self) -> FrameFamily {
        self.frame_a
    }

    pub fn frame_b(&self) -> FrameFamily {
        self.frame_b
    }

    fn normalization(&self) -> f64 {
        (self.frame_a.dimension() * self.frame_b.dimension()) as f64
    }

    /// Frame kets `(|g⟩_A, |gh⟩_B)`, or `|hg⟩_B` for the reversed ordering.
    fn frame_kets(&self, g: &GroupElement, h: &GroupElement) -> Result<(Ket, Ket)> {
        let b_orientation = match self.ordering {
            ProjectorOrdering::GH => compose(g, h)?,
            ProjectorOrdering::HG => compose(h, g)?,
        };
        Ok((self.frame_a.ket_with(&self.rep_a, g)?, self.frame_b.ket_with(&self.rep_b, &b_orientation)?))
    }

    /// `|g⟩_A ⊗ |gh⟩_B`.
    pub fn projector_vector(&self, g: &GroupElement, h: &GroupElement) -> Result<CVector> {
        let (a, b) = self.frame_kets(g, h)?;
        Ok(a.vector().kronecker(b.vector()))
    }

    /// `Π^{g,h}` on `A ⊗ B`.
    pub fn projector(&self, g: &GroupElement, h: &GroupElement) -> Result<CMatrix> {
        let v = self.projector_vector(g, h)?;
        Ok(linalg::outer(&v, &v))
    }

    /// `E_h = D_A D_B ∫dμ(g) Π^{g,h}`.
    pub fn povm_effect(&self, h: &GroupElement) -> Result<CMatrix> {
        let d = self.frames_space().dim();
        let norm = self.normalization();
        quadrature_sum(self.grid.len(), d, d, |i| {
            Ok(self.projector(&self.grid.nodes[i], h)? * C64::from(norm * self.grid.weights[i]))
        })
    }

    fn check_joint(&self, sigma: &CMatrix) -> Result<usize> {
        let dab = self.frames_space().dim();
        if !sigma.nrows().is_multiple_of(dab) || sigma.nrows() != sigma.ncols() {
            return Err(Error::DimensionMismatch { expected: dab, found: sigma.nrows() });
        }
        Ok(sigma.nrows() / dab)
    }

    /// Full update `𝓜^h(σ)` on `S ⊗ A ⊗ B`.
    pub fn instrument_map(&self, sigma: &CMatrix, h: &GroupElement) -> Result<CMatrix> {
        let ds = self.check_joint(sigma)?;
        let norm = self.normalization();
        let d = sigma.nrows();
        quadrature_sum(self.grid.len(), d, d, |i| {
            let v = self.projector_vector(&self.grid.nodes[i], h)?;
            let m = sandwich_last(sigma, ds, v.as_slice());
            Ok(m.kronecker(&linalg::outer(&v, &v)) * C64::from(norm * self.grid.weights[i]))
        })
    }

    /// `Tr_A[𝓜^h(σ)]` on `S ⊗ B`, computed without forming the full update.
    pub fn reduced_update(&self, sigma: &CMatrix, h: &GroupElement) -> Result<CMatrix> {
        let ds = self.check_joint(sigma)?;
        let norm = self.normalization();
        let db = self.frame_b.space_spec().dim();
        quadrature_sum(self.grid.len(), ds * db, ds * db, |i| {
            let (a, b) = self.frame_kets(&self.grid.nodes[i], h)?;
            let v = a.vector().kronecker(b.vector());
            let m = sandwich_last(sigma, ds, v.as_slice());
            Ok(m.kronecker(&b.density().into_matrix()) * C64::from(norm * self.grid.weights[i]))
        })
    }

    /// Outcome density, post-measurement state and raw update for `h`.
    pub fn instrument(&self, sigma: &DensityOperator, h: &GroupElement) -> Result<InstrumentOutcome> {
        let factors = sigma.space().factors();
        let n = factors.len();
        if n < 3 || factors[n - 2] != self.frame_a.space_spec() || factors[n - 1] != self.frame_b.space_spec() {
            return Err(Error::Contract("instrument input must be ordered as [S…, A, B]".into()));
        }
        let raw = self.reduced_update(sigma.matrix(), h)?;
        let probability = raw.trace().re;
        let keep: Vec<usize> = (0..n - 2).chain([n - 1]).collect();
        let out_space = sigma.space().subspace(&keep)?;
        let post_state = if probability > NULL_OUTCOME_TOL {
            Some(DensityOperator::new(out_space, linalg::hermitian_part(&raw).unscale(probability))?)
        } else {
            None
        };
        Ok(InstrumentOutcome { outcome: *h, probability, post_state, raw })
    }

    /// `P(h) = Tr[E_h σ_AB]` via the POVM effect.
    pub fn outcome_density(&self, sigma: &DensityOperator, h: &GroupElement) -> Result<f64> {
        let n = sigma.space().factors().len();
        let sigma_ab = partial_trace_matrix(sigma.matrix(), &sigma.space().factor_dims(), &[n - 2, n - 1])?;
        Ok((self.povm_effect(h)? * sigma_ab).trace().re)
    }
}

/// Inputs of the change-of-frame procedure.
#[derive(Debug, Clone)]
pub struct ProcedureSpec {
    pub system_state: DensityOperator,
    pub frame_a: FrameFamily,
    pub frame_b: FrameFamily,
    pub orientation_a: GroupElement,
    /// State of frame B; `None` means `I/D_B`. Used as given.
    pub rho_b: Option<DensityOperator>,
    pub outcome: GroupElement,
    /// Grid for the instrument; `None` picks the smallest exact one.
    pub grid: Option<HaarGrid>,
}

impl ProcedureSpec {
    pub fn new(system_state: DensityOperator, frame_a: FrameFamily, frame_b: FrameFamily) -> Self {
        let e = GroupElement::identity(frame_a.group());
        ProcedureSpec { system_state, frame_a, frame_b, orientation_a: e, rho_b: None, outcome: e, grid: None }
    }

    pub fn group(&self) -> Group {
        self.frame_a.group()
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.group();
        for (what, found) in [
            ("frame B", self.frame_b.group()),
            ("system", self.system_state.space().group()),
            ("orientation", self.orientation_a.group()),
            ("outcome", self.outcome.group()),
        ] {
            if found != g {
                return Err(Error::InvalidArgument(format!("{what} belongs to {found:?}, frames to {g:?}")));
            }
        }
        if let Some(rb) = &self.rho_b {
            if rb.space() != &self.frame_b.space() {
                return Err(Error::DimensionMismatch { expected: self.frame_b.space().dim(), found: rb.dim() });
            }
        }
        Ok(())
    }

    /// Relational measurement with each frame's measurement family, so a
    /// coherent-state frame is read out with phase-eigenstate projectors.
    pub fn measurement(&self) -> Result<RelationalMeasurement> {
        let (ma, mb) = (self.frame_a.measurement_family(), self.frame_b.measurement_family());
        match &self.grid {
            Some(grid) => RelationalMeasurement::new(ma, mb, grid),
            None => RelationalMeasurement::auto(ma, mb),
        }
    }

    pub fn rho_b(&self) -> DensityOperator {
        self.rho_b.clone().unwrap_or_else(|| DensityOperator::maximally_mixed(self.frame_b.space()))
    }

    /// `σ_SAB = G_SA(ρ_S ⊗ |ψ(a)⟩⟨ψ(a)|) ⊗ ρ_B`.
    pub fn initial_state(&self) -> Result<DensityOperator> {
        self.validate()?;
        let a = self.frame_a.ket(&self.orientation_a)?.density();
        let sa = self.system_state.tensor(&a)?;
        let twirled = GTwirl::auto(sa.space()).apply(&sa)?;
        twirled.tensor(&self.rho_b())
    }
}

/// Run the relational instrument on the procedure's initial state.
pub fn change_frame(spec: &ProcedureSpec) -> Result<InstrumentOutcome> {
    let sigma = spec.initial_state()?;
    spec.measurement()?.instrument(&sigma, &spec.outcome)
}

/// `ℰ_{|h⟩_B}[(𝓡 ∘ ℰ_{|ψ(a)⟩_A})(ρ_S)]`, the closed-form final state for
/// `ρ_B = I/D_B`.
pub fn predicted_final_state(spec: &ProcedureSpec) -> Result<DensityOperator> {
    spec.validate()?;
    let system = spec.system_state.space();
    let kernel = RecoverEncodeKernel::for_frame(
        system,
        spec.frame_a,
        &spec.orientation_a,
        &HaarGrid::for_degree(spec.group(), kernel_degree(system, spec.frame_a), kernel_parity(system, spec.frame_a)),
    )?;
    let rho_prime = kernel.apply(&spec.system_state)?;
    let b: DensityOperator = Ket::density(&spec.frame_b.measurement_family().ket(&spec.outcome)?);
    let sb = rho_prime.tensor(&b)?;
    GTwirl::auto(sb.space()).apply(&sb)
}

fn kernel_degree(system: &Space, frame: FrameFamily) -> usize {
    system.conjugation_degree() + frame.measurement_family().space().conjugation_degree()
}

fn kernel_parity(system: &Space, frame: FrameFamily) -> bool {
    system.tensor(&frame.measurement_family().space()).map(|s| s.mixed_parity()).unwrap_or(true)
}

/// `ρ_S' = (𝓡 ∘ ℰ_{|ψ(a)⟩_A})(ρ_S)`.
pub fn recovered_system_state(spec: &ProcedureSpec) -> Result<DensityOperator> {
    let system = spec.system_state.space();
    let grid = HaarGrid::for_degree(spec.group(), kernel_degree(system, spec.frame_a), kernel_parity(system, spec.frame_a));
    RecoverEncodeKernel::for_frame(system, spec.frame_a, &spec.orientation_a, &grid)?.apply(&spec.system_state)
}
