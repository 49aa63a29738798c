//! Channels applied functionally to density operators.
//!
//! Quadrature sums run over fixed-size node chunks in parallel; chunk
//! partial sums are added in node order, so results are bit-reproducible.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frames::FrameFamily;
use crate::group::{inverse, Group, GroupElement, HaarGrid};
use crate::hilbert::{DensityOperator, Ket, Representation, Space};
use crate::linalg::{self, gauss_legendre, CMatrix, C64, ZERO};

const CHUNK: usize = 32;
pub const SUPEROPERATOR_MAX_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceBehavior {
    Preserving,
    Decreasing,
}

pub trait Channel: Sync {
    fn input_space(&self) -> &Space;
    fn output_space(&self) -> &Space;
    fn trace_behavior(&self) -> TraceBehavior {
        TraceBehavior::Preserving
    }

    /// Linear action on an arbitrary operator.
    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix>;

    /// Apply to a state and re-validate the output.
    fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.space() != self.input_space() {
            return Err(Error::DimensionMismatch { expected: self.input_space().dim(), found: rho.dim() });
        }
        let out = linalg::hermitian_part(&self.apply_matrix(rho.matrix())?);
        match self.trace_behavior() {
            TraceBehavior::Preserving => DensityOperator::new(self.output_space().clone(), out),
            TraceBehavior::Decreasing => DensityOperator::from_positive(self.output_space().clone(), out),
        }
    }

    /// Matrix of the map on column-stacked operators.
    fn superoperator(&self) -> Result<CMatrix> {
        let (din, dout) = (self.input_space().dim(), self.output_space().dim());
        if din.max(dout) > SUPEROPERATOR_MAX_DIM {
            return Err(Error::Unsupported(format!(
                "superoperator materialization is limited to dimension {SUPEROPERATOR_MAX_DIM}"
            )));
        }
        let mut s = CMatrix::zeros(dout * dout, din * din);
        for c in 0..din {
            for r in 0..din {
                let mut e = CMatrix::zeros(din, din);
                e[(r, c)] = C64::from(1.0);
                let img = self.apply_matrix(&e)?;
                s.column_mut(c * din + r).copy_from_slice(img.as_slice());
            }
        }
        Ok(s)
    }
}

fn check_input(space: &Space, x: &CMatrix) -> Result<()> {
    if x.nrows() != space.dim() || x.ncols() != space.dim() {
        Err(Error::DimensionMismatch { expected: space.dim(), found: x.nrows() })
    } else {
        Ok(())
    }
}

/// `Σ_i term(i)` over grid nodes with a deterministic reduction order.
pub fn quadrature_sum<F>(n: usize, rows: usize, cols: usize, term: F) -> Result<CMatrix>
where
    F: Fn(usize) -> Result<CMatrix> + Sync,
{
    let chunks: Vec<Result<CMatrix>> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = CMatrix::zeros(rows, cols);
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                acc += term(i)?;
            }
            Ok(acc)
        })
        .collect();
    let mut total = CMatrix::zeros(rows, cols);
    for c in chunks {
        total += c?;
    }
    Ok(total)
}

/// Quadrature G-twirl `∫dμ(g) U(g) ρ U(g)†`.
#[derive(Debug, Clone)]
pub struct GTwirl {
    space: Space,
    rep: Representation,
    grid: HaarGrid,
}

impl GTwirl {
    /// Refuses grids that would only approximate the twirl.
    pub fn new(space: &Space, grid: &HaarGrid) -> Result<Self> {
        check_group(space.group(), grid)?;
        grid.ensure_exact(space.conjugation_degree(), space.mixed_parity())?;
        Ok(GTwirl { space: space.clone(), rep: Representation::new(space), grid: grid.clone() })
    }

    /// Build with the smallest exact grid for the space.
    pub fn auto(space: &Space) -> Self {
        let grid = HaarGrid::for_degree(space.group(), space.conjugation_degree(), space.mixed_parity());
        GTwirl::new(space, &grid).expect("grid sized for the space")
    }

    pub fn grid(&self) -> &HaarGrid {
        &self.grid
    }
}

fn check_group(group: Group, grid: &HaarGrid) -> Result<()> {
    if grid.group != group {
        Err(Error::GroupMismatch { expected: group, found: grid.group })
    } else {
        Ok(())
    }
}

impl Channel for GTwirl {
    fn input_space(&self) -> &Space {
        &self.space
    }
    fn output_space(&self) -> &Space {
        &self.space
    }
    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        check_input(&self.space, x)?;
        let d = self.space.dim();
        quadrature_sum(self.grid.len(), d, d, |i| {
            Ok(self.rep.conjugate(&self.grid.nodes[i], x)? * C64::from(self.grid.weights[i]))
        })
    }
}

pub fn g_twirl(rho: &DensityOperator, grid: &HaarGrid) -> Result<DensityOperator> {
    GTwirl::new(rho.space(), grid)?.apply(rho)
}

/// Twirl from the charge-sector decomposition: sector projection,
/// depolarization of each irrep factor, identity on multiplicities.
#[derive(Debug, Clone)]
pub struct ExactTwirl {
    space: Space,
}

impl ExactTwirl {
    /// U(1) accepts any product of Fock-type factors; SU(2) only a single
    /// declared `M ⊗ N` system.
    pub fn new(space: &Space) -> Result<Self> {
        if space.group() == Group::SU2 && space.factors().len() != 1 {
            return Err(Error::Unsupported(
                "exact SU(2) twirl needs a single system with declared sectors; use the quadrature twirl".into(),
            ));
        }
        Ok(ExactTwirl { space: space.clone() })
    }
}

impl Channel for ExactTwirl {
    fn input_space(&self) -> &Space {
        &self.space
    }
    fn output_space(&self) -> &Space {
        &self.space
    }
    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        check_input(&self.space, x)?;
        match self.space.group() {
            Group::U1 => {
                let q = self.space.total_weights();
                Ok(CMatrix::from_fn(x.nrows(), x.ncols(), |r, c| if q[r] == q[c] { x[(r, c)] } else { ZERO }))
            }
            Group::SU2 => {
                let spec = &self.space.factors()[0];
                let mut out = CMatrix::zeros(x.nrows(), x.ncols());
                for (sector, off) in spec.sectors().iter().zip(spec.offsets()) {
                    let (di, dm) = (sector.irrep_dim, sector.mult_dim);
                    // Reduced operator on N: trace over the irrep index.
                    let mut reduced = CMatrix::zeros(dm, dm);
                    for i in 0..di {
                        reduced += x.view((off + i * dm, off + i * dm), (dm, dm));
                    }
                    reduced /= C64::from(di as f64);
                    for i in 0..di {
                        out.view_mut((off + i * dm, off + i * dm), (dm, dm)).copy_from(&reduced);
                    }
                }
                Ok(out)
            }
        }
    }
}

pub fn g_twirl_exact(rho: &DensityOperator) -> Result<DensityOperator> {
    ExactTwirl::new(rho.space())?.apply(rho)
}

/// `ℰ_{ρ_R}(ρ_S) = G_SR(ρ_S ⊗ ρ_R)`.
#[derive(Debug, Clone)]
pub struct Encoding {
    system: Space,
    frame_state: DensityOperator,
    twirl: GTwirl,
}

impl Encoding {
    pub fn new(system: &Space, frame_state: &DensityOperator, grid: &HaarGrid) -> Result<Self> {
        let joint = system.tensor(frame_state.space())?;
        Ok(Encoding { system: system.clone(), frame_state: frame_state.clone(), twirl: GTwirl::new(&joint, grid)? })
    }

    pub fn auto(system: &Space, frame_state: &DensityOperator) -> Result<Self> {
        let joint = system.tensor(frame_state.space())?;
        Ok(Encoding { system: system.clone(), frame_state: frame_state.clone(), twirl: GTwirl::auto(&joint) })
    }
}

impl Channel for Encoding {
    fn input_space(&self) -> &Space {
        &self.system
    }
    fn output_space(&self) -> &Space {
        self.twirl.input_space()
    }
    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        check_input(&self.system, x)?;
        self.twirl.apply_matrix(&x.kronecker(self.frame_state.matrix()))
    }
}

pub fn encode(rho_s: &DensityOperator, frame_state: &DensityOperator, grid: &HaarGrid) -> Result<DensityOperator> {
    Encoding::new(rho_s.space(), frame_state, grid)?.apply(rho_s)
}

/// `(I ⊗ ⟨v|) X (I ⊗ |v⟩)` for `X` on `S ⊗ R`, `v ∈ R`.
pub fn sandwich_last(x: &CMatrix, ds: usize, v: &[C64]) -> CMatrix {
    let dr = v.len();
    // Contract the column index first: Y[(i,a), k] = Σ_b X[(i,a),(k,b)] v_b.
    let mut y = CMatrix::zeros(ds * dr, ds);
    for k in 0..ds {
        for (b, vb) in v.iter().enumerate() {
            if *vb == ZERO {
                continue;
            }
            let col = x.column(k * dr + b);
            let mut target = y.column_mut(k);
            target.axpy(*vb, &col, C64::from(1.0));
        }
    }
    let mut out = CMatrix::zeros(ds, ds);
    for k in 0..ds {
        for i in 0..ds {
            let mut acc = ZERO;
            for (a, va) in v.iter().enumerate() {
                acc += va.conj() * y[(i * dr + a, k)];
            }
            out[(i, k)] = acc;
        }
    }
    out
}

/// Recovery `𝓡(σ_SR) = D ∫dμ(g) U_S(g⁻¹) ⟨g|σ_SR|g⟩ U_S(g⁻¹)†` with the
/// covariant POVM `{D |g⟩⟨g|}` on `R`.
#[derive(Debug, Clone)]
pub struct Recovery {
    system: Space,
    joint: Space,
    family: FrameFamily,
    rep_s: Representation,
    rep_r: Representation,
    grid: HaarGrid,
}

impl Recovery {
    pub fn new(system: &Space, family: FrameFamily, grid: &HaarGrid) -> Result<Self> {
        if !family.has_uniform_twirl() {
            return Err(Error::Unsupported(format!(
                "{} states do not twirl to I/D, so their projectors do not form a POVM",
                family.name()
            )));
        }
        check_group(system.group(), grid)?;
        let joint = system.tensor(&family.space())?;
        grid.ensure_exact(joint.conjugation_degree(), joint.mixed_parity())?;
        Ok(Recovery {
            system: system.clone(),
            joint,
            family,
            rep_s: Representation::new(system),
            rep_r: Representation::new(&family.space()),
            grid: grid.clone(),
        })
    }

    pub fn auto(system: &Space, family: FrameFamily) -> Result<Self> {
        let joint = system.tensor(&family.space())?;
        let grid = HaarGrid::for_degree(system.group(), joint.conjugation_degree(), joint.mixed_parity());
        Recovery::new(system, family, &grid)
    }
}

impl Channel for Recovery {
    fn input_space(&self) -> &Space {
        &self.joint
    }
    fn output_space(&self) -> &Space {
        &self.system
    }
    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        check_input(&self.joint, x)?;
        let ds = self.system.dim();
        let d = self.family.dimension() as f64;
        let fid = self.family.fiducial_ket();
        quadrature_sum(self.grid.len(), ds, ds, |i| {
            let g = &self.grid.nodes[i];
            let v = fid.rotated(&self.rep_r, g)?;
            let m = sandwich_last(x, ds, v.vector().as_slice());
            Ok(self.rep_s.conjugate(&inverse(g), &m)? * C64::from(d * self.grid.weights[i]))
        })
    }
}

pub fn recover(sigma_sr: &DensityOperator, system: &Space, family: FrameFamily, grid: &HaarGrid) -> Result<DensityOperator> {
    Recovery::new(system, family, grid)?.apply(sigma_sr)
}

/// Mixture of unitaries `ρ ↦ ∫dμ(g) w(g) U_S(g⁻¹) ρ U_S(g⁻¹)†` with the
/// weights tabulated on a grid.
#[derive(Debug, Clone)]
pub struct UnitaryMixture {
    system: Space,
    rep: Representation,
    nodes: Vec<GroupElement>,
    weights: Vec<f64>,
}

impl UnitaryMixture {
    fn from_weight_fn<F>(system: &Space, grid: &HaarGrid, weight: F) -> Result<Self>
    where
        F: Fn(&GroupElement) -> Result<f64>,
    {
        let mut nodes = Vec::with_capacity(grid.len());
        let mut weights = Vec::with_capacity(grid.len());
        for (g, w) in grid.iter() {
            let wg = weight(g)? * w;
            if wg != 0.0 {
                nodes.push(inverse(g));
                weights.push(wg);
            }
        }
        Ok(UnitaryMixture { system: system.clone(), rep: Representation::new(system), nodes, weights })
    }

    /// Total weight; 1 for trace-preserving mixtures.
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

impl Channel for UnitaryMixture {
    fn input_space(&self) -> &Space {
        &self.system
    }
    fn output_space(&self) -> &Space {
        &self.system
    }
    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        check_input(&self.system, x)?;
        let d = self.system.dim();
        quadrature_sum(self.nodes.len(), d, d, |i| {
            Ok(self.rep.conjugate(&self.nodes[i], x)? * C64::from(self.weights[i]))
        })
    }
}

fn mixture_degree(system: &Space, frame_degree: usize) -> usize {
    system.conjugation_degree() + frame_degree
}

/// `𝓡 ∘ ℰ_{ρ_R} = D ∫dμ(g) ⟨g|ρ_R|g⟩ 𝒰_S(g⁻¹)` with `|g⟩` from the
/// measurement family.
#[derive(Debug, Clone)]
pub struct RecoverEncodeKernel(UnitaryMixture);

impl RecoverEncodeKernel {
    pub fn new(system: &Space, measurement: FrameFamily, frame_state: &DensityOperator, grid: &HaarGrid) -> Result<Self> {
        if !measurement.has_uniform_twirl() {
            return Err(Error::Unsupported(format!("{} projectors do not form a POVM", measurement.name())));
        }
        check_group(system.group(), grid)?;
        let frame_space = measurement.space();
        if frame_state.space() != &frame_space {
            return Err(Error::DimensionMismatch { expected: frame_space.dim(), found: frame_state.dim() });
        }
        let joint = system.tensor(&frame_space)?;
        grid.ensure_exact(mixture_degree(system, frame_space.conjugation_degree()), joint.mixed_parity())?;
        let rep = Representation::new(&frame_space);
        let fid = measurement.fiducial_ket();
        let d = measurement.dimension() as f64;
        let inner = UnitaryMixture::from_weight_fn(system, grid, |g| {
            let v = fid.rotated(&rep, g)?;
            let rv = frame_state.matrix() * v.vector();
            Ok(d * v.vector().dotc(&rv).re)
        })?;
        Ok(RecoverEncodeKernel(inner))
    }

    /// Kernel for a frame prepared in `frame.ket(a)`, read out with the
    /// frame's measurement family.
    pub fn for_frame(system: &Space, frame: FrameFamily, a: &GroupElement, grid: &HaarGrid) -> Result<Self> {
        let state = frame.ket(a)?.density();
        let meas = frame.measurement_family();
        let state = embed_frame_state(&state, &meas.space())?;
        RecoverEncodeKernel::new(system, meas, &state, grid)
    }
}

/// Truncate or zero-pad a Fock-space state to the measurement space.
fn embed_frame_state(state: &DensityOperator, target: &Space) -> Result<DensityOperator> {
    if state.space() == target {
        return Ok(state.clone());
    }
    let d = target.dim();
    let src = state.matrix();
    let n = src.nrows().min(d);
    let mut m = CMatrix::zeros(d, d);
    m.view_mut((0, 0), (n, n)).copy_from(&src.view((0, 0), (n, n)));
    DensityOperator::from_positive(target.clone(), m)
}

impl Channel for RecoverEncodeKernel {
    fn input_space(&self) -> &Space {
        self.0.input_space()
    }
    fn output_space(&self) -> &Space {
        self.0.output_space()
    }
    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        self.0.apply_matrix(x)
    }
}

pub fn recover_encode_kernel(rho_s: &DensityOperator, frame: FrameFamily, grid: &HaarGrid) -> Result<DensityOperator> {
    RecoverEncodeKernel::for_frame(rho_s.space(), frame, &GroupElement::identity(frame.group()), grid)?.apply(rho_s)
}

/// Decoherence map `F = D ∫dμ(g) |⟨φ(g)|ψ(e)⟩|² 𝒰_S(g⁻¹)` from the closed-form
/// overlap of the frame family.
#[derive(Debug, Clone)]
pub struct Decoherence {
    family: FrameFamily,
    inner: UnitaryMixture,
}

impl Decoherence {
    pub fn new(system: &Space, family: FrameFamily, grid: &HaarGrid) -> Result<Self> {
        check_group(system.group(), grid)?;
        let meas = family.measurement_family();
        let joint = system.tensor(&meas.space())?;
        let frame_degree = meas.space().conjugation_degree();
        grid.ensure_exact(mixture_degree(system, frame_degree), joint.mixed_parity())?;
        let inner = UnitaryMixture::from_weight_fn(system, grid, |g| family.decoherence_weight(g))?;
        Ok(Decoherence { family, inner })
    }

    pub fn auto(system: &Space, family: FrameFamily) -> Result<Self> {
        let meas = family.measurement_family();
        let joint = system.tensor(&meas.space())?;
        let degree = mixture_degree(system, meas.space().conjugation_degree());
        let grid = HaarGrid::for_degree(system.group(), degree, joint.mixed_parity());
        Decoherence::new(system, family, &grid)
    }

    pub fn family(&self) -> FrameFamily {
        self.family
    }

    pub fn total_weight(&self) -> f64 {
        self.inner.total_weight()
    }
}

impl Channel for Decoherence {
    fn input_space(&self) -> &Space {
        self.inner.input_space()
    }
    fn output_space(&self) -> &Space {
        self.inner.output_space()
    }
    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        self.inner.apply_matrix(x)
    }
}

pub fn decoherence_f(rho_s: &DensityOperator, family: FrameFamily, grid: &HaarGrid) -> Result<DensityOperator> {
    Decoherence::new(rho_s.space(), family, grid)?.apply(rho_s)
}

/// Averaging over `exp(−iθJ_z)`: removes coherences between different
/// total `J_z` (or total charge) eigenvalues.
#[derive(Debug, Clone)]
pub struct ZDephasing {
    space: Space,
    weights: Vec<i32>,
}

impl ZDephasing {
    pub fn new(space: &Space) -> Self {
        ZDephasing { space: space.clone(), weights: space.total_weights() }
    }
}

impl Channel for ZDephasing {
    fn input_space(&self) -> &Space {
        &self.space
    }
    fn output_space(&self) -> &Space {
        &self.space
    }
    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        check_input(&self.space, x)?;
        let w = &self.weights;
        Ok(CMatrix::from_fn(x.nrows(), x.ncols(), |r, c| if w[r] == w[c] { x[(r, c)] } else { ZERO }))
    }
}

pub fn dephase_z(rho: &DensityOperator) -> Result<DensityOperator> {
    ZDephasing::new(rho.space()).apply(rho)
}

/// `(2j_A+1) ∫_0^π sinβ dβ/2 cos^{4j_A}(β/2) R_y(−β)`, the middle factor of
/// the coherent-state decoherence map.
#[derive(Debug, Clone)]
pub struct YRotationMixture {
    space: Space,
    rotations: Vec<(CMatrix, f64)>,
}

impl YRotationMixture {
    pub fn new(space: &Space, frame_twice_j: u32) -> Result<Self> {
        if space.group() != Group::SU2 {
            return Err(Error::GroupMismatch { expected: Group::SU2, found: space.group() });
        }
        let rep = Representation::new(space);
        // Polynomial in cos β of degree 2j_A + 2J_S inside the dephasing sandwich.
        let order = frame_twice_j as usize + space.max_degree() + 2;
        let (x, w) = gauss_legendre(order);
        let norm = (frame_twice_j + 1) as f64;
        let rotations = x
            .iter()
            .zip(&w)
            .map(|(&cb, &wb)| {
                let beta = cb.clamp(-1.0, 1.0).acos();
                let weight = norm * wb / 2.0 * ((1.0 + cb) / 2.0).powi(frame_twice_j as i32);
                let u = rep.unitary(&GroupElement::su2_euler(0.0, -beta, 0.0))?;
                Ok((u, weight))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(YRotationMixture { space: space.clone(), rotations })
    }
}

impl Channel for YRotationMixture {
    fn input_space(&self) -> &Space {
        &self.space
    }
    fn output_space(&self) -> &Space {
        &self.space
    }
    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        check_input(&self.space, x)?;
        let d = self.space.dim();
        let mut acc = CMatrix::zeros(d, d);
        for (u, w) in &self.rotations {
            acc += (u * x * u.adjoint()) * C64::from(*w);
        }
        Ok(acc)
    }
}

/// `𝒰(g)`: conjugation by the representation of a fixed element.
#[derive(Debug, Clone)]
pub struct UnitaryChannel {
    space: Space,
    rep: Representation,
    g: GroupElement,
}

impl UnitaryChannel {
    pub fn new(space: &Space, g: GroupElement) -> Result<Self> {
        if space.group() != g.group() {
            return Err(Error::GroupMismatch { expected: space.group(), found: g.group() });
        }
        Ok(UnitaryChannel { space: space.clone(), rep: Representation::new(space), g })
    }
}

impl Channel for UnitaryChannel {
    fn input_space(&self) -> &Space {
        &self.space
    }
    fn output_space(&self) -> &Space {
        &self.space
    }
    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        check_input(&self.space, x)?;
        self.rep.conjugate(&self.g, x)
    }
}

/// `second ∘ first`.
pub struct Composed<'a> {
    first: &'a dyn Channel,
    second: &'a dyn Channel,
}

impl<'a> Composed<'a> {
    pub fn new(first: &'a dyn Channel, second: &'a dyn Channel) -> Result<Self> {
        if first.output_space() != second.input_space() {
            return Err(Error::DimensionMismatch {
                expected: second.input_space().dim(),
                found: first.output_space().dim(),
            });
        }
        Ok(Composed { first, second })
    }
}

impl Channel for Composed<'_> {
    fn input_space(&self) -> &Space {
        self.first.input_space()
    }
    fn output_space(&self) -> &Space {
        self.second.output_space()
    }
    fn trace_behavior(&self) -> TraceBehavior {
        if self.first.trace_behavior() == TraceBehavior::Preserving
            && self.second.trace_behavior() == TraceBehavior::Preserving
        {
            TraceBehavior::Preserving
        } else {
            TraceBehavior::Decreasing
        }
    }
    fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        self.second.apply_matrix(&self.first.apply_matrix(x)?)
    }
}

/// Entanglement fidelity with respect to the maximally entangled
/// purification of `I/d`: `d⁻² Σ_{ij} ⟨i|𝓔(|i⟩⟨j|)|j⟩`.
pub fn entanglement_fidelity(channel: &dyn Channel) -> Result<f64> {
    let d = channel.input_space().dim();
    if channel.output_space().dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: channel.output_space().dim() });
    }
    let mut acc = ZERO;
    for i in 0..d {
        for j in 0..d {
            let mut e = CMatrix::zeros(d, d);
            e[(i, j)] = C64::from(1.0);
            acc += channel.apply_matrix(&e)?[(i, j)];
        }
    }
    Ok(acc.re / (d * d) as f64)
}

/// Pure-state convenience for frame preparation.
pub fn frame_density(frame: FrameFamily, g: &GroupElement) -> Result<DensityOperator> {
    Ok(Ket::density(&frame.ket(g)?))
}
