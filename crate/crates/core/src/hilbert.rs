//! Charge-sector Hilbert spaces, representations, states and metrics.
//!
//! Basis ordering: sectors ascending in charge; inside a sector the irrep
//! index is major and the multiplicity index minor. Spin-`j` irrep index
//! `i` carries `m = j − i`. Composite spaces use the Kronecker ordering of
//! their factors.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::linalg::{self, CMatrix, CVector, C64, ONE, ZERO};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = -1e-10;
pub const NORM_TOL: f64 = 1e-12;

/// One charge sector `M^(q) ⊗ N^(q)`. For SU(2) the charge is `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SectorSpec {
    pub charge: i32,
    pub irrep_dim: usize,
    pub mult_dim: usize,
}

impl SectorSpec {
    pub fn dim(&self) -> usize {
        self.irrep_dim * self.mult_dim
    }
}

/// A single system given as a direct sum of charge sectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpaceSpec {
    group: Group,
    sectors: Vec<SectorSpec>,
}

impl SpaceSpec {
    pub fn new(group: Group, sectors: Vec<SectorSpec>) -> Result<Self> {
        if sectors.is_empty() {
            return Err(Error::InvalidArgument("space needs at least one sector".into()));
        }
        for w in sectors.windows(2) {
            if w[0].charge >= w[1].charge {
                return Err(Error::InvalidArgument("sector charges must be strictly increasing".into()));
            }
        }
        for s in &sectors {
            if s.mult_dim == 0 {
                return Err(Error::InvalidArgument("multiplicity dimension must be at least 1".into()));
            }
            let expected = match group {
                Group::U1 => 1,
                Group::SU2 => {
                    if s.charge < 0 {
                        return Err(Error::InvalidArgument("2j must be non-negative".into()));
                    }
                    s.charge as usize + 1
                }
            };
            if s.irrep_dim != expected {
                return Err(Error::InvalidArgument(format!(
                    "sector {} has irrep dimension {}, expected {expected}",
                    s.charge, s.irrep_dim
                )));
            }
        }
        Ok(SpaceSpec { group, sectors })
    }

    /// Single mode truncated to photon numbers `0..=cutoff`.
    pub fn fock(cutoff: usize) -> Self {
        Self::photon_numbers(&(0..=cutoff as i32).collect::<Vec<_>>()).unwrap()
    }

    /// Single mode restricted to the listed photon numbers.
    pub fn photon_numbers(ns: &[i32]) -> Result<Self> {
        let sectors = ns.iter().map(|&n| SectorSpec { charge: n, irrep_dim: 1, mult_dim: 1 }).collect();
        SpaceSpec::new(Group::U1, sectors)
    }

    /// The spin-`j` irrep, `twice_j = 2j`.
    pub fn spin(twice_j: u32) -> Self {
        let s = SectorSpec { charge: twice_j as i32, irrep_dim: twice_j as usize + 1, mult_dim: 1 };
        SpaceSpec { group: Group::SU2, sectors: vec![s] }
    }

    /// `⊕_{j=0}^{s} M^(j) ⊗ N^(j)` with `dim N^(j) = 2j + 1`.
    pub fn su2_fiducial(max_spin: u32) -> Self {
        let sectors = (0..=max_spin)
            .map(|j| SectorSpec { charge: 2 * j as i32, irrep_dim: 2 * j as usize + 1, mult_dim: 2 * j as usize + 1 })
            .collect();
        SpaceSpec { group: Group::SU2, sectors }
    }

    /// One-dimensional charge-zero space.
    pub fn trivial(group: Group) -> Self {
        let s = SectorSpec { charge: 0, irrep_dim: 1, mult_dim: 1 };
        SpaceSpec { group, sectors: vec![s] }
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn sectors(&self) -> &[SectorSpec] {
        &self.sectors
    }

    pub fn dim(&self) -> usize {
        self.sectors.iter().map(SectorSpec::dim).sum()
    }

    pub fn min_charge(&self) -> i32 {
        self.sectors[0].charge
    }

    pub fn max_charge(&self) -> i32 {
        self.sectors.last().unwrap().charge
    }

    /// Offset of each sector's first basis vector.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = 0;
        self.sectors
            .iter()
            .map(|s| {
                let o = off;
                off += s.dim();
                o
            })
            .collect()
    }

    /// Per basis vector: the U(1) charge, or `2m` for SU(2).
    pub fn weights(&self) -> Vec<i32> {
        let mut out = Vec::with_capacity(self.dim());
        for s in &self.sectors {
            for i in 0..s.irrep_dim {
                let w = match self.group {
                    Group::U1 => s.charge,
                    Group::SU2 => s.charge - 2 * i as i32,
                };
                out.extend(std::iter::repeat_n(w, s.mult_dim));
            }
        }
        out
    }

    /// Per basis vector: the sector charge.
    pub fn sector_labels(&self) -> Vec<i32> {
        self.sectors.iter().flat_map(|s| std::iter::repeat_n(s.charge, s.dim())).collect()
    }
}

/// A tensor product of [`SpaceSpec`] factors sharing one group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Space {
    group: Group,
    factors: Vec<SpaceSpec>,
}

impl From<SpaceSpec> for Space {
    fn from(s: SpaceSpec) -> Self {
        Space { group: s.group, factors: vec![s] }
    }
}

impl Space {
    pub fn product(factors: Vec<SpaceSpec>) -> Result<Self> {
        let group = factors.first().ok_or_else(|| Error::InvalidArgument("empty tensor product".into()))?.group;
        if let Some(bad) = factors.iter().find(|f| f.group != group) {
            return Err(Error::GroupMismatch { expected: group, found: bad.group });
        }
        Ok(Space { group, factors })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn factors(&self) -> &[SpaceSpec] {
        &self.factors
    }

    pub fn factor_dims(&self) -> Vec<usize> {
        self.factors.iter().map(SpaceSpec::dim).collect()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(SpaceSpec::dim).product()
    }

    pub fn tensor(&self, other: &Space) -> Result<Space> {
        if self.group != other.group {
            return Err(Error::GroupMismatch { expected: self.group, found: other.group });
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(Space { group: self.group, factors })
    }

    pub fn subspace(&self, keep: &[usize]) -> Result<Space> {
        let factors = keep
            .iter()
            .map(|&k| {
                self.factors.get(k).cloned().ok_or_else(|| {
                    Error::Contract(format!("factor {k} not declared in a {}-factor space", self.factors.len()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Space::product(factors)
    }

    /// Per product basis vector: total U(1) charge, or total `2m` for SU(2).
    pub fn total_weights(&self) -> Vec<i32> {
        let mut acc = vec![0i32];
        for f in &self.factors {
            let w = f.weights();
            acc = acc.iter().flat_map(|a| w.iter().map(move |b| a + b)).collect();
        }
        acc
    }

    /// Largest `2J` (SU(2)) or `|charge|` (U(1)) of a vector in this space's
    /// representation.
    pub fn max_degree(&self) -> usize {
        match self.group {
            Group::U1 => self.factors.iter().map(|f| f.max_charge().abs().max(f.min_charge().abs())).sum::<i32>() as usize,
            Group::SU2 => self.factors.iter().map(|f| f.max_charge()).sum::<i32>() as usize,
        }
    }

    /// Degree of `g ↦ U(g) X U(g)†` for operators on this space.
    pub fn conjugation_degree(&self) -> usize {
        match self.group {
            Group::U1 => {
                let w = self.total_weights();
                let (lo, hi) = (w.iter().min().unwrap(), w.iter().max().unwrap());
                (hi - lo) as usize
            }
            Group::SU2 => 2 * self.max_degree(),
        }
    }

    /// Whether basis vectors carry both integer and half-integer total spin,
    /// so that conjugation integrands contain half-integer irreps.
    pub fn mixed_parity(&self) -> bool {
        if self.group == Group::U1 {
            return false;
        }
        let mut parities = vec![0i32];
        for f in &self.factors {
            let ps: Vec<i32> = f.sectors.iter().map(|s| s.charge.rem_euclid(2)).collect();
            let mut next: Vec<i32> = parities.iter().flat_map(|a| ps.iter().map(move |b| (a + b) % 2)).collect();
            next.sort_unstable();
            next.dedup();
            parities = next;
        }
        parities.len() > 1
    }
}

/// Spin-`j` generators in the descending-`m` basis.
pub struct SpinMatrices {
    pub jz: CMatrix,
    pub jplus: CMatrix,
    pub jx: CMatrix,
    pub jy: CMatrix,
}

pub fn spin_matrices(twice_j: u32) -> SpinMatrices {
    let d = twice_j as usize + 1;
    let j = twice_j as f64 / 2.0;
    let m = |i: usize| j - i as f64;
    let jz = CMatrix::from_fn(d, d, |r, c| if r == c { C64::from(m(r)) } else { ZERO });
    // J+|j,m⟩ = sqrt(j(j+1) − m(m+1)) |j,m+1⟩, and m+1 sits at index i−1.
    let jplus = CMatrix::from_fn(d, d, |r, c| {
        if c >= 1 && r == c - 1 {
            let mm = m(c);
            C64::from((j * (j + 1.0) - mm * (mm + 1.0)).sqrt())
        } else {
            ZERO
        }
    });
    let jminus = jplus.adjoint();
    let jx = (&jplus + &jminus).scale(0.5);
    let jy = (&jplus - &jminus) * C64::new(0.0, -0.5);
    SpinMatrices { jz, jplus, jx, jy }
}

/// Spin-`j` Wigner matrices from the eigenbasis of `J_y`.
#[derive(Debug, Clone)]
pub struct SpinRep {
    twice_j: u32,
    jy_basis: CMatrix,
    jy_eigs: Vec<f64>,
}

impl SpinRep {
    pub fn new(twice_j: u32) -> Self {
        let (eigs, basis) = linalg::eigh(&spin_matrices(twice_j).jy);
        // The spectrum is exactly {−j, …, j}; snap away round-off.
        let jy_eigs = eigs.iter().map(|x| (2.0 * x).round() / 2.0).collect();
        SpinRep { twice_j, jy_basis: basis, jy_eigs }
    }

    pub fn twice_j(&self) -> u32 {
        self.twice_j
    }

    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    /// `d^j(β) = exp(−iβJ_y)`.
    pub fn small_d(&self, beta: f64) -> CMatrix {
        let w = &self.jy_basis;
        let mut scaled = w.clone();
        for (k, &lam) in self.jy_eigs.iter().enumerate() {
            let ph = C64::cis(-beta * lam);
            for i in 0..self.dim() {
                scaled[(i, k)] *= ph;
            }
        }
        let d = &scaled * w.adjoint();
        d.map(|z| C64::from(z.re))
    }

    /// `D^j(g)` for an SU(2) element.
    pub fn matrix(&self, g: &crate::group::Su2) -> CMatrix {
        let (sigma, delta, beta) = g.euler_half_angles();
        let mut d = self.small_d(beta);
        let tj = self.twice_j as i32;
        for r in 0..self.dim() {
            let m2 = tj - 2 * r as i32;
            for c in 0..self.dim() {
                let mp2 = tj - 2 * c as i32;
                let sum = ((m2 + mp2) / 2) as f64;
                let diff = ((m2 - mp2) / 2) as f64;
                d[(r, c)] *= C64::cis(-sigma * sum - delta * diff);
            }
        }
        d
    }
}

#[derive(Debug, Clone)]
enum FactorRep {
    U1 { charges: Vec<i32> },
    SU2 { blocks: Vec<(Arc<SpinRep>, usize)> },
}

/// Precomputed unitary representation of a [`Space`].
#[derive(Debug, Clone)]
pub struct Representation {
    space: Space,
    factors: Vec<FactorRep>,
}

impl Representation {
    pub fn new(space: &Space) -> Self {
        let mut cache: HashMap<u32, Arc<SpinRep>> = HashMap::new();
        let factors = space
            .factors
            .iter()
            .map(|f| match f.group {
                Group::U1 => FactorRep::U1 { charges: f.weights() },
                Group::SU2 => FactorRep::SU2 {
                    blocks: f
                        .sectors
                        .iter()
                        .map(|s| {
                            let tj = s.charge as u32;
                            let rep = cache.entry(tj).or_insert_with(|| Arc::new(SpinRep::new(tj))).clone();
                            (rep, s.mult_dim)
                        })
                        .collect(),
                },
            })
            .collect();
        Representation { space: space.clone(), factors }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if g.group() != self.space.group {
            Err(Error::GroupMismatch { expected: self.space.group, found: g.group() })
        } else {
            Ok(())
        }
    }

    /// Diagonal of `U(g)` for U(1) spaces.
    pub fn u1_phases(&self, g: &GroupElement) -> Result<Option<CVector>> {
        self.check(g)?;
        let Some(theta) = g.theta() else { return Ok(None) };
        let w = self.space.total_weights();
        Ok(Some(CVector::from_iterator(w.len(), w.iter().map(|&n| C64::cis(n as f64 * theta)))))
    }

    pub fn factor_unitary(&self, k: usize, g: &GroupElement) -> Result<CMatrix> {
        self.check(g)?;
        Ok(match (&self.factors[k], g) {
            (FactorRep::U1 { charges }, GroupElement::U1(theta)) => {
                CMatrix::from_diagonal(&CVector::from_iterator(charges.len(), charges.iter().map(|&n| C64::cis(n as f64 * theta))))
            }
            (FactorRep::SU2 { blocks }, GroupElement::SU2(u)) => {
                let dim = self.space.factors[k].dim();
                let mut out = CMatrix::zeros(dim, dim);
                let mut off = 0;
                for (rep, mult) in blocks {
                    let block = rep.matrix(u).kronecker(&CMatrix::identity(*mult, *mult));
                    let n = block.nrows();
                    out.view_mut((off, off), (n, n)).copy_from(&block);
                    off += n;
                }
                out
            }
            _ => unreachable!("group checked above"),
        })
    }

    pub fn unitary(&self, g: &GroupElement) -> Result<CMatrix> {
        let mut u = self.factor_unitary(0, g)?;
        for k in 1..self.factors.len() {
            u = u.kronecker(&self.factor_unitary(k, g)?);
        }
        Ok(u)
    }

    /// `U(g) X U(g)†`.
    pub fn conjugate(&self, g: &GroupElement, x: &CMatrix) -> Result<CMatrix> {
        if let Some(ph) = self.u1_phases(g)? {
            return Ok(CMatrix::from_fn(x.nrows(), x.ncols(), |r, c| ph[r] * x[(r, c)] * ph[c].conj()));
        }
        if self.factors.len() == 1 {
            let u = self.unitary(g)?;
            return Ok(&u * x * u.adjoint());
        }
        // Factor by factor: cheaper than forming the full Kronecker product.
        let dims = self.space.factor_dims();
        let us = (0..self.factors.len()).map(|k| self.factor_unitary(k, g)).collect::<Result<Vec<_>>>()?;
        let left = |m: &CMatrix| us.iter().enumerate().fold(m.clone(), |acc, (k, u)| apply_factor_left(&acc, &dims, k, u));
        Ok(left(&left(x).adjoint()).adjoint())
    }
}

/// `(I ⊗ u ⊗ I) X` with `u` acting on factor `k` of the row index.
pub fn apply_factor_left(x: &CMatrix, dims: &[usize], k: usize, u: &CMatrix) -> CMatrix {
    let dk = dims[k];
    let post: usize = dims[k + 1..].iter().product();
    let pre: usize = dims[..k].iter().product();
    let mut out = CMatrix::zeros(x.nrows(), x.ncols());
    let mut buf = vec![ZERO; dk];
    for c in 0..x.ncols() {
        for a in 0..pre {
            for p in 0..post {
                let base = a * dk * post + p;
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = x[(base + i * post, c)];
                }
                for i2 in 0..dk {
                    let mut acc = ZERO;
                    for (i, b) in buf.iter().enumerate() {
                        acc += u[(i2, i)] * b;
                    }
                    out[(base + i2 * post, c)] = acc;
                }
            }
        }
    }
    out
}

/// Convenience wrapper: `U(g)` on a space.
pub fn rep_unitary(space: &Space, g: &GroupElement) -> Result<CMatrix> {
    Representation::new(space).unitary(g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    space: Space,
    vector: CVector,
}

impl Ket {
    pub fn new(space: Space, vector: CVector) -> Result<Self> {
        if vector.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: vector.len() });
        }
        let n = vector.norm();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::Contract(format!("ket norm {n} differs from 1")));
        }
        Ok(Ket { space, vector })
    }

    /// Rescale to unit norm; refuses the zero vector.
    pub fn normalized(space: Space, vector: CVector) -> Result<Self> {
        let n = vector.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidArgument("cannot normalize a zero vector".into()));
        }
        Ket::new(space, vector.unscale(n))
    }

    pub fn basis(space: Space, index: usize) -> Result<Self> {
        let d = space.dim();
        if index >= d {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range for dimension {d}")));
        }
        let mut v = CVector::zeros(d);
        v[index] = ONE;
        Ket::new(space, v)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    pub fn inner(&self, other: &Ket) -> C64 {
        self.vector.dotc(&other.vector)
    }

    pub fn tensor(&self, other: &Ket) -> Result<Ket> {
        Ok(Ket { space: self.space.tensor(&other.space)?, vector: self.vector.kronecker(&other.vector) })
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator { space: self.space.clone(), matrix: linalg::outer(&self.vector, &self.vector) }
    }

    pub fn rotated(&self, rep: &Representation, g: &GroupElement) -> Result<Ket> {
        let v = match rep.u1_phases(g)? {
            Some(ph) => self.vector.component_mul(&ph),
            None => rep.unitary(g)? * &self.vector,
        };
        Ok(Ket { space: self.space.clone(), vector: v })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    space: Space,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(space: Space, matrix: CMatrix) -> Result<Self> {
        let rho = DensityOperator { space, matrix };
        rho.validate()?;
        Ok(rho)
    }

    /// Normalize a non-zero positive operator to unit trace.
    pub fn from_positive(space: Space, matrix: CMatrix) -> Result<Self> {
        let tr = matrix.trace().re;
        if tr <= 0.0 || !tr.is_finite() {
            return Err(Error::Contract(format!("operator trace {tr} is not positive")));
        }
        DensityOperator::new(space, matrix.unscale(tr))
    }

    pub fn maximally_mixed(space: Space) -> Self {
        let d = space.dim();
        DensityOperator { space, matrix: CMatrix::identity(d, d).unscale(d as f64) }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.space.dim();
        if self.matrix.nrows() != d || self.matrix.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: self.matrix.nrows() });
        }
        let herm = linalg::hermiticity_defect(&self.matrix);
        if herm > HERMITICITY_TOL {
            return Err(Error::Contract(format!("density operator not Hermitian (defect {herm:.3e})")));
        }
        let tr = self.matrix.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::Contract(format!("density operator trace {tr} differs from 1")));
        }
        let min = self.min_eigenvalue();
        if min < PSD_TOL {
            return Err(Error::Contract(format!("density operator has eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::eigvalsh(&self.matrix).first().copied().unwrap_or(0.0)
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        Ok(DensityOperator { space: self.space.tensor(&other.space)?, matrix: self.matrix.kronecker(&other.matrix) })
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let space = self.space.subspace(keep)?;
        let matrix = partial_trace_matrix(&self.matrix, &self.space.factor_dims(), keep)?;
        Ok(DensityOperator { space, matrix })
    }

    pub fn expectation(&self, op: &CMatrix) -> C64 {
        (&self.matrix * op).trace()
    }
}

/// Partial trace of an operator on `⊗_k dims[k]`, keeping `keep` (ascending).
pub fn partial_trace_matrix(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(Error::Contract(format!(
            "operator of dimension {} does not match declared factorization {dims:?}",
            m.nrows()
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Contract(format!("invalid subsystem selection {keep:?} for {dims:?}")));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let kd: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let td: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let dk: usize = kd.iter().product();
    let dt: usize = td.iter().product();

    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let index_of = |sel: &[usize], sizes: &[usize], mut flat: usize| -> usize {
        let mut idx = 0;
        for (p, &k) in sel.iter().enumerate().rev() {
            let digit = flat % sizes[p];
            flat /= sizes[p];
            idx += digit * strides[k];
        }
        idx
    };
    let kept_idx: Vec<usize> = (0..dk).map(|i| index_of(keep, &kd, i)).collect();
    let traced_idx: Vec<usize> = (0..dt).map(|i| index_of(&traced, &td, i)).collect();

    let mut out = CMatrix::zeros(dk, dk);
    for c in 0..dk {
        for r in 0..dk {
            let mut acc = ZERO;
            for &t in &traced_idx {
                acc += m[(kept_idx[r] + t, kept_idx[c] + t)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    rho.partial_trace(keep)
}

fn same_shape(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        Err(Error::DimensionMismatch { expected: a.nrows(), found: b.nrows() })
    } else {
        Ok(())
    }
}

/// Root fidelity `Tr sqrt(sqrt(ρ) σ sqrt(ρ))`.
pub fn fidelity_matrix(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    same_shape(rho, sigma)?;
    let sr = linalg::hermitian_map(rho, |x| x.max(0.0).sqrt());
    let inner = &sr * sigma * &sr;
    let f: f64 = linalg::eigvalsh(&inner).into_iter().map(|x| x.max(0.0).sqrt()).sum();
    Ok(f.clamp(0.0, 1.0))
}

/// `½ ‖ρ − σ‖₁`.
pub fn trace_distance_matrix(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    same_shape(rho, sigma)?;
    let diff = rho - sigma;
    Ok(0.5 * linalg::eigvalsh(&diff).into_iter().map(f64::abs).sum::<f64>())
}

pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    fidelity_matrix(&rho.matrix, &sigma.matrix)
}

pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    trace_distance_matrix(&rho.matrix, &sigma.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::compose;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn fock_phases() {
        let space: Space = SpaceSpec::fock(2).into();
        let u = rep_unitary(&space, &GroupElement::u1(PI)).unwrap();
        let expected = [1.0, -1.0, 1.0];
        for (i, e) in expected.iter().enumerate() {
            assert!((u[(i, i)] - e).norm() < 1e-15);
        }
    }

    #[test]
    fn half_turn_about_z_on_spin_half() {
        let space: Space = SpaceSpec::spin(1).into();
        let u = rep_unitary(&space, &GroupElement::su2_polar(PI, 0.0, 0.0)).unwrap();
        assert!((u[(0, 0)] - c(0.0, 1.0)).norm() < 1e-14);
        assert!((u[(1, 1)] - c(0.0, -1.0)).norm() < 1e-14);
        assert!(u[(0, 1)].norm() < 1e-14 && u[(1, 0)].norm() < 1e-14);
    }

    #[test]
    fn spin_half_rep_is_the_defining_matrix() {
        let g = GroupElement::su2_euler(0.4, 2.2, 5.1);
        let u = rep_unitary(&SpaceSpec::spin(1).into(), &g).unwrap();
        let m = g.su2().unwrap().matrix();
        for i in 0..2 {
            for j in 0..2 {
                assert!((u[(i, j)] - m[i][j]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn spin_one_small_d_closed_form() {
        let beta: f64 = 1.234;
        let d = SpinRep::new(2).small_d(beta);
        let (cb, sb) = (beta.cos(), beta.sin());
        let s2 = 2f64.sqrt();
        let expected = [
            [(1.0 + cb) / 2.0, -sb / s2, (1.0 - cb) / 2.0],
            [sb / s2, cb, -sb / s2],
            [(1.0 - cb) / 2.0, sb / s2, (1.0 + cb) / 2.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((d[(i, j)] - expected[i][j]).norm() < 1e-14, "({i},{j})");
            }
        }
    }

    #[test]
    fn polar_generator_matches_exponential() {
        // exp(i ω n·J) by series on spin 1.
        let (om, th, ph): (f64, f64, f64) = (2.1, 0.9, 1.7);
        let sm = spin_matrices(2);
        let n = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
        let gen = (&sm.jx * C64::from(n[0]) + &sm.jy * C64::from(n[1]) + &sm.jz * C64::from(n[2])) * c(0.0, om);
        let mut term = CMatrix::identity(3, 3);
        let mut sum = term.clone();
        for k in 1..60 {
            term = &term * &gen / C64::from(k as f64);
            sum += &term;
        }
        let u = rep_unitary(&SpaceSpec::spin(2).into(), &GroupElement::su2_polar(om, th, ph)).unwrap();
        assert!(linalg::max_abs_diff(&u, &sum) < 1e-13);
    }

    #[test]
    fn homomorphism_on_fiducial_space() {
        let space: Space = SpaceSpec::su2_fiducial(2).into();
        let rep = Representation::new(&space);
        let g = GroupElement::su2_euler(0.3, 1.0, 2.0);
        let h = GroupElement::su2_polar(2.5, 2.0, 4.0);
        let lhs = rep.unitary(&g).unwrap() * rep.unitary(&h).unwrap();
        let rhs = rep.unitary(&compose(&g, &h).unwrap()).unwrap();
        assert!(linalg::max_abs_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn factorwise_conjugation_matches_kronecker() {
        let space = Space::product(vec![SpaceSpec::spin(1), SpaceSpec::su2_fiducial(1), SpaceSpec::spin(2)]).unwrap();
        let rep = Representation::new(&space);
        let g = GroupElement::su2_euler(1.0, 0.5, 3.0);
        let d = space.dim();
        let x = CMatrix::from_fn(d, d, |r, k| c(((r * 7 + k * 3) % 11) as f64, ((r + 2 * k) % 5) as f64));
        let u = rep.unitary(&g).unwrap();
        let direct = &u * &x * u.adjoint();
        assert!(linalg::max_abs_diff(&direct, &rep.conjugate(&g, &x).unwrap()) < 1e-12);
    }

    #[test]
    fn group_mismatch_is_reported() {
        let space: Space = SpaceSpec::fock(1).into();
        assert!(matches!(
            rep_unitary(&space, &GroupElement::identity(Group::SU2)),
            Err(Error::GroupMismatch { .. })
        ));
    }

    #[test]
    fn tensor_dimensions_and_partial_trace() {
        let a: Space = SpaceSpec::fock(1).into();
        let b: Space = SpaceSpec::fock(2).into();
        assert_eq!(a.tensor(&b).unwrap().dim(), 6);

        let bell = CVector::from_vec(vec![c(1.0, 0.0), ZERO, ZERO, c(1.0, 0.0)]).unscale(2f64.sqrt());
        let rho = Ket::new(a.tensor(&a).unwrap(), bell).unwrap().density();
        let reduced = rho.partial_trace(&[1]).unwrap();
        assert!(linalg::max_abs_diff(reduced.matrix(), &CMatrix::identity(2, 2).unscale(2.0)) < 1e-15);
    }

    #[test]
    fn fidelity_examples() {
        let space: Space = SpaceSpec::fock(1).into();
        let rho = Ket::basis(space.clone(), 0).unwrap().density();
        let sigma = DensityOperator::maximally_mixed(space.clone());
        assert!((fidelity(&rho, &sigma).unwrap() - 0.5f64.sqrt()).abs() < 1e-10);
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);
        let orth = Ket::basis(space, 1).unwrap().density();
        assert!(fidelity(&rho, &orth).unwrap().abs() < 1e-12);
        assert!((trace_distance(&rho, &orth).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_non_physical() {
        let space: Space = SpaceSpec::fock(1).into();
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.5, 0.0), c(-0.5, 0.0)]));
        assert!(matches!(DensityOperator::new(space, m), Err(Error::Contract(_))));
    }

    #[test]
    fn mixed_parity_detection() {
        let half: Space = SpaceSpec::spin(1).into();
        assert!(!half.mixed_parity());
        let mixed = Space::product(vec![SpaceSpec::spin(1), SpaceSpec::su2_fiducial(1)]).unwrap();
        assert!(!mixed.mixed_parity());
        let sectors = vec![
            SectorSpec { charge: 0, irrep_dim: 1, mult_dim: 1 },
            SectorSpec { charge: 1, irrep_dim: 2, mult_dim: 1 },
        ];
        let s: Space = SpaceSpec::new(Group::SU2, sectors).unwrap().into();
        assert!(s.mixed_parity());
    }
}
