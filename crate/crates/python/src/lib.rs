//! Python bindings: frame overlaps, Haar grids, the recover∘encode kernel,
//! the change-of-frame instrument, homodyne probabilities and the scenario
//! runner behind the command-line tool.
//!
//! Matrices cross the boundary as nested lists of complex numbers. A system
//! of dimension `d` is a Fock space `{0..d-1}` for U(1) frames and spin
//! `(d-1)/2` for SU(2) frames.

use qrf::change_frame::recovered_system_state;
use qrf::linalg::CMatrix;
use qrf::{DensityOperator, FrameFamily, Group, GroupElement, ProcedureSpec, Space, SpaceSpec, C64};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn family(name: &str, size: f64) -> PyResult<FrameFamily> {
    let kind = match name {
        "pe" => qrf_cli::config::FamilyKind::Pe,
        "cs" => qrf_cli::config::FamilyKind::Cs,
        "fiducial" => qrf_cli::config::FamilyKind::Fiducial,
        "coset" => qrf_cli::config::FamilyKind::Coset,
        other => return Err(err(format!("unknown family `{other}` (pe, cs, fiducial, coset)"))),
    };
    kind.frame(size, "size").map_err(err)
}

/// `θ` for U(1); `(ω, θ, φ)` polar angles for SU(2).
fn element(group: Group, g: Option<&Bound<'_, PyAny>>) -> PyResult<GroupElement> {
    let Some(g) = g else { return Ok(GroupElement::identity(group)) };
    match group {
        Group::U1 => Ok(GroupElement::u1(g.extract()?)),
        Group::SU2 => {
            let (w, t, p): (f64, f64, f64) = g.extract()?;
            Ok(GroupElement::su2_polar(w, t, p))
        }
    }
}

fn to_matrix(rows: Vec<Vec<C64>>) -> PyResult<CMatrix> {
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(err("matrix must be square"));
    }
    Ok(CMatrix::from_fn(d, d, |i, j| rows[i][j]))
}

fn from_matrix(m: &CMatrix) -> Vec<Vec<C64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn density(group: Group, rows: Vec<Vec<C64>>) -> PyResult<DensityOperator> {
    let m = to_matrix(rows)?;
    let d = m.nrows();
    if d == 0 {
        return Err(err("empty matrix"));
    }
    let space: Space = match group {
        Group::U1 => SpaceSpec::fock(d - 1).into(),
        Group::SU2 => SpaceSpec::spin(d as u32 - 1).into(),
    };
    DensityOperator::new(space, m).map_err(err)
}

/// `D |⟨ψ(g)|ψ(e)⟩|²` for the named family; `D |⟨φ(g)|ψ(e)⟩|²` with
/// phase-eigenstate `φ` for coherent U(1) frames.
#[pyfunction]
#[pyo3(signature = (name, size, g))]
fn overlap(name: &str, size: f64, g: &Bound<'_, PyAny>) -> PyResult<f64> {
    let f = family(name, size)?;
    f.decoherence_weight(&element(f.group(), Some(g))?).map_err(err)
}

/// Haar quadrature nodes as `(params, weight)`; params are `θ` or `(ω, θ, φ)`.
#[pyfunction]
fn haar_grid(group: &str, bandlimit: usize) -> PyResult<Vec<(Vec<f64>, f64)>> {
    let g = match group {
        "u1" => Group::U1,
        "su2" => Group::SU2,
        other => return Err(err(format!("unknown group `{other}`"))),
    };
    let grid = qrf::haar_grid(g, bandlimit);
    Ok(grid
        .iter()
        .map(|(e, w)| match e.theta() {
            Some(t) => (vec![t], w),
            None => {
                let p = e.polar().expect("SU(2) element");
                (vec![p.omega, p.theta, p.phi], w)
            }
        })
        .collect())
}

/// `ρ_S' = (𝓡 ∘ ℰ_{|ψ(a)⟩})(ρ_S)` for a frame of the named family.
#[pyfunction]
#[pyo3(signature = (rho, name, size, orientation=None))]
fn recover_encode(rho: Vec<Vec<C64>>, name: &str, size: f64, orientation: Option<&Bound<'_, PyAny>>) -> PyResult<Vec<Vec<C64>>> {
    let f = family(name, size)?;
    let mut spec = ProcedureSpec::new(density(f.group(), rho)?, f, f);
    spec.orientation_a = element(f.group(), orientation)?;
    Ok(from_matrix(recovered_system_state(&spec).map_err(err)?.matrix()))
}

/// Run the relational instrument for outcome `h`; returns `(P(h), ρ_SB)`
/// with `ρ_SB = None` for a null outcome.
#[pyfunction]
#[pyo3(signature = (rho, name, s_a, s_b, outcome=None, orientation=None))]
fn change_frame(
    rho: Vec<Vec<C64>>,
    name: &str,
    s_a: f64,
    s_b: f64,
    outcome: Option<&Bound<'_, PyAny>>,
    orientation: Option<&Bound<'_, PyAny>>,
) -> PyResult<(f64, Option<Vec<Vec<C64>>>)> {
    let fa = family(name, s_a)?;
    let fb = family(name, s_b)?;
    let mut spec = ProcedureSpec::new(density(fa.group(), rho)?, fa, fb);
    spec.orientation_a = element(fa.group(), orientation)?;
    spec.outcome = element(fa.group(), outcome)?;
    let out = qrf::change_frame(&spec).map_err(err)?;
    Ok((out.probability, out.post_state.map(|s| from_matrix(s.matrix()))))
}

/// Root fidelity `Tr|√ρ √σ|`.
#[pyfunction]
fn fidelity(rho: Vec<Vec<C64>>, sigma: Vec<Vec<C64>>) -> PyResult<f64> {
    qrf::hilbert::fidelity_matrix(&to_matrix(rho)?, &to_matrix(sigma)?).map_err(err)
}

#[pyfunction]
fn trace_distance(rho: Vec<Vec<C64>>, sigma: Vec<Vec<C64>>) -> PyResult<f64> {
    qrf::hilbert::trace_distance_matrix(&to_matrix(rho)?, &to_matrix(sigma)?).map_err(err)
}

/// Homodyne probability of `(2j, 2m)` for coherent inputs `s_A e^{ia}`, `s_B e^{ib}`.
#[pyfunction]
fn bhd_two_coherent(s_a: f64, a: f64, s_b: f64, b: f64, twice_j: u32, twice_m: i32) -> f64 {
    qrf::bhd::bhd_two_coherent(s_a, a, s_b, b, twice_j, twice_m)
}

/// Probability of `2j` photons for two phase eigenstates, as `(numerator, denominator)`.
#[pyfunction]
fn bhd_two_pe_total(s_a: u64, s_b: u64, twice_j: u64) -> (u64, u64) {
    let r = qrf::bhd::bhd_two_pe_total(s_a, s_b, twice_j);
    (*r.numer(), *r.denom())
}

/// Run a CLI scenario and return the rendered table.
///
/// `command` is one of `overlap`, `change-frame`, `limit-sweep`, `bhd`;
/// keyword arguments use the flag names with `_` for `-`.
#[pyfunction]
#[pyo3(signature = (command, **options))]
fn scenario(command: &str, options: Option<&Bound<'_, PyDict>>) -> PyResult<String> {
    use qrf_cli::config::{Command, RawConfig, ScenarioConfig};
    let cmd = match command {
        "overlap" => Command::Overlap,
        "change-frame" => Command::ChangeFrame,
        "limit-sweep" => Command::LimitSweep,
        "bhd" => Command::Bhd,
        other => return Err(err(format!("unknown command `{other}`"))),
    };
    let mut raw = RawConfig::default();
    if let Some(opts) = options {
        for (k, v) in opts.iter() {
            let key: String = k.extract()?;
            raw.set(&key.replace('_', "-"), v.str()?.to_string());
        }
    }
    let config = ScenarioConfig::from_raw(cmd, &raw).map_err(err)?;
    let report = qrf_cli::run(&config).map_err(err)?;
    if let Some(v) = report.violation {
        return Err(err(format!("numerical contract violated: {v}")));
    }
    report.table.render(config.format).map_err(err)
}

#[pymodule]
fn qrframe(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(overlap, m)?)?;
    m.add_function(wrap_pyfunction!(haar_grid, m)?)?;
    m.add_function(wrap_pyfunction!(recover_encode, m)?)?;
    m.add_function(wrap_pyfunction!(change_frame, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(trace_distance, m)?)?;
    m.add_function(wrap_pyfunction!(bhd_two_coherent, m)?)?;
    m.add_function(wrap_pyfunction!(bhd_two_pe_total, m)?)?;
    m.add_function(wrap_pyfunction!(scenario, m)?)?;
    Ok(())
}
