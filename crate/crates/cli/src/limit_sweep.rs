//! Classical-limit sweeps of recover∘encode over frame sizes.

use qrframe::change_frame::recovered_system_state;
use qrframe::{fidelity, trace_distance, FrameFamily, Group, HaarGrid, ProcedureSpec};
use rayon::prelude::*;

use crate::config::{parse_system, FamilyKind, ScenarioConfig};
use crate::output::Cell;
use crate::{base_table, Report, Result};

/// Coset frames leave `J_z` coherences fully dephased at every size.
const DEPHASING_TOL: f64 = 1e-10;

struct Row {
    fidelity: f64,
    trace_distance: f64,
    concentration: f64,
    offdiag: f64,
}

/// Kernel mean of `cos θ` (U(1)) or of `D¹₀₀(g) = cos β` (SU(2)); tends to 1
/// as the kernel concentrates at the identity.
fn concentration(frame: FrameFamily) -> qrframe::Result<f64> {
    let group = frame.group();
    let degree = frame.measurement_family().space().conjugation_degree() + 2;
    let grid = HaarGrid::for_degree(group, degree, true);
    let mut acc = 0.0;
    for (g, w) in grid.iter() {
        let probe = match group {
            Group::U1 => g.theta().expect("U(1) element").cos(),
            Group::SU2 => g.euler().expect("SU(2) element").beta.cos(),
        };
        acc += w * frame.decoherence_weight(g)? * probe;
    }
    Ok(acc)
}

pub fn run_limit_sweep(config: &ScenarioConfig) -> Result<Report> {
    let group = config.group.group();
    let mut warnings = Vec::new();
    let system = parse_system(&config.system, group, &mut warnings)?;
    let frames = config
        .sizes
        .iter()
        .map(|&s| config.family.frame(s, "sizes"))
        .collect::<Result<Vec<_>>>()?;

    let rows: Vec<Row> = frames
        .par_iter()
        .map(|&frame| -> qrframe::Result<Row> {
            let mut spec = ProcedureSpec::new(system.clone(), frame, frame);
            spec.orientation_a = config.orientation_a;
            let rho = recovered_system_state(&spec)?;
            let m = rho.matrix();
            let offdiag = (0..m.nrows())
                .flat_map(|i| (0..m.ncols()).filter(move |&k| k != i).map(move |k| (i, k)))
                .map(|ik| m[ik].norm())
                .fold(0.0, f64::max);
            Ok(Row {
                fidelity: fidelity(&system, &rho)?,
                trace_distance: trace_distance(&system, &rho)?,
                concentration: concentration(frame)?,
                offdiag,
            })
        })
        .collect::<qrframe::Result<_>>()?;

    let coset = config.family == FamilyKind::Coset;
    let mut columns = vec!["family", "size", "fidelity", "trace_distance", "concentration", "fidelity_increased"];
    if coset {
        columns.push("jz_offdiag");
    }
    let mut table = base_table(config, &columns);
    table.meta("sizes", config.sizes.len());

    let mut monotone = true;
    let mut worst_offdiag: f64 = 0.0;
    for (i, (size, row)) in config.sizes.iter().zip(&rows).enumerate() {
        let increased = i == 0 || row.fidelity > rows[i - 1].fidelity;
        monotone &= increased;
        let mut cells = vec![
            Cell::from(config.family.name()),
            Cell::from(*size),
            row.fidelity.into(),
            row.trace_distance.into(),
            row.concentration.into(),
            increased.into(),
        ];
        if coset {
            cells.push(row.offdiag.into());
            worst_offdiag = worst_offdiag.max(row.offdiag);
        }
        table.push(cells);
    }
    if group == Group::U1 {
        // The infinite-size kernel is the identity map, so the metrics are exact.
        table.push(vec![
            Cell::from(config.family.name()),
            Cell::from("inf"),
            Cell::from(1.0),
            Cell::from(0.0),
            Cell::from(1.0),
            Cell::from(true),
        ]);
    }
    table.foot("monotone_fidelity", monotone);
    if coset {
        table.foot("max_jz_offdiag", worst_offdiag);
    }

    let mut report = Report::new(table);
    for w in warnings {
        report.warn(w);
    }
    report.check(!coset || worst_offdiag <= DEPHASING_TOL, || {
        format!("coset frame left J_z coherence {worst_offdiag:e} in the recovered state")
    });
    Ok(report)
}
