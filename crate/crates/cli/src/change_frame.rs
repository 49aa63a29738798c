//! The change-of-frame pipeline over a grid of outcomes.

use std::f64::consts::TAU;

use qrframe::change_frame::recovered_system_state;
use qrframe::channels::{Channel, GTwirl};
use qrframe::group::haar_grid;
use qrframe::{fidelity, trace_distance, Group, GroupElement, HaarGrid, ProcedureSpec};
use rayon::prelude::*;

use crate::config::{parse_system, ScenarioConfig};
use crate::output::Cell;
use crate::{base_table, Report, Result};

const RESIDUAL_TOL: f64 = 1e-10;
const NORMALIZATION_TOL: f64 = 1e-9;
const DEFAULT_U1_OUTCOMES: usize = 64;

pub fn run_change_frame(config: &ScenarioConfig) -> Result<Report> {
    let group = config.group.group();
    let mut warnings = Vec::new();
    let system = parse_system(&config.system, group, &mut warnings)?;
    let frame_a = config.family.frame(config.s_a, "s-a")?;
    let frame_b = config.family.frame(config.s_b, "s-b")?;

    let mut spec = ProcedureSpec::new(system.clone(), frame_a, frame_b);
    spec.orientation_a = config.orientation_a;
    if let Some(l) = config.bandlimit {
        spec.grid = Some(haar_grid(group, l));
    }
    let measurement = spec.measurement()?;
    let sigma = spec.initial_state()?;
    let rho_prime = recovered_system_state(&spec)?;
    let b_family = frame_b.measurement_family();

    // Outcomes with quadrature weights; `exact` when the weights integrate P(h) exactly.
    let (outcomes, weights, exact): (Vec<GroupElement>, Vec<f64>, bool) = match config.outcome {
        Some(h) => (vec![h], vec![1.0], false),
        None => match group {
            Group::U1 => {
                let n = config.outcome_grid.unwrap_or(DEFAULT_U1_OUTCOMES);
                let hs = (0..n).map(|k| GroupElement::u1(TAU * k as f64 / n as f64)).collect();
                (hs, vec![1.0 / n as f64; n], n > measurement.effect_degree())
            }
            Group::SU2 => {
                let grid = match config.outcome_grid {
                    Some(l) => haar_grid(Group::SU2, l),
                    None => HaarGrid::for_degree(Group::SU2, measurement.effect_degree(), true),
                };
                let exact = grid.ensure_exact(measurement.effect_degree(), true).is_ok();
                (grid.nodes, grid.weights, exact)
            }
        },
    };

    let rows: Vec<(f64, f64)> = outcomes
        .par_iter()
        .map(|h| -> qrframe::Result<(f64, f64)> {
            let out = measurement.instrument(&sigma, h)?;
            let residual = match &out.post_state {
                Some(post) => {
                    let b = b_family.ket(h)?.density();
                    let sb = rho_prime.tensor(&b)?;
                    let predicted = GTwirl::auto(sb.space()).apply(&sb)?;
                    trace_distance(post, &predicted)?
                }
                None => f64::NAN,
            };
            Ok((out.probability, residual))
        })
        .collect::<qrframe::Result<_>>()?;

    let mut columns: Vec<&str> = match group {
        Group::U1 => vec!["h"],
        Group::SU2 => vec!["omega", "theta", "phi"],
    };
    columns.extend(["weight", "probability", "residual"]);
    let mut table = base_table(config, &columns);
    table.meta("outcomes", outcomes.len());
    table.meta("instrument-grid-nodes", measurement.grid().len());
    table.meta("instrument-grid-bandlimit", measurement.grid().bandlimit);
    table.meta("frame-dimension-a", frame_a.dimension());
    table.meta("frame-dimension-b", frame_b.dimension());
    table.meta("rho-b", "maximally mixed");

    let mut worst: f64 = 0.0;
    let mut normalization = 0.0;
    for ((h, w), (p, residual)) in outcomes.iter().zip(&weights).zip(&rows) {
        let mut row: Vec<Cell> = match h.theta() {
            Some(theta) => vec![theta.into()],
            None => {
                let polar = h.polar().expect("SU(2) element");
                vec![polar.omega.into(), polar.theta.into(), polar.phi.into()]
            }
        };
        row.extend([Cell::from(*w), Cell::from(*p), Cell::from(*residual)]);
        table.push(row);
        if residual.is_finite() {
            worst = worst.max(*residual);
        }
        normalization += w * p;
    }

    let f = fidelity(&system, &rho_prime)?;
    let td = trace_distance(&system, &rho_prime)?;
    table.foot("fidelity", f);
    table.foot("trace_distance", td);
    if exact {
        table.foot("normalization", normalization);
    } else {
        table.foot("normalization", "n/a (outcome grid not exact)");
    }
    table.foot("max_residual", worst);

    let mut report = Report::new(table);
    for w in warnings {
        report.warn(w);
    }
    report.check(worst <= RESIDUAL_TOL, || format!("pipeline and predicted final states differ by {worst:e}"));
    report.check(!exact || (normalization - 1.0).abs() <= NORMALIZATION_TOL, || {
        format!("outcome density integrates to {normalization}, not 1")
    });
    Ok(report)
}
