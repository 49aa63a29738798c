//! Overlap curves of frame states against the identity orientation.

use std::f64::consts::PI;

use qrframe::frames::{pe_overlap_squared, su2_coherent_overlap_squared};
use qrframe::{FrameFamily, GroupElement, Representation};
use rayon::prelude::*;

use crate::config::{FamilyKind, ScenarioConfig};
use crate::output::Cell;
use crate::{base_table, Report, Result};

/// Closed form vs direct evaluation must agree to this.
const OVERLAP_TOL: f64 = 1e-11;

/// Axes at which the SU(2) fiducial overlap is evaluated directly.
const AXES: [(f64, f64); 3] = [(0.0, 0.0), (1.1, 0.4), (2.5, 4.0)];

pub fn run_overlap(config: &ScenarioConfig) -> Result<Report> {
    let frame = config.family.frame(config.s_a, "s-a")?;
    let n = config.points;
    let grid = |lo: f64, hi: f64| -> Vec<f64> { (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect() };
    let d = frame.dimension() as f64;

    let (param, xs, extra): (&str, Vec<f64>, Option<&str>) = match config.family {
        FamilyKind::Pe => ("g", grid(-PI, PI), None),
        // The unsquared amplitude without the D factor, for comparison with
        // the coherent-state map as sometimes printed.
        FamilyKind::Cs => ("g", grid(-PI, PI), Some("amplitude_no_d")),
        FamilyKind::Fiducial => ("omega", grid(-PI, PI), Some("axis_spread")),
        FamilyKind::Coset => ("beta", grid(0.0, PI), None),
    };
    let mut columns = vec!["family", "s", param, "overlap", "direct", "residual"];
    columns.extend(extra);
    let mut table = base_table(config, &columns);
    table.meta("dimension", frame.dimension());
    if let FrameFamily::U1Coherent { cutoff, .. } = frame {
        table.meta("cs-cutoff", cutoff);
    }
    table.meta(
        "overlap",
        match config.family {
            FamilyKind::Coset => "|<j;e|j;g>|^2",
            _ => "D |<g|psi(e)>|^2",
        },
    );

    let rows: Vec<(f64, f64, Option<f64>)> = xs
        .par_iter()
        .map(|&x| point(frame, config.family, x, d))
        .collect::<qrframe::Result<_>>()?;

    let mut worst: f64 = 0.0;
    for (x, (closed, direct, extra)) in xs.iter().zip(rows) {
        let residual = (closed - direct).abs();
        worst = worst.max(residual);
        let mut row = vec![Cell::from(config.family.name()), Cell::from(config.s_a), (*x).into(), closed.into(), direct.into(), residual.into()];
        row.extend(extra.map(Cell::from));
        table.push(row);
    }
    if config.family == FamilyKind::Coset {
        let values = table.column("overlap");
        let monotone = values.windows(2).all(|w| w[1] <= w[0]);
        table.foot("monotone_decreasing", monotone);
    }
    let peak = table.column("overlap").into_iter().fold(f64::NEG_INFINITY, f64::max);
    table.foot("peak", peak);
    table.foot("max_residual", worst);

    let mut report = Report::new(table);
    report.check(worst <= OVERLAP_TOL, || format!("overlap closed form and direct evaluation differ by {worst:e}"));
    Ok(report)
}

fn point(frame: FrameFamily, family: FamilyKind, x: f64, d: f64) -> qrframe::Result<(f64, f64, Option<f64>)> {
    Ok(match family {
        FamilyKind::Pe => {
            let FrameFamily::PhaseEigenstate { cutoff } = frame else { unreachable!() };
            let closed = d * pe_overlap_squared(cutoff, x);
            let direct = d * frame.ket(&GroupElement::u1(x))?.inner(&frame.fiducial_ket()).norm_sqr();
            (closed, direct, None)
        }
        FamilyKind::Cs => {
            let g = GroupElement::u1(x);
            let closed = frame.decoherence_weight(&g)?;
            let direct = d * frame.measurement_family().ket(&g)?.inner(&frame.fiducial_ket()).norm_sqr();
            (closed, direct, Some((closed / d).sqrt()))
        }
        FamilyKind::Fiducial => {
            let closed = d * frame.overlap_from_identity(&GroupElement::su2_polar(x, 0.0, 0.0))?.norm_sqr();
            let rep = Representation::new(&frame.space());
            let e = frame.fiducial_ket();
            let vals = AXES
                .iter()
                .map(|&(theta, phi)| Ok(d * e.inner(&frame.ket_with(&rep, &GroupElement::su2_polar(x, theta, phi))?).norm_sqr()))
                .collect::<qrframe::Result<Vec<f64>>>()?;
            let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            (closed, vals[1], Some(hi - lo))
        }
        FamilyKind::Coset => {
            let FrameFamily::Su2Coherent { twice_j } = frame else { unreachable!() };
            let closed = su2_coherent_overlap_squared(twice_j, x);
            let direct = frame.fiducial_ket().inner(&frame.ket(&GroupElement::su2_euler(0.0, x, 0.0))?).norm_sqr();
            (closed, direct, None)
        }
    })
}
