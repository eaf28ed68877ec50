use serde_json::json;

use super::config::RunConfig;
use super::report::{Cell, Check, Report, Table};
use crate::classical::{
    angle_difference, internal_time, reduce, relational_trajectory, wrap_angle,
};
use crate::error::{Error, Result};
use crate::hermite::hermite_roots;
use crate::limits::two_point;
use crate::phase_ops::q1_op;
use crate::spectral::RelationalBasis;

pub const SPECTRUM_TOLERANCES: &[(&str, f64)] = &[("spectrum", 1e-10), ("t_independence", 1e-11)];

pub const TRAJECTORY_TOLERANCES: &[(&str, f64)] = &[
    ("round_trip", 1e-12),
    ("time_recovery", 1e-12),
    ("constraint", 1e-13),
];

pub const PROPAGATOR_TOLERANCES: &[(&str, f64)] = &[("unitarity", 1e-11)];

pub const TWOPOINT_TOLERANCES: &[(&str, f64)] = &[("magnitude", 1e-12), ("phase", 1e-12)];

fn tolerances(config: &RunConfig, known: &[(&str, f64)]) -> Result<Vec<f64>> {
    config.check_tolerance_names(known)?;
    Ok(known.iter().map(|&(k, d)| config.tolerance(k, d)).collect())
}

/// Hermite zeros next to the sorted eigenvalues of `q1(t)` on the time grid.
pub fn spectrum(config: &RunConfig) -> Result<Report> {
    let tol = tolerances(config, SPECTRUM_TOLERANCES)?;
    let spec = config.model;
    let roots = hermite_roots(spec.dimension())?;
    let spectra: Vec<Vec<f64>> = config
        .times
        .iter()
        .map(|&t| q1_op(&spec, t).hermitian_eigenvalues())
        .collect();

    let mut columns = vec!["k".to_string(), "root".to_string()];
    columns.extend(config.times.iter().map(|t| format!("eig@{t}")));
    columns.push("deviation".into());
    let mut table = Table::new(columns);
    let (mut worst, mut spread) = (0.0_f64, 0.0_f64);
    for (s, &root) in roots.roots.iter().enumerate() {
        let eigs: Vec<f64> = spectra.iter().map(|sp| sp[s]).collect();
        let dev = eigs.iter().map(|e| (e - root).abs()).fold(0.0, f64::max);
        let lo = eigs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max(dev);
        spread = spread.max(hi - lo);
        let mut row = vec![Cell::from(s + 1), root.into()];
        row.extend(eigs.into_iter().map(Cell::from));
        row.push(dev.into());
        table.push(row);
    }

    let mut report = Report::new(spec, config.seed, table);
    report.extra.insert("t".into(), json!(config.times));
    report.checks.push(Check::new("spectrum", worst, tol[0]));
    report
        .checks
        .push(Check::new("t_independence", spread, tol[1]));
    Ok(report)
}

/// Classical relational trajectory for the physical state `(I1, dphi)`.
pub fn trajectory(config: &RunConfig, action: f64, dphi: f64) -> Result<Report> {
    let tol = tolerances(config, TRAJECTORY_TOLERANCES)?;
    let spec = config.model;
    let m = spec.constraint() as f64;
    if !action.is_finite() || !dphi.is_finite() {
        return Err(Error::InvalidParameter("I1 and dphi must be finite".into()));
    }
    let mut table = Table::new(["t", "q1", "p1", "q2", "p2", "I1", "dphi", "H", "degenerate"]);
    let (mut round_trip, mut time_recovery, mut constraint) = (0.0_f64, 0.0_f64, 0.0_f64);
    for &t in &config.times {
        let s = relational_trajectory(m, action, dphi, t)?;
        let h = s.constraint(m);
        constraint = constraint.max(h.abs());
        let (i1, phase, degenerate) = match reduce(&s) {
            Ok(r) => {
                round_trip = round_trip
                    .max((r.action - action).abs())
                    .max(angle_difference(r.dphi, dphi).abs());
                (r.action, Cell::from(r.dphi), false)
            }
            Err(_) => {
                round_trip = round_trip.max((s.energy1() - action).abs());
                (s.energy1(), Cell::Missing, true)
            }
        };
        if let Ok(time) = internal_time(s.q2, s.p2) {
            time_recovery = time_recovery.max(angle_difference(time, wrap_angle(t)).abs());
        }
        table.push(vec![
            t.into(),
            s.q1.into(),
            s.p1.into(),
            s.q2.into(),
            s.p2.into(),
            i1.into(),
            phase,
            h.into(),
            degenerate.into(),
        ]);
    }

    let mut report = Report::new(spec, config.seed, table);
    report.extra.insert("I1".into(), json!(action));
    report.extra.insert("dphi".into(), json!(dphi));
    report
        .checks
        .push(Check::new("round_trip", round_trip, tol[0]));
    report
        .checks
        .push(Check::new("time_recovery", time_recovery, tol[1]));
    report
        .checks
        .push(Check::new("constraint", constraint, tol[2]));
    Ok(report)
}

/// Transition amplitudes `<q_l(t_to)|q_k(t_from)>` with a final row holding
/// the worst deviation of `sum_l |.|^2` from one.
pub fn propagator(config: &RunConfig, t_from: f64, t_to: f64) -> Result<Report> {
    let tol = tolerances(config, PROPAGATOR_TOLERANCES)?;
    let spec = config.model;
    let basis = RelationalBasis::new(&spec)?;
    let matrix = basis.propagator_matrix(t_from, t_to);
    let n = spec.dimension();

    let mut table = Table::new(["k", "l", "re", "im", "abs2"]);
    let mut worst = 0.0_f64;
    for k in 0..n {
        let mut row_norm = 0.0;
        for l in 0..n {
            let z = matrix.0[(l, k)];
            row_norm += z.norm_sqr();
            table.push(vec![
                (k + 1).into(),
                (l + 1).into(),
                z.re.into(),
                z.im.into(),
                z.norm_sqr().into(),
            ]);
        }
        worst = worst.max((row_norm - 1.0).abs());
    }
    table.push(vec![
        Cell::Text("unitarity".into()),
        Cell::Missing,
        Cell::Missing,
        Cell::Missing,
        worst.into(),
    ]);

    let mut report = Report::new(spec, config.seed, table);
    report.extra.insert("t_from".into(), json!(t_from));
    report.extra.insert("t_to".into(), json!(t_to));
    report.checks.push(Check::new("unitarity", worst, tol[0]));
    Ok(report)
}

/// `<+j| q1(t') q1(t) |+j>` with the ladder-algebra value and the reference
/// formula side by side.
pub fn twopoint(config: &RunConfig, t: f64, t_prime: f64) -> Result<Report> {
    let tol = tolerances(config, TWOPOINT_TOLERANCES)?;
    let spec = config.model;
    let g = two_point(&spec, t, t_prime)?;
    let magnitude_dev = (g.magnitude() - spec.j()).abs();
    let phase_dev = angle_difference(g.phase(), g.derived.arg()).abs();

    let mut table = Table::new([
        "t",
        "t_prime",
        "re",
        "im",
        "magnitude",
        "phase",
        "derived_re",
        "derived_im",
        "reference_re",
        "reference_im",
        "reference_phase",
    ]);
    table.push(vec![
        t.into(),
        t_prime.into(),
        g.value.re.into(),
        g.value.im.into(),
        g.magnitude().into(),
        g.phase().into(),
        g.derived.re.into(),
        g.derived.im.into(),
        g.reference.re.into(),
        g.reference.im.into(),
        g.reference.arg().into(),
    ]);

    let mut report = Report::new(spec, config.seed, table);
    report
        .checks
        .push(Check::new("magnitude", magnitude_dev, tol[0]));
    report.checks.push(Check::new("phase", phase_dev, tol[1]));
    Ok(report)
}
