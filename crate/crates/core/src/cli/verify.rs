use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::f64::consts::TAU;

use super::config::RunConfig;
use super::report::{Cell, Check, Report, Table};
use crate::classical::{
    angle_difference, internal_time, poisson_bracket, reduce, relational_trajectory, wrap_angle,
    Observable, DEFAULT_STEP,
};
use crate::error::Result;
use crate::hermite::hermite_roots;
use crate::hilbert::{constraint_operator, embed, ModelSpec};
use crate::limits::two_point;
use crate::linalg::{Operator, I};
use crate::phase_ops::{
    deformed_identity, exp_phase_with, heisenberg_residual, number_op, Ladder, WrapEntry,
};
use crate::spectral::RelationalBasis;

pub const VERIFY_TOLERANCES: &[(&str, f64)] = &[
    ("spectrum", 1e-10),
    ("hermiticity", 1e-14),
    ("phase_unitarity", 1e-14),
    ("ladder_algebra", 1e-13),
    ("ccr", 1e-13),
    ("heisenberg_order", 0.05),
    ("physical_constraint", 1e-12),
    ("orthonormality", 1e-11),
    ("completeness", 1e-11),
    ("christoffel_darboux", 1e-11),
    ("eigen_equation", 1e-10),
    ("schrodinger_order", 0.05),
    ("cyclicity", 1e-13),
    ("propagator_unitarity", 1e-11),
    ("propagator_identity", 1e-11),
    ("identity_a1", 1e-11),
    ("identity_a2", 1e-12),
    ("identity_a3", 1e-11),
    ("two_point_magnitude", 1e-12),
    ("two_point_phase", 1e-12),
    ("classical_round_trip", 1e-12),
    ("poisson_time", 1e-7),
    ("poisson_action", 1e-7),
    ("poisson_phase", 1e-7),
    ("poisson_reduced", 1e-7),
];

/// Largest dimension for which the kinematical-space checks run; the dense
/// embedding has `M^4` entries.
pub const MAX_EMBEDDED_DIMENSION: usize = 16;

const RANDOM_TIME_PAIRS: usize = 4;
const CLASSICAL_SAMPLES: usize = 200;
const BRACKET_SAMPLES: usize = 100;
const HEISENBERG_STEP: f64 = 1e-2;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Build the phase operator with the misplaced wrap entry.
    pub corrupt_wrap: bool,
}

struct Suite<'a> {
    config: &'a RunConfig,
    checks: Vec<Check>,
}

impl Suite<'_> {
    fn record(&mut self, name: &str, deviation: f64) {
        let default = VERIFY_TOLERANCES
            .iter()
            .find(|(k, _)| *k == name)
            .map(|&(_, d)| d)
            .expect("tolerance registered");
        self.checks.push(Check::new(
            name,
            deviation,
            self.config.tolerance(name, default),
        ));
    }
}

/// `|r(dt) / r(dt/2) - 4|` for a residual that should be second order in `dt`.
/// Residuals that vanish identically count as converged.
fn order_deviation(coarse: f64, fine: f64) -> f64 {
    if coarse < 1e-14 {
        0.0
    } else {
        (coarse / fine - 4.0).abs()
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Runs every invariant check on the configured model and time grid.
pub fn verify(config: &RunConfig, options: VerifyOptions) -> Result<Report> {
    config.check_tolerance_names(VERIFY_TOLERANCES)?;
    let spec = config.model;
    let n = spec.dimension();
    let times = &config.times;
    let mut suite = Suite {
        config,
        checks: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // operator algebra
    let wrap = if options.corrupt_wrap {
        WrapEntry::Misplaced
    } else {
        WrapEntry::Standard
    };
    let phase = exp_phase_with(&spec, wrap);
    let ladder = Ladder::from_phase(&spec, &phase);
    let roots = hermite_roots(n)?;
    suite.record(
        "spectrum",
        max_of(times.iter().map(|&t| {
            let eigs = ladder.q1(t).hermitian_eigenvalues();
            max_of(eigs.iter().zip(&roots.roots).map(|(e, r)| (e - r).abs()))
        })),
    );
    suite.record(
        "hermiticity",
        max_of(times.iter().flat_map(|&t| {
            [
                ladder.q1(t).hermiticity_defect(),
                ladder.p1(t).hermiticity_defect(),
            ]
        })),
    );
    suite.record("phase_unitarity", phase.unitarity_defect());
    let n1 = number_op(&spec);
    let deformed = deformed_identity(&spec);
    let ladder_dev = (&ladder.raise * &ladder.lower).max_abs_diff(&n1).max(
        ladder
            .lower
            .commutator(&ladder.raise)
            .max_abs_diff(&deformed),
    );
    suite.record("ladder_algebra", ladder_dev);
    let target = deformed.scale(I);
    suite.record(
        "ccr",
        max_of(
            times
                .iter()
                .map(|&t| ladder.q1(t).commutator(&ladder.p1(t)).max_abs_diff(&target)),
        ),
    );
    suite.record(
        "heisenberg_order",
        max_of(times.iter().map(|&t| {
            order_deviation(
                heisenberg_residual(&spec, t, HEISENBERG_STEP),
                heisenberg_residual(&spec, t, HEISENBERG_STEP / 2.0),
            )
        })),
    );

    // eigenbasis of q1(t)
    let basis = RelationalBasis::new(&spec)?;
    if n <= MAX_EMBEDDED_DIMENSION {
        let constraint = constraint_operator(&spec, n);
        let mut worst = 0.0_f64;
        for &t in times {
            worst = worst.max(basis.wheeler_dewitt_residual(t, n)?);
            for op in [ladder.q1(t), ladder.p1(t)] {
                worst = worst.max(embed(&spec, &op, n)?.commutator(&constraint).max_abs());
            }
        }
        suite.record("physical_constraint", worst);
    }
    let identity = Operator::identity(n);
    suite.record(
        "orthonormality",
        max_of(times.iter().map(|&t| {
            let v = basis.eigenvector_matrix(t);
            Operator(v.adjoint() * v).max_abs_diff(&identity)
        })),
    );
    suite.record(
        "completeness",
        max_of(times.iter().map(|&t| basis.completeness_defect(t))),
    );
    let mut cd = 0.0_f64;
    for &t in times {
        for k in 1..=n {
            for l in 1..=n {
                let o = basis.overlap(k, l, t)?;
                cd = cd.max((o.direct - o.christoffel_darboux).norm());
            }
        }
    }
    suite.record("christoffel_darboux", cd);
    suite.record(
        "eigen_equation",
        max_of(times.iter().map(|&t| basis.eigen_residual(t))),
    );
    let dt = 0.05 / n as f64;
    suite.record(
        "schrodinger_order",
        max_of(times.iter().map(|&t| {
            order_deviation(
                basis.schrodinger_residual(t, dt),
                basis.schrodinger_residual(t, dt / 2.0),
            )
        })),
    );
    suite.record(
        "cyclicity",
        max_of(times.iter().map(|&t| basis.cyclicity_defect(t))),
    );

    let mut pairs: Vec<(f64, f64)> = times
        .iter()
        .flat_map(|&a| times.iter().map(move |&b| (a, b)))
        .collect();
    pairs.extend(
        (0..RANDOM_TIME_PAIRS).map(|_| (rng.gen_range(-TAU..TAU), rng.gen_range(-TAU..TAU))),
    );
    suite.record(
        "propagator_unitarity",
        max_of(
            pairs
                .iter()
                .map(|&(a, b)| basis.propagator_matrix(a, b).unitarity_defect()),
        ),
    );
    suite.record(
        "propagator_identity",
        max_of(
            times
                .iter()
                .map(|&t| basis.propagator_matrix(t, t).max_abs_diff(&identity)),
        ),
    );

    suite.record("identity_a1", basis.identity_a1().abs().max());
    suite.record("identity_a2", (basis.identity_a2() - 1.0).abs());
    let a3 = basis.identity_a3_sums();
    suite.record("identity_a3", max_of(a3.iter().map(|s| s.abs())));

    if n >= 2 {
        let mut magnitude = 0.0_f64;
        let mut phase_dev = 0.0_f64;
        for &(a, b) in &pairs {
            let g = two_point(&spec, a, b)?;
            magnitude = magnitude.max((g.magnitude() - spec.j()).abs());
            phase_dev = phase_dev.max(angle_difference(g.phase(), g.derived.arg()).abs());
        }
        suite.record("two_point_magnitude", magnitude);
        suite.record("two_point_phase", phase_dev);
    }

    // classical relational dynamics on the same constraint surface
    let m = spec.constraint() as f64;
    let mut round_trip = 0.0_f64;
    for _ in 0..CLASSICAL_SAMPLES {
        let action = m * rng.gen_range(0.01..0.99);
        let dphi = rng.gen_range(0.0..TAU);
        let t = rng.gen_range(-20.0..20.0);
        let s = relational_trajectory(m, action, dphi, t)?;
        let r = reduce(&s)?;
        round_trip = round_trip
            .max((r.action - action).abs())
            .max(angle_difference(r.dphi, dphi).abs())
            .max(angle_difference(internal_time(s.q2, s.p2)?, wrap_angle(t)).abs());
    }
    suite.record("classical_round_trip", round_trip);

    let h = Observable::constraint(m);
    let (mut time_dev, mut action_dev, mut phase_dev, mut reduced_dev) =
        (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..BRACKET_SAMPLES {
        let action = m * rng.gen_range(0.1..0.9);
        let at =
            relational_trajectory(m, action, rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU))?;
        let pb = |f: &Observable, g: &Observable| poisson_bracket(f, g, &at, DEFAULT_STEP);
        time_dev = time_dev.max((pb(&Observable::internal_time(), &h)? - 1.0).abs());
        action_dev = action_dev.max(pb(&Observable::action1(), &h)?.abs());
        phase_dev = phase_dev.max(pb(&Observable::relative_phase(), &h)?.abs());
        reduced_dev = reduced_dev
            .max((pb(&Observable::action1(), &Observable::relative_phase())? + 1.0).abs());
    }
    suite.record("poisson_time", time_dev);
    suite.record("poisson_action", action_dev);
    suite.record("poisson_phase", phase_dev);
    suite.record("poisson_reduced", reduced_dev);

    let checks = suite.checks;
    let mut table = Table::new(["name", "max_deviation", "tolerance", "pass"]);
    for c in &checks {
        table.push(vec![
            Cell::Text(c.name.clone()),
            c.max_deviation.into(),
            c.tolerance.into(),
            c.pass.into(),
        ]);
    }
    let mut report = Report::new(spec, config.seed, table);
    report.checks = checks;
    report.extra.insert("t".into(), json!(times));
    report.extra.insert("identity_a3_sums".into(), json!(a3));
    report
        .extra
        .insert("corrupt_wrap".into(), json!(options.corrupt_wrap));
    Ok(report)
}

/// Convenience for library users: verify a model with default settings.
pub fn verify_model(spec: &ModelSpec) -> Result<Report> {
    let config = RunConfig::with_model(spec.constraint() as i64)?;
    verify(&config, VerifyOptions::default())
}
