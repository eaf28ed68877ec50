//! Pegg–Barnett exponential phase operator and the relational observables
//! built from it.
//!
//! `exp(i dphi)` is the cyclic shift `|m><m+1|` closed by the wrap term
//! `|+j><-j|`. With the number operator `N1 = diag(0, 1, ..., N-1)` it gives
//! the ladder pair `A = exp(i dphi) sqrt(N1)`, `A^dagger = sqrt(N1) exp(-i dphi)`
//! and the observables
//!
//! ```text
//! q1(t) = (e^{it} A^dagger + e^{-it} A) / sqrt(2)
//! p1(t) = i (e^{it} A^dagger - e^{-it} A) / sqrt(2)
//! ```
//!
//! with `[A, A^dagger] = I - N |j><j|` and `[q1(t), p1(t)] = i (I - N |j><j|)`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::hilbert::ModelSpec;
use crate::linalg::{Operator, I, ONE};

/// Where the closing term of the cyclic shift is placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WrapEntry {
    /// `|+j><-j|`.
    #[default]
    Standard,
    /// `|-j><+j|`, the transposed corner. Only useful as a negative control:
    /// it breaks unitarity and the deformed commutation relations.
    Misplaced,
}

/// The exponential phase operator `exp(i dphi)`.
pub fn exp_phase(spec: &ModelSpec) -> Operator {
    exp_phase_with(spec, WrapEntry::Standard)
}

pub fn exp_phase_with(spec: &ModelSpec, wrap: WrapEntry) -> Operator {
    let n = spec.dimension();
    let mut op = Operator::zeros(n);
    for i in 0..n - 1 {
        op.0[(i, i + 1)] = ONE;
    }
    match wrap {
        WrapEntry::Standard => op.0[(n - 1, 0)] += ONE,
        WrapEntry::Misplaced => op.0[(0, n - 1)] += ONE,
    }
    op
}

/// `N1 = diag(j + m) = diag(0, 1, ..., N - 1)`.
pub fn number_op(spec: &ModelSpec) -> Operator {
    let diag: Vec<f64> = (0..spec.dimension()).map(|i| i as f64).collect();
    Operator::from_real_diagonal(&diag)
}

fn sqrt_number_op(spec: &ModelSpec) -> Operator {
    let diag: Vec<f64> = (0..spec.dimension()).map(|i| (i as f64).sqrt()).collect();
    Operator::from_real_diagonal(&diag)
}

/// `I - N |j><j|`, the right-hand side of the deformed commutators.
pub fn deformed_identity(spec: &ModelSpec) -> Operator {
    let n = spec.dimension();
    let mut op = Operator::identity(n);
    op.0[(n - 1, n - 1)] -= Complex64::new(n as f64, 0.0);
    op
}

/// Lowering and raising operators induced by a phase operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Ladder {
    pub spec: ModelSpec,
    pub lower: Operator,
    pub raise: Operator,
}

impl Ladder {
    pub fn new(spec: &ModelSpec) -> Self {
        Self::from_phase(spec, &exp_phase(spec))
    }

    /// `A = E sqrt(N1)`, `A^dagger = sqrt(N1) E^dagger`.
    pub fn from_phase(spec: &ModelSpec, phase: &Operator) -> Self {
        let root = sqrt_number_op(spec);
        Ladder {
            spec: *spec,
            lower: phase * &root,
            raise: &root * &phase.dagger(),
        }
    }

    pub fn q1(&self, t: f64) -> Operator {
        let up = self.raise.scale(Complex64::from_polar(FRAC_1_SQRT_2, t));
        let down = self.lower.scale(Complex64::from_polar(FRAC_1_SQRT_2, -t));
        &up + &down
    }

    pub fn p1(&self, t: f64) -> Operator {
        let up = self
            .raise
            .scale(I * Complex64::from_polar(FRAC_1_SQRT_2, t));
        let down = self
            .lower
            .scale(I * Complex64::from_polar(FRAC_1_SQRT_2, -t));
        &up - &down
    }
}

pub fn ladder_a(spec: &ModelSpec) -> Operator {
    Ladder::new(spec).lower
}

pub fn ladder_adag(spec: &ModelSpec) -> Operator {
    Ladder::new(spec).raise
}

/// Relational position observable `q1(t)`.
pub fn q1_op(spec: &ModelSpec, t: f64) -> Operator {
    Ladder::new(spec).q1(t)
}

/// Relational momentum observable `p1(t)`.
pub fn p1_op(spec: &ModelSpec, t: f64) -> Operator {
    Ladder::new(spec).p1(t)
}

/// Residuals of the Heisenberg equations `dX/dt = i [N1, X(t)]` for
/// `X = q1, p1`, with the derivative taken by central differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergResidual {
    pub position: f64,
    pub momentum: f64,
}

impl HeisenbergResidual {
    pub fn max(&self) -> f64 {
        self.position.max(self.momentum)
    }
}

pub fn heisenberg_residuals(spec: &ModelSpec, t: f64, dt: f64) -> HeisenbergResidual {
    assert!(dt > 0.0, "dt must be positive");
    let ladder = Ladder::new(spec);
    let generator = number_op(spec);
    let scale = Complex64::new(1.0 / (2.0 * dt), 0.0);
    let residual = |f: &dyn Fn(f64) -> Operator| {
        let derivative = (&f(t + dt) - &f(t - dt)).scale(scale);
        let rhs = generator.commutator(&f(t)).scale(I);
        derivative.max_abs_diff(&rhs)
    };
    HeisenbergResidual {
        position: residual(&|s| ladder.q1(s)),
        momentum: residual(&|s| ladder.p1(s)),
    }
}

/// Largest entrywise Heisenberg-equation residual over `q1` and `p1`.
pub fn heisenberg_residual(spec: &ModelSpec, t: f64, dt: f64) -> f64 {
    heisenberg_residuals(spec, t, dt).max()
}
