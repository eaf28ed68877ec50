//! Classical constrained dynamics of the oscillator pair.
//!
//! The constraint `H = (q1^2 + p1^2)/2 + (q2^2 + p2^2)/2 - M` generates the
//! gauge orbits `q_i = A_i sin(tau + phi_i)`, `p_i = A_i cos(tau + phi_i)`.
//! The physical phase space is coordinatized by the action
//! `I1 = (q1^2 + p1^2)/2` and the relative phase
//! `dphi = angle(q1, p1) - angle(q2, p2)`, and the angle of oscillator 2,
//! `t = angle(q2, p2)`, serves as internal time. Angles are measured with
//! `sin` along the coordinate and `cos` along the momentum, reduced to
//! `[0, 2 pi)`.

use std::f64::consts::TAU;
use std::fmt;

use crate::error::{Error, Result};

/// Default finite-difference step for [`poisson_bracket`].
pub const DEFAULT_STEP: f64 = 1e-4;

/// A point `(q1, p1, q2, p2)` of the extended phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    pub q1: f64,
    pub p1: f64,
    pub q2: f64,
    pub p2: f64,
}

impl ClassicalState {
    pub fn new(q1: f64, p1: f64, q2: f64, p2: f64) -> Self {
        ClassicalState { q1, p1, q2, p2 }
    }

    pub fn energy1(&self) -> f64 {
        0.5 * (self.q1 * self.q1 + self.p1 * self.p1)
    }

    pub fn energy2(&self) -> f64 {
        0.5 * (self.q2 * self.q2 + self.p2 * self.p2)
    }

    /// `H1 + H2 - M`.
    pub fn constraint(&self, m: f64) -> f64 {
        self.energy1() + self.energy2() - m
    }

    fn coordinates(&self) -> [f64; 4] {
        [self.q1, self.p1, self.q2, self.p2]
    }

    fn from_coordinates(c: [f64; 4]) -> Self {
        ClassicalState::new(c[0], c[1], c[2], c[3])
    }
}

/// A point `(I1, dphi)` of the physical phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedPoint {
    pub action: f64,
    /// In `[0, 2 pi)`.
    pub dphi: f64,
}

/// Angle `theta` in `[0, 2 pi)` with `sin theta ∝ along`, `cos theta ∝ across`.
pub fn phase_angle(along: f64, across: f64, plane: &'static str) -> Result<f64> {
    if along == 0.0 && across == 0.0 {
        return Err(Error::UndefinedPhase(plane));
    }
    Ok(wrap_angle(along.atan2(across)))
}

/// Reduces an angle to `[0, 2 pi)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed distance between two angles, in `(-pi, pi]`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > std::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

/// Gauge orbit at parameter `tau`.
pub fn gauge_solution(a1: f64, a2: f64, phi1: f64, phi2: f64, tau: f64) -> ClassicalState {
    let (s1, c1) = (tau + phi1).sin_cos();
    let (s2, c2) = (tau + phi2).sin_cos();
    ClassicalState::new(a1 * s1, a1 * c1, a2 * s2, a2 * c2)
}

/// Internal time `t = angle(q2, p2)`, defined modulo `2 pi`.
pub fn internal_time(q2: f64, p2: f64) -> Result<f64> {
    phase_angle(q2, p2, "q2, p2")
}

/// Internal time sampled along a path, with the branch of the multivalued
/// angle tracked by continuity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSample {
    /// In `[0, 2 pi)`.
    pub wrapped: f64,
    /// Number of completed turns relative to the first sample.
    pub branch: i64,
}

impl TimeSample {
    pub fn unwrapped(&self) -> f64 {
        self.wrapped + TAU * self.branch as f64
    }
}

/// Tracks the internal time along consecutive states. Steps between samples
/// must be smaller than `pi` in angle for the branch count to be right.
pub fn internal_time_along(states: &[ClassicalState]) -> Result<Vec<TimeSample>> {
    let mut out: Vec<TimeSample> = Vec::with_capacity(states.len());
    for s in states {
        let wrapped = internal_time(s.q2, s.p2)?;
        let branch = match out.last() {
            None => 0,
            Some(prev) => {
                let unwrapped = prev.unwrapped() + angle_difference(wrapped, prev.wrapped);
                ((unwrapped - wrapped) / TAU).round() as i64
            }
        };
        out.push(TimeSample { wrapped, branch });
    }
    Ok(out)
}

/// Projects an extended phase-space point to `(I1, dphi)`.
pub fn reduce(state: &ClassicalState) -> Result<ReducedPoint> {
    let phi1 = phase_angle(state.q1, state.p1, "q1, p1")?;
    let phi2 = phase_angle(state.q2, state.p2, "q2, p2")?;
    Ok(ReducedPoint {
        action: state.energy1(),
        dphi: wrap_angle(phi1 - phi2),
    })
}

/// Relational evolution of both oscillators for the physical state
/// `(I1, dphi)` as a function of the internal time `t`:
///
/// ```text
/// q1 = sqrt(2 I1) sin(t + dphi)        p1 = sqrt(2 I1) cos(t + dphi)
/// q2 = sqrt(2 (M - I1)) sin(t)         p2 = sqrt(2 (M - I1)) cos(t)
/// ```
pub fn relational_trajectory(m: f64, action: f64, dphi: f64, t: f64) -> Result<ClassicalState> {
    if !(0.0..=m).contains(&action) {
        return Err(Error::ActionOutOfRange { action, total: m });
    }
    let a1 = (2.0 * action).sqrt();
    let a2 = (2.0 * (m - action)).sqrt();
    let (s1, c1) = (t + dphi).sin_cos();
    let (s2, c2) = t.sin_cos();
    Ok(ClassicalState::new(a1 * s1, a1 * c1, a2 * s2, a2 * c2))
}

type Evaluator = Box<dyn Fn(&ClassicalState) -> Result<f64> + Send + Sync>;

/// A scalar function on phase space. Angular observables are differenced
/// modulo `2 pi`.
pub struct Observable {
    name: String,
    angular: bool,
    eval: Evaluator,
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Observable")
            .field("name", &self.name)
            .field("angular", &self.angular)
            .finish()
    }
}

impl Observable {
    pub fn new<F>(name: &str, f: F) -> Self
    where
        F: Fn(&ClassicalState) -> Result<f64> + Send + Sync + 'static,
    {
        Observable {
            name: name.to_owned(),
            angular: false,
            eval: Box::new(f),
        }
    }

    pub fn angle<F>(name: &str, f: F) -> Self
    where
        F: Fn(&ClassicalState) -> Result<f64> + Send + Sync + 'static,
    {
        Observable {
            angular: true,
            ..Observable::new(name, f)
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, state: &ClassicalState) -> Result<f64> {
        (self.eval)(state)
    }

    pub fn q1() -> Self {
        Observable::new("q1", |s| Ok(s.q1))
    }

    pub fn p1() -> Self {
        Observable::new("p1", |s| Ok(s.p1))
    }

    pub fn action1() -> Self {
        Observable::new("I1", |s| Ok(s.energy1()))
    }

    pub fn relative_phase() -> Self {
        Observable::angle("dphi", |s| reduce(s).map(|r| r.dphi))
    }

    pub fn internal_time() -> Self {
        Observable::angle("t", |s| internal_time(s.q2, s.p2))
    }

    pub fn constraint(m: f64) -> Self {
        Observable::new("H", move |s| Ok(s.constraint(m)))
    }

    fn difference(&self, plus: f64, minus: f64) -> f64 {
        if self.angular {
            angle_difference(plus, minus)
        } else {
            plus - minus
        }
    }

    fn gradient(&self, at: &ClassicalState, h: f64) -> Result<[f64; 4]> {
        let base = at.coordinates();
        let mut grad = [0.0; 4];
        for (i, g) in grad.iter_mut().enumerate() {
            let mut plus = base;
            let mut minus = base;
            plus[i] += h;
            minus[i] -= h;
            let eval = |c: [f64; 4]| {
                self.eval(&ClassicalState::from_coordinates(c))
                    .map_err(|e| Error::DegeneratePoint(format!("{} at {:?}: {e}", self.name, c)))
            };
            *g = self.difference(eval(plus)?, eval(minus)?) / (2.0 * h);
        }
        Ok(grad)
    }
}

/// Central-difference Poisson bracket
/// `{f, g} = sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i)`, error `O(h^2)`.
pub fn poisson_bracket(f: &Observable, g: &Observable, at: &ClassicalState, h: f64) -> Result<f64> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "step must be positive, got {h}"
        )));
    }
    let df = f.gradient(at, h)?;
    let dg = g.gradient(at, h)?;
    Ok(df[0] * dg[1] - df[1] * dg[0] + df[2] * dg[3] - df[3] * dg[2])
}

/// Richardson-extrapolated bracket `(4 B(h/2) - B(h)) / 3`, error `O(h^4)`.
pub fn poisson_bracket_richardson(
    f: &Observable,
    g: &Observable,
    at: &ClassicalState,
    h: f64,
) -> Result<f64> {
    let coarse = poisson_bracket(f, g, at, h)?;
    let fine = poisson_bracket(f, g, at, h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}
