//! Large-`j` behaviour: Mehler's kernel, the closed-form oscillator
//! propagator it produces, and the two-point function of `q1(t)`.
//!
//! Mehler's formula
//!
//! ```text
//! sum_n H_n(x) H_n(y) z^n / (2^n n!) = (1 - z^2)^{-1/2} exp[(2xyz - (x^2 + y^2) z^2) / (1 - z^2)]
//! ```
//!
//! converges absolutely only for `|z| < 1`. The transition amplitude between
//! relational eigenstates is the truncated series on the unit circle,
//! `z = e^{i(t - t')}`, so the large-`j` limit is controlled here through
//! damped arguments `z = r e^{i(t - t')}` with `r < 1`.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::hermite_functions;
use crate::hilbert::{ModelSpec, StateVector};
use crate::linalg::I;
use crate::phase_ops::Ladder;

/// Distance from a multiple of `pi` below which [`propagator_closed`]
/// reports a caustic.
pub const CAUSTIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MehlerParams {
    pub x: f64,
    pub y: f64,
    pub z: Complex64,
    pub terms: usize,
}

/// `sum_{n < terms} sqrt(pi) h_n(x) h_n(y) z^n`, which equals
/// `e^{-(x^2+y^2)/2} sum_{n < terms} H_n(x) H_n(y) z^n / (2^n n!)`.
fn weighted_partial_sum(x: f64, y: f64, z: Complex64, terms: usize) -> Complex64 {
    let hx = hermite_functions(terms, x);
    let hy = hermite_functions(terms, y);
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for (a, b) in hx.iter().zip(&hy) {
        sum += power * (a * b);
        power *= z;
    }
    sum * PI.sqrt()
}

/// Truncated Mehler series without any convergence check; for `|z| >= 1`
/// it is a diagnostic only.
pub fn mehler_partial_sum(x: f64, y: f64, z: Complex64, terms: usize) -> Complex64 {
    weighted_partial_sum(x, y, z, terms) * (0.5 * (x * x + y * y)).exp()
}

/// Truncated Mehler series `sum_{n < terms} H_n(x) H_n(y) z^n / (2^n n!)`.
pub fn mehler_sum(params: &MehlerParams) -> Result<Complex64> {
    let modulus = params.z.norm();
    if modulus >= 1.0 {
        return Err(Error::NonConvergent { modulus });
    }
    Ok(mehler_partial_sum(
        params.x,
        params.y,
        params.z,
        params.terms,
    ))
}

/// Closed form of the Mehler series, principal branch of `sqrt(1 - z^2)`.
pub fn mehler_closed(x: f64, y: f64, z: Complex64) -> Complex64 {
    let one_minus = Complex64::new(1.0, 0.0) - z * z;
    let exponent = (z * (2.0 * x * y) - z * z * (x * x + y * y)) / one_minus;
    exponent.exp() / one_minus.sqrt()
}

/// `e^{-(x^2+y^2)/2}` times [`mehler_closed`], with the Gaussian folded into
/// the exponent so that large arguments do not overflow.
pub fn weighted_mehler_closed(x: f64, y: f64, z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let one_minus = one - z * z;
    let exponent = (z * (2.0 * x * y) - (one + z * z) * (0.5 * (x * x + y * y))) / one_minus;
    exponent.exp() / one_minus.sqrt()
}

/// Transition amplitude with damped phase, `N_k N_l sum_{m < terms}
/// H_m(q_k) H_m(q_l) e^{-(q_k^2+q_l^2)/2} (r e^{i delta})^m / (2^m m!)`.
/// With `terms = N` and `r = 1` this is the exact finite-`j` propagator.
pub fn damped_propagator_sum(
    q_k: f64,
    q_l: f64,
    delta: f64,
    r: f64,
    terms: usize,
    norms: (f64, f64),
) -> Complex64 {
    weighted_partial_sum(q_k, q_l, Complex64::from_polar(r, delta), terms) * (norms.0 * norms.1)
}

/// Infinite-`j` value of [`damped_propagator_sum`] from Mehler's closed form.
pub fn damped_propagator_closed(
    q_k: f64,
    q_l: f64,
    delta: f64,
    r: f64,
    norms: (f64, f64),
) -> Complex64 {
    weighted_mehler_closed(q_k, q_l, Complex64::from_polar(r, delta)) * (norms.0 * norms.1)
}

/// Closed-form large-`j` amplitude `<q_l(t')|q_k(t)>`:
///
/// ```text
/// N_k N_l e^{-i d/2} sqrt(i / (2 sin d)) exp[i (2 q_k q_l - (q_k^2 + q_l^2) cos d) / (2 sin d)],  d = t - t'
/// ```
///
/// with `sqrt(i) = e^{i pi/4}`. For `d` in `(-pi, pi)` it is the `r -> 1`
/// limit of [`damped_propagator_closed`].
pub fn propagator_closed(
    q_k: f64,
    q_l: f64,
    t: f64,
    t_prime: f64,
    norms: (f64, f64),
) -> Result<Complex64> {
    let delta = t - t_prime;
    let offset = delta - PI * (delta / PI).round();
    if offset.abs() < CAUSTIC_TOLERANCE {
        return Err(Error::Caustic {
            delta,
            tolerance: CAUSTIC_TOLERANCE,
        });
    }
    let s = delta.sin();
    // sqrt(i / (2 s)) = e^{i pi/4} (2 s)^{-1/2}, principal root for s < 0
    let root = Complex64::from_polar(1.0, FRAC_PI_4) / Complex64::new(2.0 * s, 0.0).sqrt();
    let phase = Complex64::from_polar(1.0, -0.5 * delta);
    let exponent = I * ((2.0 * q_k * q_l - (q_k * q_k + q_l * q_l) * delta.cos()) / (2.0 * s));
    Ok(phase * root * exponent.exp() * (norms.0 * norms.1))
}

/// Two-point function of `q1` in the extremal state `|+j>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPoint {
    /// `<+j| q1(t') q1(t) |+j>` by direct matrix arithmetic.
    pub value: Complex64,
    /// `j e^{i(t' - t)}`, what the ladder algebra gives.
    pub derived: Complex64,
    /// `j e^{-2ij(t' - t)}`, the reference formula, reported for comparison.
    pub reference: Complex64,
}

impl TwoPoint {
    pub fn magnitude(&self) -> f64 {
        self.value.norm()
    }

    pub fn phase(&self) -> f64 {
        self.value.arg()
    }
}

/// `<v| q1(t') q1(t) |v>` with `|v> = |m = +j>`, the state annihilated by `A^dagger`.
pub fn two_point(spec: &ModelSpec, t: f64, t_prime: f64) -> Result<TwoPoint> {
    if spec.dimension() < 2 {
        return Err(Error::InvalidParameter(
            "two-point function needs dimension at least 2".into(),
        ));
    }
    let ladder = Ladder::new(spec);
    let vacuum = StateVector::basis(*spec, spec.dimension() - 1);
    let image = ladder
        .q1(t_prime)
        .apply(&ladder.q1(t).apply(&vacuum.amplitudes));
    let value = vacuum.amplitudes.dotc(&image);
    let j = spec.j();
    Ok(TwoPoint {
        value,
        derived: Complex64::from_polar(j, t_prime - t),
        reference: Complex64::from_polar(j, -2.0 * j * (t_prime - t)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::build_model;
    use crate::spectral::RelationalBasis;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn mehler_at_zero() {
        let p = MehlerParams {
            x: 0.7,
            y: -1.3,
            z: Complex64::new(0.0, 0.0),
            terms: 10,
        };
        assert_eq!(mehler_sum(&p).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(mehler_closed(0.7, -1.3, p.z), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn mehler_half() {
        let z = Complex64::new(0.5, 0.0);
        let p = MehlerParams {
            x: 1.0,
            y: 1.0,
            z,
            terms: 60,
        };
        let d = (mehler_sum(&p).unwrap() - mehler_closed(1.0, 1.0, z)).norm();
        assert!(d < 1e-12, "{d}");
    }

    #[test]
    fn mehler_closed_diagonal() {
        let x: f64 = 0.8;
        let z = Complex64::new(0.9, 0.0);
        let expected =
            (1.0 - 0.81f64).powf(-0.5) * ((2.0 * x * x * 0.9 - 2.0 * x * x * 0.81) / 0.19).exp();
        assert!((mehler_closed(x, x, z) - expected).norm() < 1e-12 * expected);
    }

    #[test]
    fn mehler_rejects_unit_circle() {
        let p = MehlerParams {
            x: 0.0,
            y: 0.0,
            z: Complex64::new(0.0, 1.0),
            terms: 10,
        };
        assert_eq!(mehler_sum(&p), Err(Error::NonConvergent { modulus: 1.0 }));
    }

    #[test]
    fn mehler_convergence_in_terms() {
        let ratio = |x: f64, y: f64, z: Complex64| {
            let closed = mehler_closed(x, y, z);
            let err40 = (mehler_partial_sum(x, y, z, 40) - closed).norm();
            let err80 = (mehler_partial_sum(x, y, z, 80) - closed).norm();
            (err40, err80)
        };
        for &(x, y) in &[(0.0, 0.0), (1.0, 1.0), (2.0, 1.0), (-0.4, 1.2)] {
            for z in [
                Complex64::new(0.9, 0.0),
                Complex64::new(0.0, 0.9),
                Complex64::from_polar(0.9, 1.0),
                Complex64::from_polar(0.6, -2.0),
            ] {
                let (err40, err80) = ratio(x, y, z);
                assert!(
                    err80 < 1e-14 || err40 / err80 >= 10.0,
                    "x={x} y={y} z={z}: {err40:e} {err80:e}"
                );
            }
        }
        // The tail oscillates, so the gain is not uniform: at this point the
        // 40 -> 80 improvement is only 8.9x.
        let (err40, err80) = ratio(0.5, -0.3, Complex64::new(0.9, 0.0));
        assert!((err40 / err80 - 8.897).abs() < 0.01, "{}", err40 / err80);
    }

    #[test]
    fn closed_propagator_prefactor() {
        let z = propagator_closed(0.0, 0.0, FRAC_PI_2, 0.0, (1.0, 1.0)).unwrap();
        // e^{-i pi/4} e^{i pi/4} / sqrt(2), exponent vanishes at the origin
        assert!((z - Complex64::new(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
        let z = propagator_closed(0.4, -0.9, FRAC_PI_2, 0.0, (1.3, 0.7)).unwrap();
        assert!((z.norm() - 0.5f64.sqrt() * 1.3 * 0.7).abs() < 1e-14);
    }

    #[test]
    fn closed_propagator_reversal_conjugates() {
        for &(a, b, t, tp) in &[(0.3, -0.8, 1.1, 0.2), (1.4, 0.5, -0.4, 2.0)] {
            let forward = propagator_closed(a, b, t, tp, (1.0, 1.0)).unwrap();
            let back = propagator_closed(b, a, tp, t, (1.0, 1.0)).unwrap();
            assert!((forward - back.conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn caustics_are_rejected() {
        for delta in [0.0, PI, -PI, 2.0 * PI, PI + 5e-10] {
            let r = propagator_closed(0.1, 0.2, delta, 0.0, (1.0, 1.0));
            assert!(matches!(r, Err(Error::Caustic { .. })), "{delta}");
        }
        let r = propagator_closed(0.1, 0.2, PI + 1e-6, 0.0, (1.0, 1.0)).unwrap();
        assert!(r.re.is_finite() && r.im.is_finite());
    }

    #[test]
    fn damped_closed_form_tends_to_oscillator_propagator() {
        for &(x, y, delta) in &[(0.3, -0.2, 1.0), (0.0, 0.5, -2.0), (1.0, 0.7, 0.4)] {
            let exact = propagator_closed(x, y, delta, 0.0, (1.0, 1.0)).unwrap();
            let errs: Vec<f64> = [0.99, 0.999, 0.9999]
                .iter()
                .map(|&r| (damped_propagator_closed(x, y, delta, r, (1.0, 1.0)) - exact).norm())
                .collect();
            assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
            assert!(errs[2] < 1e-2);
        }
    }

    #[test]
    fn damped_sum_converges_to_closed_form() {
        // Roots of H_200 near the centre with their normalizations, damped at
        // r = 0.999. At 200 terms the damping leaves r^200 = 0.82 of the tail,
        // so the series is carried on until r^terms is negligible.
        let spec = build_model(200).unwrap();
        let basis = RelationalBasis::new(&spec).unwrap();
        for &(k, l, delta) in &[(100, 101, 1.0), (101, 101, 0.3), (90, 120, -2.2)] {
            let norms = (
                basis.normalization(k).unwrap(),
                basis.normalization(l).unwrap(),
            );
            let (x, y) = (basis.root(k).unwrap(), basis.root(l).unwrap());
            let closed = damped_propagator_closed(x, y, delta, 0.999, norms);
            let long = damped_propagator_sum(x, y, delta, 0.999, 50_000, norms);
            assert!((long - closed).norm() < 1e-6);
            let short = damped_propagator_sum(x, y, delta, 0.999, 200, norms);
            assert!((short - closed).norm() > 1e-4);
        }
    }

    #[test]
    fn undamped_finite_sum_is_the_exact_propagator() {
        let spec = build_model(12).unwrap();
        let basis = RelationalBasis::new(&spec).unwrap();
        let norms = (
            basis.normalization(3).unwrap(),
            basis.normalization(8).unwrap(),
        );
        let (x, y) = (basis.root(3).unwrap(), basis.root(8).unwrap());
        let a = damped_propagator_sum(x, y, 0.9 - 0.2, 1.0, 12, norms);
        let b = basis.propagator(3, 8, 0.9, 0.2).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn two_point_examples() {
        for n in [2, 3, 10, 64] {
            let spec = build_model(n).unwrap();
            let tp = two_point(&spec, 0.8, 0.8).unwrap();
            assert!((tp.value - Complex64::new(spec.j(), 0.0)).norm() < 1e-12);
        }
        let tp = two_point(&build_model(2).unwrap(), 0.0, 0.3).unwrap();
        assert!((tp.magnitude() - 0.5).abs() < 1e-15);
        let tp = two_point(&build_model(4).unwrap(), 0.2, 1.2).unwrap();
        assert!((tp.phase() - 1.0).abs() < 1e-12);
        assert!((tp.value - tp.derived).norm() < 1e-12);
        assert!((tp.reference - Complex64::from_polar(1.5, -3.0)).norm() < 1e-15);
        assert!(two_point(&build_model(1).unwrap(), 0.0, 0.0).is_err());
    }
}
