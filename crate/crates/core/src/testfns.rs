//! The four two-dimensional non-Lipschitz benchmark problems.
//!
//! | id | objective | modulus | domain |
//! |----|-----------|---------|--------|
//! | f1 | `-10 exp(-sqrt(0.5 (|x| + |y|)))` | `25 / (2 eta)` | `[-2, 12]^2` |
//! | f2 | `f1 - exp(0.5 (cos 2 pi x + cos 2 pi y))` | `25 / (2 eta) + pi e` | `[-2, 12]^2` |
//! | f3 | `-|sin x cos y exp(0.5 |1 - sqrt(|x| + |y|)|)|` | `e^0.5 + e / (16 eta)` | `[-10, 10]^2` |
//! | f4 | `sin(5y) asin x - sin(5x) asin y` | [`PiecewiseModulus`] | `[-1, 1]^2` |
//!
//! The moduli are stated for the 1-norm.

use std::f64::consts::{E, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{invalid, Error, Result};
use crate::geometry::HyperRectangle;
use crate::vanderbei::{Problem, VanderbeiModulus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestProblemId {
    F1,
    F2,
    F3,
    F4,
}

impl TestProblemId {
    pub const ALL: [TestProblemId; 4] = [Self::F1, Self::F2, Self::F3, Self::F4];

    pub fn name(self) -> &'static str {
        match self {
            Self::F1 => "f1",
            Self::F2 => "f2",
            Self::F3 => "f3",
            Self::F4 => "f4",
        }
    }

    /// `(lo, hi)` of the square domain `[lo, hi]^2`.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Self::F1 | Self::F2 => (-2.0, 12.0),
            Self::F3 => (-10.0, 10.0),
            Self::F4 => (-1.0, 1.0),
        }
    }

    pub fn domain(self) -> HyperRectangle {
        let (lo, hi) = self.bounds();
        HyperRectangle::cube(lo, hi, 2).expect("static domain")
    }

    /// Default `eta / eps` ratio for the corner-split solver.
    pub fn eta_ratio(self) -> f64 {
        match self {
            Self::F1 => 0.9,
            Self::F2 => 0.8,
            Self::F3 | Self::F4 => 0.5,
        }
    }

    /// Default branching parameter for branch and bound.
    pub fn default_gamma(self) -> f64 {
        match self {
            Self::F3 => 0.08,
            _ => 0.01,
        }
    }

    /// Analytic global minimum where one is known.
    pub fn known_minimum(self) -> Option<f64> {
        match self {
            Self::F1 => Some(-10.0),
            Self::F2 => Some(-10.0 - E),
            Self::F3 | Self::F4 => None,
        }
    }

    /// Checked evaluation: rejects points outside the domain.
    pub fn evaluate(self, p: &[f64]) -> Result<f64> {
        if p.len() != 2 {
            return Err(invalid(format!(
                "{} takes 2 coordinates, got {}",
                self.name(),
                p.len()
            )));
        }
        if !self.domain().contains_point(p) {
            return Err(invalid(format!(
                "point ({}, {}) lies outside the {} domain",
                p[0],
                p[1],
                self.name()
            )));
        }
        Ok(self.raw(p[0], p[1]))
    }

    fn raw(self, x: f64, y: f64) -> f64 {
        match self {
            Self::F1 => f1(x, y),
            Self::F2 => f1(x, y) - (0.5 * ((2.0 * PI * x).cos() + (2.0 * PI * y).cos())).exp(),
            Self::F3 => {
                let radial = (0.5 * (1.0 - (x.abs() + y.abs()).sqrt()).abs()).exp();
                -(x.sin() * y.cos() * radial).abs()
            }
            Self::F4 => {
                // Solver points are convex combinations of the bounds; the
                // clamp only absorbs rounding at +-1.
                let (ax, ay) = (x.clamp(-1.0, 1.0).asin(), y.clamp(-1.0, 1.0).asin());
                (5.0 * y).sin() * ax - (5.0 * x).sin() * ay
            }
        }
    }

    pub fn modulus(self) -> VanderbeiModulus {
        match self {
            Self::F1 => VanderbeiModulus::Rational { a: 12.5, b: 0.0 },
            Self::F2 => VanderbeiModulus::Rational { a: 12.5, b: PI * E },
            Self::F3 => VanderbeiModulus::Rational {
                a: E / 16.0,
                b: 0.5f64.exp(),
            },
            Self::F4 => VanderbeiModulus::Piecewise(
                PiecewiseModulus::get().expect("piecewise modulus constants"),
            ),
        }
    }

    pub fn problem(self) -> Problem {
        Problem::new(
            self.name(),
            move |p: &[f64]| self.raw(p[0], p[1]),
            self.modulus(),
            self.domain(),
        )
    }
}

impl fmt::Display for TestProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f1" => Ok(Self::F1),
            "f2" => Ok(Self::F2),
            "f3" => Ok(Self::F3),
            "f4" => Ok(Self::F4),
            _ => Err(invalid(format!("unknown problem '{s}'"))),
        }
    }
}

fn f1(x: f64, y: f64) -> f64 {
    -10.0 * (-(0.5 * (x.abs() + y.abs())).sqrt()).exp()
}

/// Two-branch modulus of f4:
///
/// ```text
/// L(eta) = 5 pi + 2 / sqrt(1 - tau(eta/2)^2)   if 0 < eta/2 < eta_tilde
///          5 pi + pi - eta/2                   if eta_tilde <= eta/2 < pi
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiecewiseModulus {
    pub sigma: f64,
    pub eta_tilde: f64,
}

impl PiecewiseModulus {
    /// Shared instance; the constants are solved once per process.
    pub fn get() -> Result<Self> {
        static CONSTANTS: OnceLock<Result<PiecewiseModulus>> = OnceLock::new();
        CONSTANTS.get_or_init(solve_piecewise_constants).clone()
    }

    pub fn eval(&self, eta: f64) -> Result<f64> {
        if !(eta > 0.0) {
            return Err(invalid(format!("eta must be positive, got {eta}")));
        }
        let alpha = 0.5 * eta;
        if alpha >= PI {
            return Err(Error::OutOfDomain(format!(
                "piecewise modulus is undefined for eta/2 >= pi (eta = {eta})"
            )));
        }
        if alpha < self.eta_tilde {
            // 1 - tau^2 = sin^2(theta) with tau = cos(theta).
            Ok(5.0 * PI + 2.0 / solve_tau_angle(alpha)?.sin())
        } else {
            Ok(5.0 * PI + (PI - alpha))
        }
    }

    pub fn tau(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < self.eta_tilde) {
            return Err(invalid(format!(
                "tau is defined for 0 < alpha < {}",
                self.eta_tilde
            )));
        }
        Ok(solve_tau_angle(alpha)?.cos())
    }
}

/// Residual of `(pi/2 + asin s) sqrt(1 - s^2) = 1 + s`.
pub fn sigma_residual(s: f64) -> f64 {
    (FRAC_PI_2 + s.asin()) * (1.0 - s * s).sqrt() - (1.0 + s)
}

/// Residual of `(pi/2 - alpha - asin t) sqrt(1 - t^2) = 1 - t`.
pub fn tau_residual(alpha: f64, t: f64) -> f64 {
    (FRAC_PI_2 - alpha - t.asin()) * (1.0 - t * t).sqrt() - (1.0 - t)
}

/// Solves for `sigma` by bisection on `[0, 1 - 1e-12]` and derives
/// `eta_tilde = pi/2 - sqrt((1 - sigma) / (1 + sigma)) - asin(sigma)`.
pub fn solve_piecewise_constants() -> Result<PiecewiseModulus> {
    let (mut lo, mut hi) = (0.0f64, 1.0 - 1e-12);
    let (r_lo, r_hi) = (sigma_residual(lo), sigma_residual(hi));
    if !(r_lo > 0.0 && r_hi < 0.0) {
        return Err(Error::Internal(format!(
            "sigma bracket has no sign change: {r_lo} at 0, {r_hi} near 1"
        )));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if sigma_residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let sigma = 0.5 * (lo + hi);
    let eta_tilde = FRAC_PI_2 - ((1.0 - sigma) / (1.0 + sigma)).sqrt() - sigma.asin();
    Ok(PiecewiseModulus { sigma, eta_tilde })
}

/// With `tau = cos(theta)`, `theta` in `(0, pi/2)`, the tau equation reduces to
/// `theta - tan(theta/2) = alpha`, whose left side increases from 0 to
/// `pi/2 - 1`. Solved by Newton steps safeguarded by bisection, which keeps
/// full relative precision as `alpha -> 0` (where `tau -> 1`).
fn solve_tau_angle(alpha: f64) -> Result<f64> {
    let q = |t: f64| t - (0.5 * t).tan() - alpha;
    let (mut lo, mut hi) = (0.0f64, FRAC_PI_2);
    if !(q(hi) > 0.0) {
        return Err(Error::Internal(format!(
            "tau bracket has no sign change at alpha = {alpha}"
        )));
    }
    // theta ~ 2 alpha for small alpha
    let mut t = (2.0 * alpha).min(0.5 * (lo + hi));
    for _ in 0..200 {
        let v = q(t);
        if v == 0.0 {
            return Ok(t);
        }
        if v < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let sec = 1.0 / (0.5 * t).cos();
        let slope = 1.0 - 0.5 * sec * sec;
        let newton = t - v / slope;
        let next = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - t).abs() <= 4.0 * f64::EPSILON * t || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(next);
        }
        t = next;
    }
    Ok(t)
}
