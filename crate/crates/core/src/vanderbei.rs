//! Vanderbei moduli `L(eta)` and the two quantities the solvers derive from
//! them: the base covering step and the discard radius.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::geometry::HyperRectangle;
use crate::testfns::PiecewiseModulus;

pub type ModulusFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type Objective = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// The function `eta -> L(eta)` of the Vanderbei condition.
#[derive(Clone)]
pub enum VanderbeiModulus {
    /// `L(eta) = a / eta + b` with `a > 0`, `b >= 0`.
    Rational { a: f64, b: f64 },
    /// The two-branch modulus of the `sin(5y) asin(x) - sin(5x) asin(y)` problem.
    Piecewise(PiecewiseModulus),
    /// Any user-supplied positive function of `eta`.
    Custom(ModulusFn),
    /// `factor * inner(eta)`.
    Scaled {
        inner: Box<VanderbeiModulus>,
        factor: f64,
    },
}

impl fmt::Debug for VanderbeiModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational { a, b } => write!(f, "Rational {{ a: {a}, b: {b} }}"),
            Self::Piecewise(m) => write!(f, "Piecewise({m:?})"),
            Self::Custom(_) => write!(f, "Custom(..)"),
            Self::Scaled { inner, factor } => write!(f, "Scaled({factor} * {inner:?})"),
        }
    }
}

impl VanderbeiModulus {
    pub fn rational(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) || !(b >= 0.0 && b.is_finite()) {
            return Err(invalid(format!(
                "rational modulus needs a > 0, b >= 0 (got {a}, {b})"
            )));
        }
        Ok(Self::Rational { a, b })
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    /// Constant modulus, i.e. an ordinary Lipschitz constant.
    pub fn constant(l: f64) -> Self {
        Self::custom(move |_| l)
    }

    /// Multiplies the modulus by `factor`; rational forms stay rational.
    pub fn scaled(self, factor: f64) -> Self {
        if factor == 1.0 {
            return self;
        }
        match self {
            Self::Rational { a, b } => Self::Rational {
                a: a * factor,
                b: b * factor,
            },
            Self::Scaled { inner, factor: f0 } => Self::Scaled {
                inner,
                factor: f0 * factor,
            },
            other => Self::Scaled {
                inner: Box::new(other),
                factor,
            },
        }
    }

    /// Exclusive upper bound on admissible `eta` (infinite unless the
    /// representation is only defined on a bounded range).
    pub fn eta_limit(&self) -> f64 {
        match self {
            Self::Piecewise(_) => 2.0 * std::f64::consts::PI,
            Self::Scaled { inner, .. } => inner.eta_limit(),
            _ => f64::INFINITY,
        }
    }

    /// Whether `L` is known to be non-increasing in `eta`.
    pub fn is_monotone(&self) -> bool {
        match self {
            Self::Rational { .. } | Self::Piecewise(_) => true,
            Self::Custom(_) => false,
            Self::Scaled { inner, .. } => inner.is_monotone(),
        }
    }

    pub fn eval(&self, eta: f64) -> Result<f64> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(invalid(format!("eta must be positive, got {eta}")));
        }
        match self {
            Self::Rational { a, b } => Ok(a / eta + b),
            Self::Piecewise(m) => m.eval(eta),
            Self::Custom(f) => {
                let l = f(eta);
                if l > 0.0 && l.is_finite() {
                    Ok(l)
                } else {
                    Err(Error::OutOfDomain(format!(
                        "custom modulus returned {l} at eta = {eta}"
                    )))
                }
            }
            Self::Scaled { inner, factor } => Ok(factor * inner.eval(eta)?),
        }
    }
}

/// Norm in which a modulus is valid.
///
/// The solvers use it to inflate `L` so that their covering geometry (cubes
/// for the corner split, Euclidean balls for branch and bound) stays inside
/// the region the modulus actually controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoveringNorm {
    Max,
    Euclidean,
    Manhattan,
}

impl CoveringNorm {
    /// Factor applied to `L` by the corner-split solver, whose covered region
    /// around the iterate is a cube.
    pub fn cube_inflation(self, dim: usize) -> f64 {
        match self {
            Self::Max => 1.0,
            Self::Euclidean => (dim as f64).sqrt(),
            Self::Manhattan => dim as f64,
        }
    }

    /// Factor applied to `L` by branch and bound, whose covered region is a
    /// Euclidean ball.
    pub fn ball_inflation(self, dim: usize) -> f64 {
        match self {
            Self::Max | Self::Euclidean => 1.0,
            Self::Manhattan => (dim as f64).sqrt(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Max => "max",
            Self::Euclidean => "euclidean",
            Self::Manhattan => "manhattan",
        }
    }
}

impl std::str::FromStr for CoveringNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "max" | "inf" | "chebyshev" => Ok(Self::Max),
            "euclidean" | "l2" | "2" => Ok(Self::Euclidean),
            "manhattan" | "l1" | "1" => Ok(Self::Manhattan),
            _ => Err(invalid(format!("unknown norm '{s}'"))),
        }
    }
}

/// Objective, modulus and domain of one minimization problem.
///
/// Every call to [`Problem::eval`] bumps the evaluation counter by one.
pub struct Problem {
    name: String,
    objective: Objective,
    modulus: VanderbeiModulus,
    domain: HyperRectangle,
    evals: AtomicU64,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("modulus", &self.modulus)
            .field("domain", &self.domain)
            .field("evals", &self.eval_count())
            .finish()
    }
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        objective: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        modulus: VanderbeiModulus,
        domain: HyperRectangle,
    ) -> Self {
        Self {
            name: name.into(),
            objective: Arc::new(objective),
            modulus,
            domain,
            evals: AtomicU64::new(0),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn modulus(&self) -> &VanderbeiModulus {
        &self.modulus
    }

    pub fn domain(&self) -> &HyperRectangle {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.evals.fetch_add(1, Ordering::Relaxed);
        (self.objective)(x)
    }

    pub fn eval_count(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    pub fn reset_count(&self) {
        self.evals.store(0, Ordering::Relaxed);
    }
}

/// Base covering step `h = 2 (eps - eta) / L(eta)`.
pub fn base_step(eps: f64, eta: f64, modulus: &VanderbeiModulus) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(invalid(format!("eps must be positive, got {eps}")));
    }
    if !(eta > 0.0 && eta < eps) {
        return Err(invalid(format!(
            "eta must lie in (0, eps), got eta = {eta}, eps = {eps}"
        )));
    }
    let h = 2.0 * (eps - eta) / modulus.eval(eta)?;
    debug_assert!(h > 0.0);
    Ok(h)
}

/// Radius of the ball around an iterate that can be dropped without losing
/// an `eps`-improvement of the record, together with the `eta` attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscardRadius {
    pub rho: f64,
    pub eta_star: f64,
}

/// Lower bound `(1 - beta) eps / L(beta eps)` that every discard radius meets.
pub fn radius_floor(eps: f64, beta: f64, modulus: &VanderbeiModulus) -> Result<f64> {
    Ok((1.0 - beta) * eps / modulus.eval(beta * eps)?)
}

/// Maximizes `g(eta) = (gap + eps - eta) / L(eta)` over `0 < eta <= gap + beta eps`.
///
/// Rational moduli are solved in closed form; everything else goes through
/// [`discard_radius_numeric`]. The returned radius is always `g(eta_star)` at
/// a feasible `eta_star`, so an inexact maximizer only shrinks the radius.
pub fn discard_radius(
    gap: f64,
    eps: f64,
    beta: f64,
    modulus: &VanderbeiModulus,
) -> Result<DiscardRadius> {
    check_radius_args(gap, eps, beta)?;
    let out = match modulus {
        VanderbeiModulus::Rational { a, b } => {
            let c = gap + eps;
            let phi = gap + beta * eps;
            // g'(eta) = 0  <=>  b eta^2 + 2 a eta - a c = 0
            let stationary = if *b == 0.0 {
                0.5 * c
            } else {
                c * a / (a + (a * a + a * b * c).sqrt())
            };
            let eta = stationary.min(phi);
            DiscardRadius {
                rho: (c - eta) / modulus.eval(eta)?,
                eta_star: eta,
            }
        }
        _ => discard_radius_numeric(gap, eps, beta, modulus)?,
    };
    if modulus.is_monotone() {
        debug_assert!(out.rho >= radius_floor(eps, beta, modulus)? - 1e-12);
    }
    Ok(out)
}

/// Golden-section version of [`discard_radius`] for arbitrary moduli.
///
/// Searches `[1e-12 phi, phi]` (capped below the modulus' `eta` limit) to an
/// absolute tolerance of `1e-10 phi`, then also compares the right endpoint
/// and, for non-monotone moduli, a 64-point grid.
pub fn discard_radius_numeric(
    gap: f64,
    eps: f64,
    beta: f64,
    modulus: &VanderbeiModulus,
) -> Result<DiscardRadius> {
    check_radius_args(gap, eps, beta)?;
    let c = gap + eps;
    let phi = (gap + beta * eps).min(modulus.eta_limit() * (1.0 - 1e-12));
    let g = |eta: f64| match modulus.eval(eta) {
        Ok(l) => (c - eta) / l,
        Err(_) => f64::NEG_INFINITY,
    };

    let lo = 1e-12 * phi;
    let tol = 1e-10 * phi;
    let mut best = golden_section_max(&g, lo, phi, tol);
    let mut consider = |eta: f64| {
        let v = g(eta);
        if v > best.1 {
            best = (eta, v);
        }
    };
    consider(phi);
    if !modulus.is_monotone() {
        for i in 1..=64 {
            consider(phi * i as f64 / 64.0);
        }
    }
    let (eta_star, rho) = best;
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Internal(format!(
            "discard radius search failed (gap = {gap}, eps = {eps}, beta = {beta})"
        )));
    }
    Ok(DiscardRadius { rho, eta_star })
}

fn check_radius_args(gap: f64, eps: f64, beta: f64) -> Result<()> {
    if !(gap >= 0.0) || !gap.is_finite() {
        return Err(invalid(format!("gap must be non-negative, got {gap}")));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(invalid(format!("eps must be positive, got {eps}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(invalid(format!("beta must lie in (0, 1), got {beta}")));
    }
    Ok(())
}

/// Returns `(argmax, max)` of a unimodal `g` on `[lo, hi]`.
fn golden_section_max(g: &impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    while b - a > tol {
        if g1 < g2 {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + INV_PHI * (b - a);
            g2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - INV_PHI * (b - a);
            g1 = g(x1);
        }
    }
    if g1 >= g2 {
        (x1, g1)
    } else {
        (x2, g2)
    }
}

/// Discard-radius solver bound to one `(eps, beta, modulus)` triple, memoized
/// on the exact value of `phi = gap + beta eps`.
pub struct RadiusSolver {
    modulus: VanderbeiModulus,
    eps: f64,
    beta: f64,
    memo: HashMap<u64, DiscardRadius>,
}

impl RadiusSolver {
    pub fn new(modulus: VanderbeiModulus, eps: f64, beta: f64) -> Result<Self> {
        check_radius_args(0.0, eps, beta)?;
        Ok(Self {
            modulus,
            eps,
            beta,
            memo: HashMap::new(),
        })
    }

    pub fn modulus(&self) -> &VanderbeiModulus {
        &self.modulus
    }

    pub fn solve(&mut self, gap: f64) -> Result<DiscardRadius> {
        let phi = gap + self.beta * self.eps;
        if let Some(hit) = self.memo.get(&phi.to_bits()) {
            return Ok(*hit);
        }
        let out = discard_radius(gap, self.eps, self.beta, &self.modulus)?;
        self.memo.insert(phi.to_bits(), out);
        Ok(out)
    }

    pub fn floor(&self) -> Result<f64> {
        radius_floor(self.eps, self.beta, &self.modulus)
    }
}
