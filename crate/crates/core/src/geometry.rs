//! Axis-aligned hyperrectangles and the partition schemes used by the solvers.
//!
//! Three ways of cutting a box are provided:
//!
//! - [`HyperRectangle::corner_split`] removes a cube-like corner near the
//!   lower vertex and tiles the rest with at most `n` children.
//! - [`HyperRectangle::bisect_longest`] halves the box across a maximal edge.
//! - [`HyperRectangle::slab_decompose`] peels a centered inner box out of the
//!   box by repeated slab cuts, producing at most `2n` outer pieces.
//!
//! [`HyperRectangle::inscribe_max_box`] computes the largest-volume centered
//! box that fits inside both the box and a Euclidean ball around its center.

use crate::error::{invalid, Error, Result};

/// Closed axis-aligned box `[lower, upper]` in `R^n`.
///
/// Stored boxes always satisfy `lower[i] < upper[i]` with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperRectangle {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl HyperRectangle {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(invalid("box must have at least one dimension"));
        }
        if lower.len() != upper.len() {
            return Err(invalid(format!(
                "bound dimensions differ: {} vs {}",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (&a, &b)) in lower.iter().zip(&upper).enumerate() {
            if !a.is_finite() || !b.is_finite() {
                return Err(invalid(format!("non-finite bound on axis {i}")));
            }
            if a >= b {
                return Err(invalid(format!(
                    "degenerate axis {i}: lower {a} >= upper {b}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Same box in every dimension, `[lo, hi]^n`.
    pub fn cube(lo: f64, hi: f64, dim: usize) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    // Callers guarantee lower < upper on every axis.
    fn from_parts(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        debug_assert!(lower.iter().zip(&upper).all(|(a, b)| a < b));
        Self { lower, upper }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    pub fn widths(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.width(i)).collect()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    }

    /// Euclidean length of the main diagonal.
    pub fn diagonal(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.width(i).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn half_diagonal(&self) -> f64 {
        0.5 * self.diagonal()
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.width(i)).product()
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .enumerate()
                .all(|(i, &v)| self.lower[i] <= v && v <= self.upper[i])
    }

    /// Coordinate-wise containment, exact comparison.
    pub fn contains_box(&self, other: &HyperRectangle) -> bool {
        other.dim() == self.dim()
            && (0..self.dim())
                .all(|i| self.lower[i] <= other.lower[i] && other.upper[i] <= self.upper[i])
    }

    /// Index of the longest edge; ties go to the lowest axis.
    pub fn longest_axis(&self) -> usize {
        let mut best = 0;
        for i in 1..self.dim() {
            if self.width(i) > self.width(best) {
                best = i;
            }
        }
        best
    }

    /// Corner split with step `step`.
    ///
    /// For every axis `i` whose width exceeds `step`, emits the child
    /// `[lower + step*e_i, (min(lower_j + step, upper_j) for j < i, upper_j for j >= i)]`.
    /// Together with the corner box `[lower, min(lower + step, upper)]` the
    /// children tile `self`. Children come out in ascending axis order.
    pub fn corner_split(&self, step: f64) -> Result<Vec<HyperRectangle>> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(invalid(format!(
                "corner split step must be positive, got {step}"
            )));
        }
        let n = self.dim();
        let mut children = Vec::new();
        for i in 0..n {
            if let Some(child) = self.corner_child(i, step) {
                children.push(child);
            }
        }
        Ok(children)
    }

    /// Number of children [`corner_split`](Self::corner_split) would emit.
    pub(crate) fn corner_child_count(&self, step: f64) -> usize {
        (0..self.dim())
            .filter(|&i| self.splits_axis(i, step))
            .count()
    }

    // `upper - lower > step`, evaluated so that the child's lower bound
    // `lower + step` is guaranteed to stay below `upper` after rounding.
    fn splits_axis(&self, axis: usize, step: f64) -> bool {
        self.lower[axis] + step < self.upper[axis]
    }

    /// The corner-split child for `axis`, if the axis is wide enough.
    pub(crate) fn corner_child(&self, axis: usize, step: f64) -> Option<HyperRectangle> {
        if !self.splits_axis(axis, step) {
            return None;
        }
        let mut lower = self.lower.clone();
        lower[axis] += step;
        let mut upper = self.upper.clone();
        for j in 0..axis {
            upper[j] = (self.lower[j] + step).min(self.upper[j]);
        }
        Some(Self::from_parts(lower, upper))
    }

    /// The covered corner `[lower, min(lower + step, upper)]` left out by
    /// [`corner_split`](Self::corner_split).
    pub fn corner_box(&self, step: f64) -> HyperRectangle {
        let upper = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(&a, &b)| (a + step).min(b))
            .collect();
        Self::from_parts(self.lower.clone(), upper)
    }

    /// Halves the box through the midpoint of its longest edge.
    pub fn bisect_longest(&self) -> (HyperRectangle, HyperRectangle) {
        let axis = self.longest_axis();
        let mid = 0.5 * (self.lower[axis] + self.upper[axis]);
        let mut left_upper = self.upper.clone();
        left_upper[axis] = mid;
        let mut right_lower = self.lower.clone();
        right_lower[axis] = mid;
        (
            Self::from_parts(self.lower.clone(), left_upper),
            Self::from_parts(right_lower, self.upper.clone()),
        )
    }

    /// Half-widths `s` of the maximum-volume box centered at `self.center()`
    /// that fits inside `self` and inside the Euclidean ball of `radius`.
    ///
    /// Water-filling: unclamped axes share the remaining squared radius
    /// equally, axes narrower than that level are clamped to their own
    /// half-width, and the level is recomputed until nothing new clamps.
    pub fn inscribe_max_box(&self, radius: f64) -> Result<Vec<f64>> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(invalid(format!("radius must be positive, got {radius}")));
        }
        let half_widths: Vec<f64> = (0..self.dim()).map(|i| 0.5 * self.width(i)).collect();
        if radius >= self.half_diagonal() {
            return Err(Error::ContractViolation(format!(
                "radius {radius} reaches the box half-diagonal {}; the whole box is covered",
                self.half_diagonal()
            )));
        }
        Ok(water_fill(&half_widths, radius))
    }

    /// The centered box with half-widths `s`, clamped onto `self` so that
    /// rounding never pushes it outside. Axes with `s[i] >= w[i]` reuse the
    /// parent bounds exactly.
    pub fn centered_box(&self, half_widths: &[f64]) -> Result<HyperRectangle> {
        if half_widths.len() != self.dim() {
            return Err(invalid("half-width vector has the wrong dimension"));
        }
        let c = self.center();
        let mut lower = Vec::with_capacity(self.dim());
        let mut upper = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let s = half_widths[i];
            if !(s > 0.0) {
                return Err(invalid(format!("half-width on axis {i} must be positive")));
            }
            if s >= 0.5 * self.width(i) {
                lower.push(self.lower[i]);
                upper.push(self.upper[i]);
            } else {
                lower.push((c[i] - s).max(self.lower[i]));
                upper.push((c[i] + s).min(self.upper[i]));
            }
        }
        HyperRectangle::new(lower, upper)
    }

    /// Tiles `self \ inner` with at most `2n` slabs.
    ///
    /// Starting from the middle box `self`, each round cuts the longest
    /// not-yet-cut edge of the middle box through the two matching faces of
    /// `inner`, keeps the lower and upper slab (in that order) and continues
    /// with the middle piece until it coincides with `inner`. Zero-width
    /// slabs are dropped.
    pub fn slab_decompose(&self, inner: &HyperRectangle) -> Result<Vec<HyperRectangle>> {
        if inner.dim() != self.dim() {
            return Err(invalid("inner box has the wrong dimension"));
        }
        if !self.contains_box(inner) {
            return Err(invalid("inner box is not contained in the outer box"));
        }
        for i in 0..self.dim() {
            let outer_mid = self.lower[i] + self.upper[i];
            let inner_mid = inner.lower[i] + inner.upper[i];
            let scale = self.lower[i]
                .abs()
                .max(self.upper[i].abs())
                .max(self.width(i));
            if (outer_mid - inner_mid).abs() > 1e-9 * scale {
                return Err(invalid(format!("inner box is not centered on axis {i}")));
            }
        }

        let n = self.dim();
        let mut middle = self.clone();
        let mut cut = vec![false; n];
        let mut slabs = Vec::with_capacity(2 * n);
        for _ in 0..n {
            let mut axis = None;
            for i in 0..n {
                if cut[i] {
                    continue;
                }
                match axis {
                    Some(a) if middle.width(i) <= middle.width(a) => {}
                    _ => axis = Some(i),
                }
            }
            let Some(axis) = axis else { break };
            cut[axis] = true;

            if inner.lower[axis] > middle.lower[axis] {
                let mut upper = middle.upper.clone();
                upper[axis] = inner.lower[axis];
                slabs.push(Self::from_parts(middle.lower.clone(), upper));
            }
            if inner.upper[axis] < middle.upper[axis] {
                let mut lower = middle.lower.clone();
                lower[axis] = inner.upper[axis];
                slabs.push(Self::from_parts(lower, middle.upper.clone()));
            }
            middle.lower[axis] = inner.lower[axis];
            middle.upper[axis] = inner.upper[axis];
        }
        debug_assert_eq!(&middle, inner);
        Ok(slabs)
    }
}

fn water_fill(half_widths: &[f64], radius: f64) -> Vec<f64> {
    let n = half_widths.len();
    let mut clamped = vec![false; n];
    let mut budget = radius * radius;
    loop {
        let free = clamped.iter().filter(|c| !**c).count();
        if free == 0 {
            return half_widths.to_vec();
        }
        let level = (budget.max(0.0) / free as f64).sqrt();
        let mut changed = false;
        for i in 0..n {
            if !clamped[i] && half_widths[i] <= level {
                clamped[i] = true;
                budget -= half_widths[i] * half_widths[i];
                changed = true;
            }
        }
        if !changed {
            return (0..n)
                .map(|i| if clamped[i] { half_widths[i] } else { level })
                .collect();
        }
    }
}
