//! Trapezoidal quadrature over vertical lines in the complex plane, for
//! gamma-product integrands that decay like exp(-c |Im z|).
//!
//! The normalization is the Mellin-Barnes one: a d-fold integral carries
//! (4π√-1)^{-d}, so along z = c + it each axis contributes (4π)^{-1} ∫ dt.
//!
//! The trapezoid rule converges exponentially for these integrands; each
//! refinement halves the step (reusing previous nodes) and extends the
//! truncation height whenever the boundary terms are still visible.

use crate::gamma::C64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("no admissible contour: {0}")]
    InfeasibleStrip(String),
    #[error("refinement budget exhausted (last err {err:.3e}, value {value})")]
    NoConvergence { value: C64, err: f64 },
    #[error("integrand returned a non-finite value at {0}")]
    NaNEncountered(C64),
}

pub type Result<T> = std::result::Result<T, QuadError>;

/// A complex value together with an a-posteriori error estimate
/// (the absolute change over the last refinement).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: C64,
    pub err_est: f64,
}

impl KernelValue {
    pub fn new(value: C64, err_est: f64) -> Self {
        KernelValue { value, err_est }
    }
}

/// One Re-part constraint `lower < Re z < upper` on a vertical contour.
#[derive(Debug, Clone, PartialEq)]
pub struct StripConstraint {
    pub lower: f64,
    pub upper: f64,
    pub description: String,
}

impl StripConstraint {
    pub fn new(lower: f64, upper: f64, description: impl Into<String>) -> Self {
        StripConstraint { lower, upper, description: description.into() }
    }
}

/// A concrete vertical contour Re z = `re_part`, truncated at
/// |Im z| <= `truncation_height`, sampled at spacing `step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub re_part: f64,
    pub truncation_height: f64,
    pub step: f64,
    pub max_refinements: u32,
}

pub const DEFAULT_STEP: f64 = 0.25;
pub const DEFAULT_HEIGHT: f64 = 40.0;
pub const DEFAULT_MAX_REFINEMENTS: u32 = 6;

/// Minimal admissible strip width; anything narrower is rejected.
pub const MIN_STRIP_WIDTH: f64 = 0.2;

impl ContourSpec {
    pub fn at(re_part: f64) -> Self {
        ContourSpec {
            re_part,
            truncation_height: DEFAULT_HEIGHT,
            step: DEFAULT_STEP,
            max_refinements: DEFAULT_MAX_REFINEMENTS,
        }
    }
}

/// Intersects the given strips and places the contour on the midline.
///
/// Fails with [`QuadError::InfeasibleStrip`] when the intersection is empty
/// or narrower than [`MIN_STRIP_WIDTH`]; that signals parameters violating
/// the convergence hypotheses rather than a numerical problem.
pub fn choose_contour(constraints: &[StripConstraint]) -> Result<ContourSpec> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for c in constraints {
        lo = lo.max(c.lower);
        hi = hi.min(c.upper);
    }
    if !lo.is_finite() || !hi.is_finite() {
        // unconstrained directions default to a symmetric window
        if !lo.is_finite() && !hi.is_finite() {
            return Ok(ContourSpec::at(0.0));
        }
        if !lo.is_finite() {
            return Ok(ContourSpec::at(hi - 1.0));
        }
        return Ok(ContourSpec::at(lo + 1.0));
    }
    if hi - lo < MIN_STRIP_WIDTH {
        let detail = constraints
            .iter()
            .map(|c| format!("{} in ({:.4}, {:.4})", c.description, c.lower, c.upper))
            .collect::<Vec<_>>()
            .join("; ");
        return Err(QuadError::InfeasibleStrip(format!(
            "intersection ({lo:.4}, {hi:.4}) too narrow: {detail}"
        )));
    }
    Ok(ContourSpec::at(0.5 * (lo + hi)))
}

/// Raw trapezoid sum Σ f(c + i k h) over |kh| <= height, accumulated from
/// the center outwards so the exponential tail can be cut early.
///
/// Returns the plain sum (no h factor). Deterministic for fixed inputs.
fn line_sum<F>(f: &mut F, re: f64, h: f64, height: f64) -> Result<C64>
where
    F: FnMut(C64) -> C64,
{
    let mut check = |z: C64| -> Result<C64> {
        let v = f(z);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(QuadError::NaNEncountered(z));
        }
        Ok(v)
    };
    let mut acc = check(C64::new(re, 0.0))?;
    let n = (height / h).ceil() as i64;
    let mut quiet_pairs = 0u32;
    for k in 1..=n {
        let t = k as f64 * h;
        let pair = check(C64::new(re, t))? + check(C64::new(re, -t))?;
        acc += pair;
        // tail cut: once several consecutive pairs are negligible the
        // exponential decay guarantees the remainder is too
        if pair.norm() <= 1e-18 * acc.norm().max(1e-280) && t >= 5.0 {
            quiet_pairs += 1;
            if quiet_pairs >= 4 {
                break;
            }
        } else {
            quiet_pairs = 0;
        }
    }
    Ok(acc)
}

/// (4π√-1)^{-1} ∫ f over the vertical line Re z = spec.re_part.
///
/// Halves the step each refinement (doubling the height whenever boundary
/// terms are still visible) until two successive values agree to `tol`
/// relative, then reports the last change as `err_est`.
pub fn integrate_vertical<F>(mut f: F, spec: &ContourSpec, tol: f64) -> Result<KernelValue>
where
    F: FnMut(C64) -> C64,
{
    let re = spec.re_part;
    let mut h = spec.step;
    let mut height = spec.truncation_height;
    let mut prev = line_sum(&mut f, re, h, height)? * (h / (4.0 * std::f64::consts::PI));
    for _ in 0..spec.max_refinements {
        // grow the window if the integrand has not died off at the edge
        let edge = f(C64::new(re, height)).norm() + f(C64::new(re, -height)).norm();
        if edge * h > 1e-16 * prev.norm().max(1e-280) {
            height *= 2.0;
        }
        h *= 0.5;
        let value = line_sum(&mut f, re, h, height)? * (h / (4.0 * std::f64::consts::PI));
        let err = (value - prev).norm();
        if err <= tol * value.norm().max(1e-300) {
            return Ok(KernelValue::new(value, err));
        }
        prev = value;
    }
    Err(QuadError::NoConvergence { value: prev, err: f64::NAN })
}

/// Iterated product-rule quadrature over up to three vertical lines with
/// the (4π√-1)^{-dim} normalization. `tol` applies per refinement of the
/// whole tensor grid.
pub fn integrate_vertical_multi<F>(mut f: F, specs: &[ContourSpec], tol: f64) -> Result<KernelValue>
where
    F: FnMut(&[C64]) -> C64,
{
    assert!(
        (1..=3).contains(&specs.len()),
        "integrate_vertical_multi supports dimensions 1..=3"
    );
    if specs.len() == 1 {
        let spec = specs[0];
        return integrate_vertical(|z| f(&[z]), &spec, tol);
    }
    let max_ref = specs.iter().map(|s| s.max_refinements).min().unwrap();
    let mut steps: Vec<f64> = specs.iter().map(|s| s.step).collect();
    let heights: Vec<f64> = specs.iter().map(|s| s.truncation_height).collect();
    let norm = (4.0 * std::f64::consts::PI).powi(specs.len() as i32);

    let mut prev: Option<C64> = None;
    for refinement in 0..=max_ref {
        let value = tensor_sum(&mut f, specs, &steps, &heights)?
            * (steps.iter().product::<f64>() / norm);
        if let Some(p) = prev {
            let err = (value - p).norm();
            if err <= tol * value.norm().max(1e-300) {
                return Ok(KernelValue::new(value, err));
            }
        }
        prev = Some(value);
        if refinement < max_ref {
            for s in steps.iter_mut() {
                *s *= 0.5;
            }
        }
    }
    Err(QuadError::NoConvergence { value: prev.unwrap(), err: f64::NAN })
}

/// Plain tensor-grid sum with center-outward accumulation and tail cuts on
/// every axis. Deterministic summation order.
fn tensor_sum<F>(f: &mut F, specs: &[ContourSpec], steps: &[f64], heights: &[f64]) -> Result<C64>
where
    F: FnMut(&[C64]) -> C64,
{
    let dim = specs.len();
    let res: Vec<f64> = specs.iter().map(|s| s.re_part).collect();

    // recursion over axes, outermost first
    fn axis<F>(
        f: &mut F,
        res: &[f64],
        steps: &[f64],
        heights: &[f64],
        level: usize,
        point: &mut Vec<C64>,
        scale_hint: f64,
    ) -> Result<C64>
    where
        F: FnMut(&[C64]) -> C64,
    {
        let dim = res.len();
        let h = steps[level];
        let n = (heights[level] / h).ceil() as i64;
        let eval_at = |t: f64, point: &mut Vec<C64>, f: &mut F, hint: f64| -> Result<C64> {
            point[level] = C64::new(res[level], t);
            if level + 1 == dim {
                let v = f(point);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(QuadError::NaNEncountered(point[level]));
                }
                Ok(v)
            } else {
                axis(f, res, steps, heights, level + 1, point, hint)
            }
        };
        let mut acc = eval_at(0.0, point, f, scale_hint)?;
        let mut quiet = 0u32;
        for k in 1..=n {
            let t = k as f64 * h;
            let hint = acc.norm().max(scale_hint);
            let pair = eval_at(t, point, f, hint)? + eval_at(-t, point, f, hint)?;
            acc += pair;
            if pair.norm() <= 1e-16 * acc.norm().max(scale_hint).max(1e-280) && t >= 5.0 {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        Ok(acc)
    }

    let mut point = vec![C64::new(0.0, 0.0); dim];
    axis(f, &res, steps, heights, 0, &mut point, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::{gamma, gamma_r};
    use std::f64::consts::PI;

    #[test]
    fn choose_contour_midpoints() {
        let spec = choose_contour(&[StripConstraint::new(-1.0, 2.0, "a")]).unwrap();
        assert!((spec.re_part - 0.5).abs() < 1e-15);
        let spec = choose_contour(&[
            StripConstraint::new(-1.0, 2.0, "a"),
            StripConstraint::new(0.0, 3.0, "b"),
        ])
        .unwrap();
        assert!((spec.re_part - 1.0).abs() < 1e-15);
    }

    #[test]
    fn choose_contour_rejects_empty() {
        let err = choose_contour(&[StripConstraint::new(1.0, 0.5, "bad")]).unwrap_err();
        assert!(matches!(err, QuadError::InfeasibleStrip(_)));
    }

    #[test]
    fn zero_integrand() {
        let spec = ContourSpec::at(0.0);
        let v = integrate_vertical(|_| C64::new(0.0, 0.0), &spec, 1e-10).unwrap();
        assert_eq!(v.value, C64::new(0.0, 0.0));
        assert_eq!(v.err_est, 0.0);
    }

    /// Barnes' first lemma with a1=a2=b1=b2=1 has the closed form
    /// Γ_R(2)^4 / Γ_R(4) = π^{-2}.
    #[test]
    fn barnes_first_special_point() {
        let spec = ContourSpec::at(0.0);
        let v = integrate_vertical(
            |z| {
                let a = gamma_r(z + 1.0).unwrap();
                let b = gamma_r(-z + 1.0).unwrap();
                a * a * b * b
            },
            &spec,
            1e-10,
        )
        .unwrap();
        let expected = PI.powi(-2);
        assert!(
            (v.value.re - expected).abs() < 1e-10 && v.value.im.abs() < 1e-12,
            "{v:?}"
        );
    }

    /// Mellin inversion of exp(-x) at x = 1: (2πi)^{-1} ∫ Γ(z) dz = e^{-1}
    /// on Re z = 1; our normalization is half that.
    #[test]
    fn mellin_inversion_of_exp() {
        let spec = ContourSpec::at(1.0);
        let v = integrate_vertical(|z| gamma(z).unwrap(), &spec, 1e-10).unwrap();
        let expected = 0.5 * (-1.0f64).exp();
        assert!((v.value.re - expected).abs() < 1e-10, "{v:?}");
        assert!(v.value.im.abs() < 1e-12);
    }

    #[test]
    fn multi_dim1_reduces_to_single() {
        let spec = ContourSpec::at(0.0);
        let f = |z: C64| {
            let a = gamma_r(z + 1.2).unwrap();
            let b = gamma_r(-z + 0.9).unwrap();
            a * a * b * b
        };
        let single = integrate_vertical(f, &spec, 1e-10).unwrap();
        let multi = integrate_vertical_multi(|zs| f(zs[0]), &[spec], 1e-10).unwrap();
        assert_eq!(single.value, multi.value);
    }

    #[test]
    fn linearity_within_error() {
        let spec = ContourSpec::at(0.0);
        let f = |z: C64| gamma_r(z + 1.0).unwrap() * gamma_r(-z + 1.0).unwrap();
        let g = |z: C64| {
            let a = gamma_r(z + 2.0).unwrap();
            let b = gamma_r(-z + 1.5).unwrap();
            a * b * b
        };
        let (alpha, beta) = (C64::new(2.0, 1.0), C64::new(-0.5, 0.25));
        let vf = integrate_vertical(f, &spec, 1e-11).unwrap();
        let vg = integrate_vertical(g, &spec, 1e-11).unwrap();
        let vc = integrate_vertical(|z| alpha * f(z) + beta * g(z), &spec, 1e-11).unwrap();
        let lin = alpha * vf.value + beta * vg.value;
        let budget = 3.0 * (vf.err_est + vg.err_est + vc.err_est) + 1e-12;
        assert!((vc.value - lin).norm() <= budget);
    }

    /// Cauchy: two contours inside the strip give the same value.
    #[test]
    fn contour_independence() {
        let f = |z: C64| {
            gamma_r(z + 1.0).unwrap()
                * gamma_r(z + 1.4).unwrap()
                * gamma_r(-z + 1.2).unwrap()
                * gamma_r(-z + 0.8).unwrap()
        };
        let v1 = integrate_vertical(f, &ContourSpec::at(-0.2), 1e-11).unwrap();
        let v2 = integrate_vertical(f, &ContourSpec::at(0.3), 1e-11).unwrap();
        assert!(
            (v1.value - v2.value).norm() <= 3.0 * (v1.err_est + v2.err_est) + 1e-12,
            "{v1:?} vs {v2:?}"
        );
    }
}
