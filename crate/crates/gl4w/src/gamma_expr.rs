//! A small formal model for gamma-factor expressions and numerical
//! verification of identities between them.
//!
//! Two expression shapes cover everything we need:
//!   * finite products of Γ_R/Γ_C factors with affine arguments, and
//!   * single-contour Mellin-Barnes kernels (outer gamma product times a
//!     q-integral of a gamma ratio).
//!
//! Identities are data: a record lists terms `(coeff poly, expr, shift)` on
//! each side, the coefficient evaluated at the sample point and the
//! expression at the shifted point. The shipped corpus lives in
//! `data/identities.json`.

use crate::gamma::{self, C64, GammaError};
use crate::quadrature::{self, choose_contour, KernelValue, QuadError, StripConstraint};
use crate::report::{rel_err_scaled, IdentityReport};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaKind {
    R,
    C,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("malformed expression: {0}")]
    BadExpr(String),
}

pub type Result<T> = std::result::Result<T, EvalError>;

/// Exact rational, serialized as `[num, den]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rat(pub i64, pub i64);

impl Default for Rat {
    fn default() -> Self {
        Rat::ZERO
    }
}

impl Rat {
    pub const ZERO: Rat = Rat(0, 1);
    pub const ONE: Rat = Rat(1, 1);

    pub fn int(n: i64) -> Rat {
        Rat(n, 1)
    }

    pub fn half(n: i64) -> Rat {
        Rat(n, 2)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / self.1 as f64
    }
}

/// Affine form Σ coeff_v · v + const over named variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Affine {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub coeffs: BTreeMap<String, Rat>,
    #[serde(default = "rat_zero", skip_serializing_if = "is_rat_zero")]
    pub cst: Rat,
}

fn rat_zero() -> Rat {
    Rat::ZERO
}
fn is_rat_zero(r: &Rat) -> bool {
    *r == Rat::ZERO
}

impl Affine {
    pub fn constant(c: Rat) -> Affine {
        Affine { coeffs: BTreeMap::new(), cst: c }
    }

    pub fn var(name: &str) -> Affine {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), Rat::ONE);
        Affine { coeffs, cst: Rat::ZERO }
    }

    pub fn plus(mut self, name: &str, coeff: Rat) -> Affine {
        let entry = self.coeffs.entry(name.to_string()).or_insert(Rat::ZERO);
        // exact addition of rationals with small denominators
        let (a, b) = (*entry, coeff);
        *entry = Rat(a.0 * b.1 + b.0 * a.1, a.1 * b.1);
        if entry.0 == 0 {
            self.coeffs.remove(name);
        }
        self
    }

    pub fn shift(mut self, c: Rat) -> Affine {
        let a = self.cst;
        self.cst = Rat(a.0 * c.1 + c.0 * a.1, a.1 * c.1);
        self
    }

    /// Sum of two affine forms.
    pub fn merge(mut self, other: Affine) -> Affine {
        for (name, coeff) in other.coeffs {
            self = self.plus(&name, coeff);
        }
        self.shift(other.cst)
    }

    pub fn eval(&self, point: &BTreeMap<String, C64>) -> Result<C64> {
        let mut acc = C64::new(self.cst.to_f64(), 0.0);
        for (v, r) in &self.coeffs {
            let value = point
                .get(v)
                .ok_or_else(|| EvalError::BadExpr(format!("unbound variable {v}")))?;
            acc += r.to_f64() * value;
        }
        Ok(acc)
    }

    fn q_coefficient(&self) -> f64 {
        self.coeffs.get("q").map(|r| r.to_f64()).unwrap_or(0.0)
    }

    /// The same form with the `q` term removed.
    fn without_q(&self) -> Affine {
        let mut a = self.clone();
        a.coeffs.remove("q");
        a
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaFactor {
    pub kind: GammaKind,
    pub arg: Affine,
    pub exp: i32,
}

/// Π Γ_kind(arg)^exp × (2π)^two_pi_power, evaluated in log space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct GammaProduct {
    pub factors: Vec<GammaFactor>,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    pub two_pi_power: i32,
}

fn is_zero_i32(v: &i32) -> bool {
    *v == 0
}

impl GammaProduct {
    pub fn eval(&self, point: &BTreeMap<String, C64>) -> Result<C64> {
        let mut log = C64::new(0.0, 0.0);
        for f in &self.factors {
            let arg = f.arg.eval(point)?;
            let lg = match f.kind {
                GammaKind::R => gamma::ln_gamma_r_fast(arg),
                GammaKind::C => gamma::ln_gamma_c_fast(arg),
            };
            match lg {
                Ok(v) => log += f.exp as f64 * v,
                // a pole in the denominator is a zero of the product
                Err(GammaError::PoleAt(_)) if f.exp < 0 => return Ok(C64::new(0.0, 0.0)),
                Err(e) => return Err(e.into()),
            }
        }
        log += self.two_pi_power as f64 * (2.0 * std::f64::consts::PI).ln();
        Ok(log.exp())
    }
}

/// Sum of products of affine forms, with a rational scalar and a power of
/// 2π on each product. Covers every displayed coefficient polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyProd {
    pub scalar: Rat,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    pub two_pi_power: i32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<Affine>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    pub prods: Vec<PolyProd>,
}

impl Poly {
    pub fn one() -> Poly {
        Poly { prods: vec![PolyProd { scalar: Rat::ONE, two_pi_power: 0, factors: vec![] }] }
    }

    pub fn constant(scalar: Rat, two_pi_power: i32) -> Poly {
        Poly { prods: vec![PolyProd { scalar, two_pi_power, factors: vec![] }] }
    }

    pub fn product(scalar: Rat, two_pi_power: i32, factors: Vec<Affine>) -> Poly {
        Poly { prods: vec![PolyProd { scalar, two_pi_power, factors }] }
    }

    pub fn eval(&self, point: &BTreeMap<String, C64>) -> Result<C64> {
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut acc = C64::new(0.0, 0.0);
        for p in &self.prods {
            let mut term = C64::new(p.scalar.to_f64() * two_pi.powi(p.two_pi_power), 0.0);
            for f in &p.factors {
                term *= f.eval(point)?;
            }
            acc += term;
        }
        Ok(acc)
    }
}

/// Outer gamma product times (4π√-1)^{-1} ∫_q numerator/denominator dq.
/// The integration variable is the reserved name `q`; every numerator
/// argument must carry q-coefficient ±1 so the admissible strip is read
/// off directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MellinKernel {
    pub outer: GammaProduct,
    pub numerator: Vec<GammaFactor>,
    pub denominator: Vec<GammaFactor>,
}

impl MellinKernel {
    pub fn eval(&self, point: &BTreeMap<String, C64>, quad_tol: f64) -> Result<KernelValue> {
        let outer = self.outer.eval(point)?;
        if outer.norm() == 0.0 {
            return Ok(KernelValue::new(C64::new(0.0, 0.0), 0.0));
        }
        // resolve the q-free parts of all inner arguments
        let mut num: Vec<(GammaKind, C64, f64)> = Vec::with_capacity(self.numerator.len());
        for f in &self.numerator {
            let qc = f.arg.q_coefficient();
            if qc != 1.0 && qc != -1.0 {
                return Err(EvalError::BadExpr(format!(
                    "numerator argument must have q-coefficient ±1, got {qc}"
                )));
            }
            num.push((f.kind, f.arg.without_q().eval(point)?, qc));
        }
        let mut den: Vec<(GammaKind, C64, f64)> = Vec::with_capacity(self.denominator.len());
        for f in &self.denominator {
            den.push((f.kind, f.arg.without_q().eval(point)?, f.arg.q_coefficient()));
        }
        let mut strips = Vec::new();
        for (kind, c, qc) in &num {
            let label = match kind {
                GammaKind::R => "Re(q) bound from Γ_R",
                GammaKind::C => "Re(q) bound from Γ_C",
            };
            if *qc > 0.0 {
                strips.push(StripConstraint::new(-c.re, f64::INFINITY, label));
            } else {
                strips.push(StripConstraint::new(f64::NEG_INFINITY, c.re, label));
            }
        }
        let spec = choose_contour(&strips)?;
        let integrand = |q: C64| -> C64 {
            let mut log = C64::new(0.0, 0.0);
            for (kind, c, qc) in &num {
                let arg = c + *qc * q;
                let lg = match kind {
                    GammaKind::R => gamma::ln_gamma_r_fast(arg),
                    GammaKind::C => gamma::ln_gamma_c_fast(arg),
                };
                match lg {
                    Ok(v) => log += v,
                    Err(_) => return C64::new(f64::NAN, f64::NAN),
                }
            }
            for (kind, c, qc) in &den {
                let arg = c + *qc * q;
                let lg = match kind {
                    GammaKind::R => gamma::ln_gamma_r_fast(arg),
                    GammaKind::C => gamma::ln_gamma_c_fast(arg),
                };
                match lg {
                    Ok(v) => log -= v,
                    // pole of a denominator gamma: the ratio vanishes there
                    Err(_) => return C64::new(0.0, 0.0),
                }
            }
            log.exp()
        };
        let integral = quadrature::integrate_vertical(integrand, &spec, quad_tol)?;
        Ok(KernelValue::new(outer * integral.value, integral.err_est * outer.norm()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum ExprKind {
    Gamma(GammaProduct),
    Kernel(MellinKernel),
}

/// One identity term: `coeff(point) * expr(point + shift)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityTerm {
    pub coeff: Poly,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub shift: BTreeMap<String, i32>,
    pub expr: ExprKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRange {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl SampleRange {
    /// Default box for s-like variables.
    pub fn s_like() -> Self {
        SampleRange { re: (1.5, 3.0), im: (-1.0, 1.0) }
    }

    /// Default box for spectral parameters (ν, μ).
    pub fn nu_like() -> Self {
        SampleRange { re: (-0.2, 0.2), im: (-1.0, 1.0) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub name: String,
    pub sample: BTreeMap<String, SampleRange>,
    pub lhs: Vec<IdentityTerm>,
    pub rhs: Vec<IdentityTerm>,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCorpus {
    pub schema_version: u32,
    pub records: Vec<IdentityRecord>,
}

impl IdentityCorpus {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("corpus serialization")
    }
}

/// The unit of formal gamma bookkeeping: a gamma product together with a
/// polynomial prefactor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaExpr {
    pub product: GammaProduct,
    pub prefactor: Poly,
}

impl GammaExpr {
    pub fn product_only(product: GammaProduct) -> Self {
        GammaExpr { product, prefactor: Poly::one() }
    }
}

/// Evaluates prefactor(point) × product(point) in log space.
pub fn eval_gamma_expr(e: &GammaExpr, point: &BTreeMap<String, C64>) -> Result<C64> {
    Ok(e.prefactor.eval(point)? * e.product.eval(point)?)
}

fn shifted_point(point: &BTreeMap<String, C64>, shift: &BTreeMap<String, i32>) -> BTreeMap<String, C64> {
    let mut p = point.clone();
    for (v, k) in shift {
        if let Some(value) = p.get_mut(v) {
            *value += *k as f64;
        }
    }
    p
}

fn eval_term(term: &IdentityTerm, point: &BTreeMap<String, C64>, quad_tol: f64) -> Result<C64> {
    let coeff = term.coeff.eval(point)?;
    let at = shifted_point(point, &term.shift);
    let value = match &term.expr {
        ExprKind::Gamma(g) => g.eval(&at)?,
        ExprKind::Kernel(k) => k.eval(&at, quad_tol)?.value,
    };
    Ok(coeff * value)
}

fn eval_side(
    terms: &[IdentityTerm],
    point: &BTreeMap<String, C64>,
    quad_tol: f64,
) -> Result<(C64, f64)> {
    let mut sum = C64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    for t in terms {
        let v = eval_term(t, point, quad_tol)?;
        scale = scale.max(v.norm());
        sum += v;
    }
    Ok((sum, scale))
}

/// Simple deterministic generator (splitmix64) so verification reports are
/// reproducible from a seed without extra dependencies.
#[derive(Debug, Clone)]
pub struct SampleRng {
    state: u64,
}

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        SampleRng { state: seed.wrapping_add(0x9e3779b97f4a7c15) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + u * (hi - lo)
    }

    pub fn complex_in(&mut self, r: &SampleRange) -> C64 {
        C64::new(self.uniform(r.re.0, r.re.1), self.uniform(r.im.0, r.im.1))
    }
}

/// Numerically verifies one identity record at `n_samples` random points.
///
/// A sampled point that lands on a pole (or an infeasible strip) is
/// resampled, up to 5 retries, after which the record fails.
pub fn verify_identity(
    record: &IdentityRecord,
    n_samples: usize,
    tol: f64,
    rng: &mut SampleRng,
    quad_tol: f64,
) -> IdentityReport {
    let mut report = IdentityReport::new(record.name.clone(), tol);
    for _ in 0..n_samples {
        let mut done = false;
        for _retry in 0..5 {
            let mut point = BTreeMap::new();
            for (v, range) in &record.sample {
                point.insert(v.clone(), rng.complex_in(range));
            }
            let lhs = eval_side(&record.lhs, &point, quad_tol);
            let rhs = eval_side(&record.rhs, &point, quad_tol);
            match (lhs, rhs) {
                (Ok((l, sl)), Ok((r, sr))) => {
                    let rel = rel_err_scaled(l, r, sl.max(sr));
                    report.record(point.into_iter().collect(), l, r, rel);
                    done = true;
                    break;
                }
                _ => continue,
            }
        }
        if !done {
            // persistent failure to evaluate counts as a failed sample
            report.record(vec![], C64::new(f64::NAN, 0.0), C64::new(0.0, 0.0), f64::INFINITY);
        }
    }
    report
}

/// Closed form of Barnes' first lemma,
/// Γ_R(a1+b1)Γ_R(a1+b2)Γ_R(a2+b1)Γ_R(a2+b2)/Γ_R(a1+a2+b1+b2),
/// valid for Re(ai+bj) > 0.
pub fn barnes_first(a1: C64, a2: C64, b1: C64, b2: C64) -> Result<C64> {
    for (x, y) in [(a1, b1), (a1, b2), (a2, b1), (a2, b2)] {
        if (x + y).re <= 0.0 {
            return Err(EvalError::DomainViolation(format!("Re({} + {}) <= 0", x, y)));
        }
    }
    let log = gamma::ln_gamma_r_fast(a1 + b1)?
        + gamma::ln_gamma_r_fast(a1 + b2)?
        + gamma::ln_gamma_r_fast(a2 + b1)?
        + gamma::ln_gamma_r_fast(a2 + b2)?
        - gamma::ln_gamma_r_fast(a1 + a2 + b1 + b2)?;
    Ok(log.exp())
}

/// Closed form of Barnes' second lemma: six Γ_R factors over three,
/// valid for Re(ai+bj) > 0.
pub fn barnes_second(a1: C64, a2: C64, b1: C64, b2: C64, b3: C64) -> Result<C64> {
    for a in [a1, a2] {
        for b in [b1, b2, b3] {
            if (a + b).re <= 0.0 {
                return Err(EvalError::DomainViolation(format!("Re({} + {}) <= 0", a, b)));
            }
        }
    }
    let log = gamma::ln_gamma_r_fast(a1 + b1)?
        + gamma::ln_gamma_r_fast(a1 + b2)?
        + gamma::ln_gamma_r_fast(a1 + b3)?
        + gamma::ln_gamma_r_fast(a2 + b1)?
        + gamma::ln_gamma_r_fast(a2 + b2)?
        + gamma::ln_gamma_r_fast(a2 + b3)?
        - gamma::ln_gamma_r_fast(a1 + a2 + b1 + b2)?
        - gamma::ln_gamma_r_fast(a1 + a2 + b1 + b3)?
        - gamma::ln_gamma_r_fast(a1 + a2 + b2 + b3)?;
    Ok(log.exp())
}

fn binomial(m: u32, j: u32) -> f64 {
    let mut acc = 1.0f64;
    for k in 0..j {
        acc = acc * (m - k) as f64 / (k + 1) as f64;
    }
    acc
}

/// Checks the Saalschütz summation: the finite binomial sum of Γ_R ratios
/// against its closed form, for Re(a), Re(b) > 0 and Re(c) > 2m.
pub fn saalschutz_check(a: C64, b: C64, c: C64, m: u32, tol: f64) -> Result<IdentityReport> {
    if a.re <= 0.0 || b.re <= 0.0 {
        return Err(EvalError::DomainViolation("Re(a), Re(b) must be positive".into()));
    }
    if c.re <= 2.0 * m as f64 {
        return Err(EvalError::DomainViolation("Re(c) must exceed 2m".into()));
    }
    let mut sum = C64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    for j in 0..=m {
        let jj = 2.0 * j as f64;
        let log = gamma::ln_gamma_r_fast(a + jj)?
            + gamma::ln_gamma_r_fast(b + jj)?
            + gamma::ln_gamma_r_fast(c - jj)?
            - gamma::ln_gamma_r_fast(a + b + c + jj - 2.0 * m as f64)?;
        let term = binomial(m, j) * log.exp();
        scale = scale.max(term.norm());
        sum += term;
    }
    let closed = (gamma::ln_gamma_r_fast(a)?
        + gamma::ln_gamma_r_fast(b)?
        + gamma::ln_gamma_r_fast(a + c)?
        + gamma::ln_gamma_r_fast(b + c)?
        + gamma::ln_gamma_r_fast(c - 2.0 * m as f64)?
        - gamma::ln_gamma_r_fast(a + b + c)?
        - gamma::ln_gamma_r_fast(a + c - 2.0 * m as f64)?
        - gamma::ln_gamma_r_fast(b + c - 2.0 * m as f64)?)
    .exp();
    let mut report = IdentityReport::new(format!("saalschutz m={m}"), tol);
    let rel = rel_err_scaled(sum, closed, scale);
    report.record(
        vec![("a".into(), a), ("b".into(), b), ("c".into(), c)],
        sum,
        closed,
        rel,
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pt(entries: &[(&str, C64)]) -> BTreeMap<String, C64> {
        entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn empty_expr_is_one() {
        let e = GammaExpr::product_only(GammaProduct::default());
        let v = eval_gamma_expr(&e, &pt(&[])).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn duplication_as_expression() {
        // Γ_R(s) Γ_R(s+1) / Γ_C(s) = 1
        let e = GammaExpr::product_only(GammaProduct {
            factors: vec![
                GammaFactor { kind: GammaKind::R, arg: Affine::var("s"), exp: 1 },
                GammaFactor { kind: GammaKind::R, arg: Affine::var("s").shift(Rat::int(1)), exp: 1 },
                GammaFactor { kind: GammaKind::C, arg: Affine::var("s"), exp: -1 },
            ],
            two_pi_power: 0,
        });
        let v = eval_gamma_expr(&e, &pt(&[("s", C64::new(1.3, 0.2))])).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-13, "{v}");
    }

    #[test]
    fn recursion_as_expression() {
        // (2π)^{-1} s Γ_R(s) / Γ_R(s+2) = 1
        let e = GammaExpr {
            product: GammaProduct {
                factors: vec![
                    GammaFactor { kind: GammaKind::R, arg: Affine::var("s"), exp: 1 },
                    GammaFactor {
                        kind: GammaKind::R,
                        arg: Affine::var("s").shift(Rat::int(2)),
                        exp: -1,
                    },
                ],
                two_pi_power: -1,
            },
            prefactor: Poly::product(Rat::ONE, 0, vec![Affine::var("s")]),
        };
        let v = eval_gamma_expr(&e, &pt(&[("s", C64::new(0.8, -1.1))])).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-13, "{v}");
    }

    #[test]
    fn barnes_first_closed_form_values() {
        let one = C64::new(1.0, 0.0);
        let v = barnes_first(one, one, one, one).unwrap();
        assert!((v.re - PI.powi(-2)).abs() < 1e-13 && v.im.abs() < 1e-15);
        // symmetry a1 <-> a2
        let (a1, a2, b1, b2) = (
            C64::new(0.7, 0.3),
            C64::new(1.1, -0.2),
            C64::new(0.9, 0.1),
            C64::new(1.4, 0.6),
        );
        let v1 = barnes_first(a1, a2, b1, b2).unwrap();
        let v2 = barnes_first(a2, a1, b1, b2).unwrap();
        assert!((v1 - v2).norm() < 1e-14 * v1.norm());
    }

    #[test]
    fn barnes_first_rejects_bad_domain() {
        let v = barnes_first(
            C64::new(-1.0, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.5, 0.0),
        );
        assert!(matches!(v, Err(EvalError::DomainViolation(_))));
    }

    #[test]
    fn barnes_second_closed_form_values() {
        let one = C64::new(1.0, 0.0);
        let v = barnes_second(one, one, one, one, one).unwrap();
        assert!((v - one).norm() < 1e-13, "{v}");
        // symmetry under permuting the b's
        let (a1, a2) = (C64::new(0.8, 0.2), C64::new(1.2, -0.4));
        let (b1, b2, b3) = (C64::new(0.6, 0.5), C64::new(1.0, -0.1), C64::new(1.3, 0.3));
        let v1 = barnes_second(a1, a2, b1, b2, b3).unwrap();
        let v2 = barnes_second(a1, a2, b3, b1, b2).unwrap();
        assert!((v1 - v2).norm() < 1e-14 * v1.norm());
    }

    #[test]
    fn saalschutz_m0_collapse() {
        let r = saalschutz_check(
            C64::new(1.3, 0.2),
            C64::new(0.9, -0.4),
            C64::new(2.0, 0.1),
            0,
            1e-10,
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn saalschutz_m1_specific() {
        let r = saalschutz_check(C64::new(1.2, 0.0), C64::new(0.8, 0.3), C64::new(5.0, 0.0), 1, 1e-10)
            .unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn saalschutz_m3_random_box() {
        let mut rng = SampleRng::new(7);
        for _ in 0..5 {
            let a = C64::new(rng.uniform(0.5, 2.0), rng.uniform(-0.5, 0.5));
            let b = C64::new(rng.uniform(0.5, 2.0), rng.uniform(-0.5, 0.5));
            let c = C64::new(rng.uniform(6.5, 8.0), rng.uniform(-0.5, 0.5));
            let r = saalschutz_check(a, b, c, 3, 1e-10).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn verify_identity_syntactic_equal() {
        let term = IdentityTerm {
            coeff: Poly::one(),
            shift: BTreeMap::new(),
            expr: ExprKind::Gamma(GammaProduct {
                factors: vec![GammaFactor { kind: GammaKind::R, arg: Affine::var("s"), exp: 1 }],
                two_pi_power: 0,
            }),
        };
        let record = IdentityRecord {
            name: "trivial".into(),
            sample: [("s".to_string(), SampleRange::s_like())].into_iter().collect(),
            lhs: vec![term.clone()],
            rhs: vec![term],
            tol: 1e-14,
        };
        let mut rng = SampleRng::new(3);
        let report = verify_identity(&record, 4, 1e-14, &mut rng, 1e-10);
        assert!(report.pass);
        assert_eq!(report.max_rel_err, 0.0);
    }

    #[test]
    fn kernel_matches_barnes_first_quadrature() {
        // (4πi)^{-1} ∫ Γ_R(q+a1) Γ_R(q+a2) Γ_R(-q+b1) Γ_R(-q+b2) dq
        let kernel = MellinKernel {
            outer: GammaProduct::default(),
            numerator: vec![
                GammaFactor { kind: GammaKind::R, arg: Affine::var("q").plus("a1", Rat::ONE), exp: 1 },
                GammaFactor { kind: GammaKind::R, arg: Affine::var("q").plus("a2", Rat::ONE), exp: 1 },
                GammaFactor {
                    kind: GammaKind::R,
                    arg: Affine::var("b1").plus("q", Rat::int(-1)),
                    exp: 1,
                },
                GammaFactor {
                    kind: GammaKind::R,
                    arg: Affine::var("b2").plus("q", Rat::int(-1)),
                    exp: 1,
                },
            ],
            denominator: vec![],
        };
        let point = pt(&[
            ("a1", C64::new(0.8, 0.3)),
            ("a2", C64::new(1.1, -0.2)),
            ("b1", C64::new(0.9, 0.4)),
            ("b2", C64::new(1.2, -0.5)),
        ]);
        let v = kernel.eval(&point, 1e-10).unwrap();
        let closed = barnes_first(
            point["a1"], point["a2"], point["b1"], point["b2"],
        )
        .unwrap();
        assert!((v.value - closed).norm() < 1e-9 * closed.norm(), "{v:?} vs {closed}");
    }
}
