//! The holonomic system satisfied by the radial parts, verified as
//! difference identities on Mellin kernels.
//!
//! Dictionary: a radial part f(y) = ∭ V(s) y^{-s} ds turns ∂_i = y_i d/dy_i
//! into multiplication by -s_i, and multiplication by (2π y_i) into the
//! shift s_i ↦ s_i + 1 with a factor 2π. A polynomial written to the right
//! of a y-shift is therefore evaluated at the shifted point; the builders
//! below substitute ∂_i ↦ -(s_i + Δ_i) at construction time.

use crate::gamma::C64;
use crate::kernels::{kernel_hat, KernelError};
use crate::rep::{GeneratorIndex, InducingDatum};
use crate::report::{IdentityReport, RunConfig};
use std::collections::HashMap;

pub type Result<T> = std::result::Result<T, KernelError>;

/// Affine form cst + Σ coeff_i s_i with complex constant.
#[derive(Debug, Clone, Copy)]
pub struct SAffine {
    pub cst: C64,
    pub s: [f64; 3],
}

impl SAffine {
    fn eval(&self, s: [C64; 3]) -> C64 {
        self.cst + self.s[0] * s[0] + self.s[1] * s[1] + self.s[2] * s[2]
    }
}

/// Affine form in the Euler operators: cst + Σ d_i ∂_i.
#[derive(Debug, Clone, Copy)]
struct DAffine {
    cst: C64,
    d: [f64; 3],
}

impl DAffine {
    fn c(cst: C64) -> Self {
        DAffine { cst, d: [0.0; 3] }
    }

    fn with(mut self, i: usize, coeff: f64) -> Self {
        self.d[i - 1] += coeff;
        self
    }

    /// Substitute ∂_i ↦ -(s_i + Δ_i).
    fn under_shift(&self, shift: [i32; 3]) -> SAffine {
        let mut cst = self.cst;
        let mut s = [0.0; 3];
        for i in 0..3 {
            cst -= self.d[i] * shift[i] as f64;
            s[i] = -self.d[i];
        }
        SAffine { cst, s }
    }
}

fn d0() -> DAffine {
    DAffine::c(C64::new(0.0, 0.0))
}

fn dc(z: C64) -> DAffine {
    DAffine::c(z)
}

/// Target combination Σ coeff · φ̂_{l'} with integer coefficients.
pub type Target = Vec<(f64, GeneratorIndex)>;

#[derive(Debug, Clone)]
pub struct OpTerm {
    pub scalar: C64,
    pub factors: Vec<SAffine>,
    pub shift: [i32; 3],
    pub two_pi_power: i32,
    pub target: Target,
}

/// Finite sum of polynomial-coefficient shift terms acting on kernels.
#[derive(Debug, Clone, Default)]
pub struct MellinOperator {
    pub terms: Vec<OpTerm>,
}

impl MellinOperator {
    pub fn zero() -> Self {
        MellinOperator::default()
    }
}

/// The seven index-shift combinations coupling a Capelli equation to the
/// neighbouring generators. Out-of-range indices are dropped (φ̂ = 0 there).
#[derive(Debug, Clone, Default)]
pub struct KOperators {
    pub k12: Target,
    pub k23: Target,
    pub k34: Target,
    pub k13: Target,
    pub k24: Target,
    pub k14: Target,
    pub k12_34: Target,
}

fn push(target: &mut Target, coeff: i64, idx: Option<GeneratorIndex>) {
    if coeff == 0 {
        return;
    }
    if let Some(l) = idx {
        target.push((coeff as f64, l));
    }
}

/// Builds the 𝔎 combinations for one generator index.
pub fn build_k_operators(l: &GeneratorIndex) -> KOperators {
    let (l1, l2, l3, l4) = (
        l.single(1) as i64,
        l.single(2) as i64,
        l.single(3) as i64,
        l.single(4) as i64,
    );
    let (l12, l13, l14) = (l.pair(1, 2) as i64, l.pair(1, 3) as i64, l.pair(1, 4) as i64);
    let (l23, l24, l34) = (l.pair(2, 3) as i64, l.pair(2, 4) as i64, l.pair(3, 4) as i64);
    // slot indices
    let (s1, s2, s3, s4) = (0usize, 1usize, 2usize, 3usize);
    let (p12, p13, p14, p23, p24, p34) = (4usize, 5usize, 6usize, 7usize, 8usize, 9usize);
    let mv = |deltas: &[(usize, i16)]| l.try_shift(deltas);

    let mut k = KOperators::default();

    push(&mut k.k12, l1, mv(&[(s1, -1), (s2, 1)]));
    push(&mut k.k12, l2, mv(&[(s2, -1), (s1, 1)]));
    push(&mut k.k12, l13, mv(&[(p13, -1), (p23, 1)]));
    push(&mut k.k12, l14, mv(&[(p14, -1), (p24, 1)]));
    push(&mut k.k12, l23, mv(&[(p23, -1), (p13, 1)]));
    push(&mut k.k12, l24, mv(&[(p24, -1), (p14, 1)]));

    push(&mut k.k23, l2, mv(&[(s2, -1), (s3, 1)]));
    push(&mut k.k23, l3, mv(&[(s3, -1), (s2, 1)]));
    push(&mut k.k23, l12, mv(&[(p12, -1), (p13, 1)]));
    push(&mut k.k23, l13, mv(&[(p13, -1), (p12, 1)]));
    push(&mut k.k23, l24, mv(&[(p24, -1), (p34, 1)]));
    push(&mut k.k23, l34, mv(&[(p34, -1), (p24, 1)]));

    push(&mut k.k34, l3, mv(&[(s3, -1), (s4, 1)]));
    push(&mut k.k34, l4, mv(&[(s4, -1), (s3, 1)]));
    push(&mut k.k34, l13, mv(&[(p13, -1), (p14, 1)]));
    push(&mut k.k34, l14, mv(&[(p14, -1), (p13, 1)]));
    push(&mut k.k34, l23, mv(&[(p23, -1), (p24, 1)]));
    push(&mut k.k34, l24, mv(&[(p24, -1), (p23, 1)]));

    push(&mut k.k13, l1, mv(&[(s1, -1), (s3, 1)]));
    push(&mut k.k13, l3, mv(&[(s3, -1), (s1, 1)]));
    push(&mut k.k13, -l12, mv(&[(p12, -1), (p23, 1)]));
    push(&mut k.k13, l14, mv(&[(p14, -1), (p34, 1)]));
    push(&mut k.k13, l23, mv(&[(p23, -1), (p12, 1)]));
    push(&mut k.k13, -l34, mv(&[(p34, -1), (p14, 1)]));

    push(&mut k.k24, l2, mv(&[(s2, -1), (s4, 1)]));
    push(&mut k.k24, -l4, mv(&[(s4, -1), (s2, 1)]));
    push(&mut k.k24, l12, mv(&[(p12, -1), (p14, 1)]));
    push(&mut k.k24, -l14, mv(&[(p14, -1), (p12, 1)]));
    push(&mut k.k24, -l23, mv(&[(p23, -1), (p34, 1)]));
    push(&mut k.k24, l34, mv(&[(p34, -1), (p23, 1)]));

    push(&mut k.k14, -l1, mv(&[(s1, -1), (s4, 1)]));
    push(&mut k.k14, -l4, mv(&[(s4, -1), (s1, 1)]));
    push(&mut k.k14, l12, mv(&[(p12, -1), (p24, 1)]));
    push(&mut k.k14, l13, mv(&[(p13, -1), (p34, 1)]));
    push(&mut k.k14, l24, mv(&[(p24, -1), (p12, 1)]));
    push(&mut k.k14, l34, mv(&[(p34, -1), (p13, 1)]));

    let t = &mut k.k12_34;
    push(t, l1 * l3, mv(&[(s1, -1), (s3, -1), (s2, 1), (s4, 1)]));
    push(t, l1 * l4, mv(&[(s1, -1), (s4, -1), (s2, 1), (s3, 1)]));
    push(t, l2 * l3, mv(&[(s2, -1), (s3, -1), (s1, 1), (s4, 1)]));
    push(t, l2 * l4, mv(&[(s2, -1), (s4, -1), (s1, 1), (s3, 1)]));
    // single-index times pair-index cross terms
    for (li, from, to) in [(l1, s1, s2), (l2, s2, s1)] {
        push(t, li * l13, mv(&[(from, -1), (to, 1), (p13, -1), (p14, 1)]));
        push(t, li * l14, mv(&[(from, -1), (to, 1), (p14, -1), (p13, 1)]));
        push(t, li * l23, mv(&[(from, -1), (to, 1), (p23, -1), (p24, 1)]));
        push(t, li * l24, mv(&[(from, -1), (to, 1), (p24, -1), (p23, 1)]));
    }
    for (li, from, to) in [(l3, s3, s4), (l4, s4, s3)] {
        push(t, li * l13, mv(&[(from, -1), (to, 1), (p13, -1), (p23, 1)]));
        push(t, li * l14, mv(&[(from, -1), (to, 1), (p14, -1), (p24, 1)]));
        push(t, li * l23, mv(&[(from, -1), (to, 1), (p23, -1), (p13, 1)]));
        push(t, li * l24, mv(&[(from, -1), (to, 1), (p24, -1), (p14, 1)]));
    }
    push(t, l13 * (l14 + l23 + 1), mv(&[(p13, -1), (p24, 1)]));
    push(t, l24 * (l14 + l23 + 1), mv(&[(p24, -1), (p13, 1)]));
    push(t, l14 * (l13 + l24 + 1), mv(&[(p14, -1), (p23, 1)]));
    push(t, l23 * (l13 + l24 + 1), mv(&[(p23, -1), (p14, 1)]));
    push(t, l13 * l24, mv(&[(p13, -1), (p24, -1), (p14, 2)]));
    push(t, l13 * l24, mv(&[(p13, -1), (p24, -1), (p23, 2)]));
    push(t, l14 * l23, mv(&[(p14, -1), (p23, -1), (p13, 2)]));
    push(t, l14 * l23, mv(&[(p14, -1), (p23, -1), (p24, 2)]));
    push(t, l13 * (l13 - 1), mv(&[(p13, -2), (p14, 1), (p23, 1)]));
    push(t, l24 * (l24 - 1), mv(&[(p24, -2), (p14, 1), (p23, 1)]));
    push(t, l14 * (l14 - 1), mv(&[(p14, -2), (p13, 1), (p24, 1)]));
    push(t, l23 * (l23 - 1), mv(&[(p23, -2), (p13, 1), (p24, 1)]));

    k
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapelliEq {
    C2,
    C3,
    C4,
}

fn identity_target(l: &GeneratorIndex) -> Target {
    vec![(1.0, *l)]
}

/// Assembles one Capelli equation as a Mellin operator on φ̂_l, with the
/// eigenvalues (γ1..γ4) supplied explicitly (so perturbed negative
/// controls use the same code path).
pub fn capelli_operator(
    sigma: &InducingDatum,
    eq: CapelliEq,
    l: &GeneratorIndex,
    gamma: [C64; 4],
) -> MellinOperator {
    let (_, k2i) = sigma.kappa12();
    let k2 = C64::new(k2i as f64, 0.0);
    let g1 = gamma[0];
    let kops = build_k_operators(l);
    let me = identity_target(l);
    let one = C64::new(1.0, 0.0);

    let mut terms: Vec<OpTerm> = Vec::new();
    // term(scalar, ∂-affine factors, shift, target); 2π power = |shift|
    let mut term = |scalar: C64, factors: &[DAffine], shift: [i32; 3], target: &Target| {
        if target.is_empty() {
            return;
        }
        terms.push(OpTerm {
            scalar,
            factors: factors.iter().map(|f| f.under_shift(shift)).collect(),
            shift,
            two_pi_power: shift[0] + shift[1] + shift[2],
            target: target.clone(),
        });
    };

    let d1 = d0().with(1, 1.0);
    let d2 = d0().with(2, 1.0);
    let d3k = dc(-k2).with(3, 1.0); // ∂3 - κ2

    match eq {
        CapelliEq::C2 => {
            term(-one, &[d1, d1], [0, 0, 0], &me);
            term(-one, &[d2, d2], [0, 0, 0], &me);
            term(-one, &[d3k, d3k], [0, 0, 0], &me);
            term(one, &[d1, d2], [0, 0, 0], &me);
            term(one, &[d2, d3k], [0, 0, 0], &me);
            term(g1, &[d3k], [0, 0, 0], &me);
            term(one, &[], [2, 0, 0], &me);
            term(one, &[], [0, 2, 0], &me);
            term(one, &[], [0, 0, 2], &me);
            term(-gamma[1], &[], [0, 0, 0], &me);
            term(-one, &[], [1, 0, 0], &kops.k12);
            term(-one, &[], [0, 1, 0], &kops.k23);
            term(-one, &[], [0, 0, 1], &kops.k34);
        }
        CapelliEq::C3 => {
            // Δ3
            let f1 = dc(k2).with(1, 1.0).with(3, -1.0); // ∂1 - ∂3 + κ2
            let f2 = dc(-k2).with(1, 1.0).with(2, -1.0).with(3, 1.0); // ∂1 - ∂2 + ∂3 - κ2
            term(one, &[d2, f1, f2], [0, 0, 0], &me);
            term(-g1, &[d1, d1], [0, 0, 0], &me);
            term(-g1, &[d2, d2], [0, 0, 0], &me);
            term(g1, &[d1, d2], [0, 0, 0], &me);
            term(g1, &[d2, d0().with(3, 1.0)], [0, 0, 0], &me);
            term(-g1 * k2, &[d2], [0, 0, 0], &me);
            term(one, &[dc(g1).with(2, -1.0)], [2, 0, 0], &me);
            term(one, &[dc(g1 + k2).with(1, 1.0).with(3, -1.0)], [0, 2, 0], &me);
            term(one, &[d2], [0, 0, 2], &me);
            term(-gamma[2], &[], [0, 0, 0], &me);
            // 𝔎-coupled parts
            term(one, &[dc(-g1).with(2, 1.0)], [1, 0, 0], &kops.k12);
            term(
                one,
                &[dc(-g1 - k2).with(1, -1.0).with(3, 1.0)],
                [0, 1, 0],
                &kops.k23,
            );
            term(-one, &[d2], [0, 0, 1], &kops.k34);
            term(one, &[], [1, 1, 0], &kops.k13);
            term(one, &[], [0, 1, 1], &kops.k24);
        }
        CapelliEq::C4 => {
            let f3 = dc(-k2).with(3, 1.0).with(2, -1.0); // ∂3 - ∂2 - κ2
            let f4 = dc(g1 + k2).with(3, -1.0); // -∂3 + γ1 + κ2
            let f5 = d0().with(2, 1.0).with(1, -1.0); // ∂2 - ∂1
            // Δ4
            term(one, &[d1, f5, f3, f4], [0, 0, 0], &me);
            term(one, &[f3, f4], [2, 0, 0], &me);
            term(one, &[d1, f4], [0, 2, 0], &me);
            term(one, &[d1, f5], [0, 0, 2], &me);
            term(one, &[], [2, 0, 2], &me);
            term(-gamma[3], &[], [0, 0, 0], &me);
            // 𝔎-coupled parts
            let g2 = dc(-k2).with(2, -1.0).with(3, 1.0); // -∂2 + ∂3 - κ2
            term(-one, &[g2, f4], [1, 0, 0], &kops.k12);
            term(-one, &[], [1, 0, 2], &kops.k12);
            term(-one, &[d1, f4], [0, 1, 0], &kops.k23);
            let g3 = d0().with(1, -1.0).with(2, 1.0); // -∂1 + ∂2
            term(-one, &[d1, g3], [0, 0, 1], &kops.k34);
            term(-one, &[], [2, 0, 1], &kops.k34);
            term(one, &[f4], [1, 1, 0], &kops.k13);
            term(one, &[d1], [0, 1, 1], &kops.k24);
            term(one, &[], [1, 1, 1], &kops.k14);
            term(one, &[], [1, 0, 1], &kops.k12_34);
        }
    }
    MellinOperator { terms }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsEq {
    Ds1,
    Ds2,
    Ds3,
    Ds4,
    Ds12,
    Ds13,
    Ds14,
    Ds23,
    Ds24,
    Ds34,
}

impl DsEq {
    pub const FIRST_GROUP: [DsEq; 4] = [DsEq::Ds1, DsEq::Ds2, DsEq::Ds3, DsEq::Ds4];
    pub const SECOND_GROUP: [DsEq; 6] =
        [DsEq::Ds12, DsEq::Ds13, DsEq::Ds14, DsEq::Ds23, DsEq::Ds24, DsEq::Ds34];

    pub fn name(&self) -> &'static str {
        match self {
            DsEq::Ds1 => "DS1",
            DsEq::Ds2 => "DS2",
            DsEq::Ds3 => "DS3",
            DsEq::Ds4 => "DS4",
            DsEq::Ds12 => "DS12",
            DsEq::Ds13 => "DS13",
            DsEq::Ds14 => "DS14",
            DsEq::Ds23 => "DS23",
            DsEq::Ds24 => "DS24",
            DsEq::Ds34 => "DS34",
        }
    }
}

/// Assembles one first-order equation for the base index `l`:
/// DS1..DS4 need l ∈ S_{(κ1-1,κ2,δ3)} and κ1 > κ2; DS12..DS34 need
/// l ∈ S_{(κ1-1,κ2-1,0)} and κ2 >= 1.
pub fn ds_operator(sigma: &InducingDatum, eq: DsEq, l: &GeneratorIndex) -> Result<MellinOperator> {
    let (k1i, k2i) = sigma.kappa12();
    let first = matches!(eq, DsEq::Ds1 | DsEq::Ds2 | DsEq::Ds3 | DsEq::Ds4);
    if first && k1i <= k2i {
        return Err(KernelError::UnsupportedCase(
            "DS1-DS4 require κ1 > κ2".into(),
        ));
    }
    if !first && k2i < 1 {
        return Err(KernelError::UnsupportedCase("DS12-DS34 require κ2 >= 1".into()));
    }
    let k1 = k1i as f64;
    let k2 = k2i as f64;
    let g1 = sigma.gamma1();
    let nu1p = sigma.nu1_prime();
    let nusum = sigma.nu[0] + if first { C64::new(0.0, 0.0) } else { sigma.nu[1] };
    let one = C64::new(1.0, 0.0);
    let (l1, l2, l3, l4) = (
        l.single(1) as f64,
        l.single(2) as f64,
        l.single(3) as f64,
        l.single(4) as f64,
    );
    let (l13, l14, l23, l24) = (
        l.pair(1, 3) as f64,
        l.pair(1, 4) as f64,
        l.pair(2, 3) as f64,
        l.pair(2, 4) as f64,
    );
    let (s1, s2, s3, s4) = (0usize, 1usize, 2usize, 3usize);
    let (p12, p13, p14, p23, p24, p34) = (4usize, 5usize, 6usize, 7usize, 8usize, 9usize);
    let mv = |deltas: &[(usize, i16)]| l.try_shift(deltas);
    let single = |idx: Option<GeneratorIndex>| -> Target {
        idx.map(|i| vec![(1.0, i)]).unwrap_or_default()
    };

    let mut terms: Vec<OpTerm> = Vec::new();
    let mut term = |scalar: C64, factors: &[DAffine], shift: [i32; 3], target: Target| {
        if target.is_empty() || scalar.norm() == 0.0 {
            return;
        }
        terms.push(OpTerm {
            scalar,
            factors: factors.iter().map(|f| f.under_shift(shift)).collect(),
            shift,
            two_pi_power: shift[0] + shift[1] + shift[2],
            target,
        });
    };

    match eq {
        DsEq::Ds1 => {
            let a = dc(-nu1p - (k1 - 1.0) / 2.0).with(1, 1.0);
            term(one, &[a], [0, 0, 0], single(mv(&[(s1, 1)])));
            term(one, &[], [1, 0, 0], single(mv(&[(s2, 1)])));
        }
        DsEq::Ds2 => {
            let a = dc(-nu1p - (k1 - 1.0) / 2.0 + l1).with(1, -1.0).with(2, 1.0);
            term(one, &[a], [0, 0, 0], single(mv(&[(s2, 1)])));
            term(-one, &[], [1, 0, 0], single(mv(&[(s1, 1)])));
            term(one, &[], [0, 1, 0], single(mv(&[(s3, 1)])));
            term(l2 * one, &[], [0, 0, 0], single(mv(&[(s2, -1), (s1, 2)])));
            term(l13 * one, &[], [0, 0, 0], single(mv(&[(s1, 1), (p13, -1), (p23, 1)])));
            term(l14 * one, &[], [0, 0, 0], single(mv(&[(s1, 1), (p14, -1), (p24, 1)])));
            term(l23 * one, &[], [0, 0, 0], single(mv(&[(s1, 1), (p23, -1), (p13, 1)])));
            term(l24 * one, &[], [0, 0, 0], single(mv(&[(s1, 1), (p24, -1), (p14, 1)])));
        }
        DsEq::Ds3 => {
            let a = dc(-nu1p + (k1 - 1.0) / 2.0 - k2 - l4).with(2, -1.0).with(3, 1.0);
            term(one, &[a], [0, 0, 0], single(mv(&[(s3, 1)])));
            term(-one, &[], [0, 1, 0], single(mv(&[(s2, 1)])));
            term(one, &[], [0, 0, 1], single(mv(&[(s4, 1)])));
            term(-l3 * one, &[], [0, 0, 0], single(mv(&[(s3, -1), (s4, 2)])));
            term(-l13 * one, &[], [0, 0, 0], single(mv(&[(s4, 1), (p13, -1), (p14, 1)])));
            term(-l14 * one, &[], [0, 0, 0], single(mv(&[(s4, 1), (p14, -1), (p13, 1)])));
            term(-l23 * one, &[], [0, 0, 0], single(mv(&[(s4, 1), (p23, -1), (p24, 1)])));
            term(-l24 * one, &[], [0, 0, 0], single(mv(&[(s4, 1), (p24, -1), (p23, 1)])));
        }
        DsEq::Ds4 => {
            let a = dc(g1 - nu1p + (k1 - 1.0) / 2.0 + k2).with(3, -1.0);
            term(one, &[a], [0, 0, 0], single(mv(&[(s4, 1)])));
            term(-one, &[], [0, 0, 1], single(mv(&[(s3, 1)])));
        }
        DsEq::Ds12 => {
            let a = dc(-nusum - (k1 + k2) / 2.0 + 1.0).with(2, 1.0);
            term(one, &[a], [0, 0, 0], single(mv(&[(p12, 1)])));
            term(one, &[], [0, 1, 0], single(mv(&[(p13, 1)])));
        }
        DsEq::Ds13 => {
            let a = dc(-nusum - (k1 + k2) / 2.0 - l13 - l14 - l23 - l24)
                .with(1, 1.0)
                .with(2, -1.0)
                .with(3, 1.0);
            term(one, &[a], [0, 0, 0], single(mv(&[(p13, 1)])));
            term(one, &[], [1, 0, 0], single(mv(&[(p23, 1)])));
            term(-one, &[], [0, 1, 0], single(mv(&[(p12, 1)])));
            term(one, &[], [0, 0, 1], single(mv(&[(p14, 1)])));
            term(l2 * one, &[], [0, 0, 0], single(mv(&[(s2, -1), (s3, 1), (p12, 1)])));
            term(l3 * one, &[], [0, 0, 0], single(mv(&[(s3, -1), (s2, 1), (p12, 1)])));
            term(l13 * one, &[], [0, 0, 0], single(mv(&[(p13, -1), (p12, 2)])));
            term(l24 * one, &[], [0, 0, 0], single(mv(&[(p24, -1), (p12, 1), (p34, 1)])));
        }
        DsEq::Ds14 => {
            let a = dc(g1 - nusum - (k1 - 3.0 * k2) / 2.0 + l4).with(1, 1.0).with(3, -1.0);
            term(one, &[a], [0, 0, 0], single(mv(&[(p14, 1)])));
            term(one, &[], [1, 0, 0], single(mv(&[(p24, 1)])));
            term(-one, &[], [0, 0, 1], single(mv(&[(p13, 1)])));
            term(l2 * one, &[], [0, 0, 0], single(mv(&[(s2, -1), (s4, 1), (p12, 1)])));
            term(l3 * one, &[], [0, 0, 0], single(mv(&[(s3, -1), (s4, 1), (p13, 1)])));
        }
        DsEq::Ds23 => {
            let a = dc(-nusum + (k1 - 3.0 * k2) / 2.0 - l4).with(1, -1.0).with(3, 1.0);
            term(one, &[a], [0, 0, 0], single(mv(&[(p23, 1)])));
            term(-one, &[], [1, 0, 0], single(mv(&[(p13, 1)])));
            term(one, &[], [0, 0, 1], single(mv(&[(p24, 1)])));
            term(-l2 * one, &[], [0, 0, 0], single(mv(&[(s2, -1), (s4, 1), (p34, 1)])));
            term(-l3 * one, &[], [0, 0, 0], single(mv(&[(s3, -1), (s4, 1), (p24, 1)])));
        }
        DsEq::Ds24 => {
            let a = dc(g1 - nusum + (k1 + k2) / 2.0 + l13 + l14 + l23 + l24)
                .with(1, -1.0)
                .with(2, 1.0)
                .with(3, -1.0);
            term(one, &[a], [0, 0, 0], single(mv(&[(p24, 1)])));
            term(-one, &[], [1, 0, 0], single(mv(&[(p14, 1)])));
            term(one, &[], [0, 1, 0], single(mv(&[(p34, 1)])));
            term(-one, &[], [0, 0, 1], single(mv(&[(p23, 1)])));
            term(-l2 * one, &[], [0, 0, 0], single(mv(&[(s2, -1), (s3, 1), (p34, 1)])));
            term(-l3 * one, &[], [0, 0, 0], single(mv(&[(s3, -1), (s2, 1), (p34, 1)])));
            term(-l13 * one, &[], [0, 0, 0], single(mv(&[(p13, -1), (p12, 1), (p34, 1)])));
            term(-l24 * one, &[], [0, 0, 0], single(mv(&[(p24, -1), (p34, 2)])));
        }
        DsEq::Ds34 => {
            let a = dc(g1 - nusum + (k1 + k2) / 2.0 - 1.0).with(2, -1.0);
            term(one, &[a], [0, 0, 0], single(mv(&[(p34, 1)])));
            term(-one, &[], [0, 1, 0], single(mv(&[(p24, 1)])));
        }
    }
    Ok(MellinOperator { terms })
}

/// Kernel-value cache for one (σ, s) evaluation batch.
pub type KernelCache = HashMap<(GeneratorIndex, [i32; 3]), C64>;

/// Applies a Mellin operator at s: Σ_terms scalar Π factors(s) (2π)^p
/// Σ_target coeff · V̂_{l'}(s + shift). Returns the sum together with the
/// largest single contribution (the natural residual scale).
pub fn apply_mellin_operator(
    op: &MellinOperator,
    sigma: &InducingDatum,
    s: [C64; 3],
    cfg: &RunConfig,
    cache: &mut KernelCache,
) -> Result<(C64, f64)> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let lam = sigma.minimal_k_type();
    let mut sum = C64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    for t in &op.terms {
        let mut coeff = t.scalar * two_pi.powi(t.two_pi_power);
        for f in &t.factors {
            coeff *= f.eval(s);
        }
        if coeff.norm() == 0.0 {
            continue;
        }
        let shifted = [
            s[0] + t.shift[0] as f64,
            s[1] + t.shift[1] as f64,
            s[2] + t.shift[2] as f64,
        ];
        for (c, lp) in &t.target {
            if !lp.in_s_lambda(&lam) {
                continue;
            }
            let key = (*lp, t.shift);
            let v = match cache.get(&key) {
                Some(v) => *v,
                None => {
                    let v = kernel_hat(sigma, lp, shifted, cfg)?.value;
                    cache.insert(key, v);
                    v
                }
            };
            let contribution = coeff * *c * v;
            scale = scale.max(contribution.norm());
            sum += contribution;
        }
    }
    Ok((sum, scale))
}

/// Checks the three Capelli equations for (σ, l) at the given s-points.
pub fn check_capelli(
    sigma: &InducingDatum,
    l: &GeneratorIndex,
    s_points: &[[C64; 3]],
    tol: f64,
    cfg: &RunConfig,
) -> Result<IdentityReport> {
    check_capelli_with_gamma(sigma, l, s_points, tol, cfg, sigma.capelli_eigenvalues())
}

/// Same as [`check_capelli`] with explicit eigenvalues, e.g. perturbed
/// ones as a negative control.
pub fn check_capelli_with_gamma(
    sigma: &InducingDatum,
    l: &GeneratorIndex,
    s_points: &[[C64; 3]],
    tol: f64,
    cfg: &RunConfig,
    gamma: [C64; 4],
) -> Result<IdentityReport> {
    let mut report = IdentityReport::new(format!("capelli l={:?}", l.0), tol);
    for eq in [CapelliEq::C2, CapelliEq::C3, CapelliEq::C4] {
        let op = capelli_operator(sigma, eq, l, gamma);
        for s in s_points {
            let mut cache = KernelCache::new();
            let (residual, scale) = apply_mellin_operator(&op, sigma, *s, cfg, &mut cache)?;
            let rel = residual.norm() / scale.max(1e-300);
            report.record(
                vec![("s1".into(), s[0]), ("s2".into(), s[1]), ("s3".into(), s[2])],
                residual,
                C64::new(0.0, 0.0),
                rel,
            );
        }
    }
    Ok(report)
}

/// Checks one first-order equation for the base index `l` at the given
/// s-points; returns the per-point residual report.
pub fn check_dirac_schmid(
    sigma: &InducingDatum,
    eq: DsEq,
    l: &GeneratorIndex,
    s_points: &[[C64; 3]],
    tol: f64,
    cfg: &RunConfig,
) -> Result<IdentityReport> {
    let op = ds_operator(sigma, eq, l)?;
    let mut report = IdentityReport::new(format!("{} l={:?}", eq.name(), l.0), tol);
    for s in s_points {
        let mut cache = KernelCache::new();
        let (residual, scale) = apply_mellin_operator(&op, sigma, *s, cfg, &mut cache)?;
        let rel = residual.norm() / scale.max(1e-300);
        report.record(
            vec![("s1".into(), s[0]), ("s2".into(), s[1]), ("s3".into(), s[2])],
            residual,
            C64::new(0.0, 0.0),
            rel,
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma_expr::SampleRng;
    use crate::rep::HighestWeight;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    fn generic_nu4(rng: &mut SampleRng) -> [C64; 4] {
        loop {
            let nu: [C64; 4] =
                std::array::from_fn(|_| c(rng.uniform(-0.2, 0.2), rng.uniform(-0.8, 0.8)));
            let sigma = InducingDatum::p1111(nu, [0, 0, 0, 0]).unwrap();
            if sigma.omega0_guard() {
                return nu;
            }
        }
    }

    #[test]
    fn zero_operator_applies_to_zero() {
        let sigma = InducingDatum::p1111(
            [c(0.1, 0.0), c(-0.2, 0.3), c(0.05, -0.4), c(0.0, 0.6)],
            [0, 0, 0, 0],
        )
        .unwrap();
        let op = MellinOperator::zero();
        let mut cache = KernelCache::new();
        let (v, scale) = apply_mellin_operator(
            &op,
            &sigma,
            [c(2.0, 0.0), c(2.4, 0.0), c(2.8, 0.0)],
            &cfg(),
            &mut cache,
        )
        .unwrap();
        assert_eq!(v, c(0.0, 0.0));
        assert_eq!(scale, 0.0);
    }

    #[test]
    fn dictionary_shift_and_euler() {
        // (2π y1) on the identity target is 2π · V̂(s1+1, s2, s3);
        // ∂1 is -s1 · V̂(s)
        let mut rng = SampleRng::new(3);
        let nu = generic_nu4(&mut rng);
        let sigma = InducingDatum::p1111(nu, [0, 0, 0, 0]).unwrap();
        let l = GeneratorIndex::ZERO;
        let s = [c(2.1, 0.2), c(2.5, -0.3), c(2.9, 0.1)];
        let two_pi = 2.0 * std::f64::consts::PI;

        let shift_op = MellinOperator {
            terms: vec![OpTerm {
                scalar: c(1.0, 0.0),
                factors: vec![],
                shift: [1, 0, 0],
                two_pi_power: 1,
                target: vec![(1.0, l)],
            }],
        };
        let mut cache = KernelCache::new();
        let (v, _) = apply_mellin_operator(&shift_op, &sigma, s, &cfg(), &mut cache).unwrap();
        let direct = kernel_hat(&sigma, &l, [s[0] + 1.0, s[1], s[2]], &cfg()).unwrap();
        assert!((v - two_pi * direct.value).norm() < 1e-12 * v.norm());

        let euler_op = MellinOperator {
            terms: vec![OpTerm {
                scalar: c(1.0, 0.0),
                factors: vec![SAffine { cst: c(0.0, 0.0), s: [-1.0, 0.0, 0.0] }],
                shift: [0, 0, 0],
                two_pi_power: 0,
                target: vec![(1.0, l)],
            }],
        };
        let mut cache = KernelCache::new();
        let (v, _) = apply_mellin_operator(&euler_op, &sigma, s, &cfg(), &mut cache).unwrap();
        let direct = kernel_hat(&sigma, &l, s, &cfg()).unwrap();
        assert!((v + s[0] * direct.value).norm() < 1e-12 * v.norm());
    }

    #[test]
    fn k_operators_collapse_on_edge_index() {
        // l = (κ1-κ2) e4 + l12 e12 + l34 e34 kills 𝔎12 and 𝔎12,34
        let mut l = GeneratorIndex::ZERO;
        l = l.add(&GeneratorIndex::e(4));
        l = l.add(&GeneratorIndex::e_pair(1, 2));
        l = l.add(&GeneratorIndex::e_pair(3, 4));
        let k = build_k_operators(&l);
        assert!(k.k12.is_empty());
        assert!(k.k12_34.is_empty());
    }

    #[test]
    fn k12_single_term() {
        let l = GeneratorIndex::e(1).add(&GeneratorIndex::e(1));
        let k = build_k_operators(&l);
        assert_eq!(k.k12.len(), 1);
        assert_eq!(k.k12[0].0, 2.0);
        assert_eq!(k.k12[0].1, GeneratorIndex::e(1).add(&GeneratorIndex::e(2)));
    }

    #[test]
    fn k12_34_coefficient_sum() {
        // l = e13 + e24 in λ=(2,2,0): coefficients must sum to 4
        let l = GeneratorIndex::e_pair(1, 3).add(&GeneratorIndex::e_pair(2, 4));
        let k = build_k_operators(&l);
        let total: f64 = k.k12_34.iter().map(|(c, _)| *c).sum();
        assert_eq!(total, 4.0);
        assert_eq!(k.k12_34.len(), 4);
    }

    #[test]
    fn capelli_class_one() {
        let mut rng = SampleRng::new(17);
        let nu = generic_nu4(&mut rng);
        let sigma = InducingDatum::p1111(nu, [0, 0, 0, 0]).unwrap();
        let points = [
            [c(2.0, 0.2), c(2.4, -0.3), c(2.8, 0.4)],
            [c(2.3, -0.1), c(2.1, 0.5), c(3.0, -0.2)],
            [c(1.9, 0.3), c(2.7, 0.1), c(2.5, 0.25)],
        ];
        let report = check_capelli(&sigma, &GeneratorIndex::ZERO, &points, 1e-6, &cfg()).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn capelli_p22_32_sample_index() {
        let sigma = InducingDatum::p22([c(0.13, 0.21), c(-0.11, 0.37)], [3, 2]).unwrap();
        let l = GeneratorIndex::e(4)
            .add(&GeneratorIndex::e_pair(2, 4))
            .add(&GeneratorIndex::e_pair(2, 4));
        let points = [[c(2.1, 0.2), c(2.5, -0.1), c(2.9, 0.3)]];
        let report = check_capelli(&sigma, &l, &points, 1e-6, &cfg()).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn capelli_negative_control() {
        let mut rng = SampleRng::new(29);
        let nu = generic_nu4(&mut rng);
        let sigma = InducingDatum::p1111(nu, [0, 0, 0, 0]).unwrap();
        let mut gamma = sigma.capelli_eigenvalues();
        gamma[1] += 0.1;
        let points = [[c(2.0, 0.2), c(2.4, -0.3), c(2.8, 0.4)]];
        let report =
            check_capelli_with_gamma(&sigma, &GeneratorIndex::ZERO, &points, 1e-6, &cfg(), gamma)
                .unwrap();
        assert!(!report.pass);
        assert!(report.max_rel_err > 1e-2, "{report:?}");
    }

    #[test]
    fn ds1_p211_kappa2() {
        let sigma = InducingDatum::p211([c(0.09, 0.31), c(-0.17, 0.23), c(0.05, -0.41)], 2, [0, 0])
            .unwrap();
        let points = [[c(2.2, 0.1), c(2.6, -0.2), c(2.9, 0.3)]];
        let report =
            check_dirac_schmid(&sigma, DsEq::Ds1, &GeneratorIndex::ZERO, &points, 1e-8, &cfg())
                .unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn ds34_p22_32() {
        let sigma = InducingDatum::p22([c(0.07, 0.19), c(-0.13, 0.29)], [3, 2]).unwrap();
        // base l in S_{(2,1,0)}
        let l = GeneratorIndex::e(4).add(&GeneratorIndex::e_pair(2, 4));
        let points = [[c(2.1, -0.1), c(2.4, 0.2), c(2.8, 0.1)]];
        let report = check_dirac_schmid(&sigma, DsEq::Ds34, &l, &points, 1e-8, &cfg()).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn ds_first_group_requires_unequal_kappa() {
        let sigma = InducingDatum::p22([c(0.1, 0.0), c(-0.1, 0.0)], [2, 2]).unwrap();
        let err = ds_operator(&sigma, DsEq::Ds1, &GeneratorIndex::ZERO).unwrap_err();
        assert!(matches!(err, KernelError::UnsupportedCase(_)));
    }

    #[test]
    fn k_targets_stay_in_s_lambda() {
        let lam = HighestWeight::new(3, 2, 0).unwrap();
        for l in crate::rep::enumerate_s(&lam).unwrap() {
            let k = build_k_operators(&l);
            for t in [&k.k12, &k.k23, &k.k34, &k.k13, &k.k24, &k.k14, &k.k12_34] {
                for (_, lp) in t {
                    assert!(lp.in_s_lambda(&lam), "{l:?} -> {lp:?}");
                }
            }
        }
    }
}
