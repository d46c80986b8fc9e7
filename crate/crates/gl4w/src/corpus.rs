//! The built-in identity corpus: shift identities between single-contour
//! kernels (the E1/E3 family and the three-term recursion), the GL(3)
//! compatibility relations, and the duplication-formula rewrites.
//!
//! Records are data (see [`crate::gamma_expr::IdentityRecord`]); the same
//! content ships as `data/identities.json` so new identities can be added
//! and replayed without recompiling.

use crate::gamma_expr::{
    Affine, ExprKind, GammaFactor, GammaKind, GammaProduct, IdentityCorpus, IdentityRecord,
    IdentityTerm, MellinKernel, Poly, PolyProd, Rat, SampleRange,
};
use std::collections::BTreeMap;

pub const CORPUS_SCHEMA_VERSION: u32 = 1;

/// The corpus as compiled-in data.
pub fn builtin_corpus() -> IdentityCorpus {
    IdentityCorpus {
        schema_version: CORPUS_SCHEMA_VERSION,
        records: vec![
            um_recursion(1),
            um_recursion(2),
            e_identity_12vs23(),
            e_identity_34vs23(),
            e_identity_12vs14(),
            e_identity_34vs14(),
            e_identity_12vs34(),
            e_identity_34vs12(),
            gl3_compatibility_q2(),
            gl3_compatibility_q3(),
            duplication_rewrite_two_one(),
            duplication_rewrite_two_two(),
        ],
    }
}

/// The shipped corpus file contents.
pub fn builtin_corpus_json() -> String {
    builtin_corpus().to_json()
}

fn v(name: &str) -> Affine {
    Affine::var(name)
}

fn lcm(terms: &[(&str, i64)], cst: Rat) -> Affine {
    let mut a = Affine::constant(cst);
    for &(name, c) in terms {
        a = a.plus(name, Rat::int(c));
    }
    a
}

fn fr(arg: Affine) -> GammaFactor {
    GammaFactor { kind: GammaKind::R, arg, exp: 1 }
}

fn fc(arg: Affine) -> GammaFactor {
    GammaFactor { kind: GammaKind::C, arg, exp: 1 }
}

/// Substitution rule μ_i ↦ (variable, constant offset).
type MuMap<'a> = [(&'a str, i64); 4];

/// Rewrites every factor argument through the μ-substitution; s and q
/// variables pass through unchanged.
fn subst_affine(a: &Affine, map: &MuMap) -> Affine {
    let mut out = Affine::constant(a.cst);
    for (name, coeff) in &a.coeffs {
        match name.as_str() {
            "mu1" | "mu2" | "mu3" | "mu4" => {
                let slot = name[2..].parse::<usize>().unwrap() - 1;
                let (target, offset) = map[slot];
                out = out.plus(target, *coeff);
                // coeff · offset joins the constant
                let add = Rat(coeff.0 * offset * 1, coeff.1);
                out = out.shift(add);
            }
            other => {
                out = out.plus(other, *coeff);
            }
        }
    }
    out
}

fn subst_kernel(k: &MellinKernel, map: &MuMap) -> MellinKernel {
    let conv = |fs: &Vec<GammaFactor>| -> Vec<GammaFactor> {
        fs.iter()
            .map(|f| GammaFactor { kind: f.kind, arg: subst_affine(&f.arg, map), exp: f.exp })
            .collect()
    };
    MellinKernel {
        outer: GammaProduct {
            factors: conv(&k.outer.factors),
            two_pi_power: k.outer.two_pi_power,
        },
        numerator: conv(&k.numerator),
        denominator: conv(&k.denominator),
    }
}

const MU_ID: MuMap = [("mu1", 0), ("mu2", 0), ("mu3", 0), ("mu4", 0)];
/// μ' = (μ3+1, μ4+1, μ1, μ2)
const MU_PRIME: MuMap = [("mu3", 1), ("mu4", 1), ("mu1", 0), ("mu2", 0)];
/// μ'' = (μ1+1, μ2+1, μ3, μ4)
const MU_DPRIME: MuMap = [("mu1", 1), ("mu2", 1), ("mu3", 0), ("mu4", 0)];

/// U_m over (s1,s2,s3; μ-substituted arguments).
fn u_m(m: i64, map: &MuMap) -> MellinKernel {
    subst_kernel(&crate::kernels::u_kernel_symbolic(m), map)
}

/// The companion kernel U' of the E-identities.
fn u_prime(map: &MuMap) -> MellinKernel {
    let base = MellinKernel {
        outer: GammaProduct {
            factors: vec![
                fr(lcm(&[("s1", 1), ("mu1", 1)], Rat::ZERO)),
                fr(lcm(&[("s1", 1), ("mu2", 1)], Rat::ZERO)),
                fr(lcm(&[("s2", 1), ("mu1", 1), ("mu2", 1)], Rat::int(-1))),
                fr(lcm(&[("s2", 1), ("mu3", 1), ("mu4", 1)], Rat::int(1))),
                fr(lcm(&[("s3", 1), ("mu1", 1), ("mu3", 1), ("mu4", 1)], Rat::int(1))),
                fr(lcm(&[("s3", 1), ("mu2", 1), ("mu3", 1), ("mu4", 1)], Rat::int(1))),
            ],
            two_pi_power: 0,
        },
        numerator: vec![
            fr(lcm(&[("s1", 1), ("q", -1)], Rat::ZERO)),
            fr(lcm(&[("s2", 1), ("q", -1), ("mu1", 1)], Rat::int(-1))),
            fr(lcm(&[("s2", 1), ("q", -1), ("mu2", 1)], Rat::int(-1))),
            fr(lcm(&[("s3", 1), ("q", -1), ("mu1", 1), ("mu2", 1)], Rat::int(-1))),
            fr(lcm(&[("q", 1), ("mu3", 1)], Rat::ZERO)),
            fr(lcm(&[("q", 1), ("mu4", 1)], Rat::ZERO)),
        ],
        denominator: vec![
            fr(lcm(&[("s1", 1), ("s2", 1), ("q", -1), ("mu1", 1), ("mu2", 1)], Rat::int(-1))),
            fr(lcm(
                &[("s2", 1), ("s3", 1), ("q", -1), ("mu1", 1), ("mu2", 1), ("mu3", 1), ("mu4", 1)],
                Rat::ZERO,
            )),
        ],
    };
    subst_kernel(&base, map)
}

fn term(coeff: Poly, shift: &[(&str, i32)], expr: ExprKind) -> IdentityTerm {
    IdentityTerm {
        coeff,
        shift: shift.iter().map(|(k, s)| (k.to_string(), *s)).collect(),
        expr,
    }
}

fn prod(scalar: Rat, two_pi: i32, factors: Vec<Affine>) -> Poly {
    Poly::product(scalar, two_pi, factors)
}

fn sample_smu() -> BTreeMap<String, SampleRange> {
    let mut m = BTreeMap::new();
    for s in ["s1", "s2", "s3"] {
        m.insert(s.to_string(), SampleRange::s_like());
    }
    for mu in ["mu1", "mu2", "mu3", "mu4"] {
        m.insert(mu.to_string(), SampleRange::nu_like());
    }
    m
}

/// Three-term recursion raising m by one while twisting μ1, μ2.
fn um_recursion(m: i64) -> IdentityRecord {
    let f1 = lcm(&[("s1", 1), ("s2", -1), ("mu1", -1)], Rat::int(m - 1));
    let f2 = lcm(&[("s2", 1), ("s3", -1), ("mu1", -1)], Rat::int(m - 1));
    let f3 = lcm(&[("s3", 1), ("mu2", 1), ("mu3", 1), ("mu4", 1)], Rat::ZERO);
    IdentityRecord {
        name: format!("um-recursion-m{m}"),
        sample: sample_smu(),
        lhs: vec![
            term(
                prod(Rat::ONE, -3, vec![f1.clone(), f2, f3.clone()]),
                &[],
                ExprKind::Kernel(u_m(m - 1, &MU_ID)),
            ),
            term(prod(Rat::ONE, -1, vec![f3]), &[("s2", 2)], ExprKind::Kernel(u_m(m - 1, &MU_ID))),
            term(prod(Rat::ONE, -1, vec![f1]), &[("s3", 2)], ExprKind::Kernel(u_m(m - 1, &MU_ID))),
        ],
        rhs: vec![term(
            Poly::one(),
            &[("s1", 1), ("s2", 1), ("s3", 1)],
            ExprKind::Kernel(u_m(m, &[("mu1", -1), ("mu2", 1), ("mu3", 0), ("mu4", 0)])),
        )],
        tol: 1e-8,
    }
}

/// E1(c1,c2) applied to a kernel:
/// (2π)^{-2} (s1+c1)(s1+c2)·K - K(s1+2). The (2π)^{-2} normalizes the
/// raising factor so that (s+c) Γ_R(s+c) = 2π Γ_R(s+c+2) telescopes
/// cleanly; it is forced by the functional equation.
fn e1(c1: Affine, c2: Affine, kernel: MellinKernel, extra_shift: &[(&str, i32)]) -> Vec<IdentityTerm> {
    let mut sh2 = vec![("s1", 2)];
    sh2.extend_from_slice(extra_shift);
    vec![
        term(
            prod(Rat::ONE, -2, vec![v("s1").merge(c1), v("s1").merge(c2)]),
            extra_shift,
            ExprKind::Kernel(kernel.clone()),
        ),
        term(prod(Rat(-1, 1), 0, vec![]), &sh2, ExprKind::Kernel(kernel)),
    ]
}

/// E3(c1,c2) applied to a kernel:
/// (2π)^{-2} (s3+c1)(s3+c2)·K - K(s3+2); see [`e1`] for the normalization.
fn e3(c1: Affine, c2: Affine, kernel: MellinKernel, extra_shift: &[(&str, i32)]) -> Vec<IdentityTerm> {
    let mut sh2 = vec![("s3", 2)];
    sh2.extend_from_slice(extra_shift);
    vec![
        term(
            prod(Rat::ONE, -2, vec![v("s3").merge(c1), v("s3").merge(c2)]),
            extra_shift,
            ExprKind::Kernel(kernel.clone()),
        ),
        term(prod(Rat(-1, 1), 0, vec![]), &sh2, ExprKind::Kernel(kernel)),
    ]
}

fn e_identity_12vs23() -> IdentityRecord {
    IdentityRecord {
        name: "shift-12vs23".into(),
        sample: sample_smu(),
        lhs: e1(v("mu1"), v("mu2"), u_m(0, &MU_PRIME), &[]),
        rhs: vec![term(
            Poly::one(),
            &[("s1", 1), ("s2", 1)],
            ExprKind::Kernel(u_prime(&MU_DPRIME)),
        )],
        tol: 1e-8,
    }
}

fn e_identity_34vs23() -> IdentityRecord {
    IdentityRecord {
        name: "shift-34vs23".into(),
        sample: sample_smu(),
        lhs: e3(
            lcm(&[("mu1", 1), ("mu3", 1), ("mu4", 1)], Rat::int(1)),
            lcm(&[("mu2", 1), ("mu3", 1), ("mu4", 1)], Rat::int(1)),
            u_m(0, &MU_DPRIME),
            &[],
        ),
        rhs: vec![term(
            Poly::one(),
            &[("s2", 1), ("s3", 1)],
            ExprKind::Kernel(u_prime(&MU_DPRIME)),
        )],
        tol: 1e-8,
    }
}

fn e_identity_12vs14() -> IdentityRecord {
    IdentityRecord {
        name: "shift-12vs14".into(),
        sample: sample_smu(),
        lhs: e3(
            lcm(&[("mu1", 1), ("mu2", 1), ("mu3", 1)], Rat::int(1)),
            lcm(&[("mu1", 1), ("mu2", 1), ("mu4", 1)], Rat::int(1)),
            u_m(0, &MU_PRIME),
            &[],
        ),
        rhs: vec![term(
            Poly::one(),
            &[("s2", 1), ("s3", 1)],
            ExprKind::Kernel(u_prime(&MU_PRIME)),
        )],
        tol: 1e-8,
    }
}

fn e_identity_34vs14() -> IdentityRecord {
    IdentityRecord {
        name: "shift-34vs14".into(),
        sample: sample_smu(),
        lhs: e1(v("mu3"), v("mu4"), u_m(0, &MU_DPRIME), &[]),
        rhs: vec![term(
            Poly::one(),
            &[("s1", 1), ("s2", 1)],
            ExprKind::Kernel(u_prime(&MU_PRIME)),
        )],
        tol: 1e-8,
    }
}

fn e_identity_12vs34() -> IdentityRecord {
    let front = lcm(&[("s1", -1), ("s2", 1), ("s3", -1), ("mu3", -1), ("mu4", -1)], Rat::int(-2));
    let second = lcm(&[("s1", -1), ("s3", 1), ("mu1", 1), ("mu2", 1)], Rat::ZERO);
    let mut lhs = Vec::new();
    // (2π)^{-2} front·second·E1(μ1,μ2) U0(s;μ')
    for mut t in e1(v("mu1"), v("mu2"), u_m(0, &MU_PRIME), &[]) {
        for p in t.coeff.prods.iter_mut() {
            p.two_pi_power -= 2;
            p.factors.push(front.clone());
            p.factors.push(second.clone());
        }
        lhs.push(t);
    }
    // (2π)^{-2} front·(s2+μ1+μ2) U0(s1+2,s2,s3;μ')
    lhs.push(term(
        prod(Rat::ONE, -2, vec![front.clone(), lcm(&[("s2", 1), ("mu1", 1), ("mu2", 1)], Rat::ZERO)]),
        &[("s1", 2)],
        ExprKind::Kernel(u_m(0, &MU_PRIME)),
    ));
    // E1(μ1,μ2) U0(s1,s2,s3+2;μ')
    lhs.extend(e1(v("mu1"), v("mu2"), u_m(0, &MU_PRIME), &[("s3", 2)]));
    // E3(μ1+μ2+μ3+1, μ1+μ2+μ4+1) U0(s1+2,s2,s3;μ')
    lhs.extend(e3(
        lcm(&[("mu1", 1), ("mu2", 1), ("mu3", 1)], Rat::int(1)),
        lcm(&[("mu1", 1), ("mu2", 1), ("mu4", 1)], Rat::int(1)),
        u_m(0, &MU_PRIME),
        &[("s1", 2)],
    ));
    IdentityRecord {
        name: "shift-12vs34".into(),
        sample: sample_smu(),
        lhs,
        rhs: vec![term(
            Poly::one(),
            &[("s1", 1), ("s2", 2), ("s3", 1)],
            ExprKind::Kernel(u_m(0, &MU_DPRIME)),
        )],
        tol: 1e-8,
    }
}

fn e_identity_34vs12() -> IdentityRecord {
    // the (μ1,μ2) <-> (μ3,μ4) mirror of shift-12vs34
    let front = lcm(&[("s1", -1), ("s2", 1), ("s3", -1), ("mu1", -1), ("mu2", -1)], Rat::int(-2));
    let second = lcm(&[("s1", -1), ("s3", 1), ("mu3", 1), ("mu4", 1)], Rat::ZERO);
    let mut lhs = Vec::new();
    for mut t in e1(v("mu3"), v("mu4"), u_m(0, &MU_DPRIME), &[]) {
        for p in t.coeff.prods.iter_mut() {
            p.two_pi_power -= 2;
            p.factors.push(front.clone());
            p.factors.push(second.clone());
        }
        lhs.push(t);
    }
    lhs.push(term(
        prod(Rat::ONE, -2, vec![front.clone(), lcm(&[("s2", 1), ("mu3", 1), ("mu4", 1)], Rat::ZERO)]),
        &[("s1", 2)],
        ExprKind::Kernel(u_m(0, &MU_DPRIME)),
    ));
    lhs.extend(e1(v("mu3"), v("mu4"), u_m(0, &MU_DPRIME), &[("s3", 2)]));
    lhs.extend(e3(
        lcm(&[("mu1", 1), ("mu3", 1), ("mu4", 1)], Rat::int(1)),
        lcm(&[("mu2", 1), ("mu3", 1), ("mu4", 1)], Rat::int(1)),
        u_m(0, &MU_DPRIME),
        &[("s1", 2)],
    ));
    IdentityRecord {
        name: "shift-34vs12".into(),
        sample: sample_smu(),
        lhs,
        rhs: vec![term(
            Poly::one(),
            &[("s1", 1), ("s2", 2), ("s3", 1)],
            ExprKind::Kernel(u_m(0, &MU_PRIME)),
        )],
        tol: 1e-8,
    }
}

/// The GL(3) gamma ratio at the heart of the double-contour kernel.
fn gl3_vprime() -> GammaProduct {
    GammaProduct {
        factors: vec![
            fr(lcm(&[("t1", 1), ("mu2", 1)], Rat::ZERO)),
            fr(lcm(&[("t1", 1), ("mu3", 1)], Rat::ZERO)),
            fr(lcm(&[("t1", 1), ("mu4", 1)], Rat::ZERO)),
            fr(lcm(&[("t2", 1), ("mu3", 1), ("mu4", 1)], Rat::ZERO)),
            fr(lcm(&[("t2", 1), ("mu2", 1), ("mu4", 1)], Rat::ZERO)),
            fr(lcm(&[("t2", 1), ("mu2", 1), ("mu3", 1)], Rat::ZERO)),
            GammaFactor {
                kind: GammaKind::R,
                arg: lcm(&[("t1", 1), ("t2", 1), ("mu2", 1), ("mu3", 1), ("mu4", 1)], Rat::ZERO),
                exp: -1,
            },
        ],
        two_pi_power: 0,
    }
}

fn sample_tmu() -> BTreeMap<String, SampleRange> {
    let mut m = BTreeMap::new();
    for t in ["t1", "t2"] {
        m.insert(t.to_string(), SampleRange::s_like());
    }
    for mu in ["mu2", "mu3", "mu4"] {
        m.insert(mu.to_string(), SampleRange::nu_like());
    }
    m
}

fn monomial(scalar: Rat, vars: &[&str]) -> PolyProd {
    PolyProd {
        scalar,
        two_pi_power: 0,
        factors: vars.iter().map(|n| v(n)).collect(),
    }
}

fn gl3_compatibility_q2() -> IdentityRecord {
    let q2 = Poly {
        prods: vec![
            monomial(Rat(-1, 1), &["t1", "t1"]),
            monomial(Rat(-1, 1), &["t2", "t2"]),
            monomial(Rat::ONE, &["t1", "t2"]),
            monomial(Rat(-1, 1), &["mu2", "t2"]),
            monomial(Rat(-1, 1), &["mu3", "t2"]),
            monomial(Rat(-1, 1), &["mu4", "t2"]),
            monomial(Rat(-1, 1), &["mu2", "mu3"]),
            monomial(Rat(-1, 1), &["mu3", "mu4"]),
            monomial(Rat(-1, 1), &["mu4", "mu2"]),
        ],
    };
    IdentityRecord {
        name: "gl3-compat-q2".into(),
        sample: sample_tmu(),
        lhs: vec![
            term(q2, &[], ExprKind::Gamma(gl3_vprime())),
            term(Poly::constant(Rat::ONE, 2), &[("t1", 2)], ExprKind::Gamma(gl3_vprime())),
            term(Poly::constant(Rat::ONE, 2), &[("t2", 2)], ExprKind::Gamma(gl3_vprime())),
        ],
        rhs: vec![],
        tol: 1e-10,
    }
}

fn gl3_compatibility_q3() -> IdentityRecord {
    let q3 = Poly {
        prods: vec![
            PolyProd {
                scalar: Rat(-1, 1),
                two_pi_power: 0,
                factors: vec![
                    v("t1"),
                    lcm(&[("t2", 1), ("mu2", 1), ("mu3", 1), ("mu4", 1)], Rat::ZERO),
                    lcm(&[("t1", 1), ("t2", -1)], Rat::ZERO),
                ],
            },
            monomial(Rat(-1, 1), &["mu2", "mu3", "mu4"]),
        ],
    };
    IdentityRecord {
        name: "gl3-compat-q3".into(),
        sample: sample_tmu(),
        lhs: vec![
            term(q3, &[], ExprKind::Gamma(gl3_vprime())),
            term(
                Poly::product(
                    Rat::ONE,
                    2,
                    vec![lcm(&[("t2", 1), ("mu2", 1), ("mu3", 1), ("mu4", 1)], Rat::ZERO)],
                ),
                &[("t1", 2)],
                ExprKind::Gamma(gl3_vprime()),
            ),
            term(
                Poly::product(Rat(-1, 1), 2, vec![v("t1")]),
                &[("t2", 2)],
                ExprKind::Gamma(gl3_vprime()),
            ),
        ],
        rhs: vec![],
        tol: 1e-10,
    }
}

fn sample_snu3() -> BTreeMap<String, SampleRange> {
    let mut m = BTreeMap::new();
    for s in ["s1", "s2", "s3"] {
        m.insert(s.to_string(), SampleRange::s_like());
    }
    for nu in ["nu1", "nu2", "nu3"] {
        m.insert(nu.to_string(), SampleRange::nu_like());
    }
    m
}

/// Duplication rewrite, family with one discrete-series slot:
/// κ1 = 3 and (l1, l4, l12, l34) = (1, 1, 1, 0).
fn duplication_rewrite_two_one() -> IdentityRecord {
    // LHS: U_1(s; ν1+1, ν1+2, ν2, ν3+1), μ-variables renamed to ν
    let lhs_kernel = subst_kernel(
        &crate::kernels::u_kernel_symbolic(1),
        &[("nu1", 1), ("nu1", 2), ("nu2", 0), ("nu3", 1)],
    );
    let rhs_kernel = MellinKernel {
        outer: GammaProduct {
            factors: vec![
                fc(lcm(&[("s1", 1), ("nu1", 1)], Rat::int(1))),
                fr(lcm(&[("s2", 1), ("nu1", 2)], Rat::int(2))),
                fr(lcm(&[("s2", 1), ("nu2", 1), ("nu3", 1)], Rat::int(2))),
                fc(lcm(&[("s3", 1), ("nu1", 1), ("nu2", 1), ("nu3", 1)], Rat::int(2))),
            ],
            two_pi_power: 0,
        },
        numerator: vec![
            fr(lcm(&[("s1", 1), ("q", -1)], Rat::int(1))),
            fc(lcm(&[("s2", 1), ("q", -1), ("nu1", 1)], Rat::int(1))),
            fr(lcm(&[("s3", 1), ("q", -1), ("nu1", 2)], Rat::int(2))),
            fr(lcm(&[("q", 1), ("nu2", 1)], Rat::ZERO)),
            fr(lcm(&[("q", 1), ("nu3", 1)], Rat::int(1))),
        ],
        denominator: vec![
            fr(lcm(&[("s1", 1), ("s2", 1), ("q", -1), ("nu1", 2)], Rat::int(3))),
            fr(lcm(
                &[("s2", 1), ("s3", 1), ("q", -1), ("nu1", 2), ("nu2", 1), ("nu3", 1)],
                Rat::int(4),
            )),
        ],
    };
    IdentityRecord {
        name: "duplication-rewrite-21".into(),
        sample: sample_snu3(),
        lhs: vec![term(Poly::one(), &[], ExprKind::Kernel(lhs_kernel))],
        rhs: vec![term(Poly::one(), &[], ExprKind::Kernel(rhs_kernel))],
        tol: 1e-8,
    }
}

/// Duplication rewrite, family with two discrete-series slots:
/// (κ1, κ2) = (4, 2) and l1 = 1.
fn duplication_rewrite_two_two() -> IdentityRecord {
    let half = |n: i64| Rat(n, 2);
    let lhs_kernel = {
        let base = crate::kernels::u_kernel_symbolic(1);
        // μ = (ν1+3/2, ν1+5/2, ν2+1/2, ν2+3/2): half-integer offsets need
        // a manual pass since MuMap carries integers
        let conv = |fs: &Vec<GammaFactor>| -> Vec<GammaFactor> {
            fs.iter()
                .map(|f| {
                    let mut arg = Affine::constant(f.arg.cst);
                    for (name, coeff) in &f.arg.coeffs {
                        match name.as_str() {
                            "mu1" => {
                                arg = arg.plus("nu1", *coeff);
                                arg = arg.shift(Rat(coeff.0 * 3, coeff.1 * 2));
                            }
                            "mu2" => {
                                arg = arg.plus("nu1", *coeff);
                                arg = arg.shift(Rat(coeff.0 * 5, coeff.1 * 2));
                            }
                            "mu3" => {
                                arg = arg.plus("nu2", *coeff);
                                arg = arg.shift(Rat(coeff.0, coeff.1 * 2));
                            }
                            "mu4" => {
                                arg = arg.plus("nu2", *coeff);
                                arg = arg.shift(Rat(coeff.0 * 3, coeff.1 * 2));
                            }
                            other => arg = arg.plus(other, *coeff),
                        }
                    }
                    GammaFactor { kind: f.kind, arg, exp: f.exp }
                })
                .collect()
        };
        MellinKernel {
            outer: GammaProduct { factors: conv(&base.outer.factors), two_pi_power: 0 },
            numerator: conv(&base.numerator),
            denominator: conv(&base.denominator),
        }
    };
    let rhs_kernel = MellinKernel {
        outer: GammaProduct {
            factors: vec![
                fc(lcm(&[("s1", 1), ("nu1", 1)], half(3))),
                fr(lcm(&[("s2", 1), ("nu1", 2)], Rat::int(3))),
                fr(lcm(&[("s2", 1), ("nu2", 2)], Rat::int(3))),
                fc(lcm(&[("s3", 1), ("nu1", 1), ("nu2", 2)], half(7))),
            ],
            two_pi_power: 0,
        },
        numerator: vec![
            fr(lcm(&[("s1", 1), ("q", -1)], Rat::int(1))),
            fc(lcm(&[("s2", 1), ("q", -1), ("nu1", 1)], half(3))),
            fr(lcm(&[("s3", 1), ("q", -1), ("nu1", 2)], Rat::int(3))),
            fc(lcm(&[("q", 1), ("nu2", 1)], half(1))),
        ],
        denominator: vec![
            fr(lcm(&[("s1", 1), ("s2", 1), ("q", -1), ("nu1", 2)], Rat::int(4))),
            fr(lcm(&[("s2", 1), ("s3", 1), ("q", -1), ("nu1", 2), ("nu2", 2)], Rat::int(6))),
        ],
    };
    let mut sample = BTreeMap::new();
    for s in ["s1", "s2", "s3"] {
        sample.insert(s.to_string(), SampleRange::s_like());
    }
    for nu in ["nu1", "nu2"] {
        sample.insert(nu.to_string(), SampleRange::nu_like());
    }
    IdentityRecord {
        name: "duplication-rewrite-22".into(),
        sample,
        lhs: vec![term(Poly::one(), &[], ExprKind::Kernel(lhs_kernel))],
        rhs: vec![term(Poly::one(), &[], ExprKind::Kernel(rhs_kernel))],
        tol: 1e-8,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma_expr::{verify_identity, SampleRng};

    #[test]
    fn corpus_smoke_one_sample_each() {
        let corpus = builtin_corpus();
        let mut rng = SampleRng::new(41);
        for record in &corpus.records {
            let report = verify_identity(record, 1, record.tol, &mut rng, 1e-11);
            assert!(report.pass, "{}: {report:?}", record.name);
        }
    }

    #[test]
    fn corpus_round_trips_through_json() {
        let corpus = builtin_corpus();
        let text = corpus.to_json();
        let back = IdentityCorpus::from_json(&text).unwrap();
        assert_eq!(corpus, back);
    }

    #[test]
    fn shipped_corpus_file_matches_builtin() {
        let shipped = include_str!("../data/identities.json");
        assert_eq!(shipped.trim_end(), builtin_corpus_json().trim_end());
    }
}
