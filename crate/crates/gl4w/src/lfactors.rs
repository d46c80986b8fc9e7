//! Langlands parameters of the three families, standard and
//! exterior-square L-factors, and the ε-factors (powers of √-1).

use crate::gamma::{self, C64};
use crate::gamma_expr::GammaKind;
use crate::kernels::i_pow;
use crate::rep::{Family, InducingDatum};
use serde::{Deserialize, Serialize};

/// One irreducible constituent of a semisimple parameter: a character
/// (ν, δ) or a two-dimensional piece (ν, κ) with κ >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WeilItem {
    Char { nu: C64, delta: u8 },
    TwoDim { nu: C64, kappa: i32 },
}

impl WeilItem {
    pub fn dim(&self) -> usize {
        match self {
            WeilItem::Char { .. } => 1,
            WeilItem::TwoDim { .. } => 2,
        }
    }

    /// The gamma factor L(s, item): Γ_R(s+ν+δ) or Γ_C(s+ν+κ/2).
    pub fn gamma_shift(&self) -> (GammaKind, C64) {
        match self {
            WeilItem::Char { nu, delta } => (GammaKind::R, nu + *delta as f64),
            WeilItem::TwoDim { nu, kappa } => (GammaKind::C, nu + *kappa as f64 / 2.0),
        }
    }

    /// ε(s, item, ψ_R): (√-1)^δ or (√-1)^{κ+1}.
    pub fn epsilon(&self) -> C64 {
        match self {
            WeilItem::Char { delta, .. } => i_pow(*delta as i64),
            WeilItem::TwoDim { kappa, .. } => i_pow(*kappa as i64 + 1),
        }
    }
}

/// A finite direct sum of irreducible parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeilRep {
    pub items: Vec<WeilItem>,
}

impl WeilRep {
    pub fn dim(&self) -> usize {
        self.items.iter().map(|i| i.dim()).sum()
    }

    /// Symbolic list of gamma factors of L(s, ·).
    pub fn gamma_factors(&self) -> Vec<(GammaKind, C64)> {
        self.items.iter().map(|i| i.gamma_shift()).collect()
    }

    /// Numeric L-factor at s: the product of the constituent factors.
    pub fn l_factor(&self, s: C64) -> gamma::Result<C64> {
        let mut log = C64::new(0.0, 0.0);
        for (kind, shift) in self.gamma_factors() {
            log += match kind {
                GammaKind::R => gamma::ln_gamma_r_fast(s + shift)?,
                GammaKind::C => gamma::ln_gamma_c_fast(s + shift)?,
            };
        }
        Ok(log.exp())
    }

    pub fn epsilon(&self) -> C64 {
        self.items.iter().map(|i| i.epsilon()).product()
    }
}

/// The standard (4-dimensional) Langlands parameter of Π_σ.
pub fn langlands_parameter(sigma: &InducingDatum) -> WeilRep {
    let items = match sigma.family {
        Family::P1111 => (0..4)
            .map(|i| WeilItem::Char { nu: sigma.nu[i], delta: sigma.delta[i] })
            .collect(),
        Family::P211 => vec![
            WeilItem::TwoDim { nu: sigma.nu[0], kappa: sigma.kappa[0] - 1 },
            WeilItem::Char { nu: sigma.nu[1], delta: sigma.delta[0] },
            WeilItem::Char { nu: sigma.nu[2], delta: sigma.delta[1] },
        ],
        Family::P22 => vec![
            WeilItem::TwoDim { nu: sigma.nu[0], kappa: sigma.kappa[0] - 1 },
            WeilItem::TwoDim { nu: sigma.nu[1], kappa: sigma.kappa[1] - 1 },
        ],
    };
    WeilRep { items }
}

/// Splits φ_{ν,0} into the two characters it is equivalent to; keeps
/// irreducible pieces as they are.
fn normalized(item: WeilItem) -> Vec<WeilItem> {
    match item {
        WeilItem::TwoDim { nu, kappa: 0 } => vec![
            WeilItem::Char { nu, delta: 0 },
            WeilItem::Char { nu, delta: 1 },
        ],
        other => vec![other],
    }
}

/// The 6-dimensional exterior-square parameter of Π_σ.
pub fn exterior_square_parameter(sigma: &InducingDatum) -> WeilRep {
    let d = sigma.delta_parities();
    let raw = match sigma.family {
        Family::P1111 => {
            let mut items = Vec::with_capacity(6);
            for i in 0..4 {
                for j in (i + 1)..4 {
                    items.push(WeilItem::Char {
                        nu: sigma.nu[i] + sigma.nu[j],
                        delta: sigma.delta[i].abs_diff(sigma.delta[j]),
                    });
                }
            }
            items
        }
        Family::P211 => vec![
            WeilItem::TwoDim { nu: sigma.nu[0] + sigma.nu[1], kappa: sigma.kappa[0] - 1 },
            WeilItem::TwoDim { nu: sigma.nu[0] + sigma.nu[2], kappa: sigma.kappa[0] - 1 },
            WeilItem::Char { nu: 2.0 * sigma.nu[0], delta: d[0] },
            WeilItem::Char {
                nu: sigma.nu[1] + sigma.nu[2],
                delta: sigma.delta[0].abs_diff(sigma.delta[1]),
            },
        ],
        Family::P22 => vec![
            WeilItem::TwoDim {
                nu: sigma.nu[0] + sigma.nu[1],
                kappa: (sigma.kappa[0] - sigma.kappa[1]).abs(),
            },
            WeilItem::TwoDim {
                nu: sigma.nu[0] + sigma.nu[1],
                kappa: sigma.kappa[0] + sigma.kappa[1] - 2,
            },
            WeilItem::Char { nu: 2.0 * sigma.nu[0], delta: d[0] },
            WeilItem::Char { nu: 2.0 * sigma.nu[1], delta: d[1] },
        ],
    };
    WeilRep { items: raw.into_iter().flat_map(normalized).collect() }
}

/// (ε(s, Π, ψ_R), ε(s, Π, ∧², ψ_R)) — both powers of √-1.
pub fn epsilon_factors(sigma: &InducingDatum) -> (C64, C64) {
    (
        langlands_parameter(sigma).epsilon(),
        exterior_square_parameter(sigma).epsilon(),
    )
}

/// L(s1, Π) · L(s2, Π, ∧²).
pub fn l_product(sigma: &InducingDatum, s1: C64, s2: C64) -> gamma::Result<C64> {
    Ok(langlands_parameter(sigma).l_factor(s1)? * exterior_square_parameter(sigma).l_factor(s2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn parameters_by_family() {
        let z = c(0.0, 0.0);
        let s = InducingDatum::p1111([z; 4], [1, 1, 0, 0]).unwrap();
        assert_eq!(langlands_parameter(&s).items.len(), 4);
        assert_eq!(langlands_parameter(&s).dim(), 4);

        let s = InducingDatum::p211([z; 3], 4, [1, 0]).unwrap();
        let rep = langlands_parameter(&s);
        assert_eq!(rep.items[0], WeilItem::TwoDim { nu: z, kappa: 3 });
        assert_eq!(rep.dim(), 4);

        let s = InducingDatum::p22([z; 2], [4, 2]).unwrap();
        let rep = langlands_parameter(&s);
        assert_eq!(rep.items, vec![
            WeilItem::TwoDim { nu: z, kappa: 3 },
            WeilItem::TwoDim { nu: z, kappa: 1 },
        ]);
    }

    #[test]
    fn exterior_square_dimension_is_six() {
        let z = c(0.0, 0.0);
        for sigma in [
            InducingDatum::p1111([z; 4], [1, 1, 1, 0]).unwrap(),
            InducingDatum::p211([z; 3], 3, [1, 1]).unwrap(),
            InducingDatum::p22([z; 2], [4, 2]).unwrap(),
            InducingDatum::p22([z; 2], [3, 3]).unwrap(),
        ] {
            assert_eq!(exterior_square_parameter(&sigma).dim(), 6, "{sigma:?}");
        }
    }

    #[test]
    fn p22_equal_kappa_splits() {
        let sigma = InducingDatum::p22([c(0.125, 0.0), c(0.25, 0.0)], [3, 3]).unwrap();
        let rep = exterior_square_parameter(&sigma);
        // φ_{ν1+ν2, 0} splits into two characters
        assert!(rep.items.contains(&WeilItem::Char { nu: c(0.375, 0.0), delta: 0 }));
        assert!(rep.items.contains(&WeilItem::Char { nu: c(0.375, 0.0), delta: 1 }));
    }

    #[test]
    fn p22_example_l_factors() {
        // ν = (0,0), κ = (4,2): L(s,Π) = Γ_C(s+3/2) Γ_C(s+1/2),
        // L(s,Π,∧²) = Γ_C(s+1) Γ_C(s+2) Γ_R(s)²
        let z = c(0.0, 0.0);
        let sigma = InducingDatum::p22([z; 2], [4, 2]).unwrap();
        let s = c(1.7, 0.3);
        let std = langlands_parameter(&sigma).l_factor(s).unwrap();
        let expect = crate::gamma::gamma_c(s + 1.5).unwrap() * crate::gamma::gamma_c(s + 0.5).unwrap();
        assert!((std - expect).norm() < 1e-13 * expect.norm());

        let ext = exterior_square_parameter(&sigma).l_factor(s).unwrap();
        let gr = crate::gamma::gamma_r(s).unwrap();
        let expect = crate::gamma::gamma_c(s + 1.0).unwrap()
            * crate::gamma::gamma_c(s + 2.0).unwrap()
            * gr
            * gr;
        assert!((ext - expect).norm() < 1e-12 * expect.norm());
    }

    #[test]
    fn trivial_character_value() {
        let rep = WeilRep { items: vec![WeilItem::Char { nu: c(0.0, 0.0), delta: 0 }] };
        let v = rep.l_factor(c(2.0, 0.0)).unwrap();
        assert!((v - c(1.0 / PI, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn epsilon_examples() {
        let z = c(0.0, 0.0);
        let sigma = InducingDatum::p22([z; 2], [4, 2]).unwrap();
        let (es, ee) = epsilon_factors(&sigma);
        assert_eq!(es, c(-1.0, 0.0)); // i^6
        assert_eq!(ee, c(1.0, 0.0)); // i^8

        let sigma = InducingDatum::p1111([z; 4], [0, 0, 0, 0]).unwrap();
        let (es, ee) = epsilon_factors(&sigma);
        assert_eq!((es, ee), (c(1.0, 0.0), c(1.0, 0.0)));

        let sigma = InducingDatum::p211([z; 3], 3, [1, 0]).unwrap();
        let (es, _) = epsilon_factors(&sigma);
        assert_eq!(es, c(1.0, 0.0)); // i^{3+1+0}
    }

    #[test]
    fn epsilon_values_are_fourth_roots() {
        let z = c(0.0, 0.0);
        for sigma in [
            InducingDatum::p1111([z; 4], [1, 0, 0, 0]).unwrap(),
            InducingDatum::p211([z; 3], 5, [1, 1]).unwrap(),
            InducingDatum::p22([z; 2], [5, 2]).unwrap(),
        ] {
            for e in [epsilon_factors(&sigma).0, epsilon_factors(&sigma).1] {
                assert!((e.norm() - 1.0).abs() < 1e-15);
                let fourth = e * e * e * e;
                assert!((fourth - c(1.0, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn multiplicativity_over_direct_sum() {
        let a = WeilRep { items: vec![WeilItem::Char { nu: c(0.1, 0.2), delta: 1 }] };
        let b = WeilRep { items: vec![WeilItem::TwoDim { nu: c(-0.2, 0.1), kappa: 3 }] };
        let sum = WeilRep { items: a.items.iter().chain(b.items.iter()).copied().collect() };
        let s = c(1.8, -0.4);
        let lhs = sum.l_factor(s).unwrap();
        let rhs = a.l_factor(s).unwrap() * b.l_factor(s).unwrap();
        assert!((lhs - rhs).norm() < 1e-13 * rhs.norm());
    }
}
