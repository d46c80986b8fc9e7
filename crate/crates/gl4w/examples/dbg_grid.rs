use gl4w::kernels::*;
use gl4w::rep::{GeneratorIndex, InducingDatum};
use gl4w::report::RunConfig;
use num_complex::Complex64 as C64;

fn main() {
    let c = |re: f64, im: f64| C64::new(re, im);
    let sigma = InducingDatum::p1111(
        [c(0.11, 0.0), c(-0.23, 0.0), c(0.05, 0.0), c(-0.31, 0.0)],
        [0, 0, 0, 0],
    )
    .unwrap();
    let cfg = RunConfig::default();
    let grid = whittaker_grid(&sigma, &GeneratorIndex::ZERO, [2.6, 3.2, 3.8], &cfg).unwrap();
    // compare stored node values against adaptive quadrature at several nodes
    for (k1, k2, k3) in [(0i64, 0i64, 0i64), (2, -3, 1), (6, 5, -4), (12, 0, 3), (0, 14, 0)] {
        let s = [
            c(2.6, k1 as f64 * 0.5),
            c(3.2, k2 as f64 * 0.5),
            c(3.8, k3 as f64 * 0.5),
        ];
        let direct = kernel_sigma_l(&sigma, &GeneratorIndex::ZERO, s, &cfg).unwrap();
        let stored = grid.node(k1, k2, k3);
        println!(
            "node ({k1:3},{k2:3},{k3:3}): stored {:>13.6e} {:>13.6e}  direct {:>13.6e} {:>13.6e}  rel {:.2e}",
            stored.re, stored.im, direct.value.re, direct.value.im,
            (stored - direct.value).norm() / direct.value.norm().max(1e-300)
        );
    }
}
