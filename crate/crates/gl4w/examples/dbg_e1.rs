use gl4w::kernels::*;
use gl4w::report::RunConfig;
use num_complex::Complex64 as C64;

// U(s; mu; alpha; beta; gamma) from the auxiliary-lemma proof
fn u_gen(
    s: [C64; 3],
    m: [C64; 4],
    a: [f64; 6],
    b: [f64; 6],
    g: [f64; 2],
    qre: f64,
) -> C64 {
    let lg = |z: C64| gl4w::gamma::ln_gamma_r_fast(z).unwrap();
    let outer = (lg(s[0] + m[0] + a[0])
        + lg(s[0] + m[1] + a[1])
        + lg(s[1] + m[0] + m[1] + a[2])
        + lg(s[1] + m[2] + m[3] + a[3])
        + lg(s[2] + m[0] + m[2] + m[3] + a[4])
        + lg(s[2] + m[1] + m[2] + m[3] + a[5]))
    .exp();
    let spec = gl4w::quadrature::ContourSpec::at(qre);
    let integral = gl4w::quadrature::integrate_vertical(
        |q| {
            (lg(s[0] - q + b[0])
                + lg(s[1] - q + m[0] + b[1])
                + lg(s[1] - q + m[1] + b[2])
                + lg(s[2] - q + m[0] + m[1] + b[3])
                + lg(q + m[2] + b[4])
                + lg(q + m[3] + b[5])
                - lg(s[0] + s[1] - q + m[0] + m[1] + g[0])
                - lg(s[1] + s[2] - q + m[0] + m[1] + m[2] + m[3] + g[1]))
            .exp()
        },
        &spec,
        1e-11,
    )
    .unwrap()
    .value;
    outer * integral
}

fn main() {
    let c = |re: f64, im: f64| C64::new(re, im);
    let cfg = RunConfig::default();
    let mu = [c(-0.07, 0.21), c(0.13, -0.10), c(-0.09, 0.35), c(0.14, 0.16)];
    let mup = [mu[2] + 1.0, mu[3] + 1.0, mu[0], mu[1]];
    let mupp = [mu[0] + 1.0, mu[1] + 1.0, mu[2], mu[3]];
    let s = [c(2.57, 0.04), c(2.37, 0.73), c(2.55, -0.61)];

    let u0 = kernel_u(0, s, mup, &cfg).unwrap().value;
    let u0s = kernel_u(0, [s[0] + 2.0, s[1], s[2]], mup, &cfg).unwrap().value;
    let lhs = (s[0] + mu[0]) * (s[0] + mu[1]) * u0 - u0s;

    let mid = u_gen(
        s,
        mu,
        [2.0, 2.0, 2.0, 2.0, 2.0, 2.0],
        [1.0, 1.0, 1.0, 1.0, 0.0, 0.0],
        [3.0, 3.0],
        0.5,
    );
    println!("lhs / mid = {}", lhs / mid);

    // U'(s1+1,s2+1,s3; mu'') explicit
    let t = [s[0] + 1.0, s[1] + 1.0, s[2]];
    let m = mupp;
    let lg = |z: C64| gl4w::gamma::ln_gamma_r_fast(z).unwrap();
    let outer = (lg(t[0] + m[0])
        + lg(t[0] + m[1])
        + lg(t[1] + m[0] + m[1] - 1.0)
        + lg(t[1] + m[2] + m[3] + 1.0)
        + lg(t[2] + m[0] + m[2] + m[3] + 1.0)
        + lg(t[2] + m[1] + m[2] + m[3] + 1.0))
    .exp();
    let spec = gl4w::quadrature::ContourSpec::at(0.35);
    let integral = gl4w::quadrature::integrate_vertical(
        |q| {
            (lg(t[0] - q) + lg(t[1] - q + m[0] - 1.0) + lg(t[1] - q + m[1] - 1.0)
                + lg(t[2] - q + m[0] + m[1] - 1.0)
                + lg(q + m[2])
                + lg(q + m[3])
                - lg(t[0] + t[1] - q + m[0] + m[1] - 1.0)
                - lg(t[1] + t[2] - q + m[0] + m[1] + m[2] + m[3]))
            .exp()
        },
        &spec,
        1e-11,
    )
    .unwrap()
    .value;
    let uprime = outer * integral;
    println!("mid / uprime = {}", mid / uprime);
    println!("(2pi)^2 = {}", (2.0 * std::f64::consts::PI).powi(2));
}
