//! Large-argument evaluation.
//!
//! * J and Y come from the Hankel function `H^(1)_nu`, computed from its
//!   Laplace-type integral
//!   `H_nu(x) = sqrt(2/(pi x)) e^{i(x - nu pi/2 - pi/4)} / Gamma(nu+1/2)
//!              * int_0^inf e^{-u} u^{nu-1/2} (1 + iu/(2x))^{nu-1/2} du`.
//!   After `u = s^2` the integrand is an even Gaussian-weighted analytic
//!   function, so the trapezoidal rule on the real line converges
//!   geometrically. This is the exact form whose termwise expansion is the
//!   Hankel asymptotic series.
//! * I uses the asymptotic series, which is accurate far past the switchover.
//! * K uses Steed's continued fraction (CF2, Temme normalisation).

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

const TRAPEZOID_STEP: f64 = 0.2;
const TRAPEZOID_NODES: usize = 40;

/// (J0, J1, Y0, Y1) for x >= ~2.
pub(crate) fn jy01(x: f64) -> (f64, f64, f64, f64) {
    let scale = 1.0 / (2.0 * x);
    let mut int0 = Complex64::new(0.5, 0.0);
    let mut int1 = Complex64::new(0.0, 0.0);
    for k in 1..TRAPEZOID_NODES {
        let s = k as f64 * TRAPEZOID_STEP;
        let s2 = s * s;
        let w = (-s2).exp();
        let z = Complex64::new(1.0, s2 * scale).sqrt();
        int0 += w / z;
        int1 += s2 * w * z;
    }
    // full-line trapezoid = h * (f(0) + 2 sum_{k>=1} f(kh))
    let int0 = int0 * (2.0 * TRAPEZOID_STEP);
    let int1 = int1 * (2.0 * TRAPEZOID_STEP);

    let amp = (2.0 / (PI * x)).sqrt() / PI.sqrt();
    let h0 = Complex64::from_polar(amp, x - FRAC_PI_4) * int0;
    let h1 = Complex64::from_polar(2.0 * amp, x - 3.0 * FRAC_PI_4) * int1;
    (h0.re, h1.re, h0.im, h1.im)
}

/// (I0, I1) from the exponentially-scaled asymptotic series.
pub(crate) fn i01(x: f64) -> (f64, f64) {
    let series = |nu2x4: f64| {
        let mut sum = 1.0;
        let mut term: f64 = 1.0;
        for k in 1..60 {
            let odd = (2 * k - 1) as f64;
            let next = -term * (nu2x4 - odd * odd) / (k as f64 * 8.0 * x);
            if next.abs() > term.abs() {
                break;
            }
            term = next;
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    };
    let pre = x.exp() / (2.0 * PI * x).sqrt();
    (pre * series(0.0), pre * series(4.0))
}

/// (K0, K1) by Steed's CF2 with Temme's normalisation.
pub(crate) fn k01(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let (mut q1, mut q2) = (0.0, 1.0);
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..20_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}
