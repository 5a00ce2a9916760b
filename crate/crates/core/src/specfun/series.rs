//! Power series about the origin. Used for small and moderate arguments.

use super::EULER_GAMMA;

const MAX_TERMS: usize = 60;
const REL_CUTOFF: f64 = 1e-17;

fn converged(term: f64, sum: f64) -> bool {
    term.abs() < REL_CUTOFF * sum.abs()
}

/// (J0, J1) from the ascending series.
pub(crate) fn j01(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let (mut t0, mut t1) = (1.0, 0.5 * x);
    let (mut s0, mut s1) = (0.0, 0.0);
    let (mut done0, mut done1) = (false, false);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        if !done0 {
            s0 += t0;
            done0 = converged(t0, s0) && k > 0;
        }
        if !done1 {
            s1 += t1;
            done1 = converged(t1, s1) && k > 0;
        }
        if done0 && done1 {
            break;
        }
        t0 *= -q / ((kf + 1.0) * (kf + 1.0));
        t1 *= -q / ((kf + 1.0) * (kf + 2.0));
    }
    (s0, s1)
}

/// (I0, I1) from the ascending series; every term is positive.
pub(crate) fn i01(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let (mut t0, mut t1) = (1.0, 0.5 * x);
    let (mut s0, mut s1) = (0.0, 0.0);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        s0 += t0;
        s1 += t1;
        if k > 0 && converged(t0, s0) && converged(t1, s1) {
            break;
        }
        t0 *= q / ((kf + 1.0) * (kf + 1.0));
        t1 *= q / ((kf + 1.0) * (kf + 2.0));
    }
    (s0, s1)
}

/// Sums shared by Y and K: `sum_{k>=1} sign^k H_k q^k/(k!)^2` and
/// `sum_{k>=0} sign^k (psi(k+1)+psi(k+2)) (x/2) q^k/(k!(k+1)!)`.
fn log_coupled_sums(x: f64, sign: f64) -> (f64, f64) {
    let q = 0.25 * x * x;

    let mut s0 = 0.0;
    let mut t = 1.0;
    let mut harmonic = 0.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        t *= sign * q / (kf * kf);
        harmonic += 1.0 / kf;
        let term = t * harmonic;
        s0 += term;
        if converged(term, s0) {
            break;
        }
    }

    // psi(k+1) + psi(k+2) = H_k + H_{k+1} - 2 gamma
    let mut s1 = 0.0;
    let mut t = 0.5 * x;
    let (mut hk, mut hk1) = (0.0, 1.0);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let term = t * (hk + hk1 - 2.0 * EULER_GAMMA);
        s1 += term;
        if k > 0 && converged(term, s1) {
            break;
        }
        t *= sign * q / ((kf + 1.0) * (kf + 2.0));
        hk += 1.0 / (kf + 1.0);
        hk1 += 1.0 / (kf + 2.0);
    }
    (s0, s1)
}

/// (Y0, Y1) for x > 0 given the matching (J0, J1).
pub(crate) fn y01(x: f64, j0: f64, j1: f64) -> (f64, f64) {
    use std::f64::consts::FRAC_2_PI;
    let ln_half = (0.5 * x).ln();
    let (h_sum, psi_sum) = log_coupled_sums(x, -1.0);
    // the H_k series of Y0 carries (-1)^{k+1}
    let y0 = FRAC_2_PI * ((ln_half + EULER_GAMMA) * j0 - h_sum);
    let y1 = FRAC_2_PI * (ln_half * j1 - 1.0 / x) - psi_sum / std::f64::consts::PI;
    (y0, y1)
}

/// (K0, K1) for x > 0 given the matching (I0, I1).
pub(crate) fn k01(x: f64, i0: f64, i1: f64) -> (f64, f64) {
    let ln_half = (0.5 * x).ln();
    let (h_sum, psi_sum) = log_coupled_sums(x, 1.0);
    let k0 = -(ln_half + EULER_GAMMA) * i0 + h_sum;
    let k1 = 1.0 / x + ln_half * i1 - 0.5 * psi_sum;
    (k0, k1)
}
