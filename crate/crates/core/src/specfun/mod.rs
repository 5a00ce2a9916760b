//! Bessel kernels of order zero: `J0`, `Y0`, `I0`, `K0` with first
//! derivatives.
//!
//! Second derivatives are not evaluated here. They follow from the defining
//! equations `x f'' + f' + x f = 0` (J0, Y0) and `x f'' + f' - x f = 0`
//! (I0, K0), see [`BesselEval::second_deriv_oscillatory`] and
//! [`BesselEval::second_deriv_modified`].
//!
//! Branches:
//!
//! | kernel | `x <= switch`         | `x > switch`             | switch |
//! |--------|-----------------------|--------------------------|--------|
//! | J0, Y0 | ascending series      | Hankel Laplace integral  | 8      |
//! | I0     | ascending series      | asymptotic series        | 30     |
//! | K0     | log-coupled series    | Steed continued fraction | 2      |

mod large;
mod series;

use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant, 20 significant digits.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub const JY_SWITCH: f64 = 8.0;
pub const I_SWITCH: f64 = 30.0;
pub const K_SWITCH: f64 = 2.0;

/// Arguments above this make `I0` leave the representable range.
pub const I0_OVERFLOW: f64 = 700.0;

/// Value and first derivative of a kernel at a raw argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselEval {
    pub value: f64,
    pub deriv: f64,
}

impl BesselEval {
    /// `f''` for `J0`/`Y0` from `x f'' + f' + x f = 0`.
    pub fn second_deriv_oscillatory(&self, x: f64) -> f64 {
        -self.deriv / x - self.value
    }

    /// `f''` for `I0`/`K0` from `x f'' + f' - x f = 0`.
    pub fn second_deriv_modified(&self, x: f64) -> f64 {
        -self.deriv / x + self.value
    }
}

fn check_nonneg(func: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::domain(func, x, "argument must be finite"));
    }
    if x < 0.0 {
        return Err(Error::domain(func, x, "argument must be nonnegative"));
    }
    Ok(())
}

fn check_pos(func: &'static str, x: f64) -> Result<()> {
    check_nonneg(func, x)?;
    if x == 0.0 {
        return Err(Error::domain(func, x, "logarithmic singularity at 0"));
    }
    Ok(())
}

/// `(J0, J1, Y0, Y1)` for `x > 0`, branch per [`JY_SWITCH`].
pub(crate) fn jy01(x: f64) -> (f64, f64, f64, f64) {
    if x <= JY_SWITCH {
        let (j0, j1) = series::j01(x);
        let (y0, y1) = series::y01(x, j0, j1);
        (j0, j1, y0, y1)
    } else {
        large::jy01(x)
    }
}

fn j01(x: f64) -> (f64, f64) {
    if x <= JY_SWITCH {
        series::j01(x)
    } else {
        let (j0, j1, _, _) = large::jy01(x);
        (j0, j1)
    }
}

fn i01(x: f64) -> (f64, f64) {
    if x <= I_SWITCH {
        series::i01(x)
    } else {
        large::i01(x)
    }
}

fn k01(x: f64) -> (f64, f64) {
    if x <= K_SWITCH {
        let (i0, i1) = series::i01(x);
        series::k01(x, i0, i1)
    } else {
        large::k01(x)
    }
}

pub fn j0(x: f64) -> Result<BesselEval> {
    check_nonneg("j0", x)?;
    let (j0, j1) = j01(x);
    Ok(BesselEval {
        value: j0,
        deriv: -j1,
    })
}

pub fn y0(x: f64) -> Result<BesselEval> {
    check_pos("y0", x)?;
    let (_, _, y0, y1) = jy01(x);
    Ok(BesselEval {
        value: y0,
        deriv: -y1,
    })
}

pub fn i0(x: f64) -> Result<BesselEval> {
    check_nonneg("i0", x)?;
    if x > I0_OVERFLOW {
        return Err(Error::Overflow {
            func: "i0",
            arg: x,
            threshold: I0_OVERFLOW,
        });
    }
    let (i0, i1) = i01(x);
    Ok(BesselEval {
        value: i0,
        deriv: i1,
    })
}

pub fn k0(x: f64) -> Result<BesselEval> {
    check_pos("k0", x)?;
    let (k0, k1) = k01(x);
    Ok(BesselEval {
        value: k0,
        deriv: -k1,
    })
}

/// Evaluate both sides of a branch switch. Used by the consistency checks.
pub mod branches {
    /// `(series, large)` for `(J0, J1, Y0, Y1)`.
    pub fn jy_at(x: f64) -> ([f64; 4], [f64; 4]) {
        let (j0, j1) = super::series::j01(x);
        let (y0, y1) = super::series::y01(x, j0, j1);
        let (a, b, c, d) = super::large::jy01(x);
        ([j0, j1, y0, y1], [a, b, c, d])
    }

    /// `(series, asymptotic)` for `(I0, I1)`.
    pub fn i_at(x: f64) -> ([f64; 2], [f64; 2]) {
        let s = super::series::i01(x);
        let l = super::large::i01(x);
        ([s.0, s.1], [l.0, l.1])
    }

    /// `(series, continued fraction)` for `(K0, K1)`.
    pub fn k_at(x: f64) -> ([f64; 2], [f64; 2]) {
        let (i0, i1) = super::series::i01(x);
        let s = super::series::k01(x, i0, i1);
        let l = super::large::k01(x);
        ([s.0, s.1], [l.0, l.1])
    }
}

/// Bisect `f` on `[lo, hi]` (sign change required) until the bracket
/// cannot shrink further in floating point.
fn bisect_to_ulp(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return if f(lo).abs() <= f(hi).abs() { lo } else { hi };
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
}

static J0_FIRST_ZERO: OnceLock<f64> = OnceLock::new();
static J0_FIRST_MIN: OnceLock<(f64, f64)> = OnceLock::new();

/// First positive zero of `J0`.
pub fn j0_first_zero() -> f64 {
    *J0_FIRST_ZERO.get_or_init(|| bisect_to_ulp(|x| j01(x).0, 2.0, 3.0))
}

/// First positive stationary point of `J0` and the depth `m = -J0` there.
pub fn j0_first_min() -> (f64, f64) {
    *J0_FIRST_MIN.get_or_init(|| {
        let loc = bisect_to_ulp(|x| -j01(x).1, 3.0, 4.5);
        (loc, -j01(loc).0)
    })
}
