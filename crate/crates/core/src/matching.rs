//! Transition-point algebra: Wronskians, Cramer solves for the vacuum and
//! interior coefficients, and the C² test at a vacuum/positivity interface.
//!
//! All derivatives are taken with respect to `r`, so the chain factors
//! `beta`, `xi`, `omega` are included in every determinant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solutions::PiecewiseSolution;
use crate::specfun;

/// Wronskian of `I0(beta r)` and `K0(beta r)` in `r`. Equals `-1/r`.
pub fn wronskian_w(r: f64, beta: f64) -> Result<f64> {
    check_radius_scale(r, beta)?;
    let i = specfun::i0(beta * r)?;
    let k = specfun::k0(beta * r)?;
    Ok(beta * (i.value * k.deriv - i.deriv * k.value))
}

fn check_radius_scale(r: f64, scale: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain("matching", r, "radius must be positive"));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain("matching", scale, "scale must be positive"));
    }
    Ok(())
}

/// `(A1, A2)` with `A1 I0(beta r) + A2 K0(beta r) = phi` and matching
/// r-derivative `dphi`, by Cramer's rule.
pub fn solve_vacuum_coeffs(phi: f64, dphi: f64, r: f64, beta: f64) -> Result<(f64, f64)> {
    check_radius_scale(r, beta)?;
    let i = specfun::i0(beta * r)?;
    let k = specfun::k0(beta * r)?;
    let (di, dk) = (beta * i.deriv, beta * k.deriv);
    let w = i.value * dk - di * k.value;
    let w1 = phi * dk - dphi * k.value;
    let w2 = i.value * dphi - di * phi;
    Ok((w1 / w, w2 / w))
}

/// First Cramer numerator `W1(r) = phi K0'(beta r) - phi' K0(beta r)`
/// (r-derivatives). `A1 = 0` exactly when this vanishes.
pub fn vacuum_w1(phi: f64, dphi: f64, r: f64, beta: f64) -> Result<f64> {
    check_radius_scale(r, beta)?;
    let k = specfun::k0(beta * r)?;
    Ok(phi * beta * k.deriv - dphi * k.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InteriorKind {
    /// `I0(xi r)`, `K0(xi r)` basis.
    Case2,
    /// `J0(omega r)`, `Y0(omega r)` basis.
    Case3,
}

/// `(f, f', g, g')` of the interior basis at `r`, derivatives in `r`.
fn interior_basis(kind: InteriorKind, r: f64, freq: f64) -> Result<(f64, f64, f64, f64)> {
    let x = freq * r;
    Ok(match kind {
        InteriorKind::Case2 => {
            let i = specfun::i0(x)?;
            let k = specfun::k0(x)?;
            (i.value, freq * i.deriv, k.value, freq * k.deriv)
        }
        InteriorKind::Case3 => {
            let j = specfun::j0(x)?;
            let y = specfun::y0(x)?;
            (j.value, freq * j.deriv, y.value, freq * y.deriv)
        }
    })
}

/// Wronskian of the interior basis in `r`: `-1/r` for Case 2 and
/// `2/(pi r)` for Case 3.
pub fn interior_wronskian(kind: InteriorKind, r: f64, freq: f64) -> Result<f64> {
    check_radius_scale(r, freq)?;
    let (f, df, g, dg) = interior_basis(kind, r, freq)?;
    Ok(f * dg - df * g)
}

/// `(c1, c2)` such that `c1 f + c2 g + offset` has value `phi` and
/// r-derivative `dphi` at `r`. `offset` is the constant particular solution
/// of the piece (`aK/(D eps xi^2)` in Case 2, `-aK/(D eps omega^2)` in Case 3).
pub fn interior_cramer(
    kind: InteriorKind,
    r: f64,
    freq: f64,
    phi: f64,
    dphi: f64,
    offset: f64,
) -> Result<(f64, f64)> {
    check_radius_scale(r, freq)?;
    let (f, df, g, dg) = interior_basis(kind, r, freq)?;
    let u = phi - offset;
    let w = f * dg - df * g;
    Ok(((u * dg - dphi * g) / w, (f * dphi - df * u) / w))
}

/// Outcome of the C² test at one vacuum/positivity interface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionCheck {
    pub r_bar: f64,
    /// right minus left one-sided values
    pub phi_jump: f64,
    pub dphi_jump: f64,
    pub d2phi_jump: f64,
    /// `phi(r_bar) + K/chi`, with `phi` from the vacuum side and `K` from
    /// the non-vacuum side
    pub value_condition: f64,
    pub tol_c2: f64,
    pub tol_val: f64,
    /// C¹ together with the value condition forces C².
    pub implication_holds: bool,
    pub passed: bool,
}

pub fn transition_check(sol: &PiecewiseSolution, r_bar: f64) -> Result<TransitionCheck> {
    let idx = sol
        .breakpoints()
        .iter()
        .position(|&b| (b - r_bar).abs() <= 4.0 * f64::EPSILON * b)
        .ok_or_else(|| Error::Usage(format!("{r_bar} is not a breakpoint of the solution")))?;
    let r = sol.breakpoints()[idx];
    let (left, right) = (sol.pieces()[idx], sol.pieces()[idx + 1]);
    let (vac, dense) = match (left.is_vacuum(), right.is_vacuum()) {
        (true, false) => (left, right),
        (false, true) => (right, left),
        _ => {
            return Err(Error::Usage(format!(
                "breakpoint {r} does not separate vacuum from positive density"
            )))
        }
    };
    let params = sol.params();
    let l = left.eval(params, r)?;
    let rt = right.eval(params, r)?;
    let v = vac.eval(params, r)?;
    let k = dense.k().expect("non-vacuum piece carries K");

    let phi_jump = rt.phi - l.phi;
    let dphi_jump = rt.dphi - l.dphi;
    let d2phi_jump = rt.d2phi - l.d2phi;
    let value_condition = v.phi + k / params.chi;
    let tol_c2 = 1e-8 * (1.0 + v.d2phi.abs());
    let tol_val = 1e-9 * (1.0 + k.abs() / params.chi);

    let c1 = phi_jump.abs() <= tol_c2 && dphi_jump.abs() <= tol_c2;
    let val = value_condition.abs() <= tol_val;
    let c2 = d2phi_jump.abs() <= tol_c2;
    Ok(TransitionCheck {
        r_bar: r,
        phi_jump,
        dphi_jump,
        d2phi_jump,
        value_condition,
        tol_c2,
        tol_val,
        implication_holds: !(c1 && val) || c2,
        passed: c1 && val && c2,
    })
}
