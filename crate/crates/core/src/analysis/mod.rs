//! Independent verification of piecewise solutions: pointwise residuals of
//! the stationary system, continuity at breakpoints, and the integral
//! quantities (energies, the `phi` integral identity, mass).
//!
//! Residuals do not reuse the ODE-derived `phi''` of
//! [`crate::solutions::Piece::eval`]; they differentiate the analytic `phi'`
//! of the piece numerically, so a wrong coefficient or constant shows up.

mod profile;
mod quadrature;

pub use profile::{write_profile_csv, PROFILE_HEADER};
pub use quadrature::{integrate_radial, Quadrature};

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matching::{transition_check, TransitionCheck};
use crate::solutions::{Piece, PiecewiseSolution};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Norms {
    pub sup: f64,
    /// root-mean-square over the grid
    pub l2: f64,
}

impl Norms {
    fn from_values(values: &[f64]) -> Self {
        if values.is_empty() {
            return Norms::default();
        }
        let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let l2 = (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt();
        Norms { sup, l2 }
    }
}

/// Pointwise residuals at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointResidual {
    pub r: f64,
    /// `D phi'' + D phi'/r + a rho - b phi`
    pub phi_eq: f64,
    /// `d/dr p(rho) - chi rho phi'`
    pub rho_eq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSummary {
    pub phi_eq: Norms,
    pub rho_eq: Norms,
    pub max_abs_phi: f64,
    pub max_rho: f64,
    pub max_abs_dphi: f64,
}

fn fd_step(r: f64) -> f64 {
    1e-3 * r.min(1.0)
}

/// Five-point central difference of `g` at `r`. `g` must accept the
/// stencil points; at `r = 0` callers supply the even/odd extension.
fn five_point(g: impl Fn(f64) -> Result<f64>, r: f64, h: f64) -> Result<f64> {
    Ok((-g(r + 2.0 * h)? + 8.0 * g(r + h)? - 8.0 * g(r - h)? + g(r - 2.0 * h)?) / (12.0 * h))
}

/// Residuals of both stationary equations for one piece at `r >= 0`.
pub(super) fn piece_residual(
    piece: &Piece,
    sol: &PiecewiseSolution,
    r: f64,
) -> Result<PointResidual> {
    let p = sol.params();
    let e = piece.eval(p, r)?;
    // odd extension of phi' and even extension of rho for stencil points
    // left of the origin (only reached by pieces regular at r = 0)
    let dphi = |s: f64| -> Result<f64> {
        if s < 0.0 {
            Ok(-piece.eval(p, -s)?.dphi)
        } else {
            Ok(piece.eval(p, s)?.dphi)
        }
    };
    let rho = |s: f64| -> Result<f64> { Ok(piece.eval(p, s.abs())?.rho) };

    let h = if r == 0.0 { 1e-3 } else { fd_step(r) };
    let d2phi = five_point(dphi, r, h)?;
    let lap = if r == 0.0 {
        2.0 * d2phi
    } else {
        d2phi + e.dphi / r
    };
    let phi_eq = p.d * lap + p.a * e.rho - p.b * e.phi;

    let rho_eq = if piece.is_vacuum() {
        0.0
    } else {
        let drho = five_point(rho, r, h)?;
        p.eps * e.rho * drho - p.chi * e.rho * e.dphi
    };
    Ok(PointResidual { r, phi_eq, rho_eq })
}

/// Pointwise residuals on `grid` (sorted, nonnegative). Points exactly at a
/// breakpoint use the right-hand piece.
pub fn ode_residuals(
    sol: &PiecewiseSolution,
    grid: &[f64],
) -> Result<(ResidualSummary, Vec<PointResidual>)> {
    let mut points = Vec::with_capacity(grid.len());
    let (mut max_phi, mut max_rho, mut max_dphi) = (0.0f64, 0.0f64, 0.0f64);
    for &r in grid {
        if !(r >= 0.0) {
            return Err(Error::domain(
                "ode_residuals",
                r,
                "grid radius must be >= 0",
            ));
        }
        let piece = &sol.pieces()[sol.piece_index(r)];
        let e = piece.eval(sol.params(), r)?;
        max_phi = max_phi.max(e.phi.abs());
        max_rho = max_rho.max(e.rho);
        max_dphi = max_dphi.max(e.dphi.abs());
        points.push(piece_residual(piece, sol, r)?);
    }
    let phi_vals: Vec<f64> = points.iter().map(|p| p.phi_eq).collect();
    let rho_vals: Vec<f64> = points.iter().map(|p| p.rho_eq).collect();
    Ok((
        ResidualSummary {
            phi_eq: Norms::from_values(&phi_vals),
            rho_eq: Norms::from_values(&rho_vals),
            max_abs_phi: max_phi,
            max_rho,
            max_abs_dphi: max_dphi,
        },
        points,
    ))
}

/// `n` uniform points on `[0, r_cut]` with anything within `1e-10` of a
/// breakpoint dropped.
pub fn residual_grid(sol: &PiecewiseSolution, r_cut: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| r_cut * i as f64 / (n - 1) as f64)
        .filter(|r| sol.breakpoints().iter().all(|b| (r - b).abs() > 1e-10))
        .collect()
}

/// Truncation radius for integrals over the plane: the last breakpoint plus
/// 40 decay lengths of the vacuum tail.
pub fn default_r_cut(sol: &PiecewiseSolution) -> f64 {
    let last = sol.breakpoints().last().copied().unwrap_or(0.0);
    let beta = sol.params().beta();
    let decay = if beta > 0.0 { 40.0 / beta } else { 40.0 };
    last + decay
}

/// Pieces clipped to `[0, r_cut]`, non-empty intervals only.
fn clipped(sol: &PiecewiseSolution, r_cut: f64) -> Vec<(f64, f64, Piece)> {
    sol.intervals()
        .into_iter()
        .filter(|(lo, _, _)| *lo < r_cut)
        .map(|(lo, hi, p)| (lo, hi.min(r_cut), *p))
        .collect()
}

/// Non-vacuum intervals; an unbounded one has infinite mass.
fn support(sol: &PiecewiseSolution) -> Result<Vec<(f64, f64, Piece)>> {
    let mut out = Vec::new();
    for (lo, hi, p) in sol.intervals() {
        if p.is_vacuum() {
            continue;
        }
        if !hi.is_finite() {
            return Err(Error::Usage(
                "density support is unbounded; integrals over the plane diverge".into(),
            ));
        }
        out.push((lo, hi, *p));
    }
    Ok(out)
}

/// `2 pi sum over intervals int f(piece, r) r dr`.
fn plane_integral<F>(
    intervals: &[(f64, f64, Piece)],
    quad: &Quadrature,
    sol: &PiecewiseSolution,
    f: F,
) -> Result<f64>
where
    F: Fn(&Piece, crate::solutions::PointEval) -> f64,
{
    let mut total = 0.0;
    for (lo, hi, piece) in intervals {
        let v = integrate_radial(
            |r| Ok(f(piece, piece.eval(sol.params(), r)?)),
            *lo,
            *hi,
            quad,
        )?;
        total += v;
    }
    Ok(2.0 * PI * total)
}

/// Stationary energy in two algebraically equal forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryEnergy {
    /// `2 pi int (eps/2 rho^2 - chi/2 rho phi) r dr`
    pub density_form: f64,
    /// `2 pi int (K/2) rho r dr`
    pub k_form: f64,
}

pub fn stationary_energy(sol: &PiecewiseSolution, quad: &Quadrature) -> Result<StationaryEnergy> {
    let p = *sol.params();
    let supp = support(sol)?;
    let density_form = plane_integral(&supp, quad, sol, |_, e| {
        0.5 * e.rho * (p.eps * e.rho - p.chi * e.phi)
    })?;
    let k_form = plane_integral(&supp, quad, sol, |piece, e| {
        0.5 * piece.k().unwrap_or(0.0) * e.rho
    })?;
    Ok(StationaryEnergy {
        density_form,
        k_form,
    })
}

pub fn mass(sol: &PiecewiseSolution, quad: &Quadrature) -> Result<f64> {
    plane_integral(&support(sol)?, quad, sol, |_, e| e.rho)
}

fn require_production(sol: &PiecewiseSolution, what: &'static str) -> Result<()> {
    if sol.params().a > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(what, sol.params().a, "requires a > 0"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityGap {
    /// `2 pi int (chi D/a phi'^2 + chi b/a phi^2) r dr` over `[0, r_cut]`
    pub lhs: f64,
    /// `2 pi int chi rho phi r dr`
    pub rhs: f64,
    pub gap: f64,
}

/// Both sides of the identity obtained by testing the `phi` equation
/// against `(chi/a) phi` over the plane.
pub fn phi_identity_gap(
    sol: &PiecewiseSolution,
    r_cut: f64,
    quad: &Quadrature,
) -> Result<IdentityGap> {
    require_production(sol, "phi_identity_gap")?;
    let p = *sol.params();
    let (wd, wb) = (p.chi * p.d / p.a, p.chi * p.b / p.a);
    let lhs = plane_integral(&clipped(sol, r_cut), quad, sol, |_, e| {
        wd * e.dphi * e.dphi + wb * e.phi * e.phi
    })?;
    let rhs = plane_integral(&support(sol)?, quad, sol, |_, e| p.chi * e.rho * e.phi)?;
    Ok(IdentityGap {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    })
}

/// Energy functionals evaluated on a stationary state (`u = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Functionals {
    /// `E+ - 2 pi int chi rho phi r dr`
    pub e: f64,
    pub e_plus: f64,
    /// `E` integrated as a single integrand, for cross-checking
    pub e_direct: f64,
}

pub fn appendix_functionals(
    sol: &PiecewiseSolution,
    r_cut: f64,
    quad: &Quadrature,
) -> Result<Functionals> {
    require_production(sol, "appendix_functionals")?;
    let p = *sol.params();
    let (wd, wb) = (p.chi * p.d / (2.0 * p.a), p.chi * p.b / (2.0 * p.a));
    let pieces = clipped(sol, r_cut);
    let e_plus = plane_integral(&pieces, quad, sol, |_, e| {
        0.5 * p.eps * e.rho * e.rho + wd * e.dphi * e.dphi + wb * e.phi * e.phi
    })?;
    let coupling = plane_integral(&support(sol)?, quad, sol, |_, e| p.chi * e.rho * e.phi)?;
    let e_direct = plane_integral(&pieces, quad, sol, |_, e| {
        0.5 * p.eps * e.rho * e.rho + wd * e.dphi * e.dphi + wb * e.phi * e.phi
            - p.chi * e.rho * e.phi
    })?;
    Ok(Functionals {
        e: e_plus - coupling,
        e_plus,
        e_direct,
    })
}

/// One-sided jumps (right minus left) at a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Continuity {
    pub r: f64,
    pub rho_jump: f64,
    pub phi_jump: f64,
    pub dphi_jump: f64,
    pub d2phi_jump: f64,
    pub transition: TransitionCheck,
}

pub fn continuity_report(sol: &PiecewiseSolution) -> Result<Vec<Continuity>> {
    let p = sol.params();
    sol.breakpoints()
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let l = sol.pieces()[i].eval(p, r)?;
            let rt = sol.pieces()[i + 1].eval(p, r)?;
            Ok(Continuity {
                r,
                rho_jump: rt.rho - l.rho,
                phi_jump: rt.phi - l.phi,
                dphi_jump: rt.dphi - l.dphi,
                d2phi_jump: rt.d2phi - l.d2phi,
                transition: transition_check(sol, r)?,
            })
        })
        .collect()
}

/// Sign conditions on a sampling grid. `phi >= rho` is reported only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignReport {
    pub min_rho: f64,
    pub min_phi: f64,
    pub phi_below_rho_points: usize,
    /// last piece is vacuum with `A1 = 0`
    pub decays_at_infinity: bool,
}

pub fn sign_report(sol: &PiecewiseSolution, grid: &[f64]) -> Result<SignReport> {
    let (mut min_rho, mut min_phi, mut below) = (f64::INFINITY, f64::INFINITY, 0);
    for &r in grid {
        let e = sol.eval(r)?;
        min_rho = min_rho.min(e.rho);
        min_phi = min_phi.min(e.phi);
        if e.phi < e.rho {
            below += 1;
        }
    }
    let decays = matches!(sol.pieces().last(), Some(Piece::Vacuum { a1, .. }) if *a1 == 0.0);
    Ok(SignReport {
        min_rho,
        min_phi,
        phi_below_rho_points: below,
        decays_at_infinity: decays,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub r_cut: Option<f64>,
    pub grid_points: usize,
    pub quad: Quadrature,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            r_cut: None,
            grid_points: 4096,
            quad: Quadrature::default(),
        }
    }
}

/// One named check: `value <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn le(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            passed: value <= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub r_cut: f64,
    pub grid_points: usize,
    pub residual_phi_eq: Norms,
    pub residual_rho_eq: Norms,
    pub continuity: Vec<Continuity>,
    pub energy_es: f64,
    pub energy_es_k_form: f64,
    pub identity: Option<IdentityGap>,
    pub functionals: Option<Functionals>,
    pub mass: f64,
    pub signs: SignReport,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Compact summary attached to constructed solutions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub energy: f64,
    pub mass: f64,
    pub identity_gap: Option<f64>,
    pub residual_phi_eq: f64,
    pub residual_rho_eq: f64,
    pub min_rho: f64,
    pub min_phi: f64,
    pub passed: bool,
    pub failed: Vec<String>,
}

impl From<&VerificationReport> for Certificate {
    fn from(r: &VerificationReport) -> Self {
        Certificate {
            energy: r.energy_es,
            mass: r.mass,
            identity_gap: r.identity.map(|g| g.gap),
            residual_phi_eq: r.residual_phi_eq.sup,
            residual_rho_eq: r.residual_rho_eq.sup,
            min_rho: r.signs.min_rho,
            min_phi: r.signs.min_phi,
            passed: r.passed,
            failed: r.failed_checks().map(|c| c.name.clone()).collect(),
        }
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Full verification: residuals, continuity, energies, identity, mass and
/// signs, each with its pass threshold.
pub fn verify(
    sol: &PiecewiseSolution,
    opts: &VerifyOptions,
    extra_points: &[f64],
) -> Result<VerificationReport> {
    let p = *sol.params();
    let r_cut = opts.r_cut.unwrap_or_else(|| default_r_cut(sol));
    let mut grid = residual_grid(sol, r_cut, opts.grid_points);
    grid.extend(
        extra_points
            .iter()
            .copied()
            .filter(|r| sol.breakpoints().iter().all(|b| (r - b).abs() > 1e-10)),
    );
    grid.sort_by(f64::total_cmp);

    let (res, _) = ode_residuals(sol, &grid)?;
    let continuity = continuity_report(sol)?;
    let energy = stationary_energy(sol, &opts.quad)?;
    let mass = mass(sol, &opts.quad)?;
    let signs = sign_report(sol, &grid)?;
    let (identity, functionals) = if p.a > 0.0 {
        (
            Some(phi_identity_gap(sol, r_cut, &opts.quad)?),
            Some(appendix_functionals(sol, r_cut, &opts.quad)?),
        )
    } else {
        (None, None)
    };

    let mut checks = vec![
        Check::le(
            "residual_phi_eq_sup",
            res.phi_eq.sup,
            1e-8 * (p.d + p.a + p.b) * (1.0 + res.max_abs_phi),
        ),
        Check::le(
            "residual_rho_eq_sup",
            res.rho_eq.sup,
            1e-8 * (p.eps + p.chi) * (1.0 + res.max_rho) * (1.0 + res.max_abs_dphi),
        ),
        Check::le(
            "energy_forms_rel_diff",
            rel_diff(energy.density_form, energy.k_form),
            1e-9,
        ),
    ];
    for c in &continuity {
        let rho_scale = 1.0 + res.max_rho;
        checks.push(Check::le(
            format!("rho_jump@{}", c.r),
            c.rho_jump.abs(),
            1e-8 * rho_scale,
        ));
        checks.push(Check {
            name: format!("transition@{}", c.r),
            value: c
                .transition
                .phi_jump
                .abs()
                .max(c.transition.dphi_jump.abs())
                .max(c.transition.d2phi_jump.abs()),
            threshold: c.transition.tol_c2,
            passed: c.transition.passed && c.transition.implication_holds,
        });
    }
    if let Some(id) = identity {
        checks.push(Check::le(
            "identity_gap",
            id.gap,
            1e-6 * (1.0 + id.rhs.abs()),
        ));
    }
    if let Some(f) = functionals {
        checks.push(Check::le(
            "functional_e_rel_diff",
            rel_diff(f.e, f.e_direct),
            1e-9,
        ));
    }
    checks.push(Check::le(
        "negative_min_rho",
        (-signs.min_rho).max(0.0),
        1e-8 * (1.0 + res.max_rho),
    ));
    checks.push(Check {
        name: "decays_at_infinity".into(),
        value: if signs.decays_at_infinity { 0.0 } else { 1.0 },
        threshold: 0.0,
        passed: signs.decays_at_infinity,
    });

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        r_cut,
        grid_points: grid.len(),
        residual_phi_eq: res.phi_eq,
        residual_rho_eq: res.rho_eq,
        continuity,
        energy_es: energy.density_form,
        energy_es_k_form: energy.k_form,
        identity,
        functionals,
        mass,
        signs,
        checks,
        passed,
    })
}
