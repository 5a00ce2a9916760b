use serde::Serialize;

use super::supercritical_scales;
use crate::error::{Error, Result, ScanRow, SearchTrace};
use crate::matching::{transition_check, vacuum_w1};
use crate::model::ModelParams;
use crate::roots::{bisect, brent};
use crate::solutions::{Piece, PiecewiseSolution};
use crate::specfun;

const SCAN_SAMPLES: usize = 256;
const WHAT: &str = "half bump solution";

/// Closed interval of admissible central densities. `lo = 0` only when
/// `b = 0`, in which case `rho0 = 0` itself is excluded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibleInterval {
    pub lo: f64,
    pub hi: f64,
}

impl AdmissibleInterval {
    pub fn is_empty(&self) -> bool {
        !(self.lo <= self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi && x > 0.0
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Central densities for which the profile stays nonnegative at the origin
/// (`K <= 0`), `c1 > 0`, and the density reaches zero inside the first lobe
/// of `J0`.
pub fn halfbump_admissible_interval(params: &ModelParams, phi0: f64) -> Result<AdmissibleInterval> {
    let (omega, beta) = supercritical_scales(params, WHAT)?;
    check_phi0(phi0)?;
    let (_, m) = specfun::j0_first_min();
    let kappa2 = (beta / omega).powi(2);
    let hi = params.chi * phi0 / params.eps;
    let lo = if kappa2 == 0.0 {
        0.0
    } else {
        kappa2 * hi / (m / (1.0 + m) + kappa2)
    };
    Ok(AdmissibleInterval { lo, hi })
}

fn check_phi0(phi0: f64) -> Result<()> {
    if phi0 > 0.0 && phi0.is_finite() {
        Ok(())
    } else {
        Err(Error::Validation {
            fields: vec![format!("phi0 = {phi0} must be positive and finite")],
        })
    }
}

/// `(K, c1, L)` for given central values.
fn central_coeffs(
    params: &ModelParams,
    omega: f64,
    beta: f64,
    rho0: f64,
    phi0: f64,
) -> (f64, f64, f64) {
    let k = params.eps * rho0 - params.chi * phi0;
    let c1 = phi0 + params.a * k / (params.d * params.eps * omega * omega);
    let l = -(k / params.eps) * (beta / omega).powi(2);
    (k, c1, l)
}

/// Smallest `r0 > 0` where the density of the centred profile vanishes,
/// i.e. `J0(omega r0) = -L/(rho0 - L)`.
pub fn halfbump_r0(rho0: f64, phi0: f64, params: &ModelParams) -> Result<f64> {
    let (omega, beta) = supercritical_scales(params, WHAT)?;
    check_phi0(phi0)?;
    if !(rho0 > 0.0 && rho0.is_finite()) {
        return Err(Error::Validation {
            fields: vec![format!("rho0 = {rho0} must be positive and finite")],
        });
    }
    let (_, _, l) = central_coeffs(params, omega, beta, rho0, phi0);
    if !(rho0 > l) {
        return Err(Error::Usage(format!(
            "rho0 = {rho0} must exceed L = {l} for the density to vanish"
        )));
    }
    let (xm, m) = specfun::j0_first_min();
    let j01 = specfun::j0_first_zero();
    let mut target = -l / (rho0 - l);
    if target < -m {
        if target >= -m - 1e-12 {
            target = -m;
        } else {
            return Err(Error::NoZero { target, neg_m: -m });
        }
    }
    if target >= 1.0 {
        return Err(Error::Usage(format!(
            "target {target} >= 1 has no positive root"
        )));
    }
    let g = |x: f64| specfun::jy01(x).0 - target;
    let x = if target >= 0.0 {
        bisect(g, 0.0, j01)
    } else {
        bisect(g, j01, xm)
    };
    Ok(x / omega)
}

/// Pieces of the centred profile and the tail-matching residual
/// `phi(r0) d_r K0(beta r0) - phi'(r0) K0(beta r0)`.
struct Trial {
    rho0: f64,
    k: f64,
    c1: f64,
    r0: f64,
    phi_r0: f64,
    residual: f64,
}

fn trial(params: &ModelParams, omega: f64, beta: f64, rho0: f64, phi0: f64) -> Result<Trial> {
    let (k, c1, _) = central_coeffs(params, omega, beta, rho0, phi0);
    let r0 = halfbump_r0(rho0, phi0, params)?;
    let e = Piece::Case3 { c1, c2: 0.0, k }.eval(params, r0)?;
    let residual = vacuum_w1(e.phi, e.dphi, r0, beta)?;
    Ok(Trial {
        rho0,
        k,
        c1,
        r0,
        phi_r0: e.phi,
        residual,
    })
}

/// Tail-matching residual as a function of the central density.
pub fn halfbump_residual(params: &ModelParams, rho0: f64, phi0: f64) -> Result<f64> {
    let (omega, beta) = supercritical_scales(params, WHAT)?;
    if beta == 0.0 {
        return Err(no_decay());
    }
    Ok(trial(params, omega, beta, rho0, phi0)?.residual)
}

fn no_decay() -> Error {
    Error::Regime(format!(
        "b = 0 leaves no decaying vacuum solution: there is no {WHAT} in this case"
    ))
}

/// Sign change of the residual between two scan samples of `rho0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootBracket {
    pub rho0_lo: f64,
    pub rho0_hi: f64,
    pub residual_lo: f64,
    pub residual_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfBumpSolution {
    pub rho0: f64,
    pub phi0: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub c1: f64,
    pub r0: f64,
    #[serde(rename = "A2")]
    pub a2: f64,
    /// tail-matching residual at the accepted root
    pub residual: f64,
    pub interval: AdmissibleInterval,
    pub brackets: Vec<RootBracket>,
    pub solution: PiecewiseSolution,
}

/// Scans the admissible interval, refines the smallest sign change of the
/// tail-matching residual, and assembles `[case 3 on [0, r0], vacuum]`.
pub fn construct_half_bump(params: &ModelParams, phi0: f64) -> Result<HalfBumpSolution> {
    let (omega, beta) = supercritical_scales(params, WHAT)?;
    check_phi0(phi0)?;
    if beta == 0.0 {
        return Err(no_decay());
    }
    let interval = halfbump_admissible_interval(params, phi0)?;
    if interval.is_empty() {
        return Err(Error::NotFound {
            reason: "admissible interval of central densities is empty".into(),
            trace: SearchTrace::Scan { rows: vec![] },
        });
    }

    // scan in s = rho0/hi so the root location does not depend on phi0
    let s_lo = interval.lo / interval.hi;
    let at = |s: f64| s_lo + (1.0 - s_lo) * s;
    let eval_s = |s: f64| trial(params, omega, beta, s * interval.hi, phi0);

    let mut rows = Vec::with_capacity(SCAN_SAMPLES);
    let mut samples = Vec::with_capacity(SCAN_SAMPLES);
    for i in 0..SCAN_SAMPLES {
        let s = if i + 1 == SCAN_SAMPLES {
            1.0
        } else {
            at(i as f64 / (SCAN_SAMPLES - 1) as f64)
        };
        let t = eval_s(s)?;
        rows.push(ScanRow {
            x: t.rho0,
            residual: t.residual,
        });
        samples.push((s, t.residual));
    }
    let mut brackets = Vec::new();
    let mut roots = Vec::new();
    for w in samples.windows(2) {
        let ((sa, ra), (sb, rb)) = (w[0], w[1]);
        if ra == 0.0 {
            roots.push(sa);
        }
        if ra * rb < 0.0 {
            brackets.push(RootBracket {
                rho0_lo: sa * interval.hi,
                rho0_hi: sb * interval.hi,
                residual_lo: ra,
                residual_hi: rb,
            });
            roots.push(brent(
                |s| eval_s(s).map(|t| t.residual).unwrap_or(f64::NAN),
                sa,
                sb,
            ));
        }
    }
    // K = 0 at the upper end is the trivial profile, not a root
    let Some(s) = roots.into_iter().find(|&s| s < 1.0) else {
        return Err(Error::NotFound {
            reason: "tail-matching residual has no sign change over the admissible interval".into(),
            trace: SearchTrace::Scan { rows },
        });
    };
    let t = eval_s(s)?;
    log::debug!(
        "half bump root rho0 = {} r0 = {} residual = {:e}",
        t.rho0,
        t.r0,
        t.residual
    );

    let k0 = specfun::k0(beta * t.r0)?.value;
    let a2 = t.phi_r0 / k0;
    let solution = PiecewiseSolution::new(
        *params,
        vec![t.r0],
        vec![
            Piece::Case3 {
                c1: t.c1,
                c2: 0.0,
                k: t.k,
            },
            Piece::Vacuum { a1: 0.0, a2 },
        ],
    )?;
    let out = HalfBumpSolution {
        rho0: t.rho0,
        phi0,
        k: t.k,
        c1: t.c1,
        r0: t.r0,
        a2,
        residual: t.residual,
        interval,
        brackets,
        solution,
    };
    check_invariants(&out, omega)?;
    Ok(out)
}

fn check_invariants(h: &HalfBumpSolution, omega: f64) -> Result<()> {
    let mut bad = Vec::new();
    if !(h.k < 0.0) {
        bad.push(format!("K = {} is not negative", h.k));
    }
    if !(h.c1 > 0.0) {
        bad.push(format!("c1 = {} is not positive", h.c1));
    }
    if !(h.a2 > 0.0) {
        bad.push(format!("A2 = {} is not positive", h.a2));
    }
    let rho_r0 = h.solution.pieces()[0].eval(h.solution.params(), h.r0)?.rho;
    if rho_r0.abs() > 1e-8 * h.rho0 {
        bad.push(format!("rho(r0) = {rho_r0:e} does not vanish"));
    }
    if h.r0 > specfun::j0_first_min().0 / omega * (1.0 + 4.0 * f64::EPSILON) {
        bad.push(format!("r0 = {} lies beyond the first lobe of J0", h.r0));
    }
    let tc = transition_check(&h.solution, h.r0)?;
    if !tc.passed {
        bad.push(format!("transition check failed at r0: {tc:?}"));
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::SpuriousRoot(bad.join("; ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> ModelParams {
        ModelParams::new(1.0, 1.0, 2.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn wrong_regime_is_rejected() {
        let deg = ModelParams::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let sub = ModelParams::new(1.0, 1.0, 0.5, 1.0, 1.0).unwrap();
        for q in [deg, sub] {
            let e = halfbump_admissible_interval(&q, 1.0).unwrap_err();
            assert!(
                matches!(e, Error::Regime(ref s) if s.contains("there is no half bump solution in this case"))
            );
            assert!(matches!(
                construct_half_bump(&q, 1.0),
                Err(Error::Regime(_))
            ));
        }
    }

    #[test]
    fn interval_for_reference_parameters() {
        let iv = halfbump_admissible_interval(&p(), 1.0).unwrap();
        // omega = beta = 1, so lo = 1 / (m/(1+m) + 1)
        let m = 0.402_759_395_702_553;
        assert!((iv.lo - 1.0 / (m / (1.0 + m) + 1.0)).abs() < 1e-14);
        assert_eq!(iv.hi, 1.0);
        assert!(!iv.is_empty());
    }

    #[test]
    fn zero_death_rate_interval_starts_at_zero() {
        let q = ModelParams::new(1.0, 2.0, 1.0, 0.0, 1.0).unwrap();
        let iv = halfbump_admissible_interval(&q, 1.5).unwrap();
        assert_eq!((iv.lo, iv.hi), (0.0, 3.0));
        assert!(!iv.contains(0.0));
        assert!(matches!(
            construct_half_bump(&q, 1.5),
            Err(Error::Regime(_))
        ));
    }

    #[test]
    fn r0_at_interval_ends() {
        let q = p();
        let iv = halfbump_admissible_interval(&q, 1.0).unwrap();
        let (xm, _) = specfun::j0_first_min();
        let r_lo = halfbump_r0(iv.lo, 1.0, &q).unwrap();
        assert!((r_lo - xm).abs() < 1e-7, "{r_lo}");
        let r_hi = halfbump_r0(iv.hi, 1.0, &q).unwrap();
        assert!((r_hi - specfun::j0_first_zero()).abs() < 1e-14);
        // below the interval the density never vanishes in the first lobe
        assert!(matches!(
            halfbump_r0(0.9 * iv.lo, 1.0, &q),
            Err(Error::NoZero { .. })
        ));
    }

    #[test]
    fn r0_solves_zero_equation() {
        let q = p();
        let iv = halfbump_admissible_interval(&q, 1.0).unwrap();
        let rho0 = iv.midpoint();
        let r0 = halfbump_r0(rho0, 1.0, &q).unwrap();
        let (_, _, l) = central_coeffs(&q, 1.0, 1.0, rho0, 1.0);
        let target = -l / (rho0 - l);
        assert!((specfun::j0(r0).unwrap().value - target).abs() < 1e-12);
    }

    #[test]
    fn residual_changes_sign_over_interval() {
        let q = p();
        let iv = halfbump_admissible_interval(&q, 1.0).unwrap();
        assert!(halfbump_residual(&q, iv.lo, 1.0).unwrap() < 0.0);
        assert!(halfbump_residual(&q, iv.hi, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn construction_meets_invariants() {
        let h = construct_half_bump(&p(), 1.0).unwrap();
        assert!(h.k < 0.0 && h.c1 > 0.0 && h.a2 > 0.0);
        assert!(h.residual.abs() <= 1e-11);
        assert!(!h.brackets.is_empty());
        assert!((h.k - (h.rho0 - 1.0)).abs() < 1e-15);
        match h.solution.pieces()[1] {
            Piece::Vacuum { a1, .. } => assert_eq!(a1, 0.0),
            _ => panic!("tail must be vacuum"),
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = construct_half_bump(&p(), 1.3).unwrap();
        let b = construct_half_bump(&p(), 1.3).unwrap();
        assert_eq!(a.solution.to_json().unwrap(), b.solution.to_json().unwrap());
    }
}
