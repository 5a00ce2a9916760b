use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{classify, ModelParams, RegimeKind};
use crate::solutions::Piece;
use crate::specfun;

/// Configurations whose would-be bump is ruled out in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario")]
pub enum Scenario {
    /// density `rho0` and concentration `phi0` at the origin, degenerate regime
    HalfBumpCase1 {
        rho0: f64,
        phi0: f64,
    },
    /// same, subcritical regime
    HalfBumpCase2 {
        rho0: f64,
        phi0: f64,
    },
    /// density touching zero at the origin with constant `k < 0`
    TouchingZeroCase1 {
        k: f64,
    },
    TouchingZeroCase2 {
        k: f64,
    },
    TouchingZeroCase3 {
        k: f64,
    },
    /// bump with `phi'(r0) = 0` at its inner edge
    SymmetricInterior,
}

impl Scenario {
    fn regime(&self) -> Option<RegimeKind> {
        match self {
            Scenario::HalfBumpCase1 { .. } | Scenario::TouchingZeroCase1 { .. } => {
                Some(RegimeKind::Degenerate)
            }
            Scenario::HalfBumpCase2 { .. } | Scenario::TouchingZeroCase2 { .. } => {
                Some(RegimeKind::Subcritical)
            }
            Scenario::TouchingZeroCase3 { .. } => Some(RegimeKind::Supercritical),
            Scenario::SymmetricInterior => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeOptions {
    pub r_max: f64,
    pub points: usize,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            r_max: 50.0,
            points: 2001,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub scenario: Scenario,
    pub params: ModelParams,
    pub r_max: f64,
    pub points: usize,
    /// the would-be profile, when the scenario has one
    pub piece: Option<Piece>,
    pub min_rho: Option<f64>,
    pub argmin_r: Option<f64>,
    pub nondecreasing: Option<bool>,
    /// minimum of `rho` over grid points with `r > 0`
    pub min_rho_positive_r: Option<f64>,
    /// largest gap between the piece evaluation and the explicit formula
    pub formula_gap: Option<f64>,
    /// minimum of `d_r I0(beta r)` over the sample points
    pub min_i0_slope: Option<f64>,
    pub certified: bool,
    pub message: String,
}

fn mismatch(s: &Scenario, got: RegimeKind) -> Error {
    Error::Usage(format!(
        "scenario {s:?} does not apply to a {got:?} parameter set"
    ))
}

/// Builds the would-be profile for `scenario` and checks the mechanism that
/// rules it out on a uniform grid of `[0, r_max]`.
pub fn probe_nonexistence(
    scenario: Scenario,
    params: &ModelParams,
    opts: ProbeOptions,
) -> Result<ProbeReport> {
    let regime = classify(params)?;
    if let Some(kind) = scenario.regime() {
        if kind != regime.kind {
            return Err(mismatch(&scenario, regime.kind));
        }
    }
    if !(opts.r_max > 0.0 && opts.r_max.is_finite()) || opts.points < 3 {
        return Err(Error::Usage(format!(
            "probe grid needs r_max > 0 and at least 3 points (got {}, {})",
            opts.r_max, opts.points
        )));
    }
    let grid: Vec<f64> = (0..opts.points)
        .map(|i| opts.r_max * i as f64 / (opts.points - 1) as f64)
        .collect();
    let (d, chi, a, eps) = (params.d, params.chi, params.a, params.eps);
    let mut report = ProbeReport {
        scenario,
        params: *params,
        r_max: opts.r_max,
        points: opts.points,
        piece: None,
        min_rho: None,
        argmin_r: None,
        nondecreasing: None,
        min_rho_positive_r: None,
        formula_gap: None,
        min_i0_slope: None,
        certified: false,
        message: String::new(),
    };

    let need_neg = |k: f64| -> Result<()> {
        if k < 0.0 && k.is_finite() {
            Ok(())
        } else {
            Err(Error::Usage(format!("scenario requires K < 0, got {k}")))
        }
    };

    // (piece, explicit rho formula)
    let (piece, formula): (Piece, Box<dyn Fn(f64) -> Result<f64>>) = match scenario {
        Scenario::HalfBumpCase1 { rho0, phi0 } | Scenario::HalfBumpCase2 { rho0, phi0 } => {
            if !(rho0 > 0.0 && phi0 > 0.0) {
                return Err(Error::Usage(
                    "scenario requires rho0 > 0 and phi0 > 0".into(),
                ));
            }
            let k = eps * rho0 - chi * phi0;
            if k > 0.0 {
                return Err(Error::Usage(format!(
                    "central values give K = {k} > 0, which the density equation excludes"
                )));
            }
            if let Scenario::HalfBumpCase1 { .. } = scenario {
                let coef = -chi * a * k / (4.0 * d * eps * eps);
                (
                    Piece::Case1 {
                        c1: 0.0,
                        c2: phi0,
                        k,
                    },
                    Box::new(move |r: f64| Ok(rho0 + coef * r * r)),
                )
            } else {
                let xi = regime.freq.expect("subcritical frequency");
                let c1 = phi0 - a * k / (d * eps * xi * xi);
                (
                    Piece::Case2 { c1, c2: 0.0, k },
                    Box::new(move |r: f64| {
                        Ok(rho0 + chi * c1 * (specfun::i0(xi * r)?.value - 1.0) / eps)
                    }),
                )
            }
        }
        Scenario::TouchingZeroCase1 { k } => {
            need_neg(k)?;
            let coef = -chi * a * k / (4.0 * d * eps * eps);
            (
                Piece::Case1 {
                    c1: 0.0,
                    c2: -k / chi,
                    k,
                },
                Box::new(move |r: f64| Ok(coef * r * r)),
            )
        }
        Scenario::TouchingZeroCase2 { k } => {
            need_neg(k)?;
            let xi = regime.freq.expect("subcritical frequency");
            let c1 = -k / chi - a * k / (d * eps * xi * xi);
            (
                Piece::Case2 { c1, c2: 0.0, k },
                Box::new(move |r: f64| Ok(chi * c1 * (specfun::i0(xi * r)?.value - 1.0) / eps)),
            )
        }
        Scenario::TouchingZeroCase3 { k } => {
            need_neg(k)?;
            let omega = regime.freq.expect("supercritical frequency");
            let c1 = -k / chi + a * k / (d * eps * omega * omega);
            let coef = -chi * a * k / (d * eps * eps * omega * omega) + k / eps;
            (
                Piece::Case3 { c1, c2: 0.0, k },
                Box::new(move |r: f64| Ok(coef * (1.0 - specfun::j0(omega * r)?.value))),
            )
        }
        Scenario::SymmetricInterior => {
            let beta = params.beta();
            if beta == 0.0 {
                return Err(Error::Usage(
                    "symmetric interior probe needs b > 0 so that the vacuum solutions are I0 and K0".into(),
                ));
            }
            let mut min_slope = f64::INFINITY;
            for i in 1..=100 {
                let r = opts.r_max * i as f64 / 100.0;
                min_slope = min_slope.min(beta * specfun::i0(beta * r)?.deriv);
            }
            report.min_i0_slope = Some(min_slope);
            report.certified = min_slope > 0.0;
            report.message = if report.certified {
                "d_r I0(beta r) > 0 at every sample, so phi'(r0) = 0 forces A1 = 0; boundedness at the origin forces A2 = 0, hence phi = 0 and rho = 0".into()
            } else {
                "d_r I0(beta r) failed to stay positive on the samples".into()
            };
            return Ok(report);
        }
    };

    let mut rho = Vec::with_capacity(grid.len());
    let mut gap = 0.0f64;
    for &r in &grid {
        let e = piece.eval(params, r)?;
        let f = formula(r)?;
        gap = gap.max((e.rho - f).abs() / (1.0 + f.abs()));
        rho.push(e.rho);
    }
    let (imin, &min_rho) = rho
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty grid");
    let nondecreasing = rho.windows(2).all(|w| w[1] >= w[0]);
    let min_pos = rho[1..].iter().copied().fold(f64::INFINITY, f64::min);
    report.piece = Some(piece);
    report.min_rho = Some(min_rho);
    report.argmin_r = Some(grid[imin]);
    report.nondecreasing = Some(nondecreasing);
    report.min_rho_positive_r = Some(min_pos);
    report.formula_gap = Some(gap);
    let formula_ok = gap <= 1e-12;

    match scenario {
        Scenario::HalfBumpCase1 { rho0, .. } | Scenario::HalfBumpCase2 { rho0, .. } => {
            let at_origin = imin == 0 && (rho[0] - rho0).abs() <= 1e-12 * (1.0 + rho0);
            report.certified = formula_ok && at_origin && nondecreasing;
            report.message = if report.certified {
                format!("min rho = rho0 = {rho0} at r = 0 and rho is nondecreasing, so the density never vanishes")
            } else {
                "density profile did not show the expected monotone growth".into()
            };
        }
        _ => {
            report.certified = formula_ok && min_pos > 0.0 && rho[0].abs() <= 1e-14;
            report.message = if report.certified {
                "rho = 0 only at r = 0 and rho > 0 at every other grid point, so the bump never closes".into()
            } else {
                "density profile did not stay positive away from the origin".into()
            };
        }
    }
    Ok(report)
}
