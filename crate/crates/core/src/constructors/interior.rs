use serde::Serialize;

use super::{chebyshev_grid, supercritical_scales};
use crate::error::{Error, NewtonStep, Result, SearchTrace};
use crate::matching::{interior_cramer, transition_check, InteriorKind};
use crate::model::ModelParams;
use crate::roots::{bisect, newton2, NewtonOptions, NewtonOutcome};
use crate::solutions::{Piece, PiecewiseSolution};
use crate::specfun;

const WHAT: &str = "nontrivial solution";
const POSITIVITY_POINTS: usize = 2048;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InteriorBumpSolution {
    pub phi0: f64,
    pub r0: f64,
    pub r1: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub c1: f64,
    pub c2: f64,
    #[serde(rename = "A2")]
    pub a2: f64,
    pub residual_norm: f64,
    pub newton: Vec<NewtonStep>,
    pub solution: PiecewiseSolution,
}

struct Setup {
    omega: f64,
    beta: f64,
}

fn setup(params: &ModelParams) -> Result<Setup> {
    let (omega, beta) = supercritical_scales(params, WHAT)?;
    if beta == 0.0 {
        return Err(Error::Regime(format!(
            "b = 0 leaves no decaying vacuum solution: there is no {WHAT} in this case"
        )));
    }
    Ok(Setup { omega, beta })
}

/// Annulus piece started at `r0` from the inner vacuum profile `phi0 I0(beta r)`.
fn annulus_piece(params: &ModelParams, s: &Setup, r0: f64, phi0: f64) -> Result<Piece> {
    let i = specfun::i0(s.beta * r0)?;
    let k = -params.chi * phi0 * i.value;
    let offset = -params.a * k / (params.d * params.eps * s.omega * s.omega);
    let (c1, c2) = interior_cramer(
        InteriorKind::Case3,
        r0,
        s.omega,
        phi0 * i.value,
        phi0 * s.beta * i.deriv,
        offset,
    )?;
    Ok(Piece::Case3 { c1, c2, k })
}

fn residual_with(params: &ModelParams, s: &Setup, r0: f64, r1: f64, phi0: f64) -> Result<[f64; 2]> {
    if !(r0 > 0.0 && r1 > r0 && r1.is_finite()) {
        return Err(Error::Usage(format!("need 0 < r0 < r1, got ({r0}, {r1})")));
    }
    let piece = annulus_piece(params, s, r0, phi0)?;
    let k = piece.k().expect("case 3 piece");
    let e = piece.eval(params, r1)?;
    let kk = specfun::k0(s.beta * r1)?;
    Ok([
        e.phi + k / params.chi,
        e.dphi * kk.value - e.phi * s.beta * kk.deriv,
    ])
}

/// `(F1, F2)`: the value condition and the outer tail-matching condition at
/// `r1` for the annulus piece started at `r0`.
pub fn interior_residual(params: &ModelParams, r0: f64, r1: f64, phi0: f64) -> Result<[f64; 2]> {
    residual_with(params, &setup(params)?, r0, r1, phi0)
}

/// Damped Newton on `(F1, F2)` from `guess = (r0, r1)` with `phi0 = 1`.
pub fn construct_interior_bump(
    params: &ModelParams,
    guess: (f64, f64),
) -> Result<InteriorBumpSolution> {
    let s = setup(params)?;
    if !(guess.0 > 0.0 && guess.1 > guess.0 && guess.1.is_finite()) {
        return Err(Error::Usage(format!(
            "guess must satisfy 0 < r0 < r1, got ({}, {})",
            guess.0, guess.1
        )));
    }
    let phi0 = 1.0;
    let mut steps = Vec::new();
    let outcome = newton2(
        |x| residual_with(params, &s, x[0], x[1], phi0).ok(),
        [guess.0, guess.1],
        NewtonOptions::default(),
        |x, norm| {
            steps.push(NewtonStep {
                r0: x[0],
                r1: x[1],
                norm,
            })
        },
    );
    let [r0, r1] = match outcome {
        NewtonOutcome::Converged(x) => x,
        NewtonOutcome::Failed(why) => {
            return Err(Error::NotFound {
                reason: format!("Newton iteration failed: {why}"),
                trace: SearchTrace::Newton { steps },
            })
        }
    };
    let f = residual_with(params, &s, r0, r1, phi0)?;
    let piece = annulus_piece(params, &s, r0, phi0)?;
    let (k, c1, c2) = match piece {
        Piece::Case3 { c1, c2, k } => (k, c1, c2),
        _ => unreachable!(),
    };
    let a2 = -k / (params.chi * specfun::k0(s.beta * r1)?.value);
    let solution = PiecewiseSolution::new(
        *params,
        vec![r0, r1],
        vec![
            Piece::Vacuum { a1: phi0, a2: 0.0 },
            piece,
            Piece::Vacuum { a1: 0.0, a2 },
        ],
    )?;
    let out = InteriorBumpSolution {
        phi0,
        r0,
        r1,
        k,
        c1,
        c2,
        a2,
        residual_norm: f[0].hypot(f[1]),
        newton: steps,
        solution,
    };
    check_invariants(&out)?;
    Ok(out)
}

fn check_invariants(b: &InteriorBumpSolution) -> Result<()> {
    let p = b.solution.params();
    let piece = b.solution.pieces()[1];
    let mut bad = Vec::new();
    if !(b.k < 0.0) {
        bad.push(format!("K = {} is not negative", b.k));
    }
    if !(b.a2 > 0.0) {
        bad.push(format!("A2 = {} is not positive", b.a2));
    }
    let d0 = piece.eval(p, b.r0)?.dphi;
    let d1 = piece.eval(p, b.r1)?.dphi;
    if !(d0 > 0.0 && d1 < 0.0) {
        bad.push(format!(
            "sign conditions fail: phi'(r0) = {d0}, phi'(r1) = {d1}"
        ));
    }
    let grid = chebyshev_grid(b.r0, b.r1, POSITIVITY_POINTS);
    let interior = &grid[1..grid.len() - 1];
    if let Some(&r) = interior
        .iter()
        .find(|&&r| piece.eval(p, r).map_or(true, |e| !(e.rho > 0.0)))
    {
        bad.push(format!("density is not positive at r = {r}"));
    }
    for r in [b.r0, b.r1] {
        let tc = transition_check(&b.solution, r)?;
        if !tc.passed {
            bad.push(format!("transition check failed at {r}: {tc:?}"));
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::SpuriousRoot(bad.join("; ")))
    }
}

/// First radius `r1 > r0` where the annulus profile returns to the
/// transition value, and the tail-matching residual there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstReturn {
    pub r0: f64,
    pub r1: Option<f64>,
    pub f2: Option<f64>,
}

/// For each `r0`, locates the first zero of `F1(r0, .)` on
/// `(r0, r0 + r1_span]` and reports `F2` there. An interior bump needs
/// `F2 = 0` at such a return, so a scan without sign change of `F2` rules
/// out roots near the sampled `r0`.
pub fn interior_first_return_scan(
    params: &ModelParams,
    r0_values: &[f64],
    r1_span: f64,
) -> Result<Vec<FirstReturn>> {
    let s = setup(params)?;
    let steps = 2000;
    r0_values
        .iter()
        .map(|&r0| {
            let f1 = |r1: f64| residual_with(params, &s, r0, r1, 1.0).map(|f| f[0]);
            let h = r1_span / steps as f64;
            let mut prev_r = r0 + 1e-9 * r0.max(1.0);
            let mut prev = f1(prev_r)?;
            for i in 1..=steps {
                let r = r0 + h * i as f64;
                let cur = f1(r)?;
                if prev * cur < 0.0 {
                    let r1 = bisect(|x| f1(x).unwrap_or(f64::NAN), prev_r, r);
                    let f2 = residual_with(params, &s, r0, r1, 1.0)?[1];
                    return Ok(FirstReturn {
                        r0,
                        r1: Some(r1),
                        f2: Some(f2),
                    });
                }
                prev = cur;
                prev_r = r;
            }
            Ok(FirstReturn {
                r0,
                r1: None,
                f2: None,
            })
        })
        .collect()
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
            let e = construct_interior_bump(&q, (1.0, 3.0)).unwrap_err();
            assert!(
                matches!(e, Error::Regime(ref s) if s.contains("there is no nontrivial solution in this case"))
            );
        }
    }

    #[test]
    fn residual_starts_from_matched_inner_trace() {
        // F1 at r1 -> r0 is phi0 I0(beta r0) + K/chi = 0
        let f = interior_residual(&p(), 1.0, 1.0 + 1e-9, 1.0).unwrap();
        assert!(f[0].abs() < 1e-8, "{f:?}");
    }

    #[test]
    fn residual_is_linear_in_amplitude() {
        let a = interior_residual(&p(), 0.7, 3.1, 1.0).unwrap();
        let b = interior_residual(&p(), 0.7, 3.1, 4.0).unwrap();
        for i in 0..2 {
            assert!((b[i] - 4.0 * a[i]).abs() <= 1e-13 * (1.0 + b[i].abs()));
        }
    }

    #[test]
    fn bad_guess_is_a_usage_error() {
        assert!(matches!(
            construct_interior_bump(&p(), (2.0, 1.0)),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn failed_newton_reports_trace() {
        match construct_interior_bump(&p(), (1.0, 4.0)) {
            Err(Error::NotFound {
                trace: SearchTrace::Newton { steps },
                ..
            }) => {
                assert!(!steps.is_empty());
                assert_eq!((steps[0].r0, steps[0].r1), (1.0, 4.0));
            }
            Err(Error::SpuriousRoot(_)) | Ok(_) => {}
            Err(e) => panic!("unexpected {e}"),
        }
    }
}
