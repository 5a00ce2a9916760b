//! Piecewise analytic representation of `(rho, phi)` on `[0, inf)`.
//!
//! Each piece is one closed-form family:
//!
//! * vacuum (`rho = 0`): `phi = A1 I0(beta r) + A2 K0(beta r)`, or
//!   `A1 + A2 ln r` when `beta = 0`;
//! * case 1: `phi = c1 ln r + c2 - aK/(4 D eps) r^2`;
//! * case 2: `phi = c1 I0(xi r) + c2 K0(xi r) + aK/(D eps xi^2)`;
//! * case 3: `phi = c1 J0(omega r) + c2 Y0(omega r) - aK/(D eps omega^2)`;
//!
//! and on every non-vacuum piece `rho = (chi phi + K)/eps`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{classify, ModelParams, RegimeKind};
use crate::specfun;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Piece {
    Vacuum {
        #[serde(rename = "A1")]
        a1: f64,
        #[serde(rename = "A2")]
        a2: f64,
    },
    Case1 {
        c1: f64,
        c2: f64,
        #[serde(rename = "K")]
        k: f64,
    },
    Case2 {
        c1: f64,
        c2: f64,
        #[serde(rename = "K")]
        k: f64,
    },
    Case3 {
        c1: f64,
        c2: f64,
        #[serde(rename = "K")]
        k: f64,
    },
}

/// `(rho, phi, phi', phi'')` at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PointEval {
    pub rho: f64,
    pub phi: f64,
    pub dphi: f64,
    pub d2phi: f64,
}

pub fn rho_from_phi(phi: f64, k: f64, params: &ModelParams) -> f64 {
    (params.chi * phi + k) / params.eps
}

impl Piece {
    pub fn is_vacuum(&self) -> bool {
        matches!(self, Piece::Vacuum { .. })
    }

    /// Integration constant of `eps rho = chi phi + K`; `None` on vacuum.
    pub fn k(&self) -> Option<f64> {
        match *self {
            Piece::Vacuum { .. } => None,
            Piece::Case1 { k, .. } | Piece::Case2 { k, .. } | Piece::Case3 { k, .. } => Some(k),
        }
    }

    /// Coefficient of the kernel that is unbounded at `r = 0`.
    pub fn singular_coeff(&self) -> f64 {
        match *self {
            Piece::Vacuum { a2, .. } => a2,
            Piece::Case1 { c1, .. } => c1,
            Piece::Case2 { c2, .. } | Piece::Case3 { c2, .. } => c2,
        }
    }

    pub fn regime(&self) -> Option<RegimeKind> {
        match self {
            Piece::Vacuum { .. } => None,
            Piece::Case1 { .. } => Some(RegimeKind::Degenerate),
            Piece::Case2 { .. } => Some(RegimeKind::Subcritical),
            Piece::Case3 { .. } => Some(RegimeKind::Supercritical),
        }
    }

    /// Multiply every coefficient (including `K`) by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Piece {
        match *self {
            Piece::Vacuum { a1, a2 } => Piece::Vacuum {
                a1: a1 * lambda,
                a2: a2 * lambda,
            },
            Piece::Case1 { c1, c2, k } => Piece::Case1 {
                c1: c1 * lambda,
                c2: c2 * lambda,
                k: k * lambda,
            },
            Piece::Case2 { c1, c2, k } => Piece::Case2 {
                c1: c1 * lambda,
                c2: c2 * lambda,
                k: k * lambda,
            },
            Piece::Case3 { c1, c2, k } => Piece::Case3 {
                c1: c1 * lambda,
                c2: c2 * lambda,
                k: k * lambda,
            },
        }
    }

    /// Constant particular solution of the non-vacuum equation.
    pub fn offset(&self, params: &ModelParams) -> f64 {
        let forcing = params.a / (params.d * params.eps);
        match *self {
            Piece::Vacuum { .. } | Piece::Case1 { .. } => 0.0,
            Piece::Case2 { k, .. } => forcing * k / (-params.sigma()),
            Piece::Case3 { k, .. } => -forcing * k / params.sigma(),
        }
    }

    /// Evaluate the closed form of this piece at `r >= 0`, regardless of
    /// where the piece sits in a solution.
    pub fn eval(&self, params: &ModelParams, r: f64) -> Result<PointEval> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::domain(
                "Piece::eval",
                r,
                "radius must be finite and >= 0",
            ));
        }
        if r == 0.0 && self.singular_coeff() != 0.0 {
            return Err(Error::domain(
                "Piece::eval",
                r,
                "piece is unbounded at the origin",
            ));
        }
        let forcing = params.a / (params.d * params.eps);

        let (phi, dphi, sigma, source) = match *self {
            Piece::Vacuum { a1, a2 } => {
                let beta = params.beta();
                if beta == 0.0 {
                    let (l, dl) = if a2 == 0.0 {
                        (0.0, 0.0)
                    } else {
                        (r.ln(), 1.0 / r)
                    };
                    (a1 + a2 * l, a2 * dl, 0.0, 0.0)
                } else {
                    let (v, d) = modified_pair(a1, a2, beta, r)?;
                    (v, d, -beta * beta, 0.0)
                }
            }
            Piece::Case1 { c1, c2, k } => {
                let q = forcing * k;
                let (l, dl) = if c1 == 0.0 {
                    (0.0, 0.0)
                } else {
                    (r.ln(), 1.0 / r)
                };
                (
                    c1 * l + c2 - 0.25 * q * r * r,
                    c1 * dl - 0.5 * q * r,
                    0.0,
                    q,
                )
            }
            Piece::Case2 { c1, c2, k } => {
                let sigma = params.sigma();
                let xi = (-sigma).sqrt();
                let (v, d) = modified_pair(c1, c2, xi, r)?;
                (v + self.offset(params), d, sigma, forcing * k)
            }
            Piece::Case3 { c1, c2, k } => {
                let sigma = params.sigma();
                let omega = sigma.sqrt();
                let (v, d) = oscillatory_pair(c1, c2, omega, r)?;
                (v + self.offset(params), d, sigma, forcing * k)
            }
        };

        // phi'' + phi'/r + sigma phi + source = 0; at r = 0, phi'/r -> phi''(0).
        let d2phi = if r == 0.0 {
            -(sigma * phi + source) / 2.0
        } else {
            -dphi / r - sigma * phi - source
        };
        let rho = match self.k() {
            None => 0.0,
            Some(k) => rho_from_phi(phi, k, params),
        };
        Ok(PointEval {
            rho,
            phi,
            dphi,
            d2phi,
        })
    }
}

/// `c1 I0(s r) + c2 K0(s r)` and its r-derivative; zero coefficients are not
/// evaluated (keeps `I0` overflow and the `K0` pole out of unused terms).
fn modified_pair(c1: f64, c2: f64, s: f64, r: f64) -> Result<(f64, f64)> {
    let x = s * r;
    let (mut v, mut d) = (0.0, 0.0);
    if c1 != 0.0 {
        let i = specfun::i0(x)?;
        v += c1 * i.value;
        d += c1 * s * i.deriv;
    }
    if c2 != 0.0 {
        let k = specfun::k0(x)?;
        v += c2 * k.value;
        d += c2 * s * k.deriv;
    }
    Ok((v, d))
}

fn oscillatory_pair(c1: f64, c2: f64, s: f64, r: f64) -> Result<(f64, f64)> {
    let x = s * r;
    let (mut v, mut d) = (0.0, 0.0);
    if c1 != 0.0 {
        let j = specfun::j0(x)?;
        v += c1 * j.value;
        d += c1 * s * j.deriv;
    }
    if c2 != 0.0 {
        let y = specfun::y0(x)?;
        v += c2 * y.value;
        d += c2 * s * y.deriv;
    }
    Ok((v, d))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSolution")]
pub struct PiecewiseSolution {
    params: ModelParams,
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
}

#[derive(Deserialize)]
struct RawSolution {
    params: ModelParams,
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
}

impl TryFrom<RawSolution> for PiecewiseSolution {
    type Error = Error;

    fn try_from(raw: RawSolution) -> Result<Self> {
        PiecewiseSolution::new(raw.params, raw.breakpoints, raw.pieces)
    }
}

impl PiecewiseSolution {
    /// Checks the structural invariants: one more piece than breakpoints,
    /// strictly increasing positive breakpoints, alternating vacuum and
    /// non-vacuum pieces, piece kinds matching the regime of `params`, and a
    /// bounded first piece.
    ///
    /// Sign conditions and decay at infinity are properties of a particular
    /// solution and are reported by [`crate::analysis`] instead.
    pub fn new(params: ModelParams, breakpoints: Vec<f64>, pieces: Vec<Piece>) -> Result<Self> {
        let regime = classify(&params)?;
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::Usage(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                pieces.len()
            )));
        }
        let mut prev = 0.0;
        for &r in &breakpoints {
            if !(r.is_finite() && r > prev) {
                return Err(Error::Usage(format!(
                    "breakpoints must be finite, positive and strictly increasing (got {r} after {prev})"
                )));
            }
            prev = r;
        }
        for w in pieces.windows(2) {
            if w[0].is_vacuum() == w[1].is_vacuum() {
                return Err(Error::Usage(
                    "adjacent pieces must alternate between vacuum and non-vacuum".into(),
                ));
            }
        }
        for p in &pieces {
            if let Some(kind) = p.regime() {
                if kind != regime.kind {
                    return Err(Error::Regime(format!(
                        "{kind:?} piece in a {:?} parameter set",
                        regime.kind
                    )));
                }
            }
            let coeffs_finite = match *p {
                Piece::Vacuum { a1, a2 } => a1.is_finite() && a2.is_finite(),
                Piece::Case1 { c1, c2, k }
                | Piece::Case2 { c1, c2, k }
                | Piece::Case3 { c1, c2, k } => c1.is_finite() && c2.is_finite() && k.is_finite(),
            };
            if !coeffs_finite {
                return Err(Error::Usage("piece coefficients must be finite".into()));
            }
        }
        if pieces[0].singular_coeff() != 0.0 {
            return Err(Error::Usage(
                "the piece containing r = 0 must have a zero singular coefficient".into(),
            ));
        }
        Ok(PiecewiseSolution {
            params,
            breakpoints,
            pieces,
        })
    }

    /// The trivial solution `rho = phi = 0`.
    pub fn zero(params: ModelParams) -> Result<Self> {
        Self::new(params, vec![], vec![Piece::Vacuum { a1: 0.0, a2: 0.0 }])
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Index of the piece used at `r`; breakpoints belong to the right piece.
    pub fn piece_index(&self, r: f64) -> usize {
        self.breakpoints.partition_point(|&b| b <= r)
    }

    /// `(lo, hi, piece)` for every piece; the last `hi` is infinite.
    pub fn intervals(&self) -> Vec<(f64, f64, &Piece)> {
        let mut out = Vec::with_capacity(self.pieces.len());
        let mut lo = 0.0;
        for (i, p) in self.pieces.iter().enumerate() {
            let hi = self.breakpoints.get(i).copied().unwrap_or(f64::INFINITY);
            out.push((lo, hi, p));
            lo = hi;
        }
        out
    }

    pub fn eval(&self, r: f64) -> Result<PointEval> {
        if r < 0.0 || r.is_nan() {
            return Err(Error::domain("eval", r, "radius must be >= 0"));
        }
        self.pieces[self.piece_index(r)].eval(&self.params, r)
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(
            self.params,
            self.breakpoints.clone(),
            self.pieces.iter().map(|p| p.scaled(lambda)).collect(),
        )
    }

    /// Copy with one piece replaced; structural checks are re-run.
    pub fn with_piece(&self, index: usize, piece: Piece) -> Result<Self> {
        let mut pieces = self.pieces.clone();
        *pieces
            .get_mut(index)
            .ok_or_else(|| Error::Usage(format!("no piece {index}")))? = piece;
        Self::new(self.params, self.breakpoints.clone(), pieces)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
