//! Physical parameters and the three-way regime classification.
//!
//! The pressure law is fixed at `p(rho) = (eps/2) rho^2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of the stationary system. `alpha` and `delta` do not enter
/// the stationary equations and are carried for the energy functionals only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    #[serde(rename = "D")]
    pub d: f64,
    pub chi: f64,
    pub a: f64,
    pub b: f64,
    pub eps: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeKind {
    /// `a chi/(D eps) = beta^2`: logarithmic/polynomial interior solutions.
    Degenerate,
    /// `a chi/(D eps) < beta^2`: modified Bessel interior solutions at `xi r`.
    Subcritical,
    /// `a chi/(D eps) > beta^2`: oscillatory Bessel interior solutions at `omega r`.
    Supercritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub kind: RegimeKind,
    /// `xi` (subcritical) or `omega` (supercritical).
    pub freq: Option<f64>,
    /// `a chi/(D eps) - beta^2`.
    pub sigma: f64,
}

impl ModelParams {
    pub fn new(d: f64, chi: f64, a: f64, b: f64, eps: f64) -> Result<Self> {
        let p = ModelParams {
            d,
            chi,
            a,
            b,
            eps,
            alpha: 0.0,
            delta: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: ModelParams = serde_json::from_str(text)?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        let positive = [("D", self.d), ("chi", self.chi), ("eps", self.eps)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                bad.push(format!("{name} must be positive (got {v})"));
            }
        }
        let nonneg = [
            ("a", self.a),
            ("b", self.b),
            ("alpha", self.alpha),
            ("delta", self.delta),
        ];
        for (name, v) in nonneg {
            if !(v.is_finite() && v >= 0.0) {
                bad.push(format!("{name} must be nonnegative (got {v})"));
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation { fields: bad })
        }
    }

    /// Decay rate of the vacuum solutions, `b = D beta^2`.
    pub fn beta(&self) -> f64 {
        (self.b / self.d).sqrt()
    }

    /// `a chi/(D eps)`.
    pub fn production_ratio(&self) -> f64 {
        self.a * self.chi / (self.d * self.eps)
    }

    pub fn sigma(&self) -> f64 {
        self.production_ratio() - self.b / self.d
    }

    /// Half-width of the band around `sigma = 0` treated as degenerate.
    pub fn classification_tol(&self) -> f64 {
        1e-12 * (1.0 + self.production_ratio() + self.b / self.d)
    }
}

pub fn classify(params: &ModelParams) -> Result<Regime> {
    params.validate()?;
    let sigma = params.sigma();
    let tol = params.classification_tol();
    let regime = if sigma.abs() <= tol {
        Regime {
            kind: RegimeKind::Degenerate,
            freq: None,
            sigma,
        }
    } else if sigma < 0.0 {
        Regime {
            kind: RegimeKind::Subcritical,
            freq: Some((-sigma).sqrt()),
            sigma,
        }
    } else {
        Regime {
            kind: RegimeKind::Supercritical,
            freq: Some(sigma.sqrt()),
            sigma,
        }
    };
    Ok(regime)
}
