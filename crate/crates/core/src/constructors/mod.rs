//! Constructions of the two nontrivial families (a bump centred at the
//! origin and a bump on an annulus) and numerical certificates for the
//! configurations that admit no bump.

mod half_bump;
mod interior;
mod probe;

pub use half_bump::{
    construct_half_bump, halfbump_admissible_interval, halfbump_r0, halfbump_residual,
    AdmissibleInterval, HalfBumpSolution, RootBracket,
};
pub use interior::{
    construct_interior_bump, interior_first_return_scan, interior_residual, FirstReturn,
    InteriorBumpSolution,
};
pub use probe::{probe_nonexistence, ProbeOptions, ProbeReport, Scenario};

use crate::error::{Error, Result};
use crate::model::{classify, ModelParams, RegimeKind};

/// `(omega, beta)` for a supercritical parameter set with `b > 0`.
fn supercritical_scales(params: &ModelParams, what: &str) -> Result<(f64, f64)> {
    let regime = classify(params)?;
    if regime.kind != RegimeKind::Supercritical {
        return Err(Error::Regime(format!(
            "{what} requires a supercritical parameter set, got {:?}: there is no {what} in this case",
            regime.kind
        )));
    }
    let omega = regime.freq.expect("supercritical regime has a frequency");
    Ok((omega, params.beta()))
}

/// Chebyshev points of the second kind on `[lo, hi]`, endpoints included.
pub(crate) fn chebyshev_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| {
            let t = (std::f64::consts::PI * i as f64 / (n - 1) as f64).cos();
            0.5 * (lo + hi) - 0.5 * (hi - lo) * t
        })
        .collect()
}
