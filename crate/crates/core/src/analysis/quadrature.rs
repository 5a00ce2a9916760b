use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Settings for adaptive Simpson integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 40,
        }
    }
}

/// Initial panels; each is refined independently.
const PANELS: usize = 16;

impl Quadrature {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) || self.max_depth < 10 {
            return Err(Error::Usage(format!(
                "quadrature needs positive tolerances and max_depth >= 10, got {self:?}"
            )));
        }
        Ok(())
    }

    /// `int_lo^hi f(x) dx` to `max(abs_tol, rel_tol |I|)`.
    pub fn integrate<F>(&self, mut f: F, lo: f64, hi: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        self.validate()?;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Usage(format!(
                "bad integration interval [{lo}, {hi}]"
            )));
        }
        // composite Simpson on 2*PANELS intervals, for the tolerance scale
        let n = 2 * PANELS;
        let h = (hi - lo) / n as f64;
        let mut fx = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let x = if i == n { hi } else { lo + i as f64 * h };
            fx.push(check_finite(f(x)?, x)?);
        }
        let mut coarse = 0.0;
        for p in 0..PANELS {
            coarse += h / 3.0 * (fx[2 * p] + 4.0 * fx[2 * p + 1] + fx[2 * p + 2]);
        }
        let tol = self.abs_tol.max(self.rel_tol * coarse.abs());

        let mut total = 0.0;
        for p in 0..PANELS {
            let a = lo + 2.0 * p as f64 * h;
            let b = if p + 1 == PANELS { hi } else { a + 2.0 * h };
            let (fa, fm, fb) = (fx[2 * p], fx[2 * p + 1], fx[2 * p + 2]);
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            total += self.refine(&mut f, a, b, fa, fm, fb, whole, tol / PANELS as f64, 0)?;
        }
        Ok(total)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine<F>(
        &self,
        f: &mut F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let flm = check_finite(f(lm)?, lm)?;
        let frm = check_finite(f(rm)?, rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        // round-off floor: differences below a few ulps of the panel sum
        let floor = 64.0 * f64::EPSILON * (left.abs() + right.abs());
        if delta.abs() <= 15.0 * tol.max(floor) {
            return Ok(left + right + delta / 15.0);
        }
        if depth + 1 >= self.max_depth {
            return Err(Error::Accuracy {
                lo: a,
                hi: b,
                estimate: left + right,
            });
        }
        Ok(
            self.refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?
                + self.refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?,
        )
    }
}

fn check_finite(v: f64, x: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain("quadrature integrand", x, "non-finite value"))
    }
}

/// `int_lo^hi f(r) r dr`, the radial part of an integral over the plane.
pub fn integrate_radial<F>(mut f: F, lo: f64, hi: f64, quad: &Quadrature) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    quad.integrate(|r| Ok(f(r)? * r), lo, hi)
}
