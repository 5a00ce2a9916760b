use std::io::Write;

use super::piece_residual;
use crate::error::{Error, Result};
use crate::solutions::PiecewiseSolution;

pub const PROFILE_HEADER: &str = "r,rho,phi,dphi,d2phi,res_phi_eq,res_rho_eq";

/// Writes `n` uniformly spaced rows on `[0, r_max]` as CSV.
pub fn write_profile_csv<W: Write>(
    sol: &PiecewiseSolution,
    r_max: f64,
    n: usize,
    mut out: W,
) -> Result<()> {
    if !(r_max > 0.0 && r_max.is_finite()) || n < 2 {
        return Err(Error::Usage(format!(
            "profile needs r_max > 0 and n >= 2 (got {r_max}, {n})"
        )));
    }
    let io = |e: std::io::Error| Error::Usage(format!("writing profile: {e}"));
    writeln!(out, "{PROFILE_HEADER}").map_err(io)?;
    for i in 0..n {
        let r = r_max * i as f64 / (n - 1) as f64;
        let piece = &sol.pieces()[sol.piece_index(r)];
        let e = piece.eval(sol.params(), r)?;
        let res = piece_residual(piece, sol, r)?;
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r, e.rho, e.phi, e.dphi, e.d2phi, res.phi_eq, res.rho_eq
        )
        .map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;

    #[test]
    fn header_and_row_count() {
        let p = ModelParams::new(1.0, 1.0, 2.0, 1.0, 1.0).unwrap();
        let sol = PiecewiseSolution::zero(p).unwrap();
        let mut buf = Vec::new();
        write_profile_csv(&sol, 10.0, 5, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], PROFILE_HEADER);
        assert_eq!(lines.len(), 6);
        assert!(lines[5].starts_with("1.0000000000000000e1,"));
    }

    #[test]
    fn rejects_bad_grid() {
        let p = ModelParams::new(1.0, 1.0, 2.0, 1.0, 1.0).unwrap();
        let sol = PiecewiseSolution::zero(p).unwrap();
        assert!(write_profile_csv(&sol, 0.0, 5, Vec::new()).is_err());
        assert!(write_profile_csv(&sol, 1.0, 1, Vec::new()).is_err());
    }
}
