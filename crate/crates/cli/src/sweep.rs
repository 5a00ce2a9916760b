//! Parameter sweeps over `(a, b)` with the remaining parameters fixed.

use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use vasculo_core::analysis::Certificate;
use vasculo_core::constructors::{construct_half_bump, construct_interior_bump};
use vasculo_core::{classify, Error, ModelParams, RegimeKind};

use crate::commands::certify;
use crate::{
    emit, exit_code, read_params, Failure, SweepArgs, SweepKind, EXIT_OK, EXIT_VALIDATION,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellOutcome {
    /// `ok`, `not_found`, `regime`, `invalid` or `failed`
    pub status: String,
    pub exit_code: i32,
    pub message: Option<String>,
    pub r0: Option<f64>,
    pub r1: Option<f64>,
    pub energy: Option<f64>,
    pub certified: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub a: f64,
    pub b: f64,
    pub regime: Option<RegimeKind>,
    pub halfbump: Option<CellOutcome>,
    pub interiorbump: Option<CellOutcome>,
}

fn status_name(code: i32) -> &'static str {
    match code {
        0 => "ok",
        2 => "invalid",
        3 => "not_found",
        4 => "regime",
        _ => "failed",
    }
}

fn failed(e: &Error) -> CellOutcome {
    let code = exit_code(e);
    CellOutcome {
        status: status_name(code).into(),
        exit_code: code,
        message: Some(e.to_string()),
        r0: None,
        r1: None,
        energy: None,
        certified: None,
    }
}

fn succeeded(r0: f64, r1: Option<f64>, cert: &Certificate) -> CellOutcome {
    CellOutcome {
        status: "ok".into(),
        exit_code: EXIT_OK,
        message: None,
        r0: Some(r0),
        r1,
        energy: Some(cert.energy),
        certified: Some(cert.passed),
    }
}

#[derive(Serialize)]
struct CellFile<'a, T: Serialize> {
    #[serde(flatten)]
    construction: &'a T,
    certificate: &'a Certificate,
}

fn write_cell<T: Serialize>(
    dir: Option<&Path>,
    name: &str,
    doc: &CellFile<'_, T>,
) -> Result<(), Error> {
    if let Some(dir) = dir {
        let text = serde_json::to_string_pretty(doc)?;
        fs::write(dir.join(name), text + "\n")
            .map_err(|e| Error::Usage(format!("cannot write {name}: {e}")))?;
    }
    Ok(())
}

/// One cell of the sweep; errors are recorded in the row, not returned.
pub fn run_cell(base: &ModelParams, a: f64, b: f64, args: &SweepArgs) -> SweepRow {
    let p = ModelParams { a, b, ..*base };
    let regime = classify(&p).map(|r| r.kind).ok();
    let dir = args.out_dir.as_deref();
    let tag = format!("a{a}_b{b}");

    let halfbump = matches!(args.kind, SweepKind::Halfbump | SweepKind::Both).then(|| {
        let attempt = || -> Result<CellOutcome, Error> {
            let h = construct_half_bump(&p, args.phi0)?;
            let cert =
                certify(&h.solution, Default::default()).map_err(|f| Error::Usage(f.message))?;
            write_cell(
                dir,
                &format!("halfbump_{tag}.json"),
                &CellFile {
                    construction: &h,
                    certificate: &cert,
                },
            )?;
            Ok(succeeded(h.r0, None, &cert))
        };
        attempt().unwrap_or_else(|e| failed(&e))
    });
    let interiorbump = matches!(args.kind, SweepKind::Interiorbump | SweepKind::Both).then(|| {
        let attempt = || -> Result<CellOutcome, Error> {
            let s = construct_interior_bump(&p, (args.guess[0], args.guess[1]))?;
            let cert =
                certify(&s.solution, Default::default()).map_err(|f| Error::Usage(f.message))?;
            write_cell(
                dir,
                &format!("interiorbump_{tag}.json"),
                &CellFile {
                    construction: &s,
                    certificate: &cert,
                },
            )?;
            Ok(succeeded(s.r0, Some(s.r1), &cert))
        };
        attempt().unwrap_or_else(|e| failed(&e))
    });
    SweepRow {
        a,
        b,
        regime,
        halfbump,
        interiorbump,
    }
}

/// Cells in grid order (`a` outer, `b` inner) regardless of scheduling.
pub fn sweep_rows(base: &ModelParams, args: &SweepArgs) -> Result<Vec<SweepRow>, Failure> {
    let cells: Vec<(f64, f64)> = args
        .a
        .iter()
        .flat_map(|&a| args.b.iter().map(move |&b| (a, b)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .map_err(|e| Failure::new(EXIT_VALIDATION, format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        cells
            .par_iter()
            .map(|&(a, b)| run_cell(base, a, b, args))
            .collect()
    }))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

fn csv_table(rows: &[SweepRow]) -> String {
    let mut s = String::from("a,b,regime,halfbump,r0,energy,interiorbump,ir0,ir1\n");
    for r in rows {
        let regime = r
            .regime
            .map(|k| format!("{k:?}").to_lowercase())
            .unwrap_or_else(|| "invalid".into());
        let (hs, hr0, he) = match &r.halfbump {
            Some(c) => (c.status.as_str(), opt(c.r0), opt(c.energy)),
            None => ("", String::new(), String::new()),
        };
        let (is, ir0, ir1) = match &r.interiorbump {
            Some(c) => (c.status.as_str(), opt(c.r0), opt(c.r1)),
            None => ("", String::new(), String::new()),
        };
        s += &format!(
            "{},{},{regime},{hs},{hr0},{he},{is},{ir0},{ir1}\n",
            r.a, r.b
        );
    }
    s
}

pub(crate) fn run(args: &SweepArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let base = read_params(&args.params)?;
    if args.guess.len() != 2 {
        return Err(Failure::new(
            EXIT_VALIDATION,
            "--guess takes two values r0,r1",
        ));
    }
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|e| {
            Failure::new(
                EXIT_VALIDATION,
                format!("cannot create {}: {e}", dir.display()),
            )
        })?;
    }
    let rows = sweep_rows(&base, args)?;
    if let Some(path) = &args.csv {
        fs::write(path, csv_table(&rows)).map_err(|e| {
            Failure::new(
                EXIT_VALIDATION,
                format!("cannot write {}: {e}", path.display()),
            )
        })?;
    }
    emit(&rows, args.json.as_deref(), out)?;
    Ok(EXIT_OK)
}
