use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use vasculo_core::analysis::{self, write_profile_csv, Certificate, Quadrature, VerifyOptions};
use vasculo_core::constructors::{self, ProbeOptions, Scenario};
use vasculo_core::{
    classify as classify_params, Error, ModelParams, PiecewiseSolution, RegimeKind,
};

use crate::{
    emit, read_params, CommonArgs, Failure, HalfbumpArgs, InteriorArgs, ProbeArgs, ProfileArgs,
    ScenarioName, TolArgs, VerifyArgs, EXIT_OK, EXIT_VALIDATION, EXIT_VERIFY,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyOutput {
    pub regime: RegimeKind,
    pub sigma: f64,
    pub beta: f64,
    pub freq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
}

pub fn classify_json(p: &ModelParams) -> vasculo_core::Result<ClassifyOutput> {
    let r = classify_params(p)?;
    Ok(ClassifyOutput {
        regime: r.kind,
        sigma: r.sigma,
        beta: p.beta(),
        freq: r.freq,
        omega: r.freq.filter(|_| r.kind == RegimeKind::Supercritical),
        xi: r.freq.filter(|_| r.kind == RegimeKind::Subcritical),
    })
}

pub(crate) fn classify(a: &CommonArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = read_params(&a.params)?;
    emit(&classify_json(&p)?, a.json.as_deref(), out)?;
    Ok(EXIT_OK)
}

pub(crate) fn quadrature(t: &TolArgs) -> Result<Quadrature, Failure> {
    let q = Quadrature {
        abs_tol: t.tol_abs,
        rel_tol: t.tol_rel,
        max_depth: t.tol_depth,
    };
    q.validate()?;
    Ok(q)
}

fn write_csv(sol: &PiecewiseSolution, prof: &ProfileArgs) -> Result<(), Failure> {
    let Some(path) = &prof.csv else {
        return Ok(());
    };
    let file = File::create(path).map_err(|e| {
        Failure::new(
            EXIT_VALIDATION,
            format!("cannot create {}: {e}", path.display()),
        )
    })?;
    let mut w = BufWriter::new(file);
    write_profile_csv(sol, prof.rmax, prof.n, &mut w)?;
    w.flush().map_err(|e| {
        Failure::new(
            EXIT_VALIDATION,
            format!("cannot write {}: {e}", path.display()),
        )
    })
}

pub(crate) fn certify(sol: &PiecewiseSolution, quad: Quadrature) -> Result<Certificate, Failure> {
    let opts = VerifyOptions {
        quad,
        ..VerifyOptions::default()
    };
    Ok(Certificate::from(&analysis::verify(sol, &opts, &[])?))
}

#[derive(Serialize)]
struct HalfBumpOutput<'a> {
    solution: &'a PiecewiseSolution,
    half_bump: HalfBumpSummary<'a>,
    certificate: Certificate,
}

#[derive(Serialize)]
struct HalfBumpSummary<'a> {
    rho0: f64,
    phi0: f64,
    #[serde(rename = "K")]
    k: f64,
    c1: f64,
    r0: f64,
    #[serde(rename = "A2")]
    a2: f64,
    residual: f64,
    interval: &'a constructors::AdmissibleInterval,
    brackets: &'a [constructors::RootBracket],
}

pub(crate) fn halfbump(a: &HalfbumpArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = read_params(&a.common.params)?;
    let quad = quadrature(&a.tol)?;
    let h = constructors::construct_half_bump(&p, a.phi0)?;
    log::info!("half bump r0 = {} rho0 = {}", h.r0, h.rho0);
    let certificate = certify(&h.solution, quad)?;
    write_csv(&h.solution, &a.profile)?;
    let doc = HalfBumpOutput {
        solution: &h.solution,
        half_bump: HalfBumpSummary {
            rho0: h.rho0,
            phi0: h.phi0,
            k: h.k,
            c1: h.c1,
            r0: h.r0,
            a2: h.a2,
            residual: h.residual,
            interval: &h.interval,
            brackets: &h.brackets,
        },
        certificate,
    };
    emit(&doc, a.common.json.as_deref(), out)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct InteriorOutput<'a> {
    solution: &'a PiecewiseSolution,
    interior_bump: InteriorSummary,
    certificate: Certificate,
}

#[derive(Serialize)]
struct InteriorSummary {
    phi0: f64,
    r0: f64,
    r1: f64,
    #[serde(rename = "K")]
    k: f64,
    c1: f64,
    c2: f64,
    #[serde(rename = "A2")]
    a2: f64,
    residual_norm: f64,
    newton_steps: usize,
}

pub(crate) fn interiorbump(a: &InteriorArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = read_params(&a.common.params)?;
    let quad = quadrature(&a.tol)?;
    if a.guess.len() != 2 {
        return Err(Failure::new(
            EXIT_VALIDATION,
            "--guess takes two values r0,r1",
        ));
    }
    let b = constructors::construct_interior_bump(&p, (a.guess[0], a.guess[1]))?;
    let certificate = certify(&b.solution, quad)?;
    write_csv(&b.solution, &a.profile)?;
    let doc = InteriorOutput {
        solution: &b.solution,
        interior_bump: InteriorSummary {
            phi0: b.phi0,
            r0: b.r0,
            r1: b.r1,
            k: b.k,
            c1: b.c1,
            c2: b.c2,
            a2: b.a2,
            residual_norm: b.residual_norm,
            newton_steps: b.newton.len(),
        },
        certificate,
    };
    emit(&doc, a.common.json.as_deref(), out)?;
    Ok(EXIT_OK)
}

/// Accepts a bare solution or any object with a `solution` key.
pub fn load_solution(path: &Path) -> Result<PiecewiseSolution, Failure> {
    let text = fs::read_to_string(path).map_err(|e| {
        Failure::new(
            EXIT_VALIDATION,
            format!("cannot read {}: {e}", path.display()),
        )
    })?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
    let inner = match value.get("solution") {
        Some(s) => s.clone(),
        None => value,
    };
    Ok(serde_json::from_value(inner).map_err(Error::from)?)
}

pub(crate) fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let sol = load_solution(&a.solution)?;
    let opts = VerifyOptions {
        r_cut: a.rmax,
        grid_points: a.n,
        quad: quadrature(&a.tol)?,
    };
    let r_cut = a.rmax.unwrap_or_else(|| analysis::default_r_cut(&sol));
    let extra: Vec<f64> = match a.seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..64).map(|_| rng.gen_range(0.0..r_cut)).collect()
        }
        None => Vec::new(),
    };
    let report = analysis::verify(&sol, &opts, &extra)?;
    for c in report.failed_checks() {
        log::info!("check {} failed: {} > {}", c.name, c.value, c.threshold);
    }
    emit(&report, a.json.as_deref(), out)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY })
}

pub(crate) fn probe(a: &ProbeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = read_params(&a.common.params)?;
    let scenario = match a.scenario {
        ScenarioName::HalfBumpCase1 => Scenario::HalfBumpCase1 {
            rho0: a.rho0,
            phi0: a.phi0,
        },
        ScenarioName::HalfBumpCase2 => Scenario::HalfBumpCase2 {
            rho0: a.rho0,
            phi0: a.phi0,
        },
        ScenarioName::TouchingZeroCase1 => Scenario::TouchingZeroCase1 { k: a.k },
        ScenarioName::TouchingZeroCase2 => Scenario::TouchingZeroCase2 { k: a.k },
        ScenarioName::TouchingZeroCase3 => Scenario::TouchingZeroCase3 { k: a.k },
        ScenarioName::SymmetricInterior => Scenario::SymmetricInterior,
    };
    let opts = ProbeOptions {
        r_max: a.rmax,
        points: a.n,
    };
    let report = constructors::probe_nonexistence(scenario, &p, opts)?;
    emit(&report, a.common.json.as_deref(), out)?;
    Ok(if report.certified {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}
