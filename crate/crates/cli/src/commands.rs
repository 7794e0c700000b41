use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use qcorr::coherence::{classify, Bound, BoundsReport, ClassifyOptions};
use qcorr::hilbert::{expectation, HermitianOperator, StateRef};
use qcorr::separability::SolverOptions;
use qcorr::states::{chi_expectation_analytic, chi_vector, dephased_tmsv, tmsv, ExampleFamily, ExampleState, TmsvParams};
use qcorr::{CONSTRUCTION_TOL, NULL_TOL};

use crate::error::CliError;
use crate::format::{bound_cell, g12, optional_cell};
use crate::input::{observable_from_payload, read_payload, state_from_payload, InputState};
use crate::report::{Inputs, Provenance, RunReport, StateSource, Tolerances};

/// Solver tolerance, from `QCORR_TOL` when set.
pub fn solver_tolerance() -> Result<f64, CliError> {
    match std::env::var("QCORR_TOL") {
        Err(std::env::VarError::NotPresent) => Ok(SolverOptions::default().tol),
        Err(e) => Err(CliError::input(format!("QCORR_TOL: {e}"))),
        Ok(text) => match text.trim().parse::<f64>() {
            Ok(tol) if tol > 0.0 && tol.is_finite() => Ok(tol),
            _ => Err(CliError::input(format!("QCORR_TOL must be a positive number, got {text:?}"))),
        },
    }
}

fn options(seed: u64, restarts: usize) -> Result<ClassifyOptions, CliError> {
    Ok(ClassifyOptions {
        solver: SolverOptions {
            restarts,
            seed,
            tol: solver_tolerance()?,
            ..SolverOptions::default()
        },
    })
}

fn example_report(name: &str, opts: &ClassifyOptions) -> Result<BoundsReport, CliError> {
    let psi = name.parse::<ExampleState>()?.build()?;
    Ok(classify(&HermitianOperator::projector(&psi), &psi, opts)?)
}

fn same(a: Bound, b: Bound) -> bool {
    match (a, b) {
        (Bound::Value(x), Bound::Value(y)) => (x - y).abs() <= 1e-10,
        _ => a == b,
    }
}

/// Bounds for the projectors onto `ψ_1 … ψ_3` (one row per family and
/// distinguishable/identical variant).
pub fn table1() -> Result<String, CliError> {
    let opts = options(SolverOptions::default().seed, SolverOptions::default().restarts)?;
    let mut out = String::from("state,g0,g_sym,gsep0,gsep_sym\n");
    for family in [ExampleFamily::Psi1, ExampleFamily::Psi2, ExampleFamily::Psi3] {
        let n = family as usize + 1;
        let r = example_report(&format!("psi{n}_0"), &opts)?;
        writeln!(out, "psi{n}_0,{},{},{},{}", g12(r.g0), bound_cell(r.gplus), bound_cell(r.gsep0), bound_cell(r.gsep_plus)).unwrap();

        // the ± row holds for both signs; check that they agree
        let plus = example_report(&format!("psi{n}_plus"), &opts)?;
        let minus = example_report(&format!("psi{n}_minus"), &opts)?;
        let agree = (plus.g0 - minus.g0).abs() <= 1e-10
            && same(plus.gplus, minus.gminus)
            && same(plus.gsep0, minus.gsep0)
            && same(plus.gsep_plus, minus.gsep_minus);
        if !agree {
            return Err(CliError::numerical(format!("psi{n}: symmetric and antisymmetric bounds differ")));
        }
        writeln!(
            out,
            "psi{n}_pm,{},{},{},{}",
            g12(plus.g0),
            bound_cell(plus.gplus),
            bound_cell(plus.gsep0),
            bound_cell(plus.gsep_plus)
        )
        .unwrap();
    }
    Ok(out)
}

/// Γ values for the three-particle examples.
pub fn tripartite(seed: u64, restarts: usize) -> Result<String, CliError> {
    let opts = options(seed, restarts)?;
    let mut out = String::from("state,gamma0,gamma_partsep0,gamma_fullsep0,gamma_sym\n");
    for family in [ExampleFamily::Psi4, ExampleFamily::Psi5] {
        let n = family as usize + 1;
        for variant in ["0", "plus", "minus"] {
            let name = format!("psi{n}_{variant}");
            let r = example_report(&name, &opts)?;
            let sector = match variant {
                "plus" => r.gammas.gplus,
                "minus" => r.gammas.gminus,
                _ => None,
            };
            writeln!(
                out,
                "{name},{},{},{},{}",
                optional_cell(r.gammas.g0),
                optional_cell(r.gammas.gpartsep),
                optional_cell(r.gammas.gsep0),
                optional_cell(sector)
            )
            .unwrap();
        }
    }
    Ok(out)
}

pub struct Fig2 {
    pub csv: String,
    /// `Δφ` where the closed-form `⟨L⟩` drops to the bosonic separable bound.
    pub threshold: Option<f64>,
    pub gsep_plus: f64,
}

/// Bisection for `⟨L⟩(Δφ) = target` on `[0, π]`; `⟨L⟩` is decreasing.
pub fn crossing(kappa: f64, target: f64, tol: f64) -> Result<Option<f64>, CliError> {
    let f = |x: f64| chi_expectation_analytic(kappa, x).map(|v| v - target);
    let (mut lo, mut hi) = (0.0, PI);
    if f(lo)? <= 0.0 || f(hi)? > 0.0 {
        return Ok(None);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

pub fn fig2(kappa: f64, n_max: usize, grid: usize) -> Result<Fig2, CliError> {
    if grid < 2 {
        return Err(CliError::input("--grid needs at least 2 points"));
    }
    TmsvParams::new(kappa, 0.0, n_max)?;
    let opts = options(SolverOptions::default().seed, SolverOptions::default().restarts)?;
    let l = HermitianOperator::projector(&chi_vector(n_max)?);
    let mut csv = String::from("delta_phi,l_analytic,l_numeric,g0,gplus,gsep0,gsep_plus\n");
    let mut gsep_plus = None;
    for i in 0..grid {
        let dphi = PI * i as f64 / (grid - 1) as f64;
        let rho = dephased_tmsv(&TmsvParams::new(kappa, dphi, n_max)?)?;
        let r = classify(&l, &rho, &opts)?;
        let analytic = chi_expectation_analytic(kappa, dphi)?;
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            g12(dphi),
            g12(analytic),
            g12(r.expectation),
            g12(r.g0),
            bound_cell(r.gplus),
            bound_cell(r.gsep0),
            bound_cell(r.gsep_plus)
        )
        .unwrap();
        gsep_plus = r.gsep_plus.value();
    }
    let gsep_plus = gsep_plus.ok_or_else(|| CliError::numerical("bosonic separable bound unavailable"))?;
    let threshold = crossing(kappa, gsep_plus, 1e-10)?;
    Ok(Fig2 {
        csv,
        threshold,
        gsep_plus,
    })
}

pub struct ClassifyRequest {
    pub builtin: Option<String>,
    pub state: Option<PathBuf>,
    pub observable: Option<PathBuf>,
    pub seed: u64,
    pub restarts: usize,
    pub kappa: f64,
    pub delta_phi: f64,
    pub n_max: usize,
}

pub fn run_classify(req: &ClassifyRequest) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let opts = options(req.seed, req.restarts)?;
    let mut inputs = Inputs {
        state: String::new(),
        source: StateSource::Builtin,
        observable: req.observable.as_ref().map(|p| p.display().to_string()),
        kappa: None,
        delta_phi: None,
        n_max: None,
        seed: req.seed,
        restarts: req.restarts,
    };
    let observable = match &req.observable {
        Some(path) => Some(observable_from_payload(read_payload(path)?)?),
        None => None,
    };
    let mut truncated_weight = None;

    let (state, default_l) = match (&req.builtin, &req.state) {
        (Some(name), None) => {
            inputs.state = name.clone();
            match name.as_str() {
                "tmsv" | "dephased_tmsv" => {
                    let dphi = if name == "tmsv" { 0.0 } else { req.delta_phi };
                    let params = TmsvParams::new(req.kappa, dphi, req.n_max)?;
                    inputs.kappa = Some(req.kappa);
                    inputs.delta_phi = Some(dphi);
                    inputs.n_max = Some(req.n_max);
                    truncated_weight = Some(params.truncated_weight());
                    let l = HermitianOperator::projector(&chi_vector(req.n_max)?);
                    let state = if name == "tmsv" {
                        InputState::Pure(tmsv(&params)?.state)
                    } else {
                        InputState::Mixed(dephased_tmsv(&params)?)
                    };
                    (state, Some(l))
                }
                _ => {
                    let psi = name.parse::<ExampleState>()?.build()?;
                    let l = HermitianOperator::projector(&psi);
                    (InputState::Pure(psi), Some(l))
                }
            }
        }
        (None, Some(path)) => {
            inputs.state = path.display().to_string();
            inputs.source = StateSource::File;
            let state = state_from_payload(read_payload(path)?)?;
            let l = match &state {
                InputState::Pure(psi) => Some(HermitianOperator::projector(psi)),
                InputState::Mixed(_) => None,
            };
            (state, l)
        }
        _ => return Err(CliError::input("give exactly one of --builtin or --state")),
    };

    let l = observable
        .or(default_l)
        .ok_or_else(|| CliError::input("a density-matrix state needs --observable"))?;
    let state_ref = match &state {
        InputState::Pure(psi) => StateRef::Pure(psi),
        InputState::Mixed(rho) => StateRef::Mixed(rho),
    };
    // fail early with a clear message on mismatched spaces
    expectation(&l, state_ref)?;
    let report = classify(&l, state_ref, &opts)?;
    Ok(RunReport {
        inputs,
        report,
        provenance: Provenance {
            version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances: Tolerances {
                construction: CONSTRUCTION_TOL,
                null: NULL_TOL,
                solver: opts.solver.tol,
            },
            truncated_weight,
        },
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}
