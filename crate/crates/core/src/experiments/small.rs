//! Order studies for the small-time expansion.

use super::convergence::fit_slope;
use crate::error::Result;
use crate::model::{IBVPSpec, QuadratureConfig, SolutionField};
use crate::oracles::ContinuousSolution;
use crate::smalltime::{build_expansion, evaluate_expansion};
use crate::solvers::{solve_explicit, CaseId};
use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct SmallTimeStudy {
    pub r: u32,
    pub taus: Vec<f64>,
    /// Sup-norm distance between the expansion and the full semi-discrete solution.
    pub errors: Vec<f64>,
    pub fitted_slope: f64,
}

pub const DEFAULT_TAU: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];

/// Expansion error against the full solve as `tau` decreases.
pub fn smalltime_tau_study(spec: &IBVPSpec, r: u32, taus: &[f64], n_range: (i64, i64), cfg: &QuadratureConfig) -> Result<SmallTimeStudy> {
    let e = build_expansion(spec, n_range, r, cfg)?;
    let errors: Result<Vec<f64>> = taus
        .par_iter()
        .map(|&tau| {
            let full = solve_explicit(CaseId::ADV_BWD_D, spec, n_range, spec.t0 + tau, cfg)?;
            Ok(evaluate_expansion(&e, tau)?.max_diff(&full))
        })
        .collect();
    let errors = errors?;
    let lx: Vec<f64> = taus.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = errors.iter().map(|e| e.max(f64::MIN_POSITIVE).ln()).collect();
    Ok(SmallTimeStudy { r, taus: taus.to_vec(), errors, fitted_slope: fit_slope(&lx, &ly) })
}

fn oracle_error(field: &SolutionField, oracle: &ContinuousSolution) -> Result<f64> {
    let errs: Result<Vec<f64>> = field.nodes().map(|n| Ok((field.get(n).unwrap() - oracle.reference(n as f64 * field.h, field.t)?).norm())).collect();
    Ok(errs?.into_iter().fold(0.0, f64::max))
}

/// One point of the mesh sweep at fixed `tau`.
#[derive(Clone, Copy, Debug)]
pub struct SweepPoint {
    pub h: f64,
    pub expansion_error: f64,
    pub full_error: f64,
}

/// Errors against the continuous solution of the expansion and of the full solve over a mesh sweep.
pub fn smalltime_h_sweep(spec: &IBVPSpec, r: u32, tau: f64, h_values: &[f64], cfg: &QuadratureConfig) -> Result<Vec<SweepPoint>> {
    let oracle = ContinuousSolution::from_spec(spec, cfg)?;
    h_values
        .par_iter()
        .map(|&h| {
            let s = spec.with_h(h);
            let range = s.default_n_range();
            let e = evaluate_expansion(&build_expansion(&s, range, r, cfg)?, tau)?;
            let full = solve_explicit(CaseId::ADV_BWD_D, &s, range, s.t0 + tau, cfg)?;
            Ok(SweepPoint { h, expansion_error: oracle_error(&e, &oracle)?, full_error: oracle_error(&full, &oracle)? })
        })
        .collect()
}
