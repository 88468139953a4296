//! Mesh-refinement studies against the continuous reference solution.

use crate::error::{Error, Result};
use crate::model::{IBVPSpec, QuadratureConfig};
use crate::oracles::ContinuousSolution;
use crate::solvers::{solve_explicit, CaseId};
use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct ConvergenceStudy {
    pub case: CaseId,
    pub h_values: Vec<f64>,
    pub t: f64,
    /// Sup-norm error over the nodes of `(0, 1]` (or `[0, 1]` without Dirichlet data).
    pub errors: Vec<f64>,
    /// Least-squares slope of `log error` against `log h` over the last three meshes.
    pub fitted_slope: f64,
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Log-log slope over the last three points.
pub fn tail_slope(h: &[f64], err: &[f64]) -> f64 {
    let k = h.len().saturating_sub(3);
    let lx: Vec<f64> = h[k..].iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = err[k..].iter().map(|v| v.ln()).collect();
    fit_slope(&lx, &ly)
}

/// Sup-norm error of one semi-discrete solve.
pub fn window_error(case: CaseId, spec: &IBVPSpec, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let range = spec.default_n_range();
    let field = solve_explicit(case, spec, range, t, cfg)?;
    let oracle = ContinuousSolution::from_spec(spec, cfg)?;
    let errs: Result<Vec<f64>> = field
        .nodes()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| Ok((field.get(n).unwrap() - oracle.reference(n as f64 * spec.h, t)?).norm()))
        .collect();
    Ok(errs?.into_iter().fold(0.0, f64::max))
}

/// Errors over a decreasing sequence of mesh widths.
pub fn run_convergence(case: CaseId, spec: &IBVPSpec, h_values: &[f64], t: f64, cfg: &QuadratureConfig) -> Result<ConvergenceStudy> {
    if h_values.len() < 3 || h_values.windows(2).any(|w| !(w[1] < w[0])) || h_values.iter().any(|h| !(*h > 0.0)) {
        return Err(Error::InvalidArgument("h values must be positive, strictly decreasing, at least three".into()));
    }
    let errors: Result<Vec<f64>> = h_values.par_iter().map(|&h| window_error(case, &spec.with_h(h), t, cfg)).collect();
    let errors = errors?;
    if errors.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidArgument("zero error: the slope is undefined".into()));
    }
    let fitted_slope = tail_slope(h_values, &errors);
    Ok(ConvergenceStudy { case, h_values: h_values.to_vec(), t, errors, fitted_slope })
}

pub const DEFAULT_H: [f64; 4] = [0.04, 0.02, 0.01, 0.005];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let h = [0.4, 0.2, 0.1, 0.05];
        let e: Vec<f64> = h.iter().map(|v: &f64| 3.0 * v.powi(2)).collect();
        assert!((tail_slope(&h, &e) - 2.0).abs() < 1e-12);
    }
}
