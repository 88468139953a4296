//! Time slices, region rasters and modified-equation reports.

use super::table::{format_number, Table};
use crate::dispersion::{decay_region, modified_equation, DispersionRelation};
use crate::error::{Error, Result};
use crate::model::{Boundary, IBVPSpec, TimeFunction, QuadratureConfig, SolutionField, StencilSpec};
use crate::solvers::{solve_explicit, CaseId};
use num_complex::Complex64 as C;
use rayon::prelude::*;

/// Solutions of one case at several final times.
pub fn run_time_slices(case: CaseId, spec: &IBVPSpec, times: &[f64], n_range: (i64, i64), cfg: &QuadratureConfig) -> Result<Vec<SolutionField>> {
    times.par_iter().map(|&t| solve_explicit(case, spec, n_range, t, cfg)).collect()
}

/// Lag (in nodes) maximizing the cross-correlation `sum Re(values[n + lag] conj(reference[n]))`.
pub fn correlation_lag(values: &[C], reference: &[C], max_lag: usize) -> Result<i64> {
    let mut best: Option<(f64, i64)> = None;
    for lag in 0..=max_lag.min(values.len().saturating_sub(2)) {
        let len = (values.len() - lag).min(reference.len());
        let a = &values[lag..lag + len];
        let b = &reference[..len];
        let dot: f64 = a.iter().zip(b).map(|(x, y)| (x * y.conj()).re).sum();
        let na = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let nb = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if na == 0.0 || nb == 0.0 {
            continue;
        }
        let score = dot;
        if best.is_none_or(|(s, _)| score > s) {
            best = Some((score, lag as i64));
        }
    }
    best.map(|b| b.1).ok_or_else(|| Error::InvalidArgument("correlation undefined for zero profiles".into()))
}

/// Distance the initial profile has travelled by time `t`, from the correlation peak against `phi` on `[0, 1]`.
/// The boundary data is replaced by zero so that only the transported initial profile is compared.
pub fn advection_shift(case: CaseId, spec: &IBVPSpec, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let mut spec = spec.clone();
    if let Boundary::Dirichlet(u) = &mut spec.boundary {
        *u = TimeFunction::zero();
    }
    let spec = &spec;
    let speed = spec.pde.coefficient().re.abs();
    let lo = case.start_index() as i64;
    let window = (1.0 / spec.h).ceil() as i64;
    let max_lag = (2.0 * speed * (t - spec.t0) / spec.h).ceil() as i64 + 2;
    let field = solve_explicit(case, spec, (lo, window + max_lag), t, cfg)?;
    let reference: Vec<C> = (lo..=window).map(|n| spec.initial.eval(n as f64 * spec.h)).collect();
    Ok(correlation_lag(&field.values, &reference, max_lag as usize)? as f64 * spec.h)
}

/// Raster of `sign(Re(-W(k)))` over a rectangle of the complex `k`-plane.
pub fn region_raster(d: &DispersionRelation, re: (f64, f64), im: (f64, f64), nx: usize, ny: usize) -> Result<Table> {
    if nx < 2 || ny < 2 || !(re.1 > re.0) || !(im.1 > im.0) {
        return Err(Error::InvalidArgument("raster needs a proper rectangle and at least 2x2 points".into()));
    }
    let mut t = Table::new(&["re_k", "im_k", "sign"]);
    for j in 0..ny {
        let y = im.0 + (im.1 - im.0) * j as f64 / (ny - 1) as f64;
        for i in 0..nx {
            let x = re.0 + (re.1 - re.0) * i as f64 / (nx - 1) as f64;
            t.push(vec![format_number(x), format_number(y), decay_region(d, C::new(x, y)).to_string()]);
        }
    }
    Ok(t)
}

/// Modified-equation coefficients as a table.
pub fn modified_equation_table(stencil: &StencilSpec, h: f64, p_max: u32) -> Table {
    let mut t = Table::new(&["order", "re", "im"]);
    for (p, c) in modified_equation(stencil, h, p_max) {
        t.push(vec![p.to_string(), format_number(c.re), format_number(c.im)]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lag_of_shifted_profile() {
        let r: Vec<C> = (0..200).map(|n| C::new((-(n as f64 - 60.0).powi(2) / 50.0).exp(), 0.0)).collect();
        let mut v = vec![C::new(0.0, 0.0); 17];
        v.extend_from_slice(&r[..183]);
        assert_eq!(correlation_lag(&v, &r, 50).unwrap(), 17);
        assert!(correlation_lag(&[C::new(0.0, 0.0); 5], &r, 3).is_err());
    }
}
