//! Numerical confirmation of steps used when deriving the explicit formulas.

use super::{solve_explicit, CaseId};
use crate::error::{Error, Result};
use crate::model::{IBVPSpec, QuadratureConfig};
use crate::transforms::contour_integral_nodes;
use num_complex::Complex64 as C;

/// `(eps, kappa power, kappa coefficient)` of the dropped term `kappa(z) q^(eps/z, T)`.
fn dropped_term(case: CaseId) -> Option<(f64, i32, f64)> {
    match case {
        CaseId::ADV_CEN_D => Some((-1.0, 0, 1.0)),
        CaseId::HEAT_CEN_D | CaseId::LS_CEN_D | CaseId::HEAT_CEN4_D => Some((1.0, 0, -1.0)),
        CaseId::HEAT_CEN_N | CaseId::LS_CEN_N => Some((1.0, 1, -1.0)),
        _ => None,
    }
}

/// Largest magnitude over `n_range` of the term discarded from the case's solution integrand,
/// evaluated from a reference field `q_m(T)`.
pub fn vanishing_term_check(spec: &IBVPSpec, case: CaseId, n_range: (i64, i64), t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let (eps, kp, kc) = dropped_term(case).ok_or_else(|| Error::CaseMismatch { case: case.name().into(), reason: "no symmetry is used".into() })?;
    let s = case.start_index() as i64;
    let m_max = n_range.1.max(s) + 64;
    let field = solve_explicit(case, spec, (s, m_max), t, cfg)?;
    let h = spec.h;
    let q: Vec<(i64, C)> = field.nodes().zip(field.values.iter().copied()).collect();
    let f = |k: f64| -> Result<C> {
        let z = C::from_polar(1.0, k * h);
        let sum: C = q.iter().map(|&(m, v)| v * eps.powi(-m as i32) * z.powi(m as i32)).sum();
        Ok(z.powi(kp) * kc * h * sum)
    };
    let ns: Vec<i64> = (n_range.0..=n_range.1).collect();
    let vals = contour_integral_nodes(&f, &ns, h, cfg)?;
    Ok(vals.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// Largest pointwise difference between the two backward advection formulas.
pub fn equivalence_check_backward_variants(spec: &IBVPSpec, n_range: (i64, i64), t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let a = solve_explicit(CaseId::ADV_BWD_D, spec, n_range, t, cfg)?;
    let b = solve_explicit(CaseId::ADV_BWD_D_N0, spec, n_range, t, cfg)?;
    Ok(a.max_diff(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::presets::case_problem;

    #[test]
    fn dropped_terms_vanish() {
        let cfg = QuadratureConfig::default();
        let (spec, t) = case_problem(CaseId::HEAT_CEN_D, 0.05).unwrap();
        assert!(vanishing_term_check(&spec, CaseId::HEAT_CEN_D, (1, 20), t, &cfg).unwrap() < 1e-8);
        let (spec, _) = case_problem(CaseId::ADV_FWD, 0.05).unwrap();
        assert!(vanishing_term_check(&spec, CaseId::ADV_FWD, (1, 20), 0.5, &cfg).is_err());
    }

    #[test]
    fn backward_variants_agree() {
        let (spec, t) = case_problem(CaseId::ADV_BWD_D, 0.05).unwrap();
        assert!(equivalence_check_backward_variants(&spec, (1, 20), t, &QuadratureConfig::default()).unwrap() < 1e-8);
    }
}
