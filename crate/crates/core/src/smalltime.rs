//! Small-time expansion of the backward advection solution, for split-step use.
//!
//! `q_n(t0 + tau) = phi_n + K_1(n) tau + K_2(n) tau^2 + K_3(n) tau^3 + O(tau^4)`.

use crate::error::{Error, Result};
use crate::model::{ensure_valid, IBVPSpec, Method, Pde, Provenance, QuadratureConfig, SolutionField};
use crate::solvers::CaseId;
use crate::dispersion::dispersion_from_stencil;
use crate::transforms::{contour_integral_nodes, initial_transform};
use num_complex::Complex64 as C;

#[derive(Clone, Debug)]
pub struct SmallTimeExpansion {
    pub order: u32,
    /// `coefficients[p - 1][i]` is `K_p` at node `n_range.0 + i`.
    pub coefficients: Vec<Vec<C>>,
    pub initial: Vec<C>,
    pub n_range: (i64, i64),
    pub t0: f64,
    pub h: f64,
    pub quadrature: QuadratureConfig,
}

fn factorial(p: u32) -> f64 {
    (1..=p).fold(1.0, |a, b| a * b as f64)
}

/// Coefficients `K_1..K_r` for a problem with the backward advection signature.
pub fn build_expansion(spec: &IBVPSpec, n_range: (i64, i64), r: u32, cfg: &QuadratureConfig) -> Result<SmallTimeExpansion> {
    if !(1..=3).contains(&r) {
        return Err(Error::InvalidArgument(format!("expansion order {r} outside 1..=3")));
    }
    CaseId::ADV_BWD_D.check_signature(spec)?;
    ensure_valid(spec)?;
    cfg.check()?;
    if n_range.1 < n_range.0 || n_range.0 < 1 {
        return Err(Error::InvalidArgument("node range must be non-empty and start at n >= 1".into()));
    }
    let c = match spec.pde {
        Pde::Advection { c, .. } => c,
        _ => unreachable!(),
    };
    let u = crate::solvers::boundary_data(spec).expect("dirichlet data");
    let mut u_derivs = Vec::new();
    for j in 0..r as usize {
        let d = u.derivative(j).map_err(|_| Error::MissingDerivative(j))?;
        u_derivs.push(d.eval(spec.t0));
    }
    let h = spec.h;
    let d = dispersion_from_stencil(&spec.stencil, h)?;
    let qhat = initial_transform(&spec.initial, h, 1, cfg)?;
    let ns: Vec<i64> = (n_range.0..=n_range.1).collect();
    let mut coefficients = Vec::with_capacity(r as usize);
    for p in 1..=r {
        let fp = factorial(p);
        let f = |k: f64| -> Result<C> {
            let z = C::from_polar(1.0, k * h);
            let mw = -d.eval_z(z);
            let mut v = mw.powi(p as i32) / fp * qhat.eval_log(C::new(0.0, -k * h));
            if p > 1 {
                let mut b = C::new(0.0, 0.0);
                for (j, uj) in u_derivs.iter().enumerate().take(p as usize) {
                    b += mw.powi((p as i32) - 1 - j as i32) * uj;
                }
                v += c / z * b / fp;
            }
            Ok(v)
        };
        let mut kp = contour_integral_nodes(&f, &ns, h, cfg)?;
        if p == 1 && n_range.0 == 1 {
            kp[0] += c * u_derivs[0] / h;
        }
        coefficients.push(kp);
    }
    let initial = ns.iter().map(|&n| spec.initial.eval(n as f64 * h)).collect();
    Ok(SmallTimeExpansion { order: r, coefficients, initial, n_range, t0: spec.t0, h, quadrature: *cfg })
}

/// `phi_n + sum_p K_p(n) tau^p`.
pub fn evaluate_expansion(e: &SmallTimeExpansion, tau: f64) -> Result<SolutionField> {
    let mut values = e.initial.clone();
    for (p, kp) in e.coefficients.iter().enumerate() {
        let tp = tau.powi(p as i32 + 1);
        for (v, k) in values.iter_mut().zip(kp) {
            *v += k * tp;
        }
    }
    SolutionField::new(e.h, e.t0 + tau, e.n_range, values, Provenance { method: Method::SmallTime(e.order), quadrature: e.quadrature })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::presets;
    use crate::model::config::parse_config;

    #[test]
    fn first_coefficient_is_the_right_hand_side() {
        let spec = parse_config(presets::ADVECTION_SMALL_TIME).unwrap().with_h(0.02);
        let e = build_expansion(&spec, (1, 30), 1, &QuadratureConfig::default()).unwrap();
        let h = spec.h;
        for (i, k) in e.coefficients[0].iter().enumerate() {
            let n = i as i64 + 1;
            let prev = if n == 1 { crate::solvers::boundary_data(&spec).unwrap().eval(spec.t0) } else { spec.initial.eval((n - 1) as f64 * h) };
            let rhs = -(spec.initial.eval(n as f64 * h) - prev) / h;
            assert!((k - rhs).norm() < 1e-9, "{n}: {k} {rhs}");
        }
        let z = evaluate_expansion(&e, 0.0).unwrap();
        assert_eq!(z.values, e.initial);
    }
}
