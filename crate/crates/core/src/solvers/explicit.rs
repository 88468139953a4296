//! Closed solution integrands of the ten named cases.

use super::{boundary_data, node_list, CaseId};
use crate::dispersion::dispersion_from_stencil;
use crate::error::{Error, Result};
use crate::model::{ensure_valid, IBVPSpec, Method, Pde, Provenance, QuadratureConfig, SolutionField};
use crate::transforms::{contour_integral_nodes, initial_transform, kernel_transform};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

/// `q_n(T)` for every `n` in `n_range` from the case's solution formula.
pub fn solve_explicit(case: CaseId, spec: &IBVPSpec, n_range: (i64, i64), t: f64, cfg: &QuadratureConfig) -> Result<SolutionField> {
    case.check_signature(spec)?;
    ensure_valid(spec)?;
    cfg.check()?;
    if !(t >= spec.t0) {
        return Err(Error::InvalidArgument(format!("T = {t} precedes t0 = {}", spec.t0)));
    }
    let ns = node_list(n_range)?;
    let h = spec.h;
    let t0 = spec.t0;
    let tau = t - t0;
    let d = dispersion_from_stencil(&spec.stencil, h)?;
    let qhat = initial_transform(&spec.initial, h, case.start_index(), cfg)?;
    let zero = crate::model::TimeFunction::zero();
    let u = boundary_data(spec).unwrap_or(&zero).clone();
    let du = match case {
        CaseId::ADV_BWD_D_N0 | CaseId::ADV_BWD2_D | CaseId::HEAT_CEN4_D => Some(u.derivative(1)?),
        _ => None,
    };
    let c = match spec.pde {
        Pde::Advection { c, .. } => c,
        _ => 1.0,
    };
    let i = C::i();
    let f = |k: f64| -> Result<C> {
        let th = k * h;
        let z = C::from_polar(1.0, th);
        let w = d.eval_z(z);
        let e = (-w * tau).exp();
        let q_k = qhat.eval_log(C::new(0.0, -th));
        let q_mk = || qhat.eval_log(C::new(0.0, th));
        let bu = || kernel_transform(&u, w, t0, t, cfg);
        let bdu = || kernel_transform(du.as_ref().unwrap(), w, t0, t, cfg);
        Ok(match case {
            CaseId::ADV_FWD => e * q_k,
            CaseId::ADV_BWD_D => e * q_k + c / z * bu()?,
            CaseId::ADV_BWD_D_N0 => e * q_k + c * bu()? + h * bdu()?,
            CaseId::ADV_CEN_D => {
                let q_alias = qhat.eval_log(C::new(0.0, th + PI));
                e * (q_k - q_alias) + c * th.cos() * bu()?
            }
            CaseId::ADV_BWD2_D => {
                let zi = 1.0 / z;
                e * q_k + c * (3.0 * zi - zi * zi) / 2.0 * bu()? - h * zi / 2.0 * bdu()?
            }
            CaseId::HEAT_CEN_D => e * (q_k - q_mk()) - 2.0 * i * th.sin() / h * bu()?,
            CaseId::HEAT_CEN_N => e * (q_k + z * q_mk()) - (1.0 + z) * bu()?,
            CaseId::HEAT_CEN4_D => {
                let zi = 1.0 / z;
                e * (q_k - q_mk()) + (14.0 * zi - 14.0 * z + z * z - zi * zi) / (12.0 * h) * bu()?
                    + h * (z - zi) / 12.0 * bdu()?
            }
            CaseId::LS_CEN_D => e * (q_k - q_mk()) + th.sin() / h * bu()?,
            CaseId::LS_CEN_N => e * (q_k + z * q_mk()) - i * (z + 1.0) / 2.0 * bu()?,
        })
    };
    let values = contour_integral_nodes(&f, &ns, h, cfg)?;
    SolutionField::new(h, t, n_range, values, Provenance { method: Method::Explicit(case), quadrature: *cfg })
}
