//! Integrals over the real contour `[-pi/h, pi/h]`.

use super::quad::{integrate, Adaptive};
use crate::error::Result;
use crate::model::QuadratureConfig;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

pub(crate) fn adaptive_from(cfg: &QuadratureConfig) -> Adaptive {
    Adaptive {
        order: cfg.nodes_per_panel,
        init_panels: cfg.panels + cfg.panels % 2,
        abs_tol: cfg.abs_tol,
        rel_tol: cfg.rel_tol,
        max_depth: 24,
        hard_fail: true,
    }
}

/// `(1/2pi) int_{-pi/h}^{pi/h} g(k) dk`.
pub fn contour_integral<F: Fn(f64) -> C + Sync>(g: &F, h: f64, cfg: &QuadratureConfig) -> Result<C> {
    cfg.check()?;
    let f = |k: f64, out: &mut [C]| out[0] = g(k);
    let a = PI / h;
    let r = integrate(&f, -a, a, 1, &adaptive_from(cfg))?;
    Ok(r.values[0] / (2.0 * PI))
}

/// `(1/2pi) int e^{iknh} F(k) dk` for every `n` in `ns` at once.
///
/// `F` is evaluated once per node; it may fail, in which case the first error is returned.
pub fn contour_integral_nodes<F>(f: &F, ns: &[i64], h: f64, cfg: &QuadratureConfig) -> Result<Vec<C>>
where
    F: Fn(f64) -> Result<C> + Sync,
{
    cfg.check()?;
    let failure = std::sync::Mutex::new(None);
    let g = |k: f64, out: &mut [C]| {
        let v = match f(k) {
            Ok(v) => v,
            Err(e) => {
                let mut slot = failure.lock().unwrap();
                if slot.is_none() {
                    *slot = Some(e);
                }
                C::new(0.0, 0.0)
            }
        };
        fill_phases(v, k * h, ns, out);
    };
    let a = PI / h;
    let r = integrate(&g, -a, a, ns.len(), &adaptive_from(cfg));
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(r?.values.into_iter().map(|v| v / (2.0 * PI)).collect())
}

/// `out[j] = v e^{i theta n_j}`, with exact phases refreshed every 16 steps.
fn fill_phases(v: C, theta: f64, ns: &[i64], out: &mut [C]) {
    if ns.is_empty() {
        return;
    }
    let step = C::from_polar(1.0, theta);
    let mut cur = C::from_polar(1.0, theta * ns[0] as f64);
    for (j, n) in ns.iter().enumerate() {
        if j > 0 {
            if ns[j] == ns[j - 1] + 1 && j % 16 != 0 {
                cur *= step;
            } else {
                cur = C::from_polar(1.0, theta * *n as f64);
            }
        }
        out[j] = v * cur;
    }
}
