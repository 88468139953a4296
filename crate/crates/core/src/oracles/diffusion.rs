//! Heat and linear Schrödinger equations on the half-line.

use super::ContinuousSolution;
use crate::error::{Error, Result};
use crate::model::exppoly::ExpPoly;
use crate::transforms::contour::adaptive_from;
use crate::transforms::kernel_transform;
use crate::transforms::quad::{integrate_half_line, integrate_scalar};
use errorfunctions::ComplexErrorFunctions;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

const RAY: f64 = PI / 6.0;

pub(super) fn utm(sol: &ContinuousSolution, x: f64, t: f64) -> Result<C> {
    let d = sol.diffusivity().expect("diffusive kind");
    let tau = t - sol.t0;
    let g = sol.boundary.as_ref().ok_or_else(|| Error::InvalidArgument("missing boundary data".into()))?;
    if sol.is_dirichlet() && x == 0.0 {
        return Ok(g.eval(t));
    }
    if d.re <= 0.0 {
        return Err(Error::Unsupported("the ray representation needs Re D > 0".into()));
    }
    let phi = sol.initial.closed_form().ok_or_else(|| Error::Unsupported("transform representation needs closed-form initial data".into()))?;
    let opts = adaptive_from(&sol.cfg);
    let kmax = sol.k_max(t);
    let line = |k: f64| {
        let k = C::new(k, 0.0);
        (C::i() * k * x - d * k * k * tau).exp() * phi.half_line_transform(k)
    };
    let (initial, _) = integrate_scalar(&line, -kmax, kmax, &opts)?;
    let cfg = sol.cfg;
    let dirichlet = sol.is_dirichlet();
    let failure = std::sync::Mutex::new(None);
    let bracket = |k: C| -> C {
        let w = d * k * k;
        let image = (-w * tau).exp() * phi.half_line_transform(-k);
        let b = match kernel_transform(g, w, sol.t0, t, &cfg) {
            Ok(b) => b,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                C::new(0.0, 0.0)
            }
        };
        let v = if dirichlet { image + 2.0 * C::i() * k * d * b } else { 2.0 * d * b - image };
        (C::i() * k * x).exp() * v
    };
    let rays = |r: f64, out: &mut [C]| {
        let e1 = C::from_polar(1.0, RAY);
        let e2 = C::from_polar(1.0, PI - RAY);
        out[0] = bracket(r * e1) * e1 - bracket(r * e2) * e2;
    };
    let boundary = integrate_half_line(&rays, 1, &opts)?;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok((initial - boundary.values[0]) / (2.0 * PI))
}

fn erfc_c(z: C) -> C {
    z.erfc()
}

/// `e^{s} erfc(b)` where `e^{s - b^2} = e^{-m}` is known to be moderate.
fn scaled_erfc(s: C, b: C, m: C) -> C {
    if b.re >= 0.0 {
        (-m).exp() * b.erfcx()
    } else {
        2.0 * s.exp() - (-m).exp() * (-b).erfcx()
    }
}

/// `int_0^inf G(x - y) e^{beta y} dy` and `int_0^inf G(x + y) e^{beta y} dy` for the kernel of `q_t = D q_xx`.
fn image_pair(beta: C, x: f64, a: C) -> (C, C) {
    let m = x * x / (a * a);
    let quarter = beta * beta * a * a / 4.0;
    let plus = 0.5 * scaled_erfc(beta * x + quarter, -(x + beta * a * a / 2.0) / a, m);
    let minus = 0.5 * scaled_erfc(-beta * x + quarter, (x - beta * a * a / 2.0) / a, m);
    (plus, minus)
}

/// Response to Dirichlet data `e^{gamma s}` on `[0, tau]`, zero initial data, in the scaled variable `xs = x / sqrt(D)`.
fn dirichlet_response(gamma: C, xs: C, tau: f64) -> C {
    let g = gamma.sqrt();
    let c = xs / (2.0 * tau.sqrt());
    let r = g * tau.sqrt();
    let m = c * c;
    let s1 = gamma * tau - xs * g;
    let s2 = gamma * tau + xs * g;
    0.5 * (scaled_erfc(s1, c - r, m) + scaled_erfc(s2, c + r, m))
}

/// Response to Neumann data `q_xs(0, s) = e^{gamma s}` in the scaled variable.
fn neumann_response(gamma: C, xs: C, tau: f64) -> C {
    let g = gamma.sqrt();
    let c = xs / (2.0 * tau.sqrt());
    if g.norm() < 1e-8 {
        return -(2.0 * (tau / PI).sqrt() * (-c * c).exp() - xs * erfc_c(c));
    }
    let r = g * tau.sqrt();
    let m = c * c;
    let s1 = gamma * tau - xs * g;
    let s2 = gamma * tau + xs * g;
    -(scaled_erfc(s1, c - r, m) - scaled_erfc(s2, c + r, m)) / (2.0 * g)
}

fn pure_exponentials(e: &ExpPoly, what: &str) -> Result<()> {
    if e.terms.iter().any(|t| t.power > 0) {
        return Err(Error::Unsupported(format!("error-function form needs {what} without polynomial factors")));
    }
    Ok(())
}

/// Closed form in error functions for exponential initial and boundary data.
pub fn erfc_solution(sol: &ContinuousSolution, x: f64, t: f64) -> Result<C> {
    let d = sol.diffusivity().ok_or_else(|| Error::Unsupported("error-function form applies to diffusive kinds".into()))?;
    if !(x >= 0.0) {
        return Err(Error::InvalidArgument(format!("x = {x} outside the half-line")));
    }
    let tau = t - sol.t0;
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument("error-function form needs T > t0".into()));
    }
    let phi = sol.initial.closed_form().ok_or_else(|| Error::Unsupported("initial data has no closed form".into()))?;
    let g = sol.boundary.as_ref().and_then(|g| g.closed_form()).ok_or_else(|| Error::Unsupported("boundary data has no closed form".into()))?;
    pure_exponentials(phi, "initial data")?;
    pure_exponentials(g, "boundary data")?;
    let a = (4.0 * d * tau).sqrt();
    let sign = if sol.is_dirichlet() { -1.0 } else { 1.0 };
    let mut total = C::new(0.0, 0.0);
    for term in &phi.terms {
        let (p, m) = image_pair(term.rate, x, a);
        total += term.coef * (p + sign * m);
    }
    let sd = d.sqrt();
    let xs = x / sd;
    let shifted = g.shifted(sol.t0);
    for term in &shifted.terms {
        let gamma = term.rate;
        total += term.coef * if sol.is_dirichlet() { dirichlet_response(gamma, xs, tau) } else { sd * neumann_response(gamma, xs, tau) };
    }
    Ok(total)
}
