//! Advection: exact characteristics and the transform representation.

use super::{ContinuousKind, ContinuousSolution};
use crate::error::{Error, Result};
use crate::model::exppoly::ExpPoly;
use crate::model::{SpaceFunction, TimeFunction};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

/// Solution of `q_t + v q_x = 0` on `x >= 0` started at `t0`.
///
/// For `v > 0` the boundary datum `u` is transported inward; for `v <= 0` it is ignored.
pub fn exact_advection(phi: &SpaceFunction, u: Option<&TimeFunction>, v: f64, x: f64, t: f64, t0: f64) -> C {
    let foot = x - v * (t - t0);
    if foot >= 0.0 || v <= 0.0 {
        return phi.eval(foot);
    }
    match u {
        Some(u) => u.eval(t - x / v),
        None => C::new(0.0, 0.0),
    }
}

/// `(1/2pi) int_R e^{ikX} phi^(k) dk` for `X > 0`, as a sum of small circle integrals around the poles of `phi^`.
fn inverse_by_residues(phi: &ExpPoly, big_x: f64) -> C {
    let mut poles: Vec<C> = Vec::new();
    for t in &phi.terms {
        let p = -C::i() * t.rate;
        if poles.iter().all(|q| (q - p).norm() > 1e-12) {
            poles.push(p);
        }
    }
    let f = |k: C| (C::i() * k * big_x).exp() * phi.half_line_transform(k);
    let mut total = C::new(0.0, 0.0);
    for (i, p) in poles.iter().enumerate() {
        let sep = poles.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| (q - p).norm()).fold(f64::INFINITY, f64::min);
        let rho = (0.4 * sep).min(0.5);
        let circle = |n: usize| -> C {
            (0..n)
                .map(|j| {
                    let e = C::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
                    f(p + rho * e) * rho * e * C::i()
                })
                .sum::<C>()
                * (2.0 * PI / n as f64)
        };
        let mut n = 32;
        let mut prev = circle(n);
        loop {
            n *= 2;
            let next = circle(n);
            if (next - prev).norm() <= 1e-14 * (1.0 + next.norm()) || n >= 1 << 14 {
                prev = next;
                break;
            }
            prev = next;
        }
        total += prev / (2.0 * PI);
    }
    total
}

pub(super) fn utm(sol: &ContinuousSolution, x: f64, t: f64) -> Result<C> {
    let tau = t - sol.t0;
    let phi = sol.initial.closed_form().ok_or_else(|| Error::Unsupported("transform representation needs closed-form initial data".into()))?;
    let shift = match sol.kind {
        ContinuousKind::AdvectionRight => x + sol.c * tau,
        _ => x - sol.c * tau,
    };
    if shift > 0.0 {
        return Ok(inverse_by_residues(phi, shift));
    }
    let u = sol.boundary.as_ref().ok_or_else(|| Error::InvalidArgument("missing boundary data".into()))?;
    // The boundary transform integrates to a delta function at the characteristic foot.
    Ok(u.eval(t - x / sol.c))
}
