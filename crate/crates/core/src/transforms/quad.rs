//! Locally adaptive composite Gauss-Legendre quadrature of vector-valued integrands.
//!
//! Each panel is compared against its two halves; panels whose difference
//! exceeds their share of the tolerance are bisected until the summed
//! estimate meets the global target. Rounds are evaluated in
//! parallel and accumulated in a fixed order, so results are bit-stable.

use super::gauss;
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug)]
pub struct Adaptive {
    pub order: usize,
    pub init_panels: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Fail when a panel reaches `max_depth` unconverged and the total estimate misses the target.
    pub hard_fail: bool,
}

#[derive(Clone, Debug)]
pub struct Integral {
    pub values: Vec<C>,
    pub error: f64,
    pub panels: usize,
}

/// Gauss-Legendre sum over `[a, b]` and the matching sum of the largest component modulus.
fn gl<F: Fn(f64, &mut [C]) + Sync>(f: &F, a: f64, b: f64, dim: usize, order: usize, buf: &mut [C]) -> (Vec<C>, f64) {
    let r = gauss::rule(order);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = vec![C::new(0.0, 0.0); dim];
    let mut mass = 0.0;
    for (x, w) in r.nodes.iter().zip(&r.weights) {
        f(mid + half * x, buf);
        let s = w * half;
        let mut top = 0.0f64;
        for (a, v) in acc.iter_mut().zip(buf.iter()) {
            *a += v * s;
            top = top.max(v.norm());
        }
        mass += s.abs() * top;
    }
    (acc, mass)
}

struct Item {
    a: f64,
    b: f64,
    depth: u32,
    coarse: Vec<C>,
}

struct Done {
    left: Vec<C>,
    right: Vec<C>,
    err: f64,
    mass: f64,
}

fn refine<F: Fn(f64, &mut [C]) + Sync>(f: &F, it: &Item, dim: usize, order: usize) -> Done {
    let mut buf = vec![C::new(0.0, 0.0); dim];
    let m = 0.5 * (it.a + it.b);
    let (left, ml) = gl(f, it.a, m, dim, order, &mut buf);
    let (right, mr) = gl(f, m, it.b, dim, order, &mut buf);
    let err = left.iter().zip(&right).zip(&it.coarse).map(|((l, r), c)| (l + r - c).norm()).fold(0.0, f64::max);
    Done { left, right, err, mass: ml + mr }
}

/// Differences below this multiple of a panel's absolute mass are rounding noise.
const ROUNDOFF: f64 = 64.0 * f64::EPSILON;

/// Budget on panels times components held in one refinement round.
const MAX_STORED: usize = 1 << 21;

/// `int_a^b f`, where `f(x, out)` fills `dim` components.
pub fn integrate<F: Fn(f64, &mut [C]) + Sync>(f: &F, a: f64, b: f64, dim: usize, opts: &Adaptive) -> Result<Integral> {
    let n0 = opts.init_panels.max(1);
    let width = b - a;
    let mut active: Vec<Item> = (0..n0)
        .into_par_iter()
        .map(|i| {
            let pa = a + width * i as f64 / n0 as f64;
            let pb = if i + 1 == n0 { b } else { a + width * (i + 1) as f64 / n0 as f64 };
            let mut buf = vec![C::new(0.0, 0.0); dim];
            let (coarse, _) = gl(f, pa, pb, dim, opts.order, &mut buf);
            Item { a: pa, b: pb, depth: 0, coarse }
        })
        .collect();
    let mut scale = 0.0f64;
    for d in 0..dim {
        let s: C = active.iter().map(|it| it.coarse[d]).sum();
        scale = scale.max(s.norm());
    }
    let mut total = vec![C::new(0.0, 0.0); dim];
    let mut err_total = 0.0;
    let mut panels = 0usize;
    let mut forced = false;
    while !active.is_empty() {
        let target = opts.abs_tol.max(opts.rel_tol * scale);
        let done: Vec<Done> = active.par_iter().map(|it| refine(f, it, dim, opts.order)).collect();
        let mut next = Vec::new();
        let mut pending_err = 0.0;
        for (it, d) in active.into_iter().zip(done) {
            let local = target * (it.b - it.a).abs() / width.abs();
            let noise = d.err <= ROUNDOFF * d.mass;
            if d.err <= local || noise || it.depth >= opts.max_depth {
                if d.err > local {
                    forced = true;
                }
                for ((t, l), r) in total.iter_mut().zip(&d.left).zip(&d.right) {
                    *t += l + r;
                }
                err_total += d.err;
                panels += 1;
            } else {
                pending_err += d.err;
                let m = 0.5 * (it.a + it.b);
                next.push(Item { a: it.a, b: m, depth: it.depth + 1, coarse: d.left });
                next.push(Item { a: m, b: it.b, depth: it.depth + 1, coarse: d.right });
            }
        }
        let met = err_total + pending_err <= target;
        if met || next.len() * dim.max(1) > MAX_STORED {
            if !met {
                return Err(Error::Quadrature { estimate: err_total + pending_err, target });
            }
            for it in &next {
                for (t, v) in total.iter_mut().zip(&it.coarse) {
                    *t += v;
                }
            }
            err_total += pending_err;
            panels += next.len();
            break;
        }
        active = next;
    }
    let target = opts.abs_tol.max(opts.rel_tol * total.iter().map(|v| v.norm()).fold(0.0, f64::max));
    if forced && opts.hard_fail && err_total > target {
        return Err(Error::Quadrature { estimate: err_total, target });
    }
    Ok(Integral { values: total, error: err_total, panels })
}

/// Scalar convenience wrapper.
pub fn integrate_scalar<F: Fn(f64) -> C + Sync>(f: &F, a: f64, b: f64, opts: &Adaptive) -> Result<(C, f64)> {
    let g = |x: f64, out: &mut [C]| out[0] = f(x);
    let r = integrate(&g, a, b, 1, opts)?;
    Ok((r.values[0], r.error))
}

/// `int_0^inf f(r) dr` through the map `r = s / (1 - s)`.
pub fn integrate_half_line<F: Fn(f64, &mut [C]) + Sync>(f: &F, dim: usize, opts: &Adaptive) -> Result<Integral> {
    let g = |s: f64, out: &mut [C]| {
        let one = 1.0 - s;
        let r = s / one;
        f(r, out);
        let jac = 1.0 / (one * one);
        for v in out.iter_mut() {
            *v *= jac;
            if !(v.re.is_finite() && v.im.is_finite()) {
                *v = C::new(0.0, 0.0);
            }
        }
    };
    integrate(&g, 0.0, 1.0, dim, opts)
}
