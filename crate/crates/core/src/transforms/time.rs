//! Time transforms of boundary data.
//!
//! Everything is computed in the kernel form
//! `B_g(W) = int_{t0}^{T} e^{-W (T - t)} g(t) dt = e^{-WT} f(W, T)`,
//! which stays bounded for `Re W >= 0`.

use crate::error::{Error, Result};
use crate::model::exppoly::ExpPoly;
use crate::model::{QuadratureConfig, TimeFunction};
use num_complex::Complex64 as C;

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, b| a * b as f64)
}

/// `phi_0(z), ..., phi_n(z)` with `phi_j(z) = sum_m z^m / (m + j)!`.
pub fn phi_functions(z: C, n: usize) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); n + 1];
    if z.norm() < 4.0 + n as f64 {
        let mut term = C::new(1.0 / factorial(n), 0.0);
        let mut sum = term;
        for m in 1..400 {
            term = term * z / (m + n) as f64;
            sum += term;
            if term.norm() <= 1e-17 * sum.norm() {
                break;
            }
        }
        out[n] = sum;
        for j in (0..n).rev() {
            out[j] = z * out[j + 1] + 1.0 / factorial(j);
        }
    } else {
        out[0] = z.exp();
        for j in 0..n {
            out[j + 1] = (out[j] - 1.0 / factorial(j)) / z;
        }
    }
    out
}

/// `int_0^tau s^i e^{-W (tau - s)} ds` for `i = 0..=n`.
pub fn exp_moments(w: C, tau: f64, n: usize) -> Vec<C> {
    let phi = phi_functions(-w * tau, n + 1);
    (0..=n).map(|i| factorial(i) * tau.powi(i as i32 + 1) * phi[i + 1]).collect()
}

/// Closed-form kernel transform of an exponential polynomial.
pub fn kernel_transform_exppoly(e: &ExpPoly, w: C, t0: f64, t: f64) -> C {
    let tau = t - t0;
    if tau == 0.0 {
        return C::new(0.0, 0.0);
    }
    let mut total = C::new(0.0, 0.0);
    for term in &e.terms {
        let p = term.power as usize;
        let mom = exp_moments(w + term.rate, tau, p);
        let mut s = C::new(0.0, 0.0);
        for (i, m) in mom.iter().enumerate() {
            let b = factorial(p) / (factorial(i) * factorial(p - i));
            s += b * t0.powi((p - i) as i32) * m;
        }
        total += term.coef * (term.rate * t).exp() * s;
    }
    total
}

const FILON_NODES: usize = 8;
const MAX_DEPTH: u32 = 12;

fn chebyshev_nodes() -> [f64; FILON_NODES] {
    let mut x = [0.0; FILON_NODES];
    for (i, v) in x.iter_mut().enumerate() {
        *v = 0.5 - 0.5 * (std::f64::consts::PI * (2 * i + 1) as f64 / (2 * FILON_NODES) as f64).cos();
    }
    x
}

/// Monomial coefficients (in `u` on `[0,1]`) interpolating `vals` at `nodes`.
fn interpolate(nodes: &[f64], vals: &[C]) -> Vec<C> {
    let n = nodes.len();
    let mut coef = vals.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (coef[i] - coef[i - 1]) / (nodes[i] - nodes[i - j]);
        }
    }
    let mut mono = vec![C::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        for i in (1..n).rev() {
            mono[i] = mono[i - 1] - mono[i] * nodes[k];
        }
        mono[0] = coef[k] - mono[0] * nodes[k];
    }
    mono
}

/// Filon-type panel rule for `int_a^b e^{-W s} g(T - s) ds`.
fn filon_panel(g: &dyn Fn(f64) -> C, w: C, t: f64, a: f64, b: f64) -> C {
    let len = b - a;
    let nodes = chebyshev_nodes();
    let vals: Vec<C> = nodes.iter().map(|u| g(t - b + len * u)).collect();
    let mono = interpolate(&nodes, &vals);
    let phi = phi_functions(-w * len, FILON_NODES);
    let mut s = C::new(0.0, 0.0);
    for (i, c) in mono.iter().enumerate() {
        s += c * factorial(i) * phi[i + 1];
    }
    (-w * a).exp() * len * s
}

/// Kernel transform by adaptive Filon quadrature (for data without closed form).
pub fn kernel_transform_quadrature(g: &dyn Fn(f64) -> C, w: C, t0: f64, t: f64, cfg: &QuadratureConfig) -> Result<C> {
    let tau = t - t0;
    if tau == 0.0 {
        return Ok(C::new(0.0, 0.0));
    }
    let mut stack: Vec<(f64, f64, u32, C)> = Vec::new();
    let init = 4;
    for i in (0..init).rev() {
        let a = tau * i as f64 / init as f64;
        let b = tau * (i + 1) as f64 / init as f64;
        stack.push((a, b, 0, filon_panel(g, w, t, a, b)));
    }
    let mut total = C::new(0.0, 0.0);
    let mut err = 0.0;
    let mut scale = stack.iter().map(|s| s.3).sum::<C>().norm();
    let mut worst_fail = 0.0f64;
    while let Some((a, b, depth, whole)) = stack.pop() {
        let m = 0.5 * (a + b);
        let l = filon_panel(g, w, t, a, m);
        let r = filon_panel(g, w, t, m, b);
        let e = (l + r - whole).norm();
        let target = cfg.abs_tol.max(cfg.rel_tol * scale) * (b - a) / tau;
        if e <= target || depth >= MAX_DEPTH {
            if e > target {
                worst_fail = worst_fail.max(e);
            }
            total += l + r;
            err += e;
            scale = scale.max(total.norm());
        } else {
            stack.push((m, b, depth + 1, r));
            stack.push((a, m, depth + 1, l));
        }
    }
    let target = cfg.abs_tol.max(cfg.rel_tol * total.norm());
    if worst_fail > 0.0 && err > target {
        return Err(Error::Quadrature { estimate: err, target });
    }
    Ok(total)
}

/// `B_g(W) = int_{t0}^{T} e^{-W (T - t)} g(t) dt`.
pub fn kernel_transform(g: &TimeFunction, w: C, t0: f64, t: f64, cfg: &QuadratureConfig) -> Result<C> {
    if t < t0 {
        return Err(Error::InvalidArgument("T must not precede t0".into()));
    }
    match g.closed_form() {
        Some(e) => Ok(kernel_transform_exppoly(e, w, t0, t)),
        None => kernel_transform_quadrature(&|s| g.eval(s), w, t0, t, cfg),
    }
}

/// `f(W, T) = int_{t0}^{T} e^{W t} g(t) dt`.
pub fn time_transform(g: &TimeFunction, w: C, t0: f64, t: f64, cfg: &QuadratureConfig) -> Result<C> {
    Ok((w * t).exp() * kernel_transform(g, w, t0, t, cfg)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformMode {
    ClosedForm,
    Quadrature,
}

/// Time transform of the data attached to one node.
#[derive(Clone, Debug)]
pub struct TimeTransform {
    pub node_index: i32,
    pub data: TimeFunction,
    pub t0: f64,
    pub mode: TransformMode,
}

impl TimeTransform {
    pub fn new(node_index: i32, data: TimeFunction, t0: f64) -> Self {
        let mode = if data.closed_form().is_some() { TransformMode::ClosedForm } else { TransformMode::Quadrature };
        TimeTransform { node_index, data, t0, mode }
    }

    pub fn eval(&self, w: C, t: f64, cfg: &QuadratureConfig) -> Result<C> {
        time_transform(&self.data, w, self.t0, t, cfg)
    }

    pub fn kernel(&self, w: C, t: f64, cfg: &QuadratureConfig) -> Result<C> {
        kernel_transform(&self.data, w, self.t0, t, cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::expr::parse;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn phi_branches_agree() {
        for &z in &[C::new(3.9, 0.1), C::new(-4.1, 2.0), C::new(0.0, 12.5), C::new(-30.0, -3.0)] {
            let a = phi_functions(z, 4);
            for j in 1..=4 {
                let direct: C = if z.norm() > 8.0 {
                    let head: C = (0..j).map(|m| z.powi(m as i32) / factorial(m)).sum();
                    (z.exp() - head) / z.powi(j as i32)
                } else {
                    let mut s = C::new(0.0, 0.0);
                    let mut term = C::new(1.0 / factorial(j), 0.0);
                    for m in 0..200 {
                        s += term;
                        term = term * z / (m + j + 1) as f64;
                    }
                    s
                };
                assert!((a[j] - direct).norm() <= 1e-12 * (1.0 + direct.norm()), "{z} {j}");
            }
        }
    }

    #[test]
    fn constant_data() {
        let g = TimeFunction::constant(C::new(1.0, 0.0));
        let v = time_transform(&g, C::new(0.0, 0.0), 0.0, 1.7, &cfg()).unwrap();
        assert!((v - 1.7).norm() < 1e-14);
        assert_eq!(time_transform(&g, C::new(2.0, 1.0), 0.4, 0.4, &cfg()).unwrap(), C::new(0.0, 0.0));
    }

    #[test]
    fn closed_form_matches_filon() {
        let cases = ["-sin(4*pi*t)", "cos(5*pi*t)", "1/2 + (1 - 2*pi)*t*exp(-t)", "t^3*exp(2*t)"];
        let ws = [C::new(0.0, 0.0), C::new(0.0, 1.0), C::new(3.0, -40.0), C::new(2500.0, 0.0), C::new(1e-9, 1e4)];
        for s in cases {
            let e = parse(s).unwrap().expr;
            let tf = TimeFunction::from_expr(&e);
            for w in ws {
                let a = kernel_transform(&tf, w, 0.2, 1.3, &cfg()).unwrap();
                let b = kernel_transform_quadrature(&|t| e.eval(C::new(t, 0.0)), w, 0.2, 1.3, &cfg()).unwrap_or_else(|_| panic!("{s} {w}"));
                assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()), "{s} {w}: {a} {b}");
            }
        }
    }

    #[test]
    fn sine_antiderivative() {
        let g = TimeFunction::from_expr(&parse("-sin(4*pi*t)").unwrap().expr);
        let om = 4.0 * std::f64::consts::PI;
        for &(w, t) in &[(0.7, 0.9), (-1.5, 2.0), (3.0, 0.25)] {
            let anti = |t: f64| -((w * t).exp() * (w * (om * t).sin() - om * (om * t).cos())) / (w * w + om * om);
            let want = anti(t) - anti(0.0);
            let got = time_transform(&g, C::new(w, 0.0), 0.0, t, &cfg()).unwrap();
            assert!((got.re - want).abs() < 1e-12 * (1.0 + want.abs()) && got.im.abs() < 1e-12);
        }
    }
}
