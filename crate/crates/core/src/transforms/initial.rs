//! Discrete half-line Fourier transform of initial data,
//! `q^(k) = h sum_{n >= s} e^{-iknh} phi(nh)`.

use crate::error::{Error, Result};
use crate::model::exppoly::ExpPoly;
use crate::model::{QuadratureConfig, SpaceFunction};
use num_complex::Complex64 as C;

const MAX_TERMS: usize = 50_000_000;

#[derive(Clone, Debug)]
pub struct InitialTransform {
    pub start_index: u32,
    pub h: f64,
    /// Last node of the truncated sum, `None` for the closed form.
    pub truncation_index: Option<usize>,
    pub tail_bound: f64,
    closed: Option<ExpPoly>,
    samples: Vec<C>,
}

/// Builds the transform, using a closed form for exponential polynomials and a
/// decay-bound truncation otherwise.
pub fn initial_transform(phi: &SpaceFunction, h: f64, start_index: u32, cfg: &QuadratureConfig) -> Result<InitialTransform> {
    if !(h > 0.0 && h.is_finite()) || start_index > 1 {
        return Err(Error::InvalidArgument("need h > 0 and start index 0 or 1".into()));
    }
    if let Some(e) = phi.closed_form() {
        if e.is_zero() || e.max_rate_re() < 0.0 {
            return Ok(InitialTransform { start_index, h, truncation_index: None, tail_bound: 0.0, closed: Some(e.clone()), samples: vec![] });
        }
    }
    let (a, alpha) = phi.decay_bound().ok_or(Error::MissingDecay)?;
    if !(alpha > 0.0) {
        return Err(Error::MissingDecay);
    }
    let geo = 1.0 - (-alpha * h).exp();
    let need = (h * a / (cfg.tail_eps * geo)).max(1.0).ln() / (alpha * h);
    let n_last = need.ceil().max(start_index as f64);
    if n_last > MAX_TERMS as f64 {
        return Err(Error::InvalidArgument(format!("initial sum needs {n_last} terms")));
    }
    let n_last = n_last as usize;
    let tail_bound = h * a * (-alpha * h * (n_last + 1) as f64).exp() / geo;
    let samples = (start_index as usize..=n_last).map(|n| phi.eval(n as f64 * h)).collect();
    Ok(InitialTransform { start_index, h, truncation_index: Some(n_last), tail_bound, closed: None, samples })
}

impl InitialTransform {
    /// `h sum_{n >= s} w^n phi(nh)` with `log_w = ln w`, `Re(log_w) <= 0`.
    pub fn eval_log(&self, log_w: C) -> C {
        if let Some(e) = &self.closed {
            return e.lattice_sum(log_w, self.h, self.start_index);
        }
        let w = log_w.exp();
        let mut acc = C::new(0.0, 0.0);
        for v in self.samples.iter().rev() {
            acc = acc * w + v;
        }
        self.h * acc * (log_w * self.start_index as f64).exp()
    }

    /// `q^(k)`.
    pub fn eval_k(&self, k: C) -> C {
        self.eval_log(-C::i() * k * self.h)
    }

    /// Transform at a symmetry point: `h sum zeta^{-n} phi(nh)`, `|zeta| >= 1`.
    pub fn eval_zeta(&self, zeta: C) -> C {
        self.eval_log(-zeta.ln())
    }

    /// The sampled value `phi(nh)`.
    pub fn node_value(&self, phi: &SpaceFunction, n: i64) -> C {
        phi.eval(n as f64 * self.h)
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
    fn geometric_closed_form() {
        let h = 0.05;
        let phi = SpaceFunction::from_expr(&parse("exp(-x)").unwrap().expr);
        let t = initial_transform(&phi, h, 1, &cfg()).unwrap();
        let brute = SpaceFunction::from_fn(|x| C::new((-x).exp(), 0.0)).with_decay(1.0, 1.0);
        let tb = initial_transform(&brute, h, 1, &cfg()).unwrap();
        assert!(tb.tail_bound <= cfg().tail_eps);
        for i in 0..50 {
            let k = C::new(-60.0 + 2.4 * i as f64, -0.02 * i as f64);
            let q = (-(C::new(1.0, 0.0) + C::i() * k) * h).exp();
            let want = h * q / (1.0 - q);
            assert!((t.eval_k(k) - want).norm() < 1e-13);
            assert!((tb.eval_k(k) - want).norm() < 1e-11);
        }
    }

    #[test]
    fn heat_example_at_zero() {
        let h = 0.1;
        let phi = SpaceFunction::from_expr(&parse("3*x*exp(-x)").unwrap().expr);
        let t = initial_transform(&phi, h, 1, &cfg()).unwrap();
        let want = h * 3.0 * h * (-h).exp() / (1.0 - (-h).exp()).powi(2);
        assert!((t.eval_k(C::new(0.0, 0.0)).re - want).abs() < 1e-12 * want);
    }

    #[test]
    fn zero_and_missing_decay() {
        let z = initial_transform(&SpaceFunction::zero(), 0.1, 0, &cfg()).unwrap();
        assert_eq!(z.eval_k(C::new(1.0, 0.0)), C::new(0.0, 0.0));
        let nodecay = SpaceFunction::from_fn(|x| C::new(1.0 / (1.0 + x * x), 0.0));
        assert!(matches!(initial_transform(&nodecay, 0.1, 1, &cfg()), Err(Error::MissingDecay)));
    }
}
