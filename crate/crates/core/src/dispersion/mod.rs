//! Dispersion relations `W(k) = P(e^{ikh})` of semi-discrete stencils, their
//! symmetry roots, usability on the real contour, decay regions and modified
//! equations.

pub mod roots;

use crate::error::{Error, Result};
use crate::model::StencilSpec;
use num_complex::Complex64 as C;
use num_rational::Rational64;
use std::collections::BTreeMap;

/// `P(z) = -h^{-m} sum_j a_j z^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DispersionRelation {
    pub laurent_coeffs: BTreeMap<i32, C>,
    pub h: f64,
    pub m: u32,
}

pub fn dispersion_from_stencil(stencil: &StencilSpec, h: f64) -> Result<DispersionRelation> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("mesh width {h} is not positive")));
    }
    let scale = -1.0 / h.powi(stencil.h_power as i32);
    let laurent_coeffs = stencil.offsets.iter().zip(&stencil.coeffs).map(|(&j, &a)| (j, a * scale)).collect();
    Ok(DispersionRelation { laurent_coeffs, h, m: stencil.h_power })
}

impl DispersionRelation {
    pub fn eval_z(&self, z: C) -> C {
        self.laurent_coeffs.iter().map(|(&j, &a)| a * z.powi(j)).sum()
    }

    /// `W(k)`.
    pub fn eval_w(&self, k: C) -> C {
        self.eval_z((C::i() * k * self.h).exp())
    }

    /// Smallest and largest exponent of the cleared polynomial, `min(jmin,0)` and `max(jmax,0)`.
    pub fn exponent_span(&self) -> (i32, i32) {
        let lo = (*self.laurent_coeffs.keys().next().unwrap()).min(0);
        let hi = (*self.laurent_coeffs.keys().last().unwrap()).max(0);
        (lo, hi)
    }

    /// Ascending coefficients of `zeta^{-lo} (P(zeta) - w)`.
    pub fn shifted_polynomial(&self, w: C) -> Vec<C> {
        let (lo, hi) = self.exponent_span();
        let mut c = vec![C::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (&j, &a) in &self.laurent_coeffs {
            c[(j - lo) as usize] += a;
        }
        c[(-lo) as usize] -= w;
        c
    }

    /// True when `P` has only nonnegative powers of `z`.
    pub fn is_entire_in_z(&self) -> bool {
        self.laurent_coeffs.keys().all(|&j| j >= 0)
    }
}

/// A nontrivial solution `zeta = e^{i nu h}` of `P(zeta) = P(e^{ikh})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryRoot {
    pub zeta: C,
    pub usable_on_contour: bool,
    /// The root coincides with the trivial one within the deflation tolerance.
    pub collides_with_trivial: bool,
}

const USABLE_TOL: f64 = 1e-9;

/// Nontrivial symmetry roots at a given `k`.
pub fn symmetries_at(d: &DispersionRelation, k: C) -> Result<Vec<SymmetryRoot>> {
    if !(k.re.is_finite() && k.im.is_finite()) {
        return Err(Error::InvalidArgument("k must be finite".into()));
    }
    let z = (C::i() * k * d.h).exp();
    let w = d.eval_z(z);
    let mut poly = d.shifted_polynomial(w);
    while poly.len() > 1 && poly.last().unwrap().norm() == 0.0 {
        poly.pop();
    }
    let (quot, _rem) = roots::deflate(&poly, z);
    let found = roots::roots(&quot).ok_or(Error::RootFinding { k })?;
    let mut out = Vec::with_capacity(found.len());
    for mut zeta in found {
        for _ in 0..2 {
            let (p, dp) = roots::horner(&quot, zeta);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if step.re.is_finite() && step.im.is_finite() && step.norm() < 1e-6 * (1.0 + zeta.norm()) {
                zeta -= step;
            }
        }
        if !(zeta.re.is_finite() && zeta.im.is_finite()) {
            return Err(Error::RootFinding { k });
        }
        out.push(SymmetryRoot {
            zeta,
            usable_on_contour: zeta.norm() >= 1.0 - USABLE_TOL,
            collides_with_trivial: (zeta - z).norm() <= 1e-8 * (1.0 + z.norm()),
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Everywhere,
    Nowhere,
    Mixed,
}

/// Per-symmetry tracking across an ordered list of contour samples.
#[derive(Clone, Debug)]
pub struct UsabilityReport {
    pub samples: Vec<f64>,
    /// `tracks[i][s]` is symmetry `i` at sample `s`.
    pub tracks: Vec<Vec<C>>,
    pub verdicts: Vec<Verdict>,
    /// Largest number of symmetries usable at one sample.
    pub max_simultaneous: usize,
    /// `Some(eps)` when `zeta * z = eps` with `|eps| = 1` at every sample.
    pub reflective: Vec<Option<C>>,
}

impl UsabilityReport {
    pub fn usable_count(&self) -> usize {
        self.verdicts.iter().filter(|v| **v == Verdict::Everywhere).count()
    }
}

/// Midpoint samples of `[-pi/h, pi/h]`.
pub fn contour_samples(h: f64, count: usize) -> Vec<f64> {
    let a = std::f64::consts::PI / h;
    (0..count).map(|i| -a + 2.0 * a * (i as f64 + 0.5) / count as f64).collect()
}

/// Tracks symmetry roots across ordered real samples and classifies them.
pub fn symmetry_usability_report(d: &DispersionRelation, k_samples: &[f64]) -> Result<UsabilityReport> {
    if k_samples.is_empty() {
        return Err(Error::InvalidArgument("no k samples".into()));
    }
    let first = symmetries_at(d, C::new(k_samples[0], 0.0))?;
    let mut tracks: Vec<Vec<C>> = first.iter().map(|r| vec![r.zeta]).collect();
    for (s, &k) in k_samples.iter().enumerate().skip(1) {
        let roots = symmetries_at(d, C::new(k, 0.0))?;
        if roots.len() != tracks.len() {
            return Err(Error::RootTracking { index: s });
        }
        let mut taken = vec![false; roots.len()];
        for tr in tracks.iter_mut() {
            let prev = *tr.last().unwrap();
            let mut dist: Vec<(f64, usize)> = roots.iter().enumerate().map(|(j, r)| ((r.zeta - prev).norm(), j)).collect();
            dist.sort_by(|a, b| a.0.total_cmp(&b.0));
            if dist.len() > 1 && dist[1].0 <= 10.0 * dist[0].0 {
                return Err(Error::RootTracking { index: s });
            }
            let j = dist[0].1;
            if taken[j] {
                return Err(Error::RootTracking { index: s });
            }
            taken[j] = true;
            tr.push(roots[j].zeta);
        }
    }
    let usable = |z: &C| z.norm() >= 1.0 - USABLE_TOL;
    let verdicts = tracks
        .iter()
        .map(|tr| {
            let n = tr.iter().filter(|z| usable(z)).count();
            if n == tr.len() {
                Verdict::Everywhere
            } else if n == 0 {
                Verdict::Nowhere
            } else {
                Verdict::Mixed
            }
        })
        .collect();
    let max_simultaneous = (0..k_samples.len()).map(|s| tracks.iter().filter(|tr| usable(&tr[s])).count()).max().unwrap_or(0);
    let reflective = tracks
        .iter()
        .map(|tr| {
            let eps: Vec<C> = tr.iter().zip(k_samples).map(|(zeta, &k)| zeta * C::from_polar(1.0, k * d.h)).collect();
            let e0 = eps[0];
            let same = eps.iter().all(|e| (e - e0).norm() <= 1e-8);
            (same && (e0.norm() - 1.0).abs() <= 1e-8).then_some(e0)
        })
        .collect();
    Ok(UsabilityReport { samples: k_samples.to_vec(), tracks, verdicts, max_simultaneous, reflective })
}

/// [`symmetry_usability_report`] over [`contour_samples`], doubling the sample count on tracking ambiguity.
pub fn refined_usability_report(d: &DispersionRelation, count: usize, max_count: usize) -> Result<UsabilityReport> {
    let mut n = count.max(1);
    loop {
        match symmetry_usability_report(d, &contour_samples(d.h, n)) {
            Err(Error::RootTracking { .. }) if n * 2 <= max_count => n *= 2,
            r => return r,
        }
    }
}

/// Coefficients `c_p`, `p = 1..=p_max`, of the modified equation `p_t = sum c_p d^p p / dx^p`.
pub fn modified_equation(stencil: &StencilSpec, h: f64, p_max: u32) -> Vec<(u32, C)> {
    (1..=p_max).map(|p| (p, stencil.moment(p) * h.powi(p as i32 - stencil.h_power as i32))).collect()
}

/// An exact modified-equation coefficient `coefficient * h^{h_exponent}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactCoefficient {
    pub order: u32,
    pub coefficient: Rational64,
    pub h_exponent: i32,
}

/// Rational-arithmetic version of [`modified_equation`] for stencils with rational coefficients.
pub fn modified_equation_exact(offsets: &[i32], coeffs: &[Rational64], h_power: u32, p_max: u32) -> Vec<ExactCoefficient> {
    (1..=p_max)
        .map(|p| {
            let fact: i64 = (1..=p as i64).product();
            let sum: Rational64 = offsets
                .iter()
                .zip(coeffs)
                .map(|(&j, &a)| a * Rational64::from_integer((j as i64).pow(p)))
                .fold(Rational64::from_integer(0), |x, y| x + y);
            ExactCoefficient { order: p, coefficient: sum / Rational64::from_integer(fact), h_exponent: p as i32 - h_power as i32 }
        })
        .collect()
}

/// Sign of `Re(-W(k))`: `-1`, `0` or `1`.
pub fn decay_region(d: &DispersionRelation, k: C) -> i8 {
    let v = -d.eval_w(k).re;
    let scale = d.laurent_coeffs.values().map(|a| a.norm()).sum::<f64>() * 1e-13;
    if v > scale {
        1
    } else if v < -scale {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn r(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn forward_advection_relation() {
        let d = dispersion_from_stencil(&StencilSpec::advection_forward(2.0), 0.1).unwrap();
        let k = C::new(3.0, -0.2);
        let want = 2.0 * (1.0 - (C::i() * k * 0.1).exp()) / 0.1;
        assert!((d.eval_w(k) - want).norm() < 1e-12);
        assert!((d.eval_w(r(PI / 0.1)) - r(40.0)).norm() < 1e-12);
        assert!(dispersion_from_stencil(&StencilSpec::advection_forward(2.0), 0.0).is_err());
    }

    #[test]
    fn centered_heat_values() {
        let d = dispersion_from_stencil(&StencilSpec::centered2(r(1.0)), 0.05).unwrap();
        assert!(d.eval_w(r(0.0)).norm() < 1e-12);
        assert!((d.eval_w(r(PI / 0.05)) - r(4.0 / 0.0025)).norm() < 1e-9);
        let d4 = dispersion_from_stencil(&StencilSpec::centered4(r(1.0)), 0.05).unwrap();
        assert!(d4.eval_w(r(0.0)).norm() < 1e-10);
    }

    #[test]
    fn centered_advection_matches_sine_form() {
        let h = 0.02;
        let d = dispersion_from_stencil(&StencilSpec::advection_centered(1.5), h).unwrap();
        for i in 0..100 {
            let k = -PI / h + 2.0 * PI / h * (i as f64 + 0.37) / 100.0;
            let want = -1.5 * (k * h).sin() / (C::i() * h);
            assert!((d.eval_w(r(k)) - want).norm() < 1e-10);
        }
    }

    #[test]
    fn root_counts_and_known_roots() {
        let h = 0.1;
        let k = r(1.3);
        let z = (C::i() * k * h).exp();
        let heat = dispersion_from_stencil(&StencilSpec::centered2(r(1.0)), h).unwrap();
        let s = symmetries_at(&heat, k).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0].zeta - 1.0 / z).norm() < 1e-12 && s[0].usable_on_contour);
        let adv = dispersion_from_stencil(&StencilSpec::advection_centered(1.0), h).unwrap();
        let s = symmetries_at(&adv, k).unwrap();
        assert!((s[0].zeta + 1.0 / z).norm() < 1e-12);
        let fwd = dispersion_from_stencil(&StencilSpec::advection_forward(1.0), h).unwrap();
        assert!(symmetries_at(&fwd, k).unwrap().is_empty());
    }

    #[test]
    fn fourth_order_report() {
        let h = 0.1;
        let d = dispersion_from_stencil(&StencilSpec::centered4(r(1.0)), h).unwrap();
        let rep = symmetry_usability_report(&d, &contour_samples(h, 200)).unwrap();
        assert_eq!(rep.tracks.len(), 3);
        assert_eq!(rep.max_simultaneous, 2);
        assert_eq!(rep.usable_count(), 2);
        assert_eq!(rep.reflective.iter().filter(|e| e.is_some()).count(), 1);
    }

    #[test]
    fn backward_onesided_heat_is_unusable() {
        let h = 0.1;
        let d = dispersion_from_stencil(&StencilSpec::backward_onesided2(r(1.0)), h).unwrap();
        let rep = symmetry_usability_report(&d, &contour_samples(h, 100)).unwrap();
        assert_eq!(rep.verdicts, vec![Verdict::Nowhere]);
    }

    #[test]
    fn modified_equation_tables() {
        let h = 0.1;
        let c = modified_equation(&StencilSpec::advection_forward(2.0), h, 3);
        assert!((c[0].1 - r(2.0)).norm() < 1e-14);
        assert!((c[1].1 - r(2.0 * h / 2.0)).norm() < 1e-14);
        assert!((c[2].1 - r(2.0 * h * h / 6.0)).norm() < 1e-14);
        let e = modified_equation_exact(&[-1, 0, 1], &[1, -2, 1].map(Rational64::from_integer), 2, 4);
        assert_eq!(e[0].coefficient, Rational64::from_integer(0));
        assert_eq!(e[1].coefficient, Rational64::from_integer(1));
        assert_eq!(e[3], ExactCoefficient { order: 4, coefficient: Rational64::new(1, 12), h_exponent: 2 });
    }

    #[test]
    fn decay_region_signs() {
        let h = 0.1;
        let d = dispersion_from_stencil(&StencilSpec::advection_forward(1.0), h).unwrap();
        for i in 1..50 {
            let k = r(-PI / h + 2.0 * PI / h * i as f64 / 50.0);
            assert!(decay_region(&d, k) <= 0);
            let closed = -(1.0 - (k.re * h).cos()) / h;
            assert!((-d.eval_w(k).re - closed).abs() < 1e-12);
        }
        for &s in &[0.01, 0.1, 0.5] {
            assert_eq!(decay_region(&d, C::new(0.3, s)), -1);
        }
    }
}
