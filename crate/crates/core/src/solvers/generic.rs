//! Mechanical derivation of semi-discrete solutions for arbitrary stencils.
//!
//! Pipeline: dispersion relation, boundary kernels `g_p` of the global
//! relation, removal of kernels that integrate to zero, usable symmetries,
//! discretized boundary traces, and a per-`k` linear solve that eliminates the
//! unknown node transforms.

use super::laurent::Laurent;
use super::{boundary_data, node_list};
use crate::dispersion::{contour_samples, dispersion_from_stencil, symmetries_at, symmetry_usability_report, DispersionRelation, Verdict};
use crate::error::{codes, Error, Result};
use crate::model::{ensure_valid, Boundary, IBVPSpec, Method, Provenance, QuadratureConfig, SolutionField, TimeFunction};
use crate::transforms::{contour_integral_nodes, initial_transform, kernel_transform};
use num_complex::Complex64 as C;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Mutex;

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct GenericOptions {
    /// Overrides the first node of the transform (default 1 for Dirichlet data, else 0).
    pub start_index: Option<u32>,
}


/// Where an equation of the boundary system comes from.
#[derive(Clone, Debug)]
pub enum RowSource {
    /// Global relation at a symmetry `zeta = eps / z`.
    Reflective { eps: C },
    /// Global relation at the `rank`-th largest usable non-reflective root.
    Symmetry { rank: usize },
    /// Discretized boundary trace `d^order q(0,t)`.
    Trace { order: u32, derived: bool, weights: Vec<(i32, C)>, data: TimeFunction },
}

/// The per-`k` linear system for the unknown boundary-node transforms.
#[derive(Clone, Debug)]
pub struct BoundaryTransformSystem {
    pub start_index: u32,
    /// Kernel `g_p(z)` of every boundary node in the global relation.
    pub kernels: BTreeMap<i32, Laurent>,
    /// Nodes whose transform is given by Dirichlet data.
    pub known: Vec<i32>,
    /// Known nodes whose terms survive in the solution integrand.
    pub known_in_solution: Vec<i32>,
    pub unknowns: Vec<i32>,
    pub rows: Vec<RowSource>,
    pub diagnostics: Vec<&'static str>,
    /// Largest 1-norm condition number seen at the check samples.
    pub max_condition: f64,
    reflective_all: Vec<C>,
    dispersion: DispersionRelation,
    h: f64,
    m: u32,
}

/// Solution field together with the system that produced it.
#[derive(Clone, Debug)]
pub struct GenericSolution {
    pub field: SolutionField,
    pub system: BoundaryTransformSystem,
}

fn boundary_kernels(spec: &IBVPSpec, s: i32) -> BTreeMap<i32, Laurent> {
    let m = spec.stencil.h_power as i32;
    let hf = spec.h.powi(1 - m);
    let mut g: BTreeMap<i32, Laurent> = BTreeMap::new();
    for (&j, &a) in spec.stencil.offsets.iter().zip(&spec.stencil.coeffs) {
        if j < 0 {
            for p in (s + j)..s {
                g.entry(p).or_default().add_term(j - p, a * hf);
            }
        } else if j > 0 {
            for p in s..(s + j) {
                g.entry(p).or_default().add_term(j - p, -a * hf);
            }
        }
    }
    let scale = spec.stencil.coeffs.iter().map(|c| c.norm()).sum::<f64>() * hf * 1e-14;
    g.into_iter().map(|(p, l)| (p, l.trimmed(scale))).filter(|(_, l)| !l.is_zero()).collect()
}

/// Fornberg weights for `d^order/dx^order` at 0 on integer offsets.
fn fd_weights(offsets: &[i32], order: u32) -> Option<Vec<C>> {
    let n = offsets.len();
    let mut a = vec![vec![C::new(0.0, 0.0); n]; n];
    let mut b = vec![C::new(0.0, 0.0); n];
    for p in 0..n {
        for (i, &x) in offsets.iter().enumerate() {
            a[p][i] = C::new((x as f64).powi(p as i32), 0.0);
        }
    }
    b[order as usize] = C::new((1..=order).fold(1.0, |f, k| f * k as f64), 0.0);
    solve_linear(a, b)
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub(crate) fn solve_linear(mut a: Vec<Vec<C>>, mut b: Vec<C>) -> Option<Vec<C>> {
    let n = b.len();
    let scale = a.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() <= 1e-13 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != C::new(0.0, 0.0) {
                for c in col..n {
                    let v = a[col][c];
                    a[r][c] -= f * v;
                }
                let v = b[col];
                b[r] -= f * v;
            }
        }
    }
    let mut x = vec![C::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let s: C = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn condition_1(m: &[Vec<C>]) -> f64 {
    let n = m.len();
    let norm = |cols: &dyn Fn(usize) -> Vec<C>| (0..n).map(|c| cols(c).iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max);
    let a_norm = norm(&|c| m.iter().map(|row| row[c]).collect());
    let mut inv_cols = Vec::with_capacity(n);
    for c in 0..n {
        let mut e = vec![C::new(0.0, 0.0); n];
        e[c] = C::new(1.0, 0.0);
        match solve_linear(m.to_vec(), e) {
            Some(x) => inv_cols.push(x),
            None => return f64::INFINITY,
        }
    }
    a_norm * norm(&|c| inv_cols[c].clone())
}

/// Contiguous window of `order + 1` available nodes containing 0, closest to centered, ties toward negative offsets.
fn trace_window(order: u32, available: &[i32]) -> Option<Vec<i32>> {
    let w = order as i32 + 1;
    let mut best: Option<(f64, i32)> = None;
    for l in (1 - w)..=0 {
        if (l..l + w).all(|p| available.contains(&p)) {
            let centre = (l as f64 + (w - 1) as f64 / 2.0).abs();
            if best.is_none_or(|(c, _)| centre < c - 1e-12) {
                best = Some((centre, l));
            }
        }
    }
    best.map(|(_, l)| (l..l + w).collect())
}

impl BoundaryTransformSystem {
    /// Builds the system for a problem whose reporting window starts at `n_min`.
    pub fn build(spec: &IBVPSpec, n_min: i64, opts: &GenericOptions) -> Result<Self> {
        let h = spec.h;
        let d = dispersion_from_stencil(&spec.stencil, h)?;
        let dirichlet = matches!(spec.boundary, Boundary::Dirichlet(_));
        let s = opts.start_index.unwrap_or(if dirichlet { 1 } else { 0 });
        if s > 1 {
            return Err(Error::InvalidArgument("start index must be 0 or 1".into()));
        }
        let kernels = boundary_kernels(spec, s as i32);
        let known: Vec<i32> = if dirichlet { kernels.keys().copied().filter(|&p| p == 0).collect() } else { vec![] };
        let vanishes = |p: &i32| {
            d.is_entire_in_z() && kernels[p].min_power().is_none_or(|q| n_min + q as i64 >= 1)
        };
        let known_in_solution: Vec<i32> = known.iter().copied().filter(|p| !vanishes(p)).collect();
        let all_unknown: Vec<i32> = kernels.keys().copied().filter(|p| !known.contains(p)).collect();
        let unknowns = if all_unknown.iter().all(vanishes) { vec![] } else { all_unknown };
        let mut diagnostics = Vec::new();
        if !matches!(spec.boundary, Boundary::None) && known_in_solution.is_empty() && unknowns.is_empty() {
            diagnostics.push(codes::NO_BOUNDARY_DATA_USED);
        }
        let mut sys = BoundaryTransformSystem {
            start_index: s,
            kernels,
            known,
            known_in_solution,
            unknowns,
            rows: vec![],
            diagnostics,
            max_condition: 1.0,
            reflective_all: vec![],
            dispersion: d,
            h,
            m: spec.stencil.h_power,
        };
        if sys.unknowns.is_empty() {
            return Ok(sys);
        }
        sys.collect_rows(spec)?;
        sys.check_samples(n_min)?;
        Ok(sys)
    }

    fn collect_rows(&mut self, spec: &IBVPSpec) -> Result<()> {
        let need = self.unknowns.len();
        let mut report = None;
        for count in [256, 1024, 4096] {
            match symmetry_usability_report(&self.dispersion, &contour_samples(self.h, count)) {
                Ok(r) => {
                    report = Some(r);
                    break;
                }
                Err(Error::RootTracking { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        let report = report.ok_or(Error::RootTracking { index: 0 })?;
        self.reflective_all = report.reflective.iter().flatten().copied().collect();
        for (v, eps) in report.verdicts.iter().zip(&report.reflective) {
            if let (Verdict::Everywhere, Some(eps)) = (v, eps) {
                if self.rows.len() < need {
                    self.rows.push(RowSource::Reflective { eps: *eps });
                }
            }
        }
        let mut available = self.unknowns.clone();
        if matches!(spec.boundary, Boundary::Dirichlet(_)) && !available.contains(&0) {
            available.push(0);
        }
        let cm = spec.stencil.leading_coefficient();
        let m = self.m;
        let mut traces: Vec<(u32, bool, usize)> = Vec::new();
        match &spec.boundary {
            Boundary::Dirichlet(_) => traces.extend([(m, true, 1), (2 * m, true, 2)]),
            Boundary::Neumann(_) => traces.extend([(1, false, 0), (1 + m, true, 1), (1 + 2 * m, true, 2)]),
            Boundary::None => {}
        }
        let data = boundary_data(spec);
        for (order, derived, j) in traces {
            if self.rows.len() >= need {
                break;
            }
            let Some(win) = trace_window(order, &available) else { continue };
            let g = data.unwrap().derivative(j)?.scaled(C::new(1.0, 0.0) / cm.powi(j as i32));
            let w = fd_weights(&win, order).ok_or_else(|| Error::InvalidArgument("degenerate trace window".into()))?;
            let hs = self.h.powi(order as i32);
            let weights = win.iter().zip(w).map(|(&p, c)| (p, c / hs)).collect();
            self.rows.push(RowSource::Trace { order, derived, weights, data: g });
        }
        let nonrefl = report.verdicts.iter().zip(&report.reflective).filter(|(v, e)| **v == Verdict::Everywhere && e.is_none()).count();
        for rank in 0..nonrefl {
            if self.rows.len() >= need {
                break;
            }
            self.rows.push(RowSource::Symmetry { rank });
        }
        if self.rows.len() < need {
            return Err(Error::Unnatural { deficit: need - self.rows.len(), unknowns: self.unknowns.clone() });
        }
        Ok(())
    }

    /// Symmetry points of the global-relation rows at `k`.
    fn zetas(&self, k: f64) -> Result<Vec<Option<C>>> {
        let z = C::from_polar(1.0, k * self.h);
        let mut nonrefl: Option<Vec<C>> = None;
        let mut out = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            out.push(match row {
                RowSource::Reflective { eps } => Some(eps / z),
                RowSource::Symmetry { rank } => {
                    if nonrefl.is_none() {
                        let roots = symmetries_at(&self.dispersion, C::new(k, 0.0))?;
                        let mut v: Vec<C> = roots
                            .into_iter()
                            .filter(|r| r.usable_on_contour)
                            .map(|r| r.zeta)
                            .filter(|zeta| self.reflective_all.iter().all(|e| (zeta - e / z).norm() > 1e-6))
                            .collect();
                        v.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
                        nonrefl = Some(v);
                    }
                    Some(*nonrefl.as_ref().unwrap().get(*rank).ok_or(Error::RootFinding { k: C::new(k, 0.0) })?)
                }
                RowSource::Trace { .. } => None,
            });
        }
        Ok(out)
    }

    fn matrix(&self, zetas: &[Option<C>]) -> Vec<Vec<C>> {
        self.rows
            .iter()
            .zip(zetas)
            .map(|(row, zeta)| match (row, zeta) {
                (RowSource::Trace { weights, .. }, _) => self
                    .unknowns
                    .iter()
                    .map(|u| weights.iter().filter(|(p, _)| p == u).map(|(_, c)| *c).sum())
                    .collect(),
                (_, Some(zeta)) => self.unknowns.iter().map(|u| self.kernels[u].eval(*zeta)).collect(),
                _ => unreachable!(),
            })
            .collect()
    }

    /// Weights `lambda` with `sum_u g_u(z) B_u = sum_i lambda_i rhs_i`, plus the symmetry points used.
    pub fn lambda_at(&self, k: f64) -> Result<(Vec<C>, Vec<Option<C>>)> {
        let zetas = self.zetas(k)?;
        let m = self.matrix(&zetas);
        let n = m.len();
        let mt: Vec<Vec<C>> = (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect();
        let z = C::from_polar(1.0, k * self.h);
        let g: Vec<C> = self.unknowns.iter().map(|u| self.kernels[u].eval(z)).collect();
        let lam = solve_linear(mt, g).ok_or(Error::SingularSystem { k })?;
        Ok((lam, zetas))
    }

    fn check_samples(&mut self, n_min: i64) -> Result<()> {
        let samples = 64usize;
        let mut lam_s: Vec<Vec<C>> = Vec::with_capacity(samples);
        let mut cond: f64 = 1.0;
        for j in 0..samples {
            let th = -PI + 2.0 * PI * (j as f64 + 0.5) / samples as f64;
            let k = th / self.h;
            let (lam, zetas) = self.lambda_at(k)?;
            cond = cond.max(condition_1(&self.matrix(&zetas)));
            lam_s.push(lam);
        }
        self.max_condition = cond;
        let scale = lam_s.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        let allowed = 1 - n_min - self.start_index as i64;
        for (i, row) in self.rows.iter().enumerate() {
            match row {
                RowSource::Symmetry { .. } => {
                    let worst = lam_s.iter().map(|l| l[i].norm()).fold(0.0, f64::max);
                    if worst > 1e-9 * scale {
                        return Err(Error::DroppedTermNonvanishing { symmetry: i });
                    }
                }
                RowSource::Reflective { .. } => {
                    let big = lam_s.iter().map(|l| l[i].norm()).fold(0.0, f64::max);
                    let half = samples as i64 / 2;
                    for q in -half..half {
                        let c: C = lam_s
                            .iter()
                            .enumerate()
                            .map(|(j, l)| {
                                let th = -PI + 2.0 * PI * (j as f64 + 0.5) / samples as f64;
                                l[i] * C::from_polar(1.0, -(q as f64) * th)
                            })
                            .sum::<C>()
                            / samples as f64;
                        let outside = q < allowed || q.abs() > half / 2;
                        if outside && c.norm() > 1e-9 * big.max(1e-300) {
                            return Err(Error::DroppedTermNonvanishing { symmetry: i });
                        }
                    }
                }
                RowSource::Trace { .. } => {}
            }
        }
        Ok(())
    }
}

/// Solves with the generic engine.
pub fn generic_solve(spec: &IBVPSpec, n_range: (i64, i64), t: f64, cfg: &QuadratureConfig) -> Result<SolutionField> {
    Ok(generic_solve_with(spec, n_range, t, cfg, &GenericOptions::default())?.field)
}

/// Solves with the generic engine and returns the boundary system alongside.
pub fn generic_solve_with(spec: &IBVPSpec, n_range: (i64, i64), t: f64, cfg: &QuadratureConfig, opts: &GenericOptions) -> Result<GenericSolution> {
    ensure_valid(spec)?;
    cfg.check()?;
    if !(t >= spec.t0) {
        return Err(Error::InvalidArgument(format!("T = {t} precedes t0 = {}", spec.t0)));
    }
    let ns = node_list(n_range)?;
    let mut sys = BoundaryTransformSystem::build(spec, n_range.0, opts)?;
    let h = spec.h;
    let t0 = spec.t0;
    let tau = t - t0;
    let qhat = initial_transform(&spec.initial, h, sys.start_index, cfg)?;
    let dirichlet = matches!(spec.boundary, Boundary::Dirichlet(_));
    let u = match &spec.boundary {
        Boundary::Dirichlet(u) => u.clone(),
        _ => TimeFunction::zero(),
    };
    let nudged = Mutex::new(false);
    let sysr = &sys;
    let f = |k0: f64| -> Result<C> {
        let (k, (lam, zetas)) = if sysr.unknowns.is_empty() {
            (k0, (vec![], vec![]))
        } else {
            match sysr.lambda_at(k0) {
                Ok(v) => (k0, v),
                Err(Error::SingularSystem { .. }) => {
                    let k1 = k0 + 1e-7 * PI / h;
                    *nudged.lock().unwrap() = true;
                    (k1, sysr.lambda_at(k1)?)
                }
                Err(e) => return Err(e),
            }
        };
        let z = C::from_polar(1.0, k * h);
        let w = sysr.dispersion.eval_z(z);
        let e = (-w * tau).exp();
        let mut total = e * qhat.eval_log(C::new(0.0, -k * h));
        let bu = if dirichlet { kernel_transform(&u, w, t0, t, cfg)? } else { C::new(0.0, 0.0) };
        for p in &sysr.known_in_solution {
            total += sysr.kernels[p].eval(z) * bu;
        }
        for ((row, zeta), l) in sysr.rows.iter().zip(&zetas).zip(&lam) {
            let rhs = match (row, zeta) {
                (RowSource::Trace { weights, data, .. }, _) => {
                    let mut r = kernel_transform(data, w, t0, t, cfg)?;
                    for (p, c) in weights {
                        if !sysr.unknowns.contains(p) {
                            r -= c * bu;
                        }
                    }
                    r
                }
                (_, Some(zeta)) => {
                    let mut r = -e * qhat.eval_zeta(*zeta);
                    for p in &sysr.known {
                        r -= sysr.kernels[p].eval(*zeta) * bu;
                    }
                    r
                }
                _ => unreachable!(),
            };
            total += l * rhs;
        }
        Ok(total)
    };
    let values = contour_integral_nodes(&f, &ns, h, cfg)?;
    if *nudged.lock().unwrap() {
        sys.diagnostics.push(codes::DEGENERATE_NODE_NUDGED);
    }
    let field = SolutionField::new(h, t, n_range, values, Provenance { method: Method::Generic, quadrature: *cfg })?;
    Ok(GenericSolution { field, system: sys })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_choice() {
        assert_eq!(trace_window(2, &[-1, 0, 1, 2]), Some(vec![-1, 0, 1]));
        assert_eq!(trace_window(1, &[-1, 0]), Some(vec![-1, 0]));
        assert_eq!(trace_window(2, &[-1, 0]), None);
        assert_eq!(trace_window(1, &[-1, 0, 1]), Some(vec![-1, 0]));
    }

    #[test]
    fn weights_second_derivative() {
        let w = fd_weights(&[-1, 0, 1], 2).unwrap();
        for (a, b) in w.iter().zip([1.0, -2.0, 1.0]) {
            assert!((a.re - b).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_solver() {
        let a = vec![vec![C::new(2.0, 0.0), C::new(1.0, 0.0)], vec![C::new(1.0, 0.0), C::new(3.0, 1.0)]];
        let x = solve_linear(a.clone(), vec![C::new(1.0, 0.0), C::new(2.0, 0.0)]).unwrap();
        let r0 = a[0][0] * x[0] + a[0][1] * x[1];
        assert!((r0 - 1.0).norm() < 1e-14);
        assert!(solve_linear(vec![vec![C::new(1.0, 0.0); 2]; 2], vec![C::new(1.0, 0.0); 2]).is_none());
    }
}
