//! Reference solutions of the continuous half-line problems.

mod advection;
mod diffusion;

pub use advection::exact_advection;
pub use diffusion::erfc_solution;

use crate::error::{Error, Result};
use crate::model::{Boundary, IBVPSpec, Pde, QuadratureConfig, Sign, SpaceFunction, TimeFunction};
use num_complex::Complex64 as C;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContinuousKind {
    /// `q_t = c q_x`, no boundary condition.
    AdvectionRight,
    /// `q_t = -c q_x` with Dirichlet data.
    AdvectionLeftDirichlet,
    HeatDirichlet,
    HeatNeumann,
    LsDirichlet,
    LsNeumann,
}

/// A continuous problem whose solution is evaluated from its transform representation.
#[derive(Clone, Debug)]
pub struct ContinuousSolution {
    pub kind: ContinuousKind,
    /// Advection speed (unused for the second-order equations).
    pub c: f64,
    pub initial: SpaceFunction,
    pub boundary: Option<TimeFunction>,
    pub t0: f64,
    pub cfg: QuadratureConfig,
}

impl ContinuousSolution {
    /// The continuous counterpart of a discretized problem.
    pub fn from_spec(spec: &IBVPSpec, cfg: &QuadratureConfig) -> Result<Self> {
        let (kind, c) = match (&spec.pde, &spec.boundary) {
            (Pde::Advection { c, sign: Sign::Plus }, Boundary::None) => (ContinuousKind::AdvectionRight, *c),
            (Pde::Advection { c, sign: Sign::Minus }, Boundary::Dirichlet(_)) => (ContinuousKind::AdvectionLeftDirichlet, *c),
            (Pde::Heat, Boundary::Dirichlet(_)) => (ContinuousKind::HeatDirichlet, 0.0),
            (Pde::Heat, Boundary::Neumann(_)) => (ContinuousKind::HeatNeumann, 0.0),
            (Pde::Schrodinger, Boundary::Dirichlet(_)) => (ContinuousKind::LsDirichlet, 0.0),
            (Pde::Schrodinger, Boundary::Neumann(_)) => (ContinuousKind::LsNeumann, 0.0),
            (pde, b) => return Err(Error::Unsupported(format!("no continuous solution for {pde} with {} data", b.kind()))),
        };
        let boundary = match &spec.boundary {
            Boundary::Dirichlet(g) | Boundary::Neumann(g) => Some(g.clone()),
            Boundary::None => None,
        };
        Ok(ContinuousSolution { kind, c, initial: spec.initial.clone(), boundary, t0: spec.t0, cfg: *cfg })
    }

    /// Diffusion coefficient `D` in `q_t = D q_xx`.
    pub fn diffusivity(&self) -> Option<C> {
        match self.kind {
            ContinuousKind::HeatDirichlet | ContinuousKind::HeatNeumann => Some(C::new(1.0, 0.0)),
            ContinuousKind::LsDirichlet | ContinuousKind::LsNeumann => Some(C::new(0.0, 0.5)),
            _ => None,
        }
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self.kind, ContinuousKind::AdvectionLeftDirichlet | ContinuousKind::HeatDirichlet | ContinuousKind::LsDirichlet)
    }

    /// Truncation of the real-line integral so that `e^{-k^2 tau}` falls below the tolerance.
    pub fn k_max(&self, t: f64) -> f64 {
        let tau = t - self.t0;
        ((1e3 / self.cfg.abs_tol).ln() / tau).sqrt()
    }

    /// Best available reference value: exact formulas for advection,
    /// the transform representation for heat, error functions for Schrödinger.
    pub fn reference(&self, x: f64, t: f64) -> Result<C> {
        match self.kind {
            ContinuousKind::LsDirichlet | ContinuousKind::LsNeumann => erfc_solution(self, x, t),
            _ => continuous_utm(self, x, t),
        }
    }
}

/// Solution at `(x, T)` from the continuous transform representation.
pub fn continuous_utm(sol: &ContinuousSolution, x: f64, t: f64) -> Result<C> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::InvalidArgument(format!("x = {x} outside the half-line")));
    }
    if !(t >= sol.t0) {
        return Err(Error::InvalidArgument(format!("T = {t} precedes t0 = {}", sol.t0)));
    }
    match sol.kind {
        ContinuousKind::AdvectionRight | ContinuousKind::AdvectionLeftDirichlet => advection::utm(sol, x, t),
        _ => {
            if t == sol.t0 {
                return Err(Error::InvalidArgument("the diffusive representation needs T > t0; use the initial data".into()));
            }
            diffusion::utm(sol, x, t)
        }
    }
}
