//! Domain types shared by every other module: stencils, data functions,
//! problem descriptions, quadrature settings and solution fields.

pub mod config;
pub mod expr;
pub mod exppoly;

use crate::error::{Error, Result};
use crate::solvers::CaseId;
use exppoly::ExpPoly;
use num_complex::Complex64 as C;
use std::fmt;
use std::sync::Arc;

pub type Fun = Arc<dyn Fn(f64) -> C + Send + Sync>;

/// Finite-difference stencil `dq_n/dt = h^{-m} sum_j a_j q_{n+j}` with the PDE constant folded in.
#[derive(Clone, Debug, PartialEq)]
pub struct StencilSpec {
    pub offsets: Vec<i32>,
    pub coeffs: Vec<C>,
    pub h_power: u32,
    pub label: String,
}

fn r(x: f64) -> C {
    C::new(x, 0.0)
}

impl StencilSpec {
    /// Builds a stencil, rejecting malformed or inconsistent coefficient sets.
    pub fn new(offsets: Vec<i32>, coeffs: Vec<C>, h_power: u32, label: &str) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::InvalidStencil("no offsets".into()));
        }
        if offsets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStencil("offsets must be strictly increasing".into()));
        }
        if coeffs.len() != offsets.len() {
            return Err(Error::InvalidStencil("coefficient count differs from offset count".into()));
        }
        if h_power == 0 {
            return Err(Error::InvalidStencil("h power must be positive".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidStencil("non-finite coefficient".into()));
        }
        let scale: f64 = coeffs.iter().map(|c| c.norm()).sum();
        if scale == 0.0 {
            return Err(Error::InvalidStencil("all coefficients are zero".into()));
        }
        let s = StencilSpec { offsets, coeffs, h_power, label: label.to_string() };
        for p in 0..h_power {
            if s.moment(p).norm() > 1e-12 * scale {
                return Err(Error::InvalidStencil(format!("moment of order {p} does not vanish")));
            }
        }
        if s.moment(h_power).norm() <= 1e-12 * scale {
            return Err(Error::InvalidStencil(format!("moment of order {h_power} vanishes")));
        }
        Ok(s)
    }

    /// `sum_j a_j j^p / p!`.
    pub fn moment(&self, p: u32) -> C {
        let fact: f64 = (1..=p).fold(1.0, |a, b| a * b as f64);
        self.offsets.iter().zip(&self.coeffs).map(|(&j, &a)| a * (j as f64).powi(p as i32)).sum::<C>() / fact
    }

    /// Leading coefficient of the modified equation (the PDE the stencil targets).
    pub fn leading_coefficient(&self) -> C {
        self.moment(self.h_power)
    }

    pub fn min_offset(&self) -> i32 {
        self.offsets[0]
    }

    pub fn max_offset(&self) -> i32 {
        *self.offsets.last().unwrap()
    }

    /// Forward difference for `q_t = c q_x`.
    pub fn advection_forward(c: f64) -> Self {
        Self::new(vec![0, 1], vec![r(-c), r(c)], 1, "advection forward").unwrap()
    }

    /// Backward difference for `q_t = -c q_x`.
    pub fn advection_backward(c: f64) -> Self {
        Self::new(vec![-1, 0], vec![r(c), r(-c)], 1, "advection backward").unwrap()
    }

    /// Centered difference for `q_t = -c q_x`.
    pub fn advection_centered(c: f64) -> Self {
        Self::new(vec![-1, 1], vec![r(c / 2.0), r(-c / 2.0)], 1, "advection centered").unwrap()
    }

    /// Second-order backward difference for `q_t = -c q_x`.
    pub fn advection_backward2(c: f64) -> Self {
        Self::new(vec![-2, -1, 0], vec![r(-c / 2.0), r(2.0 * c), r(-1.5 * c)], 1, "advection backward2").unwrap()
    }

    /// Three-point centered second difference scaled by `kappa`.
    pub fn centered2(kappa: C) -> Self {
        Self::new(vec![-1, 0, 1], vec![kappa, -2.0 * kappa, kappa], 2, "centered second difference").unwrap()
    }

    /// Five-point fourth-order centered second difference scaled by `kappa`.
    pub fn centered4(kappa: C) -> Self {
        let w = [-1.0, 16.0, -30.0, 16.0, -1.0];
        Self::new(vec![-2, -1, 0, 1, 2], w.iter().map(|x| kappa * x / 12.0).collect(), 2, "centered fourth-order second difference").unwrap()
    }

    /// One-sided second difference on nodes `n, n+1, n+2`.
    pub fn forward_onesided2(kappa: C) -> Self {
        Self::new(vec![0, 1, 2], vec![kappa, -2.0 * kappa, kappa], 2, "forward one-sided second difference").unwrap()
    }

    /// One-sided second difference on nodes `n-2, n-1, n`.
    pub fn backward_onesided2(kappa: C) -> Self {
        Self::new(vec![-2, -1, 0], vec![kappa, -2.0 * kappa, kappa], 2, "backward one-sided second difference").unwrap()
    }

    /// Looks up a stencil by name for the given PDE.
    pub fn named(name: &str, pde: &Pde) -> Result<Self> {
        let c = match pde {
            Pde::Advection { c, .. } => *c,
            _ => 1.0,
        };
        let kappa = pde.diffusion_coefficient();
        match (name, pde) {
            ("forward", Pde::Advection { sign: Sign::Plus, .. }) => Ok(Self::advection_forward(c)),
            ("backward", Pde::Advection { sign: Sign::Minus, .. }) => Ok(Self::advection_backward(c)),
            ("centered", Pde::Advection { sign: Sign::Minus, .. }) => Ok(Self::advection_centered(c)),
            ("backward2", Pde::Advection { sign: Sign::Minus, .. }) => Ok(Self::advection_backward2(c)),
            ("centered", Pde::Heat | Pde::Schrodinger) => Ok(Self::centered2(kappa)),
            ("centered4", Pde::Heat | Pde::Schrodinger) => Ok(Self::centered4(kappa)),
            ("forward_onesided", Pde::Heat | Pde::Schrodinger) => Ok(Self::forward_onesided2(kappa)),
            ("backward_onesided", Pde::Heat | Pde::Schrodinger) => Ok(Self::backward_onesided2(kappa)),
            _ => Err(Error::Config(format!("no stencil named '{name}' for {pde}"))),
        }
    }
}

/// A function of time with optional derivatives and an optional closed form.
#[derive(Clone)]
pub struct TimeFunction {
    value: Fun,
    derivs: Vec<Fun>,
    closed: Option<ExpPoly>,
}

impl fmt::Debug for TimeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeFunction")
            .field("derivatives", &self.derivs.len())
            .field("closed", &self.closed)
            .finish()
    }
}

impl TimeFunction {
    pub fn from_exppoly(e: ExpPoly) -> Self {
        let v = e.clone();
        let d1 = e.derivative();
        let d2 = d1.derivative();
        TimeFunction {
            value: Arc::new(move |t| v.eval(t)),
            derivs: vec![Arc::new(move |t| d1.eval(t)), Arc::new(move |t| d2.eval(t))],
            closed: Some(e),
        }
    }

    pub fn zero() -> Self {
        Self::from_exppoly(ExpPoly::zero())
    }

    pub fn constant(c: C) -> Self {
        Self::from_exppoly(ExpPoly::constant(c))
    }

    /// A function given only by its evaluator.
    pub fn from_fn(f: impl Fn(f64) -> C + Send + Sync + 'static) -> Self {
        TimeFunction { value: Arc::new(f), derivs: vec![], closed: None }
    }

    /// Attaches derivative evaluators of orders 1, 2, ...
    pub fn with_derivatives(mut self, derivs: Vec<Fun>) -> Self {
        self.derivs = derivs;
        self
    }

    /// Builds from a parsed expression, using a closed form when one exists.
    pub fn from_expr(e: &expr::Expr) -> Self {
        if let Some(p) = e.to_exppoly() {
            return Self::from_exppoly(p);
        }
        let mut derivs: Vec<Fun> = Vec::new();
        let mut cur = e.clone();
        for _ in 0..2 {
            match cur.derivative() {
                Ok(d) => {
                    let dd = d.clone();
                    derivs.push(Arc::new(move |t| dd.eval(C::new(t, 0.0))));
                    cur = d;
                }
                Err(_) => break,
            }
        }
        let v = e.clone();
        TimeFunction { value: Arc::new(move |t| v.eval(C::new(t, 0.0))), derivs, closed: None }
    }

    pub fn eval(&self, t: f64) -> C {
        (self.value)(t)
    }

    pub fn closed_form(&self) -> Option<&ExpPoly> {
        self.closed.as_ref()
    }

    /// Number of derivative evaluators available.
    pub fn derivative_count(&self) -> usize {
        if self.closed.is_some() {
            usize::MAX
        } else {
            self.derivs.len()
        }
    }

    /// The derivative of the given order as a function in its own right.
    pub fn derivative(&self, order: usize) -> Result<TimeFunction> {
        if order == 0 {
            return Ok(self.clone());
        }
        if let Some(e) = &self.closed {
            let mut d = e.clone();
            for _ in 0..order {
                d = d.derivative();
            }
            return Ok(Self::from_exppoly(d));
        }
        if order > self.derivs.len() {
            return Err(Error::MissingDerivative(order));
        }
        Ok(TimeFunction { value: self.derivs[order - 1].clone(), derivs: self.derivs[order..].to_vec(), closed: None })
    }

    /// Multiplies by a constant.
    pub fn scaled(&self, s: C) -> TimeFunction {
        if let Some(e) = &self.closed {
            return Self::from_exppoly(e.scale(s));
        }
        let v = self.value.clone();
        let derivs = self
            .derivs
            .iter()
            .map(|d| {
                let d = d.clone();
                Arc::new(move |t| s * d(t)) as Fun
            })
            .collect();
        TimeFunction { value: Arc::new(move |t| s * v(t)), derivs, closed: None }
    }

    /// The function `t -> g(t + s)`.
    pub fn shifted(&self, s: f64) -> TimeFunction {
        if let Some(e) = &self.closed {
            return Self::from_exppoly(e.shifted(s));
        }
        let v = self.value.clone();
        let derivs = self
            .derivs
            .iter()
            .map(|d| {
                let d = d.clone();
                Arc::new(move |t| d(t + s)) as Fun
            })
            .collect();
        TimeFunction { value: Arc::new(move |t| v(t + s)), derivs, closed: None }
    }
}

/// Initial datum on `x >= 0`.
#[derive(Clone)]
pub struct SpaceFunction {
    value: Fun,
    derivative: Option<Fun>,
    closed: Option<ExpPoly>,
    decay: Option<(f64, f64)>,
}

impl fmt::Debug for SpaceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpaceFunction").field("closed", &self.closed).field("decay", &self.decay).finish()
    }
}

impl SpaceFunction {
    pub fn from_exppoly(e: ExpPoly) -> Self {
        let v = e.clone();
        let d = e.derivative();
        SpaceFunction {
            value: Arc::new(move |x| v.eval(x)),
            derivative: Some(Arc::new(move |x| d.eval(x))),
            decay: e.decay_bound(),
            closed: Some(e),
        }
    }

    pub fn zero() -> Self {
        Self::from_exppoly(ExpPoly::zero())
    }

    pub fn from_fn(f: impl Fn(f64) -> C + Send + Sync + 'static) -> Self {
        SpaceFunction { value: Arc::new(f), derivative: None, closed: None, decay: None }
    }

    pub fn from_expr(e: &expr::Expr) -> Self {
        if let Some(p) = e.to_exppoly() {
            return Self::from_exppoly(p);
        }
        let v = e.clone();
        let derivative = e.derivative().ok().map(|d| Arc::new(move |x: f64| d.eval(C::new(x, 0.0))) as Fun);
        SpaceFunction { value: Arc::new(move |x| v.eval(C::new(x, 0.0))), derivative, closed: None, decay: None }
    }

    /// Declares `|phi(x)| <= a e^{-alpha x}`.
    pub fn with_decay(mut self, a: f64, alpha: f64) -> Self {
        self.decay = Some((a, alpha));
        self
    }

    pub fn with_derivative(mut self, d: impl Fn(f64) -> C + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn eval(&self, x: f64) -> C {
        (self.value)(x)
    }

    pub fn derivative_at(&self, x: f64) -> Option<C> {
        self.derivative.as_ref().map(|d| d(x))
    }

    pub fn closed_form(&self) -> Option<&ExpPoly> {
        self.closed.as_ref()
    }

    pub fn decay_bound(&self) -> Option<(f64, f64)> {
        self.decay
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    /// `q_t = c q_x`
    Plus,
    /// `q_t = -c q_x`
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Pde {
    Advection { c: f64, sign: Sign },
    Heat,
    Schrodinger,
}

impl Pde {
    /// Order of the spatial derivative.
    pub fn order(&self) -> u32 {
        match self {
            Pde::Advection { .. } => 1,
            _ => 2,
        }
    }

    /// Coefficient `c_m` in `q_t = c_m d^m q / dx^m`.
    pub fn coefficient(&self) -> C {
        match self {
            Pde::Advection { c, sign: Sign::Plus } => r(*c),
            Pde::Advection { c, sign: Sign::Minus } => r(-*c),
            Pde::Heat => r(1.0),
            Pde::Schrodinger => C::new(0.0, 0.5),
        }
    }

    fn diffusion_coefficient(&self) -> C {
        match self {
            Pde::Schrodinger => C::new(0.0, 0.5),
            _ => r(1.0),
        }
    }
}

impl fmt::Display for Pde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pde::Advection { c, sign: Sign::Plus } => write!(f, "q_t = {c} q_x"),
            Pde::Advection { c, sign: Sign::Minus } => write!(f, "q_t = -{c} q_x"),
            Pde::Heat => write!(f, "q_t = q_xx"),
            Pde::Schrodinger => write!(f, "q_t = (i/2) q_xx"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Boundary {
    None,
    Dirichlet(TimeFunction),
    Neumann(TimeFunction),
}

impl Boundary {
    pub fn kind(&self) -> &'static str {
        match self {
            Boundary::None => "none",
            Boundary::Dirichlet(_) => "dirichlet",
            Boundary::Neumann(_) => "neumann",
        }
    }
}

/// A half-line initial-boundary value problem together with its discretization.
#[derive(Clone, Debug)]
pub struct IBVPSpec {
    pub pde: Pde,
    pub stencil: StencilSpec,
    pub h: f64,
    pub initial: SpaceFunction,
    pub boundary: Boundary,
    pub t0: f64,
}

impl IBVPSpec {
    /// Same problem on a different mesh.
    pub fn with_h(&self, h: f64) -> IBVPSpec {
        IBVPSpec { h, ..self.clone() }
    }

    /// First node of the default reporting window.
    pub fn default_n_range(&self) -> (i64, i64) {
        let hi = (1.0 / self.h - 1e-9).ceil() as i64;
        match self.boundary {
            Boundary::Dirichlet(_) => (1, hi),
            _ => (0, hi),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub code: &'static str,
    pub severity: Severity,
    pub message: String,
}

const CORNER_TOL: f64 = 1e-8;

/// Lists every invariant violation of a problem description.
pub fn validate(spec: &IBVPSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |code: &'static str, severity: Severity, message: String| out.push(Violation { code, severity, message });
    if !(spec.h > 0.0 && spec.h.is_finite()) {
        push("E_H_NONPOSITIVE", Severity::Error, format!("mesh width {} is not positive", spec.h));
    }
    if !spec.t0.is_finite() {
        push("E_T0_NONFINITE", Severity::Error, "start time is not finite".into());
    }
    if let Pde::Advection { c, .. } = spec.pde {
        if !(c > 0.0 && c.is_finite()) {
            push("E_ADVECTION_SPEED_NONPOSITIVE", Severity::Error, format!("advection speed {c} is not positive"));
        }
    }
    let compatible = matches!(
        (&spec.pde, &spec.boundary),
        (Pde::Advection { sign: Sign::Plus, .. }, Boundary::None)
            | (Pde::Advection { sign: Sign::Minus, .. }, Boundary::Dirichlet(_))
            | (Pde::Heat | Pde::Schrodinger, Boundary::Dirichlet(_) | Boundary::Neumann(_))
    );
    if !compatible {
        push(
            "E_BOUNDARY_KIND_INCOMPATIBLE",
            Severity::Error,
            format!("boundary kind '{}' is incompatible with {}", spec.boundary.kind(), spec.pde),
        );
    }
    let target = spec.pde.coefficient();
    let lead = spec.stencil.leading_coefficient();
    if spec.stencil.h_power != spec.pde.order() || (lead - target).norm() > 1e-10 * (1.0 + target.norm()) {
        push(
            "E_STENCIL_PDE_MISMATCH",
            Severity::Error,
            format!("stencil '{}' approximates {} d^{} instead of {}", spec.stencil.label, lead, spec.stencil.h_power, spec.pde),
        );
    }
    match &spec.boundary {
        Boundary::Dirichlet(u) => {
            let a = u.eval(spec.t0);
            let b = spec.initial.eval(0.0);
            if (a - b).norm() > CORNER_TOL {
                push("E_CORNER_MISMATCH", Severity::Error, format!("u(t0) = {a} but phi(0) = {b}"));
            }
        }
        Boundary::Neumann(v) => {
            if let Some(d) = spec.initial.derivative_at(0.0) {
                let a = v.eval(spec.t0);
                if (a - d).norm() > CORNER_TOL {
                    push(crate::error::codes::NEUMANN_CORNER_MISMATCH, Severity::Warning, format!("v(t0) = {a} but phi'(0) = {d}"));
                }
            }
        }
        Boundary::None => {}
    }
    if let Some((a, alpha)) = spec.initial.decay_bound() {
        if spec.h > 0.0 && spec.h.is_finite() && alpha > 0.0 {
            let n_max = (40.0 / (alpha * spec.h)).min(1e6) as usize;
            let step = (n_max / 2000).max(1);
            let bad = (0..=n_max).step_by(step).find(|&n| {
                let x = n as f64 * spec.h;
                spec.initial.eval(x).norm() > a * (-alpha * x).exp() * (1.0 + 1e-12) + 1e-300
            });
            if let Some(n) = bad {
                push("E_DECAY_BOUND_VIOLATED", Severity::Error, format!("declared decay bound fails at x = {}", n as f64 * spec.h));
            }
        } else if alpha <= 0.0 {
            push("E_DECAY_BOUND_VIOLATED", Severity::Error, "decay rate must be positive".into());
        }
    }
    out
}

/// Returns an error if validation reports any error-severity violation.
pub fn ensure_valid(spec: &IBVPSpec) -> Result<()> {
    let errs: Vec<Violation> = validate(spec).into_iter().filter(|v| v.severity == Severity::Error).collect();
    if errs.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(errs))
    }
}

/// Settings of the contour and time quadratures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub panels: usize,
    pub nodes_per_panel: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub tail_eps: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { panels: 64, nodes_per_panel: 16, rel_tol: 1e-10, abs_tol: 1e-12, tail_eps: 1e-12 }
    }
}

impl QuadratureConfig {
    pub fn check(&self) -> Result<()> {
        let in_unit = |x: f64| x > 0.0 && x < 1.0;
        if self.panels == 0 || self.nodes_per_panel == 0 || self.nodes_per_panel > 64 {
            return Err(Error::InvalidArgument("panels and Gauss order must be positive (order <= 64)".into()));
        }
        if !in_unit(self.rel_tol) || !in_unit(self.abs_tol) || !in_unit(self.tail_eps) {
            return Err(Error::InvalidArgument("tolerances must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    Explicit(CaseId),
    Generic,
    Oracle,
    SmallTime(u32),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Explicit(c) => write!(f, "explicit {c}"),
            Method::Generic => write!(f, "generic"),
            Method::Oracle => write!(f, "oracle"),
            Method::SmallTime(r) => write!(f, "smalltime r={r}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Provenance {
    pub method: Method,
    pub quadrature: QuadratureConfig,
}

/// Values `q_n(T)` on an inclusive node range.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionField {
    pub h: f64,
    pub t: f64,
    pub n_range: (i64, i64),
    pub values: Vec<C>,
    pub provenance: Provenance,
}

impl SolutionField {
    pub fn new(h: f64, t: f64, n_range: (i64, i64), values: Vec<C>, provenance: Provenance) -> Result<Self> {
        let width = (n_range.1 - n_range.0 + 1).max(0) as usize;
        if values.len() != width {
            return Err(Error::InvalidArgument("value count differs from node range width".into()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite solution value".into()));
        }
        Ok(SolutionField { h, t, n_range, values, provenance })
    }

    pub fn nodes(&self) -> impl Iterator<Item = i64> {
        self.n_range.0..=self.n_range.1
    }

    pub fn get(&self, n: i64) -> Option<C> {
        if n < self.n_range.0 || n > self.n_range.1 {
            return None;
        }
        self.values.get((n - self.n_range.0) as usize).copied()
    }

    /// Largest pointwise distance to another field on the shared nodes.
    pub fn max_diff(&self, o: &SolutionField) -> f64 {
        self.nodes().filter_map(|n| Some((self.get(n)? - o.get(n)?).norm())).fold(0.0, f64::max)
    }
}
