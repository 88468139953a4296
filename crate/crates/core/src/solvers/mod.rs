//! Explicit semi-discrete solution formulas for the named cases, the generic
//! engine that derives them mechanically, and consistency checks.

pub mod checks;
pub mod explicit;
pub mod generic;
pub mod laurent;

pub use checks::{equivalence_check_backward_variants, vanishing_term_check};
pub use explicit::solve_explicit;
pub use generic::{generic_solve, generic_solve_with, BoundaryTransformSystem, GenericOptions};

use crate::error::{Error, Result};
use crate::model::{Boundary, IBVPSpec, Pde, Sign, StencilSpec};
use num_complex::Complex64 as C;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[allow(non_camel_case_types)]
pub enum CaseId {
    ADV_FWD,
    ADV_BWD_D,
    ADV_BWD_D_N0,
    ADV_CEN_D,
    ADV_BWD2_D,
    HEAT_CEN_D,
    HEAT_CEN_N,
    HEAT_CEN4_D,
    LS_CEN_D,
    LS_CEN_N,
}

impl CaseId {
    pub const ALL: [CaseId; 10] = [
        CaseId::ADV_FWD,
        CaseId::ADV_BWD_D,
        CaseId::ADV_BWD_D_N0,
        CaseId::ADV_CEN_D,
        CaseId::ADV_BWD2_D,
        CaseId::HEAT_CEN_D,
        CaseId::HEAT_CEN_N,
        CaseId::HEAT_CEN4_D,
        CaseId::LS_CEN_D,
        CaseId::LS_CEN_N,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CaseId::ADV_FWD => "ADV_FWD",
            CaseId::ADV_BWD_D => "ADV_BWD_D",
            CaseId::ADV_BWD_D_N0 => "ADV_BWD_D_N0",
            CaseId::ADV_CEN_D => "ADV_CEN_D",
            CaseId::ADV_BWD2_D => "ADV_BWD2_D",
            CaseId::HEAT_CEN_D => "HEAT_CEN_D",
            CaseId::HEAT_CEN_N => "HEAT_CEN_N",
            CaseId::HEAT_CEN4_D => "HEAT_CEN4_D",
            CaseId::LS_CEN_D => "LS_CEN_D",
            CaseId::LS_CEN_N => "LS_CEN_N",
        }
    }

    /// First node of the discrete transform.
    pub fn start_index(&self) -> u32 {
        match self {
            CaseId::ADV_FWD | CaseId::ADV_BWD_D_N0 | CaseId::HEAT_CEN_N | CaseId::LS_CEN_N => 0,
            _ => 1,
        }
    }

    pub fn boundary_kind(&self) -> &'static str {
        match self {
            CaseId::ADV_FWD => "none",
            CaseId::HEAT_CEN_N | CaseId::LS_CEN_N => "neumann",
            _ => "dirichlet",
        }
    }

    /// Stencil for the case given the PDE.
    pub fn stencil(&self, pde: &Pde) -> Result<StencilSpec> {
        let c = match pde {
            Pde::Advection { c, .. } => *c,
            _ => 0.0,
        };
        let mismatch = || Error::CaseMismatch { case: self.name().into(), reason: format!("wrong equation {pde}") };
        Ok(match self {
            CaseId::ADV_FWD => match pde {
                Pde::Advection { sign: Sign::Plus, .. } => StencilSpec::advection_forward(c),
                _ => return Err(mismatch()),
            },
            CaseId::ADV_BWD_D | CaseId::ADV_BWD_D_N0 | CaseId::ADV_CEN_D | CaseId::ADV_BWD2_D => {
                if !matches!(pde, Pde::Advection { sign: Sign::Minus, .. }) {
                    return Err(mismatch());
                }
                match self {
                    CaseId::ADV_CEN_D => StencilSpec::advection_centered(c),
                    CaseId::ADV_BWD2_D => StencilSpec::advection_backward2(c),
                    _ => StencilSpec::advection_backward(c),
                }
            }
            CaseId::HEAT_CEN_D | CaseId::HEAT_CEN_N | CaseId::HEAT_CEN4_D => {
                if *pde != Pde::Heat {
                    return Err(mismatch());
                }
                if *self == CaseId::HEAT_CEN4_D {
                    StencilSpec::centered4(C::new(1.0, 0.0))
                } else {
                    StencilSpec::centered2(C::new(1.0, 0.0))
                }
            }
            CaseId::LS_CEN_D | CaseId::LS_CEN_N => {
                if *pde != Pde::Schrodinger {
                    return Err(mismatch());
                }
                StencilSpec::centered2(C::new(0.0, 0.5))
            }
        })
    }

    /// Checks that the problem has this case's stencil and boundary type.
    pub fn check_signature(&self, spec: &IBVPSpec) -> Result<()> {
        let want = self.stencil(&spec.pde)?;
        let mismatch = |reason: String| Err(Error::CaseMismatch { case: self.name().into(), reason });
        let scale: f64 = want.coeffs.iter().map(|c| c.norm()).sum();
        if want.offsets != spec.stencil.offsets
            || want.h_power != spec.stencil.h_power
            || want.coeffs.iter().zip(&spec.stencil.coeffs).any(|(a, b)| (a - b).norm() > 1e-12 * scale)
        {
            return mismatch(format!("stencil '{}' differs from the case stencil", spec.stencil.label));
        }
        if spec.boundary.kind() != self.boundary_kind() {
            return mismatch(format!("boundary kind '{}' instead of '{}'", spec.boundary.kind(), self.boundary_kind()));
        }
        Ok(())
    }

    /// The case matching a problem's stencil and boundary, preferring the transform start `1`.
    pub fn detect(spec: &IBVPSpec) -> Option<CaseId> {
        CaseId::ALL.into_iter().filter(|c| *c != CaseId::ADV_BWD_D_N0).find(|c| c.check_signature(spec).is_ok())
    }

    /// Expected convergence order in `h`.
    pub fn order(&self) -> u32 {
        match self {
            CaseId::ADV_CEN_D | CaseId::HEAT_CEN_D | CaseId::HEAT_CEN4_D | CaseId::LS_CEN_D => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown case '{s}'")))
    }
}

pub(crate) fn boundary_data(spec: &IBVPSpec) -> Option<&crate::model::TimeFunction> {
    match &spec.boundary {
        Boundary::Dirichlet(u) | Boundary::Neumann(u) => Some(u),
        Boundary::None => None,
    }
}

pub(crate) fn node_list(n_range: (i64, i64)) -> Result<Vec<i64>> {
    if n_range.1 < n_range.0 {
        return Err(Error::InvalidArgument("empty node range".into()));
    }
    Ok((n_range.0..=n_range.1).collect())
}
