//! Reference problems for each case.

use crate::error::Result;
use crate::model::config::parse_config;
use crate::model::IBVPSpec;
use crate::solvers::CaseId;

pub const ADVECTION_PLUS: &str = r#"
pde = "advection_plus"
c = 1.0
h = 0.01
[initial]
expr = "exp(-2x) (sin(4 pi x) + 1) / 2"
"#;

pub const ADVECTION_MINUS: &str = r#"
pde = "advection_minus"
c = 1.0
h = 0.01
[initial]
expr = "exp(-x) sin(4 pi x)"
[boundary]
kind = "dirichlet"
expr = "-sin(4 pi t)"
"#;

/// Boundary data continuing the initial profile, so the exact solution is smooth across `x = cT`.
pub const ADVECTION_MINUS_SMOOTH: &str = r#"
pde = "advection_minus"
c = 1.0
h = 0.01
[initial]
expr = "exp(-x) sin(4 pi x)"
[boundary]
kind = "dirichlet"
expr = "-exp(t) sin(4 pi t)"
"#;

pub const HEAT_DIRICHLET: &str = r#"
pde = "heat"
h = 0.01
[initial]
expr = "3 x exp(-x)"
[boundary]
kind = "dirichlet"
expr = "sin(4 pi t)"
"#;

pub const HEAT_NEUMANN: &str = r#"
pde = "heat"
h = 0.01
[initial]
expr = "exp(-x) cos(3 pi x)"
[boundary]
kind = "neumann"
expr = "-sin(4 pi t) / (4 pi)"
"#;

pub const LS_DIRICHLET: &str = r#"
pde = "schrodinger"
h = 0.01
[initial]
expr = "exp(-x) cos(2 pi x)"
[boundary]
kind = "dirichlet"
expr = "cos(5 pi t)"
"#;

pub const LS_NEUMANN: &str = r#"
pde = "schrodinger"
h = 0.01
[initial]
expr = "exp(-x) sin(2 pi x)"
[boundary]
kind = "neumann"
expr = "2 pi cos(pi t)"
"#;

/// Problem with time-dependent boundary data starting at `t0 = 0`, used for the small-time study.
pub const ADVECTION_SMALL_TIME: &str = r#"
pde = "advection_minus"
c = 1.0
h = 0.01
[initial]
expr = "exp(-2x) (sin(4 pi x) + 1) / 2"
[boundary]
kind = "dirichlet"
expr = "1/2 + (1 - 2 pi) t exp(-t)"
"#;

fn with_stencil(base: &'static str, stencil: &str) -> String {
    base.replacen("h = 0.01", &format!("h = 0.01\nstencil = \"{stencil}\""), 1)
}

/// Reference problem for a case at mesh width `h`, with its final time.
pub fn case_problem(case: CaseId, h: f64) -> Result<(IBVPSpec, f64)> {
    let (text, t): (String, f64) = match case {
        CaseId::ADV_FWD => (ADVECTION_PLUS.into(), 0.5),
        CaseId::ADV_BWD_D | CaseId::ADV_BWD_D_N0 => (ADVECTION_MINUS.into(), 0.5),
        CaseId::ADV_CEN_D => (with_stencil(ADVECTION_MINUS_SMOOTH, "centered"), 0.5),
        CaseId::ADV_BWD2_D => (with_stencil(ADVECTION_MINUS, "backward2"), 0.5),
        CaseId::HEAT_CEN_D => (HEAT_DIRICHLET.into(), 1.625),
        CaseId::HEAT_CEN_N => (HEAT_NEUMANN.into(), 0.01),
        CaseId::HEAT_CEN4_D => (with_stencil(HEAT_DIRICHLET, "centered4"), 1.625),
        CaseId::LS_CEN_D => (LS_DIRICHLET.into(), 0.1),
        CaseId::LS_CEN_N => (LS_NEUMANN.into(), 1.0),
    };
    Ok((parse_config(&text)?.with_h(h), t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_their_cases() {
        for case in CaseId::ALL {
            let (spec, t) = case_problem(case, 0.02).unwrap();
            assert!(t > 0.0);
            case.check_signature(&spec).unwrap();
        }
        parse_config(ADVECTION_SMALL_TIME).unwrap();
    }
}
