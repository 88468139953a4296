//! TOML problem descriptions.
//!
//! ```toml
//! pde = "heat"              # advection_plus | advection_minus | heat | schrodinger
//! c = 1.0                   # advection speed
//! h = 0.01
//! t0 = 0.0
//! stencil = "centered"      # optional, see StencilSpec::named
//! [initial]
//! expr = "3*x*exp(-x)"
//! decay = [3.0, 0.5]        # optional |phi(x)| <= A e^{-alpha x}
//! [boundary]
//! kind = "dirichlet"        # none | dirichlet | neumann
//! expr = "sin(4*pi*t)"
//! ```

use super::{expr, Boundary, IBVPSpec, Pde, Sign, SpaceFunction, StencilSpec, TimeFunction};
use crate::error::{Error, Result};
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    pde: String,
    c: Option<f64>,
    h: f64,
    t0: Option<f64>,
    stencil: Option<String>,
    initial: RawInitial,
    boundary: Option<RawBoundary>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    expr: String,
    decay: Option<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBoundary {
    kind: String,
    expr: Option<String>,
}

fn parse_in(s: &str, var: char, what: &str) -> Result<expr::Expr> {
    let p = expr::parse(s)?;
    match p.var {
        Some(v) if v != var => Err(Error::Config(format!("{what} must be a function of {var}"))),
        _ => Ok(p.expr),
    }
}

/// Parses a TOML problem description.
pub fn parse_config(text: &str) -> Result<IBVPSpec> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let c = raw.c.unwrap_or(1.0);
    let pde = match raw.pde.as_str() {
        "advection_plus" => Pde::Advection { c, sign: Sign::Plus },
        "advection_minus" => Pde::Advection { c, sign: Sign::Minus },
        "heat" => Pde::Heat,
        "schrodinger" => Pde::Schrodinger,
        other => return Err(Error::Config(format!("unknown pde '{other}'"))),
    };
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Config("c must be positive".into()));
    }
    if !(raw.h.is_finite() && raw.h > 0.0) {
        return Err(Error::Config("h must be positive".into()));
    }
    let t0 = raw.t0.unwrap_or(0.0);
    if !t0.is_finite() {
        return Err(Error::Config("t0 must be finite".into()));
    }
    let default_stencil = match pde {
        Pde::Advection { sign: Sign::Plus, .. } => "forward",
        Pde::Advection { sign: Sign::Minus, .. } => "backward",
        _ => "centered",
    };
    let stencil = StencilSpec::named(raw.stencil.as_deref().unwrap_or(default_stencil), &pde)?;
    let mut initial = SpaceFunction::from_expr(&parse_in(&raw.initial.expr, 'x', "initial.expr")?);
    if let Some([a, alpha]) = raw.initial.decay {
        if !(a.is_finite() && a >= 0.0 && alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Config("initial.decay must be [A >= 0, alpha > 0]".into()));
        }
        initial = initial.with_decay(a, alpha);
    }
    let boundary = match raw.boundary {
        None => Boundary::None,
        Some(b) => {
            let tf = |e: &Option<String>| -> Result<TimeFunction> {
                let s = e.as_deref().ok_or_else(|| Error::Config("boundary.expr is required".into()))?;
                Ok(TimeFunction::from_expr(&parse_in(s, 't', "boundary.expr")?))
            };
            match b.kind.as_str() {
                "none" => Boundary::None,
                "dirichlet" => Boundary::Dirichlet(tf(&b.expr)?),
                "neumann" => Boundary::Neumann(tf(&b.expr)?),
                other => return Err(Error::Config(format!("unknown boundary kind '{other}'"))),
            }
        }
    };
    Ok(IBVPSpec { pde, stencil, h: raw.h, initial, boundary, t0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heat_config() {
        let s = parse_config(
            "pde = \"heat\"\nh = 0.02\n[initial]\nexpr = \"3*x*exp(-x)\"\n[boundary]\nkind = \"dirichlet\"\nexpr = \"sin(4*pi*t)\"\n",
        )
        .unwrap();
        assert_eq!(s.h, 0.02);
        assert_eq!(s.stencil.offsets, vec![-1, 0, 1]);
        assert!(matches!(s.boundary, Boundary::Dirichlet(_)));
        assert!(s.initial.closed_form().is_some());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(parse_config("pde = \"wave\"\nh = 0.1\n[initial]\nexpr = \"x\"").is_err());
        assert!(parse_config("pde = \"heat\"\nh = -1\n[initial]\nexpr = \"x\"").is_err());
        assert!(parse_config("pde = \"heat\"\nh = 0.1\n[initial]\nexpr = \"t\"").is_err());
        assert!(parse_config("pde = \"heat\"\nh = 0.1\nfoo = 1\n[initial]\nexpr = \"x\"").is_err());
        assert!(parse_config("pde = \"heat\"\nh = 0.1\nstencil = \"backward2\"\n[initial]\nexpr = \"x\"").is_err());
    }
}
