use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C;
use sdutm::dispersion::{dispersion_from_stencil, modified_equation, refined_usability_report};
use sdutm::experiments::convergence::{run_convergence, DEFAULT_H};
use sdutm::experiments::presets::{case_problem, ADVECTION_SMALL_TIME};
use sdutm::experiments::slices::{advection_shift, region_raster, run_time_slices};
use sdutm::experiments::small::{smalltime_tau_study, DEFAULT_TAU};
use sdutm::experiments::svg::{emit_raster_svg, emit_svg, PlotSpec};
use sdutm::experiments::table::{fields_table, format_number, parse_plot_csv, Table};
use sdutm::model::config::parse_config;
use sdutm::model::{IBVPSpec, Method, Pde, Provenance, QuadratureConfig, Sign, SolutionField};
use sdutm::oracles::ContinuousSolution;
use sdutm::smalltime::{build_expansion, evaluate_expansion};
use sdutm::solvers::{equivalence_check_backward_variants, generic_solve, solve_explicit, vanishing_term_check, CaseId};
use sdutm::{Error, Result};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sdutm", version, about = "Semi-discrete unified transform solvers on the half-line")]
struct Cli {
    #[command(flatten)]
    quad: QuadArgs,
    /// Exit with status 1 when a checked tolerance is not met.
    #[arg(long = "assert", global = true)]
    assert: bool,
    /// Write the output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct QuadArgs {
    #[arg(long, global = true)]
    panels: Option<usize>,
    #[arg(long = "gauss-order", global = true)]
    gauss_order: Option<usize>,
    #[arg(long, global = true)]
    rtol: Option<f64>,
}

impl QuadArgs {
    fn config(&self) -> Result<QuadratureConfig> {
        let mut c = QuadratureConfig::default();
        if let Some(p) = self.panels {
            c.panels = p;
        }
        if let Some(g) = self.gauss_order {
            c.nodes_per_panel = g;
        }
        if let Some(r) = self.rtol {
            c.rel_tol = r;
        }
        c.check()?;
        Ok(c)
    }
}

#[derive(Args)]
struct ProblemArgs {
    /// Case identifier; detected from the config when omitted.
    #[arg(long)]
    case: Option<String>,
    /// TOML problem description; the case's reference problem when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    h: Option<f64>,
    /// Final time, repeatable.
    #[arg(long = "T")]
    t: Vec<f64>,
    /// Last node of the output range.
    #[arg(long)]
    nmax: Option<i64>,
}

struct Problem {
    case: Option<CaseId>,
    spec: IBVPSpec,
    times: Vec<f64>,
    n_range: (i64, i64),
}

impl ProblemArgs {
    fn load(&self) -> Result<Problem> {
        let named = self.case.as_deref().map(str::parse::<CaseId>).transpose()?;
        let (mut spec, default_t) = match (&self.config, named) {
            (Some(path), _) => (parse_config(&std::fs::read_to_string(path)?)?, None),
            (None, Some(c)) => {
                let (s, t) = case_problem(c, 0.01)?;
                (s, Some(t))
            }
            (None, None) => return Err(Error::InvalidArgument("give --case or --config".into())),
        };
        if let Some(h) = self.h {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::InvalidArgument("h must be positive".into()));
            }
            spec = spec.with_h(h);
        }
        let case = named.or_else(|| CaseId::detect(&spec));
        let times = if !self.t.is_empty() {
            self.t.clone()
        } else {
            vec![default_t.unwrap_or(spec.t0 + 0.5)]
        };
        let mut n_range = spec.default_n_range();
        if let Some(n) = self.nmax {
            n_range.1 = n;
        }
        Ok(Problem { case, spec, times, n_range })
    }
}

impl Problem {
    fn case(&self) -> Result<CaseId> {
        self.case.ok_or_else(|| Error::Unsupported("the problem matches no known case; give --case".into()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Semi-discrete solution at one or more final times.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Use the generic boundary-elimination engine.
        #[arg(long)]
        generic: bool,
    },
    /// Dropped-term and variant-equivalence checks.
    Check {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Symmetry roots along the real contour.
    Symmetries {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Sign of Re(-W) over a rectangle of the complex k-plane.
    Regions {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        re: Option<Vec<f64>>,
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        im: Option<Vec<f64>>,
        #[arg(long, default_value_t = 101)]
        nx: usize,
        #[arg(long, default_value_t = 101)]
        ny: usize,
        /// Render as SVG instead of CSV.
        #[arg(long)]
        svg: bool,
    },
    /// Continuous solution sampled at the grid nodes.
    Oracle {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Small-time expansion of the backward advection problem.
    Smalltime {
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long)]
        tau: Vec<f64>,
        #[arg(long, default_value_t = 0.01)]
        h: f64,
        #[arg(long, default_value_t = 100)]
        nmax: i64,
        #[arg(long, default_value_t = 0.2)]
        slope_tol: f64,
    },
    /// Mesh-refinement study.
    Converge {
        /// Repeatable; all reference cases when omitted.
        #[arg(long)]
        case: Vec<String>,
        #[arg(long)]
        h: Vec<f64>,
        #[arg(long, default_value_t = 0.15)]
        slope_tol: f64,
    },
    /// Profiles at several final times.
    Slices {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Modified-equation coefficients of the stencil.
    ModifiedEq {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 4)]
        p_max: u32,
    },
    /// SVG rendering of a CSV produced by this tool.
    Plot {
        input: PathBuf,
        #[arg(long, default_value = "h")]
        x: String,
        #[arg(long, default_value = "error")]
        y: Vec<String>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        log_log: bool,
        #[arg(long)]
        scatter: bool,
        #[arg(long)]
        fit: bool,
        /// Treat the input as a region raster (`re_k`, `im_k`, `sign`).
        #[arg(long)]
        raster: bool,
        #[arg(long, default_value = "")]
        title: String,
    },
}

struct Outcome {
    text: String,
    ok: bool,
}

fn csv(t: &Table) -> Result<Outcome> {
    Ok(Outcome { text: t.to_csv()?, ok: true })
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = cli.quad.config()?;
    match &cli.command {
        Command::Solve { problem, generic } => {
            let p = problem.load()?;
            let fields: Result<Vec<SolutionField>> = p
                .times
                .iter()
                .map(|&t| if *generic { generic_solve(&p.spec, p.n_range, t, &cfg) } else { solve_explicit(p.case()?, &p.spec, p.n_range, t, &cfg) })
                .collect();
            csv(&fields_table(&fields?))
        }
        Command::Check { problem, tol } => {
            let p = problem.load()?;
            let case = p.case()?;
            let mut t = Table::new(&["check", "t", "value", "tolerance", "pass"]);
            let mut ok = true;
            for &time in &p.times {
                let mut record = |name: &str, v: f64| {
                    ok &= v <= *tol;
                    t.push(vec![name.into(), format_number(time), format_number(v), format_number(*tol), (v <= *tol).to_string()]);
                };
                match vanishing_term_check(&p.spec, case, p.n_range, time, &cfg) {
                    Ok(v) => record("vanishing_term", v),
                    Err(Error::CaseMismatch { .. }) => {}
                    Err(e) => return Err(e),
                }
                if matches!(case, CaseId::ADV_BWD_D | CaseId::ADV_BWD_D_N0) {
                    record("backward_variants", equivalence_check_backward_variants(&p.spec, p.n_range, time, &cfg)?);
                }
                let g = generic_solve(&p.spec, p.n_range, time, &cfg)?;
                let e = solve_explicit(case, &p.spec, p.n_range, time, &cfg)?;
                let scale = e.values.iter().map(|v| v.norm()).fold(1e-300, f64::max);
                record("generic_vs_explicit", g.max_diff(&e) / scale);
            }
            Ok(Outcome { text: t.to_csv()?, ok })
        }
        Command::Symmetries { problem, samples } => {
            let p = problem.load()?;
            let d = dispersion_from_stencil(&p.spec.stencil, p.spec.h)?;
            let report = refined_usability_report(&d, *samples, samples.saturating_mul(64))?;
            let ks = &report.samples;
            let mut headers = vec!["k".to_string()];
            for i in 0..report.tracks.len() {
                headers.extend([format!("zeta{}_re", i + 1), format!("zeta{}_im", i + 1), format!("usable{}", i + 1)]);
            }
            let mut t = Table { headers, rows: Vec::new() };
            for (s, k) in ks.iter().enumerate() {
                let mut row = vec![format_number(*k)];
                for track in &report.tracks {
                    let z = track[s];
                    row.extend([format_number(z.re), format_number(z.im), (z.norm() >= 1.0 - 1e-9).to_string()]);
                }
                t.push(row);
            }
            csv(&t)
        }
        Command::Regions { problem, re, im, nx, ny, svg } => {
            let p = problem.load()?;
            let d = dispersion_from_stencil(&p.spec.stencil, p.spec.h)?;
            let a = std::f64::consts::PI / p.spec.h;
            let re = re.as_ref().map_or((-a, a), |v| (v[0], v[1]));
            let im = im.as_ref().map_or((-a, a), |v| (v[0], v[1]));
            let t = region_raster(&d, re, im, *nx, *ny)?;
            if *svg {
                Ok(Outcome { text: emit_raster_svg(&t, "re_k", "im_k", "sign", &format!("Re(-W) <= 0, {}", p.spec.stencil.label))?, ok: true })
            } else {
                csv(&t)
            }
        }
        Command::Oracle { problem } => {
            let p = problem.load()?;
            let oracle = ContinuousSolution::from_spec(&p.spec, &cfg)?;
            let mut fields = Vec::new();
            for &t in &p.times {
                let values: Result<Vec<C>> = (p.n_range.0..=p.n_range.1).map(|n| oracle.reference(n as f64 * p.spec.h, t)).collect();
                fields.push(SolutionField::new(p.spec.h, t, p.n_range, values?, Provenance { method: Method::Oracle, quadrature: cfg })?);
            }
            csv(&fields_table(&fields))
        }
        Command::Smalltime { r, tau, h, nmax, slope_tol } => {
            let spec = parse_config(ADVECTION_SMALL_TIME)?.with_h(*h);
            let taus = if tau.is_empty() { DEFAULT_TAU.to_vec() } else { tau.clone() };
            let range = (1, *nmax);
            let e = build_expansion(&spec, range, *r, &cfg)?;
            let fields: Result<Vec<SolutionField>> = taus.iter().map(|&t| evaluate_expansion(&e, t)).collect();
            let mut text = fields_table(&fields?).to_csv()?;
            let mut ok = true;
            if taus.len() >= 2 {
                let study = smalltime_tau_study(&spec, *r, &taus, range, &cfg)?;
                let target = (*r + 1) as f64;
                ok = (study.fitted_slope - target).abs() <= *slope_tol;
                text.push_str(&format!("# order-fit r={r} slope={:.4} target={target} pass={ok}\n", study.fitted_slope));
            }
            Ok(Outcome { text, ok })
        }
        Command::Converge { case, h, slope_tol } => {
            let cases: Vec<CaseId> = if case.is_empty() {
                CaseId::ALL.into_iter().filter(|c| *c != CaseId::ADV_BWD_D_N0).collect()
            } else {
                case.iter().map(|c| c.parse()).collect::<Result<_>>()?
            };
            let hs = if h.is_empty() { DEFAULT_H.to_vec() } else { h.clone() };
            let mut t = Table::new(&["case", "h", "error", "slope", "target", "pass"]);
            let mut ok = true;
            for c in cases {
                let (spec, time) = case_problem(c, hs[0])?;
                let s = run_convergence(c, &spec, &hs, time, &cfg)?;
                let target = c.order() as f64;
                let pass = (s.fitted_slope - target).abs() <= *slope_tol;
                ok &= pass;
                for (hv, e) in s.h_values.iter().zip(&s.errors) {
                    t.push(vec![c.name().into(), format_number(*hv), format_number(*e), format_number(s.fitted_slope), format_number(target), pass.to_string()]);
                }
            }
            Ok(Outcome { text: t.to_csv()?, ok })
        }
        Command::Slices { problem } => {
            let p = problem.load()?;
            let times = if problem.t.is_empty() && p.case == Some(CaseId::ADV_BWD_D) { vec![0.25, 0.5, 1.0] } else { p.times.clone() };
            let fields = run_time_slices(p.case()?, &p.spec, &times, p.n_range, &cfg)?;
            let mut text = fields_table(&fields).to_csv()?;
            if let Pde::Advection { c, sign: Sign::Minus } = p.spec.pde {
                for f in &fields {
                    let shift = advection_shift(p.case()?, &p.spec, f.t, &cfg)?;
                    text.push_str(&format!("# shift t={} measured={shift:.6} expected={:.6}\n", f.t, c * (f.t - p.spec.t0)));
                }
            }
            Ok(Outcome { text, ok: true })
        }
        Command::ModifiedEq { problem, p_max } => {
            let p = problem.load()?;
            let mut t = Table::new(&["order", "re", "im"]);
            for (order, c) in modified_equation(&p.spec.stencil, p.spec.h, *p_max) {
                t.push(vec![order.to_string(), format_number(c.re), format_number(c.im)]);
            }
            csv(&t)
        }
        Command::Plot { input, x, y, group, log_log, scatter, fit, raster, title } => {
            let table = parse_plot_csv(&std::fs::read_to_string(input)?)?;
            let text = if *raster {
                emit_raster_svg(&table, "re_k", "im_k", "sign", title)?
            } else {
                let spec = PlotSpec { x: x.clone(), y: y.clone(), group: group.clone(), log_log: *log_log, scatter: *scatter, fit: *fit, title: title.clone() };
                emit_svg(&table, &spec)?
            };
            Ok(Outcome { text, ok: true })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &out.text).map_err(Error::from),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error [{}]: {e}", e.code());
                return ExitCode::from(2);
            }
            if cli.assert && !out.ok {
                eprintln!("tolerance not met");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error [{}]: {e}", e.code());
            ExitCode::from(2)
        }
    }
}
