use num_complex::Complex64 as C;
use sdutm::experiments::presets::case_problem;
use sdutm::model::{Boundary, QuadratureConfig};
use sdutm::oracles::{continuous_utm, erfc_solution, exact_advection, ContinuousSolution};
use sdutm::solvers::{solve_explicit, CaseId};

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn boundary_value(case: CaseId, t: f64) -> C {
    let (spec, _) = case_problem(case, 0.01).unwrap();
    match spec.boundary {
        Boundary::Dirichlet(u) | Boundary::Neumann(u) => u.eval(t),
        Boundary::None => panic!("no boundary data"),
    }
}

#[test]
fn advection_transform_matches_characteristics() {
    for (case, v) in [(CaseId::ADV_FWD, -1.0), (CaseId::ADV_BWD_D, 1.0)] {
        let (spec, _) = case_problem(case, 0.01).unwrap();
        let sol = ContinuousSolution::from_spec(&spec, &cfg()).unwrap();
        let u = match &spec.boundary {
            Boundary::Dirichlet(u) => Some(u),
            _ => None,
        };
        for &(x, t) in &[(0.1, 0.3), (0.7, 0.5), (0.35, 1.0), (1.5, 0.2)] {
            let a = continuous_utm(&sol, x, t).unwrap();
            let b = exact_advection(&spec.initial, u, v, x, t, spec.t0);
            assert!((a - b).norm() < 1e-8, "{case} ({x}, {t}): {a} vs {b}");
        }
    }
}

#[test]
fn schrodinger_oracle_solves_the_problem() {
    let d = 1e-3;
    for case in [CaseId::LS_CEN_D, CaseId::LS_CEN_N] {
        let (spec, _) = case_problem(case, 0.01).unwrap();
        let sol = ContinuousSolution::from_spec(&spec, &cfg()).unwrap();
        let q = |x: f64, t: f64| erfc_solution(&sol, x, t).unwrap();
        for &(x, t) in &[(0.2, 0.1), (0.8, 0.5), (0.5, 1.0)] {
            let qt = (q(x, t + d) - q(x, t - d)) / (2.0 * d);
            let qxx = (q(x + d, t) - 2.0 * q(x, t) + q(x - d, t)) / (d * d);
            assert!((qt - C::new(0.0, 0.5) * qxx).norm() < 1e-3 * (1.0 + qt.norm()), "{case} ({x}, {t})");
        }
        let t = 0.3;
        let trace = if case == CaseId::LS_CEN_D { q(0.0, t) } else { (4.0 * q(d, t) - 3.0 * q(0.0, t) - q(2.0 * d, t)) / (2.0 * d) };
        let tol = if case == CaseId::LS_CEN_D { 1e-9 } else { 1e-3 };
        assert!((trace - boundary_value(case, t)).norm() < tol, "{case}: {trace}");
        assert!((q(0.6, 1e-8) - spec.initial.eval(0.6)).norm() < 1e-3);
        assert!(continuous_utm(&sol, 0.5, 0.5).is_err());
    }
}

#[test]
fn heat_oracle_meets_its_data() {
    let (spec, t) = case_problem(CaseId::HEAT_CEN_D, 0.01).unwrap();
    let sol = ContinuousSolution::from_spec(&spec, &cfg()).unwrap();
    let at_wall = sol.reference(0.0, t).unwrap();
    assert!((at_wall - boundary_value(CaseId::HEAT_CEN_D, t)).norm() < 1e-8);
    let early = sol.reference(0.5, 1e-6).unwrap();
    assert!((early - spec.initial.eval(0.5)).norm() < 1e-4);

    let (spec, t) = case_problem(CaseId::HEAT_CEN_N, 0.01).unwrap();
    let sol = ContinuousSolution::from_spec(&spec, &cfg()).unwrap();
    let d = 1e-4;
    let slope = (sol.reference(d, t).unwrap() - sol.reference(0.0, t).unwrap()) / d;
    assert!((slope - boundary_value(CaseId::HEAT_CEN_N, t)).norm() < 1e-2, "{slope}");
}

#[test]
fn semi_discrete_solution_approaches_the_oracle() {
    let (spec, t) = case_problem(CaseId::LS_CEN_D, 0.04).unwrap();
    let sol = ContinuousSolution::from_spec(&spec, &cfg()).unwrap();
    let mut prev = f64::INFINITY;
    for h in [0.04, 0.02, 0.01] {
        let s = spec.with_h(h);
        let n = (0.4 / h).round() as i64;
        let f = solve_explicit(CaseId::LS_CEN_D, &s, (n, n), t, &cfg()).unwrap();
        let err = (f.values[0] - sol.reference(0.4, t).unwrap()).norm();
        assert!(err < prev);
        prev = err;
    }
}

#[test]
fn real_data_gives_real_solutions() {
    let tol = 10.0 * cfg().abs_tol;
    for case in [CaseId::ADV_FWD, CaseId::ADV_BWD_D, CaseId::ADV_CEN_D, CaseId::HEAT_CEN_D, CaseId::HEAT_CEN_N, CaseId::HEAT_CEN4_D] {
        let (spec, t) = case_problem(case, 0.04).unwrap();
        let f = solve_explicit(case, &spec, spec.default_n_range(), t, &cfg()).unwrap();
        let worst = f.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        assert!(worst <= tol, "{case}: {worst:e}");
    }
}

#[test]
fn dirichlet_trace_is_recovered() {
    for case in [CaseId::HEAT_CEN_D, CaseId::LS_CEN_D, CaseId::ADV_BWD_D] {
        let (spec, t) = case_problem(case, 0.01).unwrap();
        let mut errs = Vec::new();
        for h in [0.02, 0.01] {
            let f = solve_explicit(case, &spec.with_h(h), (1, 2), t, &cfg()).unwrap();
            let extrapolated = 2.0 * f.values[0] - f.values[1];
            errs.push((extrapolated - boundary_value(case, t)).norm());
        }
        assert!(errs[1] < errs[0] && errs[1] < 0.1, "{case}: {errs:?}");
    }
}
