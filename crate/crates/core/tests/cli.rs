use std::process::{Command, Output};

fn sdutm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdutm")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("sdutm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

#[test]
fn solve_blocks_per_time() {
    let o = sdutm(&["solve", "--case", "HEAT_CEN_D", "--h", "0.1", "--T", "0.5", "--T", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,n,x,re,im"));
    assert_eq!(lines.count(), 20);
    let g = sdutm(&["solve", "--case", "HEAT_CEN_D", "--h", "0.1", "--T", "0.5", "--generic"]);
    assert!(g.status.success());
}

#[test]
fn config_file_input() {
    let path = scratch("heat.toml");
    std::fs::write(&path, sdutm::experiments::presets::HEAT_NEUMANN).unwrap();
    let o = sdutm(&["solve", "--config", path.to_str().unwrap(), "--h", "0.1", "--T", "0.01", "--nmax", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 5);
    std::fs::write(&path, "pde = \"heat\"\n").unwrap();
    let bad = sdutm(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("E_CONFIG"));
}

#[test]
fn assert_flag_sets_exit_code() {
    let pass = sdutm(&["--assert", "check", "--case", "ADV_BWD_D", "--h", "0.05"]);
    assert!(pass.status.success());
    let fail = sdutm(&["--assert", "check", "--case", "ADV_BWD_D", "--h", "0.05", "--tol", "0"]);
    assert_eq!(fail.status.code(), Some(1));
    let quiet = sdutm(&["check", "--case", "ADV_BWD_D", "--h", "0.05", "--tol", "0"]);
    assert!(quiet.status.success());
}

#[test]
fn symmetries_regions_and_modified_equation() {
    let s = stdout(&sdutm(&["symmetries", "--case", "HEAT_CEN4_D", "--h", "0.1"]));
    assert!(s.starts_with("k,zeta1_re,zeta1_im,usable1,zeta2_re"));
    let r = stdout(&sdutm(&["regions", "--case", "ADV_FWD", "--h", "0.1", "--nx", "4", "--ny", "3"]));
    assert_eq!(r.lines().count(), 13);
    let svg = stdout(&sdutm(&["regions", "--case", "ADV_FWD", "--h", "0.1", "--nx", "4", "--ny", "3", "--svg"]));
    assert!(svg.starts_with("<svg"));
    let m = stdout(&sdutm(&["modified-eq", "--case", "HEAT_CEN_D", "--h", "0.1", "--p-max", "4"]));
    assert!(m.contains("\n2,1.00000000000000000e0,0.00000000000000000e0\n"));
}

#[test]
fn smalltime_and_slices_summaries() {
    let o = sdutm(&["smalltime", "--r", "1", "--nmax", "30", "--tau", "1e-2", "--tau", "1e-3", "--tau", "1e-4"]);
    let text = stdout(&o);
    assert!(text.lines().last().unwrap().starts_with("# order-fit r=1"));
    assert!(parse_ok(&text));
    let s = stdout(&sdutm(&["slices", "--case", "ADV_BWD_D", "--h", "0.05"]));
    assert_eq!(s.lines().filter(|l| l.starts_with("# shift")).count(), 3);
}

fn parse_ok(text: &str) -> bool {
    sdutm::experiments::table::parse_plot_csv(text).is_ok()
}

#[test]
fn converge_then_plot() {
    let csv = scratch("conv.csv");
    let o = sdutm(&["--assert", "-o", csv.to_str().unwrap(), "converge", "--case", "LS_CEN_N", "--h", "0.04", "--h", "0.02", "--h", "0.01"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = sdutm(&["plot", csv.to_str().unwrap(), "--log-log", "--fit", "--scatter"]);
    assert!(stdout(&svg).contains("slope 1.00"));
    let empty = scratch("empty.csv");
    std::fs::write(&empty, "h,error\n").unwrap();
    let e = sdutm(&["plot", empty.to_str().unwrap()]);
    assert_eq!(e.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert!(!sdutm(&["solve", "--case", "NOPE"]).status.success());
    assert!(!sdutm(&["solve"]).status.success());
    assert!(!sdutm(&["--panels", "0", "solve", "--case", "ADV_FWD"]).status.success());
}
