use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn sdg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdg")).args(args).output().unwrap()
}

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap_or("").to_string()).collect()
}

#[test]
fn shipped_configs_parse() {
    let mut names: Vec<String> = std::fs::read_dir(examples())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".toml"))
        .collect();
    names.sort();
    for want in ["tab3", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "star", "bessel"] {
        assert!(names.contains(&format!("{want}.toml")), "missing {want}.toml");
    }
    for n in names {
        sdg_cli::RunConfig::load(&examples().join(&n)).unwrap_or_else(|e| panic!("{n}: {e}"));
    }
}

#[test]
fn dof_table_from_tabulated_counts() {
    let out = tempfile::tempdir().unwrap();
    let o = sdg(&["dofs", "--config", examples().join("tab3.toml").to_str().unwrap(), "--out", out.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.path().join("results.csv")).unwrap();
    assert!(csv.starts_with("m,N,T_i,E_i,dof_dg,dof_sdg,dof_cg,dg_over_sdg,cg_over_sdg,error\n"));
    assert!(csv.contains("\n1,5,8,8,100,68,36,1.4706,0.5294,\n"));
    assert!(csv.contains("\n2,10,20,20,900,581,441,1.5491,0.7590,\n"));
    assert_eq!(csv.lines().count(), 1 + 4 * 8);
}

#[test]
fn projection_rates_are_optimal() {
    let out = tempfile::tempdir().unwrap();
    let cfg = write_config(
        out.path(),
        "p.toml",
        "name = \"p\"\nN = [10, 20, 40, 80]\nbeta = [[1.0, 10.0]]\n[problem]\nkind = \"radial\"\n[output]\nplot = true\n",
    );
    let o = sdg(&["project", "--config", cfg.to_str().unwrap(), "--out", out.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rates = std::fs::read_to_string(out.path().join("rates.csv")).unwrap();
    let l2: f64 = column(&rates, "rate_l2")[0].parse().unwrap();
    let h1: f64 = column(&rates, "rate_h1")[0].parse().unwrap();
    assert!((l2 - 2.0).abs() <= 0.2 && (h1 - 1.0).abs() <= 0.2, "{l2} {h1}");
    let svg = std::fs::read_to_string(out.path().join("loglog.svg")).unwrap();
    assert!(svg.contains("h^1") && svg.contains("h^2"));
}

#[test]
fn deterministic_solves_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.toml",
        "name = \"s\"\nN = [8, 16]\nbeta = [[1.0, 10.0], [1.0, 1000.0]]\n[problem]\nkind = \"bessel\"\n[[scheme]]\nepsilon = 1\nsigma0 = \"reduced\"\n",
    );
    let mut texts = Vec::new();
    for (k, extra) in [(0, None), (1, Some("--sequential"))] {
        let out = dir.path().join(format!("run{k}"));
        let mut args = vec!["solve", "--deterministic", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
        args.extend(extra);
        let o = sdg(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        texts.push(std::fs::read(out.join("results.csv")).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    let csv = String::from_utf8(texts.remove(0)).unwrap();
    assert!(csv.starts_with(sdg_cli::RESULTS_HEADER));
    assert!(column(&csv, "scheme").iter().all(|s| s == "N-SDG"));
    assert!(column(&csv, "solve_seconds").iter().all(|s| s == "0.000"));
}

#[test]
fn empty_grid_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "e.toml", "name = \"e\"\nN = []\n[problem]\nkind = \"radial\"\n");
    let o = sdg(&["solve", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("N list is empty"));
}

#[test]
fn syntax_errors_report_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "x.toml", "name = \"x\"\nN = [10\n[problem]\nkind = \"radial\"\n");
    let o = sdg(&["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn mode_mismatch_is_a_config_error() {
    let o = sdg(&["solve", "--config", examples().join("tab3.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn failing_grid_points_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    // N = 1 leaves the interface inside a single element.
    let cfg = write_config(dir.path(), "f.toml", "name = \"f\"\nN = [1, 10]\n[problem]\nkind = \"radial\"\n");
    let o = sdg(&["project", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    let errors = column(&csv, "error");
    assert!(!errors[0].is_empty() && errors[1].is_empty(), "{csv}");
}

#[test]
fn plot_command_and_runtime_errors() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    std::fs::write(&csv, format!("{}\nr,S,1,-1,40,1,1,10,10,0.2,1,4e-2,2e-1,1,,,0,\nr,S,1,-1,40,1,1,10,20,0.1,1,1e-2,1e-1,1,2,1,0,\n", sdg_cli::RESULTS_HEADER)).unwrap();
    let svg = dir.path().join("r.svg");
    let o = sdg(&["plot", "--csv", csv.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert!(o.status.success());
    let a = std::fs::read_to_string(&svg).unwrap();
    assert!(a.contains(">2.00</text>"));
    let o = sdg(&["plot", "--csv", csv.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(a, std::fs::read_to_string(&svg).unwrap());

    let o = sdg(&["plot", "--csv", dir.path().join("missing.csv").to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
