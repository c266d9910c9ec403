use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use sdg_core::mesh::{classify, dof_table_csv, CartesianMesh, DofRow};
use sdg_core::solve_post::{convergence_rates, project_problem, solve_problem, RunOutcome, RunSettings};
use sdg_core::Execution;

use crate::config::{ConfigError, Mode, RunConfig};
use crate::svg::{emit_svg, PlotLabels, ReferenceSlope, Series};

pub const RESULTS_HEADER: &str = "run_id,scheme,m,epsilon,sigma0,alpha,beta_minus,beta_plus,N,h,dofs,err_l2,err_h1,err_energy,rate_l2,rate_h1,solve_seconds,error";

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Runtime(String),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Runtime(e) => f.write_str(e),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

fn runtime(e: impl fmt::Display) -> RunError {
    RunError::Runtime(e.to_string())
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    /// Zero the timing columns so repeated runs write identical files.
    pub deterministic: bool,
    pub exec: Execution,
}

/// What a finished study wrote and how many grid points failed.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub dir: PathBuf,
    pub rows: usize,
    pub failures: usize,
    pub rates: String,
}

/// One `(scheme, m, beta)` refinement sequence.
struct SeriesKey {
    run_id: String,
    scheme: String,
    m: usize,
    beta: (f64, f64),
    scheme_index: usize,
}

struct Row {
    n: usize,
    outcome: Result<RunOutcome, String>,
}

fn clean(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

pub fn run(config: &RunConfig, mode: Mode, options: &RunOptions) -> Result<RunSummary, RunError> {
    if let Some(declared) = config.mode {
        if declared != mode {
            return Err(ConfigError(format!("config declares mode {declared} but the {mode} command was used")).into());
        }
    }
    let dir = config.output_dir(options.out.as_deref());
    std::fs::create_dir_all(&dir).map_err(|e| runtime(format!("cannot create {}: {e}", dir.display())))?;
    let summary = match mode {
        Mode::Dofs => run_dofs(config, &dir)?,
        Mode::Solve | Mode::Project => run_study(config, mode, options, &dir)?,
    };
    if config.output.plot {
        let csv = std::fs::read_to_string(dir.join("results.csv")).map_err(runtime)?;
        match plot_csv(&csv, &config.name) {
            Ok(svg) => write(&dir.join("loglog.svg"), &svg)?,
            Err(e) => log::warn!("no plot written: {e}"),
        }
    }
    Ok(summary)
}

fn write(path: &Path, text: &str) -> Result<(), RunError> {
    std::fs::write(path, text).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))
}

fn run_study(config: &RunConfig, mode: Mode, options: &RunOptions, dir: &Path) -> Result<RunSummary, RunError> {
    let mut keys = Vec::new();
    for (si, scheme) in config.scheme.iter().enumerate() {
        for &m in &config.degrees {
            for b in &config.beta {
                let label = clean(&scheme.label());
                keys.push(SeriesKey {
                    run_id: format!("{}/{}/m{}/b{}-{}", clean(&config.name), label, m, b[0], b[1]),
                    scheme: label,
                    m,
                    beta: (b[0], b[1]),
                    scheme_index: si,
                });
            }
        }
    }

    let mut csv = String::from(RESULTS_HEADER);
    csv.push('\n');
    let mut rates = String::from("run_id,scheme,m,beta_minus,beta_plus,levels,rate_l2,rate_h1,fit_all_l2,fit_all_h1,steps_l2,steps_h1\n");
    let (mut rows_written, mut failures) = (0, 0);
    for key in &keys {
        let scheme = &config.scheme[key.scheme_index];
        let params = scheme.params(key.beta, key.m)?;
        let mut settings = RunSettings::new(key.m, params);
        settings.quadrature = config.quadrature.map(Into::into);
        settings.error_order = config.solver.error_order;
        settings.solver = config.solver.options();
        settings.exec = options.exec;

        let problem = config.problem.build(key.beta);
        let rows: Vec<Row> = config
            .n
            .iter()
            .map(|&n| {
                let outcome = match &problem {
                    Err(e) => Err(e.to_string()),
                    Ok(p) => match mode {
                        Mode::Solve => solve_problem(p, n, &settings),
                        _ => project_problem(p, n, &settings),
                    }
                    .map_err(|e| e.to_string()),
                };
                if let Err(e) = &outcome {
                    log::warn!("{} N={n}: {e}", key.run_id);
                }
                Row { n, outcome }
            })
            .collect();

        let mut prev: Option<(f64, f64, f64)> = None;
        let mut l2 = Vec::new();
        let mut h1 = Vec::new();
        for row in &rows {
            let fixed = format!(
                "{},{},{},{},{},{},{},{},{}",
                key.run_id, key.scheme, key.m, params.epsilon, params.sigma0, params.alpha, key.beta.0, key.beta.1, row.n
            );
            match &row.outcome {
                Ok(out) => {
                    let h = out.h();
                    let e = &out.errors;
                    let (rate_l2, rate_h1) = match prev {
                        Some((ph, pl2, ph1)) => (
                            format!("{:.4}", (pl2 / e.l2).ln() / (ph / h).ln()),
                            format!("{:.4}", (ph1 / e.semi_h1).ln() / (ph / h).ln()),
                        ),
                        None => (String::new(), String::new()),
                    };
                    prev = Some((h, e.l2, e.semi_h1));
                    l2.push((h, e.l2));
                    h1.push((h, e.semi_h1));
                    let seconds = if options.deterministic { 0.0 } else { out.solution.assemble_seconds + out.solution.solve_seconds };
                    let _ = writeln!(
                        csv,
                        "{fixed},{h:.10e},{},{:.10e},{:.10e},{:.10e},{rate_l2},{rate_h1},{seconds:.3},",
                        out.space.dof_count, e.l2, e.semi_h1, e.energy
                    );
                }
                Err(msg) => {
                    failures += 1;
                    let _ = writeln!(csv, "{fixed},,,,,,,,,{}", clean(msg));
                }
            }
            rows_written += 1;
        }
        if let (Ok(rl2), Ok(rh1)) = (convergence_rates(&l2), convergence_rates(&h1)) {
            let steps = |v: &[f64]| v.iter().map(|s| format!("{s:.2}")).collect::<Vec<_>>().join(";");
            let _ = writeln!(
                rates,
                "{},{},{},{},{},{},{:.4},{:.4},{:.4},{:.4},{},{}",
                key.run_id,
                key.scheme,
                key.m,
                key.beta.0,
                key.beta.1,
                l2.len(),
                rl2.rate,
                rh1.rate,
                rl2.fit_all,
                rh1.fit_all,
                steps(&rl2.stepwise),
                steps(&rh1.stepwise)
            );
        }
    }
    write(&dir.join("results.csv"), &csv)?;
    write(&dir.join("rates.csv"), &rates)?;
    if rows_written > 0 && failures == rows_written {
        return Err(runtime(format!("every grid point failed; see {}", dir.join("results.csv").display())));
    }
    Ok(RunSummary { dir: dir.to_path_buf(), rows: rows_written, failures, rates })
}

fn run_dofs(config: &RunConfig, dir: &Path) -> Result<RunSummary, RunError> {
    let mut rows = Vec::new();
    let mut csv = String::new();
    let mut failures = 0;
    let problem = match config.counts {
        Some(_) => None,
        None => Some(config.problem.build((config.beta[0][0], config.beta[0][1])).map_err(runtime)?),
    };
    for &m in &config.degrees {
        for (k, &n) in config.n.iter().enumerate() {
            let row = match (&config.counts, &problem) {
                (Some(counts), _) => Ok(DofRow::from_counts(m, n, counts[k][1], counts[k][2])),
                (None, Some(p)) => CartesianMesh::new(p.domain, n)
                    .and_then(|mesh| classify(&mesh, &p.curve, Execution::Parallel).map(|cls| DofRow::from_classification(&mesh, &cls, m)))
                    .map_err(|e| e.to_string()),
                (None, None) => unreachable!(),
            };
            match row {
                Ok(r) => {
                    let line = dof_table_csv(&[r]);
                    let body = line.lines().nth(1).unwrap_or_default();
                    let _ = writeln!(csv, "{body},");
                    rows.push(r);
                }
                Err(e) => {
                    failures += 1;
                    log::warn!("dofs m={m} N={n}: {e}");
                    let _ = writeln!(csv, "{m},{n},,,,,,,,{}", clean(&e));
                }
            }
        }
    }
    let header = dof_table_csv(&[]);
    let text = format!("{},error\n{csv}", header.trim_end());
    write(&dir.join("results.csv"), &text)?;
    let mut rates = String::from("m,N,dg_over_sdg,cg_over_sdg\n");
    for r in &rows {
        let _ = writeln!(rates, "{},{},{:.4},{:.4}", r.m, r.n, r.dg_over_sdg(), r.cg_over_sdg());
    }
    write(&dir.join("rates.csv"), &rates)?;
    Ok(RunSummary { dir: dir.to_path_buf(), rows: config.degrees.len() * config.n.len(), failures, rates })
}

/// Log-log SVG from a `results.csv` written by any mode.
pub fn plot_csv(csv: &str, title: &str) -> Result<String, RunError> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().ok_or_else(|| runtime("empty CSV"))?.split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).ok_or_else(|| runtime(format!("CSV has no {name} column")));
    let records: Vec<Vec<&str>> = lines.filter(|l| !l.trim().is_empty()).map(|l| l.split(',').collect()).collect();
    let num = |r: &[&str], c: usize| r.get(c).and_then(|v| v.parse::<f64>().ok());

    let mut series: Vec<Series> = Vec::new();
    let mut push = |label: String, p: (f64, f64)| match series.iter_mut().find(|s| s.label == label) {
        Some(s) => s.points.push(p),
        None => series.push(Series { label, points: vec![p] }),
    };
    let (labels, references) = if header.contains(&"err_l2") {
        let (scheme, m, bm, bp, h, l2, h1) =
            (col("scheme")?, col("m")?, col("beta_minus")?, col("beta_plus")?, col("h")?, col("err_l2")?, col("err_h1")?);
        let mut degrees = BTreeSet::new();
        for which in [(l2, "L2"), (h1, "H1")] {
            for r in &records {
                let (Some(hv), Some(e)) = (num(r, h), num(r, which.0)) else { continue };
                let label = format!("{} m={} beta=({},{}) {}", r[scheme], r[m], r[bm], r[bp], which.1);
                degrees.insert(r[m].parse::<usize>().unwrap_or(1));
                push(label, (hv, e));
            }
        }
        let mut slopes = BTreeSet::new();
        for m in degrees {
            slopes.insert(m);
            slopes.insert(m + 1);
        }
        let refs = slopes.into_iter().map(|s| ReferenceSlope { label: format!("h^{s}"), slope: s as f64 }).collect::<Vec<_>>();
        (PlotLabels { title: title.into(), x: "h".into(), y: "error".into() }, refs)
    } else if header.contains(&"dof_sdg") {
        let (m, n) = (col("m")?, col("N")?);
        for (name, c) in [("DG", col("dof_dg")?), ("SDG", col("dof_sdg")?), ("CG", col("dof_cg")?)] {
            for r in &records {
                if let (Some(nv), Some(d)) = (num(r, n), num(r, c)) {
                    push(format!("{name} m={}", r[m]), (nv, d));
                }
            }
        }
        (PlotLabels { title: title.into(), x: "N".into(), y: "DoF".into() }, Vec::new())
    } else {
        return Err(runtime("unrecognised CSV header"));
    };
    emit_svg(&series, &references, &labels).map_err(runtime)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_from_results_rows() {
        let csv = format!(
            "{RESULTS_HEADER}\nr,S-SDG,1,-1,40,1,1,10,10,2.0e-1,1,4.0e-2,2.0e-1,1,,,0,\nr,S-SDG,1,-1,40,1,1,10,20,1.0e-1,1,1.0e-2,1.0e-1,1,2,1,0,\nr,S-SDG,1,-1,40,1,1,10,40,,,,,,,,,boom\n"
        );
        let svg = plot_csv(&csv, "t").unwrap();
        assert!(svg.contains(">2.00</text>") && svg.contains(">1.00</text>"));
        assert!(svg.contains("h^1") && svg.contains("h^2"));
        assert_eq!(svg.matches("<circle").count(), 4);
    }

    #[test]
    fn plot_from_dof_rows() {
        let csv = format!("{},error\n{}", dof_table_csv(&[]).trim_end(), "1,5,8,8,100,68,36,1.4706,0.5294,\n1,10,20,20,400,..,,,,x\n");
        let svg = plot_csv(&csv, "dofs").unwrap();
        assert!(svg.contains("SDG m=1"));
    }

    #[test]
    fn unknown_csv_is_rejected() {
        assert!(plot_csv("a,b\n1,2\n", "x").is_err());
    }
}
