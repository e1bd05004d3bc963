//! Subcommand bodies. Each returns the process exit code on success; errors
//! carry their own code through [`CliError::exit_code`].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use socnav::context::{
    accuracy, fit_context_model, generate_dataset, holdout_split, read_csv, write_csv, DEFAULT_LAMBDA,
};
use socnav::pareto::{select_best, select_weighted_sum, ObjectivePoint};
use socnav::sim::{
    compute_metrics, parse_override, run_batch, run_scenario, write_trajectory_csv, ConfigError, Metrics, Mode, RunLog,
    ScenarioConfig, Status,
};

use crate::report::ComparisonReport;
use crate::svg::render_svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_STUCK: i32 = 3;

/// Scenarios shipped with the repository, addressable by name.
pub const BUNDLED_SCENARIOS: [(&str, &str); 5] = [
    ("hallway_human_vs_object", include_str!("../../../scenarios/hallway_human_vs_object.json")),
    ("tight_passage", include_str!("../../../scenarios/tight_passage.json")),
    ("queue_join", include_str!("../../../scenarios/queue_join.json")),
    ("open_field", include_str!("../../../scenarios/open_field.json")),
    ("group_join", include_str!("../../../scenarios/group_join.json")),
];

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Other(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_INVALID,
            CliError::Other(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "invalid scenario: {e}"),
            CliError::Other(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Other(e)
    }
}

/// Loads a scenario file, or a bundled scenario when `path` names one and no
/// such file exists. Overrides are raw `key=value` strings.
pub fn load_scenario(path: &Path, overrides: &[String]) -> Result<ScenarioConfig, ConfigError> {
    let pairs = overrides.iter().map(|o| parse_override(o)).collect::<Result<Vec<_>, _>>()?;
    if !path.exists() {
        let name = path.to_string_lossy();
        if let Some((n, text)) = BUNDLED_SCENARIOS.iter().find(|(n, _)| *n == name) {
            let mut cfg = ScenarioConfig::from_json_with_overrides(text, &pairs)?;
            if cfg.name.is_empty() {
                cfg.name = n.to_string();
            }
            return Ok(cfg);
        }
    }
    ScenarioConfig::load(path, &pairs)
}

fn write(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn metrics_json(m: &Metrics) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("metrics serialize");
    s.push('\n');
    s
}

/// Writes the four per-run artifacts into `dir`.
fn write_run(dir: &Path, log: &RunLog, metrics: &Metrics, config: &ScenarioConfig) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    write(&dir.join("runlog.json"), &log.to_json())?;
    let mut csv = Vec::new();
    write_trajectory_csv(log, &mut csv)?;
    fs::write(dir.join("trajectory.csv"), csv).with_context(|| format!("writing {}", dir.display()))?;
    write(&dir.join("metrics.json"), &metrics_json(metrics))?;
    write(&dir.join("scene.svg"), &render_svg(&[log], config))?;
    Ok(())
}

fn status_code(statuses: &[Status]) -> i32 {
    if statuses.contains(&Status::Stuck) {
        EXIT_STUCK
    } else {
        EXIT_OK
    }
}

pub struct RunArgs {
    pub scenario: PathBuf,
    pub mode: Mode,
    pub seed: u64,
    pub out: PathBuf,
    pub overrides: Vec<String>,
}

pub fn cmd_run(args: &RunArgs) -> Result<i32, CliError> {
    let config = load_scenario(&args.scenario, &args.overrides)?;
    let log = run_scenario(&config, args.mode, args.seed)?;
    let metrics = compute_metrics(&log, &config);
    write_run(&args.out, &log, &metrics, &config)?;
    eprintln!(
        "{} [{}]: {:?} after {} steps, path {:.2} m",
        config.name,
        args.mode.as_str(),
        metrics.status,
        metrics.steps,
        metrics.path_length
    );
    Ok(status_code(&[log.status]))
}

pub struct CompareArgs {
    pub scenario: PathBuf,
    pub seed: u64,
    pub out: PathBuf,
    pub overrides: Vec<String>,
}

/// Runs both modes and writes `traditional/`, `paccet/`, `comparison.json`
/// and `overlay.svg` under the output directory.
pub fn cmd_compare(args: &CompareArgs) -> Result<i32, CliError> {
    let config = load_scenario(&args.scenario, &args.overrides)?;
    let mut runs = run_batch(&[(&config, Mode::Traditional), (&config, Mode::Paccet)], args.seed).into_iter();
    let tlog = runs.next().expect("two runs")?;
    let plog = runs.next().expect("two runs")?;
    let tm = compute_metrics(&tlog, &config);
    let pm = compute_metrics(&plog, &config);
    write_run(&args.out.join("traditional"), &tlog, &tm, &config)?;
    write_run(&args.out.join("paccet"), &plog, &pm, &config)?;
    let report = ComparisonReport::new(&config, (&tlog, tm), (&plog, pm));
    write(&args.out.join("comparison.json"), &report.to_json())?;
    write(&args.out.join("overlay.svg"), &render_svg(&[&tlog, &plog], &config))?;
    for v in &report.verdicts {
        eprintln!("{} {}: {}", if v.passed { "ok  " } else { "FAIL" }, v.check, v.detail);
    }
    Ok(status_code(&[tlog.status, plog.status]))
}

pub struct TrainArgs {
    pub data: PathBuf,
    pub out: PathBuf,
    pub lambda: f64,
    pub seed: u64,
    /// Every `holdout`-th sample is kept out of training.
    pub holdout: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrainSummary {
    pub train_samples: usize,
    pub held_out_samples: usize,
    pub held_out_accuracy: f64,
}

/// Fits on the training split, reports held-out accuracy and writes the
/// model fitted on that same split.
pub fn cmd_train_context(args: &TrainArgs) -> Result<TrainSummary, CliError> {
    let file = fs::File::open(&args.data).with_context(|| format!("opening {}", args.data.display()))?;
    let data = read_csv(file).context("reading dataset")?;
    if args.holdout < 2 {
        return Err(anyhow::anyhow!("--holdout must be at least 2").into());
    }
    let (train, test) = holdout_split(&data, args.holdout);
    let model = fit_context_model(&train, args.lambda, args.seed).context("fitting context model")?;
    let held_out_accuracy = if test.is_empty() { f64::NAN } else { accuracy(&model, &test) };
    write(&args.out, &model.to_json().context("serializing model")?)?;
    Ok(TrainSummary {
        train_samples: train.len(),
        held_out_samples: test.len(),
        held_out_accuracy,
    })
}

pub fn default_lambda() -> f64 {
    DEFAULT_LAMBDA
}

/// Writes the synthetic labeled dataset as CSV to `out`, or stdout.
pub fn cmd_gen_dataset(seed: u64, per_label: usize, out: Option<&Path>) -> Result<usize, CliError> {
    let data = generate_dataset(seed, per_label);
    match out {
        Some(p) => {
            let f = fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            write_csv(&data, f).context("writing dataset")?;
        }
        None => write_csv(&data, std::io::stdout().lock()).context("writing dataset")?,
    }
    Ok(data.len())
}

/// The two-objective set with a concave front used by `paccet-demo`.
pub const DEMO_POINTS: [[f64; 2]; 4] = [[0.0, 1.0], [1.0, 0.0], [0.4, 0.4], [0.9, 0.9]];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoRow {
    pub point: [f64; 2],
    pub fitness: f64,
    pub dominated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoTable {
    pub rows: Vec<DemoRow>,
    /// Index picked by the Pareto selector.
    pub paccet_choice: usize,
    /// `(weights, index)` picked by weighted sums.
    pub weighted_sum_choices: Vec<([f64; 2], usize)>,
}

pub fn paccet_demo() -> DemoTable {
    let pts: Vec<ObjectivePoint> = DEMO_POINTS.iter().map(|p| ObjectivePoint::new(p.to_vec())).collect();
    let sel = select_best(&pts, &[0.0; 4]);
    let rows = DEMO_POINTS
        .iter()
        .zip(&pts)
        .zip(&sel.fitness)
        .map(|((p, op), f)| DemoRow {
            point: *p,
            fitness: *f,
            dominated: pts.iter().any(|q| socnav::pareto::dominates(q, op)),
        })
        .collect();
    let weights = [[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]];
    let weighted_sum_choices = weights.iter().map(|w| (*w, select_weighted_sum(&pts, w))).collect();
    DemoTable {
        rows,
        paccet_choice: sel.index,
        weighted_sum_choices,
    }
}

pub fn print_demo<W: Write>(t: &DemoTable, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{:>12}  {:>8}  {:>9}", "point", "fitness", "dominated")?;
    for r in &t.rows {
        let p = format!("({}, {})", r.point[0], r.point[1]);
        writeln!(out, "{p:>12}  {:>8.3}  {:>9}", r.fitness, r.dominated)?;
    }
    let show = |i: usize| format!("({}, {})", t.rows[i].point[0], t.rows[i].point[1]);
    writeln!(out, "pareto selector picks {}", show(t.paccet_choice))?;
    for (w, i) in &t.weighted_sum_choices {
        writeln!(out, "weighted sum {:?} picks {}", w, show(*i))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_reaches_the_knee() {
        let t = paccet_demo();
        assert_eq!(t.rows[t.paccet_choice].point, [0.4, 0.4]);
        let picks: Vec<usize> = t.weighted_sum_choices.iter().map(|(_, i)| *i).collect();
        assert_eq!(picks[0], 0);
        assert_eq!(picks[1], 1);
        assert!(t.rows[3].dominated);
        assert!(!picks.contains(&3));
    }

    #[test]
    fn bundled_names_resolve() {
        for (name, _) in BUNDLED_SCENARIOS {
            let c = load_scenario(Path::new(name), &[]).unwrap();
            assert!(!c.name.is_empty());
        }
    }

    #[test]
    fn override_without_equals_is_rejected() {
        let err = load_scenario(Path::new("open_field"), &["planner.dt".into()]).unwrap_err();
        assert!(err.to_string().contains("planner.dt"), "{err}");
    }
}
