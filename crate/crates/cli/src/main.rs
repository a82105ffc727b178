use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use hetero_dro::approx::saa_diagnostic;
use hetero_dro::regret::{
    adversarial_instance, analytic_bounds, exact_regret, exhaustive_regret_n2, matching_cell, monte_carlo_regret, Params,
};
use hetero_dro::{DistanceKind, FiniteMeasure, GridConfig, PolicySpec, ProblemSpec, RegretReport};
use hetero_dro_cli::csv_out::{write_rows, Row};
use hetero_dro_cli::experiment::{
    evaluate_pair, run_experiment, sandwich_violation, ConfigError, ExperimentConfig, McSettings, Mode,
    PolicyChoice,
};
use hetero_dro_cli::format::sig12;
use hetero_dro_cli::rate::fit_rate;

/// Regret of data-driven policies under heterogeneous historical data.
#[derive(Parser, Debug)]
#[command(name = "hetero-dro", version)]
struct Cli {
    /// Seed for Monte-Carlo runs.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Monte-Carlo trials per point.
    #[arg(long, global = true, default_value_t = 2000)]
    trials: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Exit with status 3 if a result falls outside its analytic sandwich.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distance between two measures.
    Distance {
        #[arg(long)]
        kind: DistanceKind,
        #[arg(long)]
        a: FiniteMeasure,
        #[arg(long)]
        b: FiniteMeasure,
    },
    /// Optimal action and value for a measure.
    Oracle {
        #[arg(long)]
        problem: ProblemSpec,
        #[arg(long)]
        measure: FiniteMeasure,
    },
    /// Regret of a policy on one (μ, ν) instance.
    Regret {
        #[arg(long)]
        problem: ProblemSpec,
        #[arg(long)]
        policy: PolicySpec,
        #[arg(long)]
        mu: FiniteMeasure,
        /// Historical distribution; give it twice for an exact two-sample
        /// evaluation, or `n` times for heterogeneous Monte-Carlo.
        #[arg(long, required = true)]
        nu: Vec<FiniteMeasure>,
        /// Sample size; switches to Monte-Carlo.
        #[arg(long)]
        n: Option<usize>,
        /// With `--eps`, attaches the analytic bounds of the cell.
        #[arg(long, requires = "eps")]
        kind: Option<DistanceKind>,
        #[arg(long, requires = "kind")]
        eps: Option<f64>,
    },
    /// Brute-force lower bound on the uniform DRO regret.
    DroScan {
        #[arg(long)]
        problem: ProblemSpec,
        #[arg(long)]
        kind: DistanceKind,
        /// `saa`, `dsaa:<d>`, `cap:<c>` or `recommended`.
        #[arg(long, default_value = "saa")]
        policy: PolicyChoice,
        /// Comma-separated, ascending.
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Regret on a named worst-case construction.
    Adversarial {
        #[arg(long)]
        name: String,
        #[arg(long)]
        eps: Option<f64>,
        /// Construction parameter `key=value`, e.g. `m=1`, `b=2`, `eta=0.001`.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        /// Policy to evaluate instead of the one the construction targets.
        #[arg(long)]
        policy: Option<PolicySpec>,
        /// Sample size; switches to Monte-Carlo.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Whether SAA's DRO regret vanishes linearly.
    Diagnose {
        #[arg(long)]
        problem: ProblemSpec,
        #[arg(long)]
        kind: DistanceKind,
    },
    /// ε sweep with a log-log rate fit.
    Rates {
        #[arg(long)]
        problem: ProblemSpec,
        #[arg(long)]
        kind: DistanceKind,
        /// `saa`, `dsaa:<d>`, `cap:<c>`, `recommended` or `cited`.
        #[arg(long, default_value = "saa")]
        policy: PolicyChoice,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        /// `adversarial-named`, `dro-scan` or `monte-carlo`.
        #[arg(long, default_value = "adversarial-named")]
        mode: Mode,
        /// Named construction; defaults to the one matching the cell.
        #[arg(long)]
        family: Option<String>,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        /// Samples per Monte-Carlo trial.
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Evenly spaced support locations on [0, M].
    #[arg(long, default_value_t = 11)]
    locations: usize,
    /// Extra support locations.
    #[arg(long, value_delimiter = ',')]
    extra_locations: Vec<f64>,
    /// Maximum atoms per candidate measure (1 to 4).
    #[arg(long, default_value_t = 2)]
    atoms: usize,
    /// Weights are multiples of 1/resolution.
    #[arg(long, default_value_t = 20)]
    resolution: usize,
    /// Largest number of (μ, ν) pairs to enumerate.
    #[arg(long)]
    max_pairs: Option<u128>,
}

impl GridArgs {
    fn build(&self, p: &ProblemSpec) -> GridConfig {
        let mut g = GridConfig::uniform(p.upper(), self.locations, self.atoms, self.resolution)
            .with_locations(&self.extra_locations);
        if let Some(cap) = self.max_pairs {
            g.cap = cap;
        }
        g
    }
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_ascii_lowercase(), v))
}

enum Output {
    Text(String),
    Csv(Vec<Row>),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return if e.is::<io::Error>() { ExitCode::FAILURE } else { ExitCode::from(2) };
        }
    };
    let violated = match &out {
        Output::Csv(rows) => rows.iter().any(|r| r.slope_note.starts_with("violation")),
        Output::Text(_) => false,
    };
    if let Err(e) = emit(&cli, out) {
        eprintln!("error: {e:#}");
        return ExitCode::FAILURE;
    }
    if cli.strict && violated {
        eprintln!("error: bound sandwich violated");
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}

fn emit(cli: &Cli, out: Output) -> anyhow::Result<()> {
    let sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match out {
        Output::Text(s) => writeln!(sink, "{s}")?,
        Output::Csv(rows) => write_rows(&mut sink, &rows)?,
    }
    sink.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    if cli.trials == 0 {
        bail!(ConfigError::Invalid("--trials must be positive".into()));
    }
    let mc = |n: Option<usize>| {
        n.map(|n| McSettings {
            n,
            trials: cli.trials,
            seed: cli.seed,
        })
    };
    Ok(match &cli.command {
        Command::Distance { kind, a, b } => Output::Text(sig12(kind.distance(a, b)?)),
        Command::Oracle { problem, measure } => {
            let x = problem.oracle(measure)?;
            let v = problem.expected_objective(x, measure)?;
            Output::Text(format!("action={} value={}", sig12(x), sig12(v)))
        }
        Command::Diagnose { problem, kind } => Output::Text(saa_diagnostic(problem, *kind).to_string()),
        Command::Regret {
            problem,
            policy,
            mu,
            nu,
            n,
            kind,
            eps,
        } => {
            policy.validate(problem)?;
            let mut report = match (mc(*n), nu.as_slice()) {
                (Some(s), _) => monte_carlo_regret(problem, policy, mu, nu, s.n, s.trials, s.seed)?,
                (None, [one]) => RegretReport::exact(exact_regret(problem, policy, mu, one)?),
                (None, [a, b]) => RegretReport::exact(exhaustive_regret_n2(problem, policy, mu, a, b)?),
                (None, _) => bail!(ConfigError::Invalid("exact regret takes one or two --nu; pass --n for more".into())),
            };
            if let (Some(kind), Some(eps)) = (kind, eps) {
                let bounds = matching_cell(problem, *kind, policy, *eps).and_then(|c| analytic_bounds(problem, *kind, c, *eps).ok());
                report = report.with_bounds(bounds);
            }
            let mode = if n.is_some() { "monte-carlo" } else { "regret" };
            Output::Csv(vec![Row::from_report(mode, *problem, *kind, &policy.to_string(), *eps, &report)])
        }
        Command::DroScan {
            problem,
            kind,
            policy,
            eps,
            grid,
        } => {
            let mut cfg = ExperimentConfig::new(*problem, *kind, *policy, eps.clone(), Mode::DroScan);
            cfg.grid = grid.build(problem);
            cfg.seed = cli.seed;
            let runs = run_experiment(&cfg)?;
            Output::Csv(runs.iter().map(|r| Row::from_run(&cfg, r)).collect())
        }
        Command::Adversarial {
            name,
            eps,
            params,
            policy,
            n,
        } => {
            let mut params: Params = params.iter().cloned().collect();
            if let Some(eps) = eps {
                params.insert("eps".into(), *eps);
            }
            let pair = adversarial_instance(name, &params)?;
            let (problem, kind, eps) = (pair.problem, pair.kind, pair.eps);
            let report = evaluate_pair(pair, *policy, mc(*n))?;
            let pol = report.witness.as_ref().map(|w| w.policy.to_string()).unwrap_or_default();
            let mode = if n.is_some() { "monte-carlo" } else { "adversarial-named" };
            Output::Csv(vec![Row::from_report(mode, problem, Some(kind), &pol, Some(eps), &report)])
        }
        Command::Rates {
            problem,
            kind,
            policy,
            eps,
            mode,
            family,
            params,
            n,
            grid,
        } => {
            let mut cfg = ExperimentConfig::new(*problem, *kind, *policy, eps.clone(), *mode);
            cfg.grid = grid.build(problem);
            cfg.n = *n;
            cfg.trials = cli.trials;
            cfg.seed = cli.seed;
            cfg.family = family.clone();
            cfg.params = params.iter().cloned().collect();
            let runs = run_experiment(&cfg)?;
            let mut rows: Vec<Row> = runs.iter().map(|r| Row::from_run(&cfg, r)).collect();
            let points: Vec<(f64, f64)> = runs
                .iter()
                .filter_map(|r| r.outcome.as_ref().ok().map(|rep| (r.eps, rep.estimate)))
                .collect();
            let label = match policy {
                PolicyChoice::Fixed(p) => p.to_string(),
                PolicyChoice::Recommended => "recommended".into(),
                PolicyChoice::Cited => "cited".into(),
            };
            match fit_rate(&points) {
                Ok(fit) => rows.push(Row::fit(&cfg, &label, &fit)),
                Err(e) => eprintln!("warning: no rate fit: {e}"),
            }
            for run in &runs {
                match &run.outcome {
                    Err(reason) => eprintln!("warning: eps = {} skipped: {reason}", run.eps),
                    Ok(rep) => {
                        if let Some(v) = sandwich_violation(rep) {
                            eprintln!("warning: eps = {}: {v}", run.eps);
                        }
                    }
                }
            }
            Output::Csv(rows)
        }
    })
}
