//! One CSV row per ε point, plus rate-fit summary rows.

use std::io::{Read, Write};

use anyhow::{anyhow, bail, Context};
use hetero_dro::{DistanceKind, ProblemSpec, RegretReport};

use crate::experiment::{sandwich_violation, EpsRun, ExperimentConfig};
use crate::format::{sig12, sig12_opt};
use crate::rate::RateFit;

pub const HEADER: [&str; 17] = [
    "mode",
    "problem",
    "distance",
    "policy",
    "eps",
    "M",
    "param1",
    "param2",
    "n",
    "trials",
    "seed",
    "regret_est",
    "ci_half",
    "analytic_lo",
    "analytic_hi",
    "witness",
    "slope_note",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub mode: String,
    pub problem: ProblemSpec,
    pub distance: Option<DistanceKind>,
    pub policy: String,
    pub eps: Option<f64>,
    pub n: Option<u64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub regret_est: Option<f64>,
    pub ci_half: Option<f64>,
    pub analytic_lo: Option<f64>,
    pub analytic_hi: Option<f64>,
    pub witness: String,
    pub slope_note: String,
}

impl Row {
    /// Row for one evaluated instance. Analytic bounds, witness and
    /// violations of the theory are filled from the report.
    pub fn from_report(
        mode: &str,
        problem: ProblemSpec,
        distance: Option<DistanceKind>,
        policy: &str,
        eps: Option<f64>,
        rep: &RegretReport,
    ) -> Self {
        Row {
            mode: mode.to_string(),
            problem,
            distance,
            policy: policy.to_string(),
            eps,
            n: rep.n.map(|v| v as u64),
            trials: rep.trials.map(|v| v as u64),
            seed: rep.seed,
            regret_est: Some(rep.estimate),
            ci_half: Some(rep.ci_half_width),
            analytic_lo: rep.analytic_lower,
            analytic_hi: rep.analytic_upper,
            witness: rep.witness.as_ref().map(|w| w.to_string()).unwrap_or_default(),
            slope_note: sandwich_violation(rep).map(|v| format!("violation: {v}")).unwrap_or_default(),
        }
    }

    /// Row for one ε. Failed points keep their reason in `slope_note`.
    pub fn from_run(cfg: &ExperimentConfig, run: &EpsRun) -> Self {
        let policy = run.policy.map(|p| p.to_string()).unwrap_or_default();
        let mode = cfg.mode.to_string();
        match &run.outcome {
            Ok(rep) => Row::from_report(&mode, cfg.problem, Some(cfg.kind), &policy, Some(run.eps), rep),
            Err(reason) => Row {
                mode,
                problem: cfg.problem,
                distance: Some(cfg.kind),
                policy,
                eps: Some(run.eps),
                n: None,
                trials: None,
                seed: None,
                regret_est: None,
                ci_half: None,
                analytic_lo: None,
                analytic_hi: None,
                witness: String::new(),
                slope_note: format!("skipped: {reason}"),
            },
        }
    }

    /// Summary row of a log-log fit over the whole sweep.
    pub fn fit(cfg: &ExperimentConfig, policy: &str, fit: &RateFit) -> Self {
        Row {
            mode: format!("{}-fit", cfg.mode),
            problem: cfg.problem,
            distance: Some(cfg.kind),
            policy: policy.to_string(),
            eps: None,
            n: None,
            trials: None,
            seed: None,
            regret_est: None,
            ci_half: None,
            analytic_lo: None,
            analytic_hi: None,
            witness: String::new(),
            slope_note: format!(
                "slope={};intercept={};r2={}",
                sig12(fit.slope),
                sig12(fit.intercept),
                sig12(fit.r_squared)
            ),
        }
    }

    pub fn record(&self) -> Vec<String> {
        let (p1, p2) = self.problem.params();
        let int = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
        vec![
            self.mode.clone(),
            self.problem.tag().to_string(),
            self.distance.map(|d| d.to_string()).unwrap_or_default(),
            self.policy.clone(),
            sig12_opt(self.eps),
            sig12(self.problem.upper()),
            sig12_opt(p1),
            sig12_opt(p2),
            int(self.n),
            int(self.trials),
            int(self.seed),
            sig12_opt(self.regret_est),
            sig12_opt(self.ci_half),
            sig12_opt(self.analytic_lo),
            sig12_opt(self.analytic_hi),
            self.witness.clone(),
            self.slope_note.clone(),
        ]
    }

    pub fn from_record(rec: &csv::StringRecord) -> anyhow::Result<Self> {
        if rec.len() != HEADER.len() {
            bail!("expected {} fields, got {}", HEADER.len(), rec.len());
        }
        let f = |i: usize| -> anyhow::Result<Option<f64>> {
            let s = &rec[i];
            if s.is_empty() {
                return Ok(None);
            }
            s.parse().map(Some).with_context(|| format!("field {}: `{s}`", HEADER[i]))
        };
        let u = |i: usize| -> anyhow::Result<Option<u64>> {
            let s = &rec[i];
            if s.is_empty() {
                return Ok(None);
            }
            s.parse().map(Some).with_context(|| format!("field {}: `{s}`", HEADER[i]))
        };
        let need = |v: Option<f64>, i: usize| v.ok_or_else(|| anyhow!("field {} is empty", HEADER[i]));
        let m = need(f(5)?, 5)?;
        let problem = match &rec[1] {
            "newsvendor" => ProblemSpec::newsvendor(need(f(6)?, 6)?, need(f(7)?, 7)?, m),
            "pricing" => ProblemSpec::pricing(m),
            "ski" => ProblemSpec::ski_rental(need(f(6)?, 6)?, m),
            "holder" => ProblemSpec::holder(need(f(6)?, 6)?, m),
            other => bail!("unknown problem `{other}`"),
        }?;
        Ok(Row {
            mode: rec[0].to_string(),
            problem,
            distance: if rec[2].is_empty() { None } else { Some(rec[2].parse()?) },
            policy: rec[3].to_string(),
            eps: f(4)?,
            n: u(8)?,
            trials: u(9)?,
            seed: u(10)?,
            regret_est: f(11)?,
            ci_half: f(12)?,
            analytic_lo: f(13)?,
            analytic_hi: f(14)?,
            witness: rec[15].to_string(),
            slope_note: rec[16].to_string(),
        })
    }
}

pub fn write_rows<W: Write>(out: W, rows: &[Row]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: Read>(input: R) -> anyhow::Result<Vec<Row>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?;
    if header.iter().ne(HEADER.iter().copied()) {
        bail!("unexpected header: {header:?}");
    }
    r.records().map(|rec| Row::from_record(&rec?)).collect()
}
