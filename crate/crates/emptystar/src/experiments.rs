//! Seeded Monte-Carlo sweeps over n, with summaries and Poisson
//! goodness-of-fit for the close-base count N_{γn}.
//!
//! Each (n, trial) cell samples its own substream, so trials are independent
//! of execution order and the serialized results are byte-identical at any
//! parallelism level.

use crate::bodies::ConvexBody;
use crate::enumerate::{self, grid};
use crate::geom::binomial;
use crate::integrals;
use crate::rng::{stream_id, RngStream};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use std::fmt;

/// What a sweep measures per instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// N / n^d.
    EmptyCount,
    /// deg_k(X) normalized by n for k=d, n^{d-k} otherwise.
    MaxDegree(usize),
    /// C(d+1,k) N / C(n,k).
    TypicalDegree(usize),
    /// deg_1(X) / n^{d-1} across n.
    Deg1Profile,
    /// Raw N_{γn}.
    NGamma,
    /// N_{γn} histogram vs Poisson.
    PoissonGof,
}

impl Quantity {
    pub fn parse(s: &str, k: Option<usize>) -> Result<Quantity> {
        Ok(match s {
            "empty-count" => Quantity::EmptyCount,
            "max-degree" => {
                Quantity::MaxDegree(k.ok_or_else(|| Error::invalid("max-degree needs --k"))?)
            }
            "typical-degree" => Quantity::TypicalDegree(
                k.ok_or_else(|| Error::invalid("typical-degree needs --k"))?,
            ),
            "deg1-profile" => Quantity::Deg1Profile,
            "n-gamma" => Quantity::NGamma,
            "poisson-gof" => Quantity::PoissonGof,
            other => return Err(Error::invalid(format!("unknown quantity '{other}'"))),
        })
    }

    fn needs_enumeration(&self) -> bool {
        !matches!(self, Quantity::NGamma | Quantity::PoissonGof)
    }

    fn needs_gamma(&self) -> bool {
        matches!(self, Quantity::NGamma | Quantity::PoissonGof)
    }

    fn normalizer(&self, d: usize) -> String {
        match self {
            Quantity::EmptyCount => format!("N/n^{d}"),
            Quantity::MaxDegree(k) if *k == d => format!("deg_{d}/n"),
            Quantity::MaxDegree(k) => format!("deg_{k}/n^{}", d - k),
            Quantity::TypicalDegree(k) => format!("C({},{k})*N/C(n,{k})", d + 1),
            Quantity::Deg1Profile => format!("deg_1/n^{}", d - 1),
            Quantity::NGamma | Quantity::PoissonGof => "count".into(),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::EmptyCount => write!(f, "empty-count"),
            Quantity::MaxDegree(k) => write!(f, "max-degree(k={k})"),
            Quantity::TypicalDegree(k) => write!(f, "typical-degree(k={k})"),
            Quantity::Deg1Profile => write!(f, "deg1-profile"),
            Quantity::NGamma => write!(f, "n-gamma"),
            Quantity::PoissonGof => write!(f, "poisson-gof"),
        }
    }
}

/// One sweep: body, n grid, trials per n, seed.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub quantity: Quantity,
    pub body: ConvexBody,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub gamma: Option<f64>,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let d = self.body.dim();
        if self.n_values.is_empty() {
            return Err(Error::invalid("need at least one n value"));
        }
        if !self.n_values.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("n values must be strictly increasing"));
        }
        if self.n_values[0] < d + 1 {
            return Err(Error::invalid(format!("n must be >= d+1 = {}", d + 1)));
        }
        if self.trials < 1 {
            return Err(Error::invalid("trials must be >= 1"));
        }
        let n_max = *self.n_values.last().unwrap();
        if n_max > 2000 {
            return Err(Error::invalid("n is capped at 2000"));
        }
        if self.quantity.needs_enumeration() {
            // The naive path is the only one for d >= 3.
            if d == 3 && n_max > 80 {
                return Err(Error::invalid(
                    "d=3 enumeration sweeps cap n at 80 (naive path)",
                ));
            }
            if d >= 4 {
                let cost = binomial(n_max, d + 1).saturating_mul(n_max as u128);
                if cost > 2_000_000_000 {
                    return Err(Error::invalid(format!(
                        "d={d} enumeration at n={n_max} is beyond the naive-path budget"
                    )));
                }
            }
        }
        match self.quantity {
            Quantity::MaxDegree(k) | Quantity::TypicalDegree(k)
                if (k < 1 || k > d) => {
                    return Err(Error::invalid(format!("k must be in 1..={d}")));
                }
            _ => {}
        }
        if self.quantity.needs_gamma() {
            match self.gamma {
                Some(g) if g > 0.0 && g.is_finite() => {}
                _ => return Err(Error::invalid("this quantity needs --gamma > 0")),
            }
        }
        Ok(())
    }
}

/// Per-n summary: mean with normal-approximation uncertainty, reproducible
/// bit-exactly from (config, seed).
#[derive(Clone, Debug, Serialize)]
pub struct EstimateSummary {
    pub n: usize,
    pub mean: f64,
    pub stderr: f64,
    pub ci95: [f64; 2],
    pub trials: usize,
    pub normalizer: String,
}

/// One trial's value, for the CSV rows.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRow {
    pub n: usize,
    pub trial: usize,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepOutput {
    pub quantity: String,
    pub body: String,
    pub dim: usize,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub gamma: Option<f64>,
    pub seed: u64,
    pub rows: Vec<TrialRow>,
    pub summaries: Vec<EstimateSummary>,
    /// Known asymptotic target, when the theory pins one.
    pub closed_form: Option<f64>,
}

impl SweepOutput {
    /// CSV rows: quantity,d,body,n,trial,seed,value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,d,body,n,trial,seed,value\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.quantity, self.dim, self.body, row.n, row.trial, self.seed, row.value
            ));
        }
        out
    }

    pub fn to_summary_json(&self) -> String {
        let v = json!({
            "schema_version": "1",
            "config": {
                "quantity": self.quantity,
                "body": self.body,
                "dim": self.dim,
                "n_values": self.n_values,
                "trials": self.trials,
                "gamma": self.gamma,
                "seed": self.seed,
            },
            "summaries": self.summaries,
            "closed_form": self.closed_form,
        });
        serde_json::to_string_pretty(&v).expect("json")
    }
}

/// Mean, stderr (sample sd / sqrt(trials)), and mean ± 1.96 stderr.
pub fn summarize(values: &[f64]) -> Result<(f64, f64, [f64; 2])> {
    if values.is_empty() {
        return Err(Error::invalid("cannot summarize an empty sample"));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let stderr = if values.len() > 1 {
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok((mean, stderr, [mean - 1.96 * stderr, mean + 1.96 * stderr]))
}

/// Total variation distance between a histogram over {0,1,...} and
/// Poisson(lambda), including the Poisson tail mass beyond the support.
pub fn tv_distance(hist: &[u64], lambda: f64) -> Result<f64> {
    let total: u64 = hist.iter().sum();
    if total == 0 {
        return Err(Error::invalid("histogram is empty"));
    }
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::invalid("lambda must be nonnegative"));
    }
    let mut pmf = (-lambda).exp();
    let mut acc = 0.0;
    let mut tail = 1.0;
    for (j, &h) in hist.iter().enumerate() {
        acc += (h as f64 / total as f64 - pmf).abs();
        tail -= pmf;
        pmf *= lambda / (j as f64 + 1.0);
    }
    Ok(0.5 * (acc + tail.max(0.0)))
}

fn instance_value(
    q: Quantity,
    body: &ConvexBody,
    n: usize,
    gamma: Option<f64>,
    rng: &mut RngStream,
) -> Result<f64> {
    let d = body.dim();
    let ps = body.sample_uniform(rng, n)?;
    Ok(match q {
        Quantity::EmptyCount => {
            let acc = enumerate::count_pass(&ps, None)?;
            acc.total as f64 / (n as f64).powi(d as i32)
        }
        Quantity::MaxDegree(k) => {
            let (value, _) = enumerate::deg_k_max(&ps, k)?;
            let norm = if k == d {
                n as f64
            } else {
                (n as f64).powi((d - k) as i32)
            };
            value as f64 / norm
        }
        Quantity::TypicalDegree(k) => {
            let acc = enumerate::count_pass(&ps, None)?;
            enumerate::typical_degree(n, d, k, acc.total)
        }
        Quantity::Deg1Profile => {
            let acc = enumerate::count_pass(&ps, None)?;
            let deg1 = acc.per_vertex.iter().copied().max().unwrap_or(0);
            deg1 as f64 / (n as f64).powi((d - 1) as i32)
        }
        Quantity::NGamma | Quantity::PoissonGof => {
            let g = gamma.expect("validated");
            let threshold = (g * n as f64).powf(-1.0 / (d as f64 - 1.0));
            grid::close_subsets(&ps, d, threshold).len() as f64
        }
    })
}

/// Run the sweep: per n, `trials` independent instances on substreams
/// (seed, hash(n-index, trial)); aggregation in (n, trial) order.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepOutput> {
    config.validate()?;
    let d = config.body.dim();
    let mut jobs = Vec::with_capacity(config.n_values.len() * config.trials);
    for (ni, &n) in config.n_values.iter().enumerate() {
        for trial in 0..config.trials {
            jobs.push((ni, n, trial));
        }
    }
    let values: Vec<f64> = jobs
        .par_iter()
        .map(|&(ni, n, trial)| {
            let mut rng = RngStream::new(config.seed, stream_id(ni as u64, trial as u64));
            instance_value(config.quantity, &config.body, n, config.gamma, &mut rng)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(jobs.len());
    let mut summaries = Vec::with_capacity(config.n_values.len());
    for (ni, &n) in config.n_values.iter().enumerate() {
        let slice = &values[ni * config.trials..(ni + 1) * config.trials];
        for (trial, &value) in slice.iter().enumerate() {
            rows.push(TrialRow { n, trial, value });
        }
        let (mean, stderr, ci95) = summarize(slice)?;
        summaries.push(EstimateSummary {
            n,
            mean,
            stderr,
            ci95,
            trials: config.trials,
            normalizer: config.quantity.normalizer(d),
        });
    }
    Ok(SweepOutput {
        quantity: config.quantity.to_string(),
        body: config.body.to_string(),
        dim: d,
        n_values: config.n_values.clone(),
        trials: config.trials,
        gamma: config.gamma,
        seed: config.seed,
        rows,
        summaries,
        closed_form: closed_form_target(config),
    })
}

/// Asymptotic target when the theory pins one for this quantity and body.
fn closed_form_target(config: &ExperimentConfig) -> Option<f64> {
    let d = config.body.dim();
    match config.quantity {
        Quantity::EmptyCount => {
            if d == 2 {
                Some(2.0)
            } else if matches!(config.body, ConvexBody::Ball { .. }) {
                // Ellipsoids attain the classical equality case.
                integrals::constant_table(d).ok().map(|t| t.upper_c)
            } else {
                None
            }
        }
        Quantity::TypicalDegree(k) if k == d => {
            // (d+1)! lim n^{-d} E N; for d=2 this is 12.
            if d == 2 {
                Some(12.0)
            } else {
                None
            }
        }
        Quantity::NGamma | Quantity::PoissonGof => {
            let gamma = config.gamma?;
            if d == 2 {
                integrals::close_base_limit(2, gamma, config.body.volume(), None).ok()
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Poisson goodness-of-fit of N_{γn} per n value.
#[derive(Clone, Debug, Serialize)]
pub struct PoissonGofRow {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub tv_distance: f64,
    pub p_zero_empirical: f64,
    pub p_zero_predicted: f64,
}

pub fn poisson_gof(config: &ExperimentConfig) -> Result<Vec<PoissonGofRow>> {
    if config.quantity != Quantity::PoissonGof {
        return Err(Error::invalid("config quantity must be poisson-gof"));
    }
    let sweep = run_sweep(config)?;
    let mut out = Vec::new();
    for (ni, &n) in config.n_values.iter().enumerate() {
        let slice = &sweep.rows[ni * config.trials..(ni + 1) * config.trials];
        let max = slice.iter().map(|r| r.value as usize).max().unwrap_or(0);
        let mut hist = vec![0u64; max + 1];
        for r in slice {
            hist[r.value as usize] += 1;
        }
        let mean = slice.iter().map(|r| r.value).sum::<f64>() / slice.len() as f64;
        let tv = tv_distance(&hist, mean)?;
        out.push(PoissonGofRow {
            n,
            trials: config.trials,
            mean,
            tv_distance: tv,
            p_zero_empirical: hist[0] as f64 / slice.len() as f64,
            p_zero_predicted: (-mean).exp(),
        });
    }
    Ok(out)
}
