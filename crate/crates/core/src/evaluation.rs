//! Regret traces, power-law fits, and bound ratios.

use std::io::Write;

use rayon::prelude::*;

use crate::environment::{dynamic_comparator, generate, EnvironmentConfig, LossSequence};
use crate::error::{Error, Result};
use crate::forecaster::Forecaster;
use crate::rng::{stream_rng, PLAY_STREAM};

pub const CSV_HEADER: &str = "t,expected_loss,cumulative_loss,comparator_cumulative,regret,active_learners";
pub const SWEEP_HEADER: &str = "T,mean_regret,std_err,slope";

/// Per-step record of one run against the dynamic comparator.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    pub expected_loss: Vec<f64>,
    /// Loss of the belief actually drawn each round; diagnostic only.
    pub sampled_loss: Vec<f64>,
    pub cumulative_loss: Vec<f64>,
    pub comparator_loss: Vec<f64>,
    pub comparator_cumulative: Vec<f64>,
    pub regret: Vec<f64>,
    pub active_learners: Vec<usize>,
    pub base_updates: u64,
    pub experts: usize,
}

impl RegretTrace {
    pub fn horizon(&self) -> u64 {
        self.expected_loss.len() as u64
    }

    pub fn final_regret(&self) -> f64 {
        self.regret.last().copied().unwrap_or(0.0)
    }

    pub fn final_loss(&self) -> f64 {
        self.cumulative_loss.last().copied().unwrap_or(0.0)
    }

    pub fn final_comparator(&self) -> f64 {
        self.comparator_cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for i in 0..self.expected_loss.len() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                i + 1,
                self.expected_loss[i],
                self.cumulative_loss[i],
                self.comparator_cumulative[i],
                self.regret[i],
                self.active_learners[i]
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

/// Drive `algorithm` through `seq` and account its expected loss against the
/// best piecewise-constant belief for the sequence's own segmentation.
pub fn run_experiment(
    algorithm: &mut dyn Forecaster,
    seq: &LossSequence,
    grid_resolution: usize,
    seed: u64,
) -> Result<RegretTrace> {
    if let Some(h) = algorithm.horizon() {
        if h != seq.horizon() {
            return Err(Error::HorizonMismatch { algorithm: h, environment: seq.horizon() });
        }
    }
    let comparator = dynamic_comparator(seq, seq.schedule(), grid_resolution)?;
    let mut rng = stream_rng(seed, PLAY_STREAM);
    let n = seq.len();
    let mut trace = RegretTrace {
        expected_loss: Vec::with_capacity(n),
        sampled_loss: Vec::with_capacity(n),
        cumulative_loss: Vec::with_capacity(n),
        comparator_loss: comparator.per_step.clone(),
        comparator_cumulative: Vec::with_capacity(n),
        regret: Vec::with_capacity(n),
        active_learners: Vec::with_capacity(n),
        base_updates: 0,
        experts: algorithm.experts(),
    };
    let (mut cum, mut comp) = (0.0, 0.0);
    for (loss, comparator_loss) in seq.losses().iter().zip(&comparator.per_step) {
        let drawn = algorithm.sample(&mut rng);
        trace.sampled_loss.push(loss.evaluate(&drawn));
        let expected = algorithm.step(loss)?;
        cum += expected;
        comp += comparator_loss;
        trace.expected_loss.push(expected);
        trace.cumulative_loss.push(cum);
        trace.comparator_cumulative.push(comp);
        trace.regret.push(cum - comp);
        trace.active_learners.push(algorithm.active_learners());
    }
    trace.base_updates = algorithm.base_updates();
    log::debug!(
        "run finished: T={} regret={} base updates={}",
        n,
        trace.final_regret(),
        trace.base_updates
    );
    Ok(trace)
}

/// `regret(T) / (C^alpha T^(1 - alpha))`, floored at zero.
pub fn bound_ratio(trace: &RegretTrace, segments: u64, horizon: u64, alpha: f64) -> f64 {
    ratio_of(trace.final_regret(), segments, horizon, alpha)
}

pub fn ratio_of(regret: f64, segments: u64, horizon: u64, alpha: f64) -> f64 {
    let scale = (segments as f64).powf(alpha) * (horizon as f64).powf(1.0 - alpha);
    (regret / scale).max(0.0)
}

/// Least-squares line `y = intercept + slope x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Euclidean norm of the residuals.
    pub residual: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        .sqrt();
    LineFit { slope, intercept, residual }
}

/// Fit of `ln regret = intercept + slope ln T`.
pub type ExponentFit = LineFit;

pub fn fit_exponent(horizons: &[u64], regrets: &[f64]) -> Result<ExponentFit> {
    if horizons.len() != regrets.len() {
        return Err(Error::DegenerateFit("horizon and regret counts differ".into()));
    }
    if horizons.len() < 4 {
        return Err(Error::DegenerateFit(format!("need at least 4 horizons, got {}", horizons.len())));
    }
    if let Some((t, r)) = horizons.iter().zip(regrets).find(|(_, r)| !(**r > 0.0 && r.is_finite())) {
        return Err(Error::DegenerateFit(format!("mean regret {r} at T={t} is not positive")));
    }
    let xs: Vec<f64> = horizons.iter().map(|t| (*t as f64).ln()).collect();
    let ys: Vec<f64> = regrets.iter().map(|r| r.ln()).collect();
    Ok(linear_fit(&xs, &ys))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub horizon: u64,
    pub regrets: Vec<f64>,
    pub mean_regret: f64,
    pub std_err: f64,
    pub mean_bound_ratio: f64,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub points: Vec<SweepPoint>,
    pub fit: Result<ExponentFit>,
}

impl SweepOutcome {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{SWEEP_HEADER}")?;
        for p in &self.points {
            writeln!(out, "{},{},{},", p.horizon, p.mean_regret, p.std_err)?;
        }
        match &self.fit {
            Ok(fit) => writeln!(out, "fit,,,{}", fit.slope),
            Err(_) => writeln!(out, "fit,,,"),
        }
    }

    /// Slope of the mean bound ratio against `ln T`.
    pub fn ratio_trend(&self) -> f64 {
        let xs: Vec<f64> = self.points.iter().map(|p| (p.horizon as f64).ln()).collect();
        let ys: Vec<f64> = self.points.iter().map(|p| p.mean_bound_ratio).collect();
        linear_fit(&xs, &ys).slope
    }
}

pub fn mean_and_std_err(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Seed of the `k`-th repetition of a sweep point.
pub fn repetition_seed(base: u64, k: u64) -> u64 {
    base.wrapping_add(k)
}

/// Mean final regret of an algorithm family over `seeds` environment
/// realizations per horizon, and the log-log fit across horizons.
///
/// Repetition `k` uses environment seed `template.seed + k`; repetitions run
/// in parallel and are reduced in order.
pub fn sweep_exponent<F>(
    family: F,
    template: &EnvironmentConfig,
    horizons: &[u64],
    seeds: u64,
    alpha: f64,
    grid_resolution: usize,
) -> Result<SweepOutcome>
where
    F: Fn(u64) -> Result<Box<dyn Forecaster>> + Sync,
{
    if horizons.len() < 4 {
        return Err(Error::InvalidConfig(format!("a sweep needs at least 4 horizons, got {}", horizons.len())));
    }
    if seeds == 0 {
        return Err(Error::InvalidConfig("a sweep needs at least one seed per point".into()));
    }
    let mut points = Vec::with_capacity(horizons.len());
    for &horizon in horizons {
        let regrets = (0..seeds)
            .into_par_iter()
            .map(|k| {
                let seed = repetition_seed(template.seed, k);
                let cfg = EnvironmentConfig { horizon, seed, ..template.clone() };
                let seq = generate(&cfg)?;
                let mut algorithm = family(horizon)?;
                Ok(run_experiment(algorithm.as_mut(), &seq, grid_resolution, seed)?.final_regret())
            })
            .collect::<Result<Vec<f64>>>()?;
        let (mean_regret, std_err) = mean_and_std_err(&regrets);
        let ratios: Vec<f64> = regrets.iter().map(|r| ratio_of(*r, template.segments, horizon, alpha)).collect();
        let mean_bound_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
        log::info!("T={horizon}: mean regret {mean_regret} (se {std_err})");
        points.push(SweepPoint { horizon, regrets, mean_regret, std_err, mean_bound_ratio });
    }
    let means: Vec<f64> = points.iter().map(|p| p.mean_regret).collect();
    let fit = fit_exponent(horizons, &means);
    if let Err(e) = &fit {
        log::warn!("{e}");
    }
    Ok(SweepOutcome { points, fit })
}
