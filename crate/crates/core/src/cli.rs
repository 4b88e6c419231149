//! Command-line front end: `run`, `sweep` and `schedule`.
//!
//! Settings come from an optional `key=value` config file (`#` starts a
//! comment) and are overridden by flags. Config keys are the flag names
//! without leading dashes, with `-` written as `_` (`t_r`, `seeds_per_point`).

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::belief::Domain;
use crate::doubling::Doubling;
use crate::environment::{generate, EnvironmentConfig, EnvironmentKind, DEFAULT_GRID_RESOLUTION, EXPERT_KNOTS};
use crate::error::{invalid, Error, Result};
use crate::evaluation::{bound_ratio, fit_exponent, run_experiment, sweep_exponent, SweepOutcome, SweepPoint};
use crate::forecaster::{Forecaster, Standalone};
use crate::learner::{GridHedge, Learner, OnlineGradientDescent};
use crate::mixture::{build_first_level, build_parallel, build_second_level, ceil_log2, reset_target};
use crate::recursive;
use crate::reset::{optimal_period, ResetPolicy, Resetting};

/// Grid points per coordinate of the grid-hedge base learner.
pub const HEDGE_GRID: usize = 33;

#[derive(Debug, Parser)]
#[command(name = "rexp", about = "Dynamic-regret experiments for recursive experts and its baselines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one algorithm on one environment and write a per-step CSV.
    Run(RunArgs),
    /// Mean final regret over seeds for several horizons, plus a log-log fit.
    Sweep(SweepArgs),
    /// Print the phased reset schedules and reset targets up to T.
    Schedule {
        #[arg(long = "T")]
        horizon: u64,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// base | reset | parallel | first-level | second-level | recursive | doubling(<inner>)
    #[arg(long)]
    pub algo: Option<String>,
    /// ogd | hedge
    #[arg(long)]
    pub base: Option<String>,
    /// piecewise-mean-squared | piecewise-expert-linear | zero
    #[arg(long)]
    pub env: Option<String>,
    #[arg(long = "T")]
    pub horizon: Option<u64>,
    #[arg(long = "C")]
    pub segments: Option<u64>,
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long = "t-r")]
    pub t_r: Option<u64>,
    /// Comparator grid points per coordinate.
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Comma-separated horizons, at least four.
    #[arg(long)]
    pub horizons: Option<String>,
    #[arg(long = "seeds-per-point")]
    pub seeds_per_point: Option<u64>,
    /// Dry run: report a planted power law `T^plant` instead of running.
    #[arg(long)]
    pub plant: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    Ogd,
    Hedge,
}

impl FromStr for BaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ogd" => Ok(BaseKind::Ogd),
            "hedge" | "grid-hedge" => Ok(BaseKind::Hedge),
            other => Err(invalid(format!("unknown base learner '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Algorithm {
    Base,
    Reset,
    Parallel,
    FirstLevel,
    SecondLevel,
    Recursive,
    Doubling(Box<Algorithm>),
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s
            .strip_prefix("doubling(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("doubling:"))
        {
            let inner: Algorithm = inner.parse()?;
            if matches!(inner, Algorithm::Doubling(_)) {
                return Err(invalid("doubling cannot wrap doubling"));
            }
            return Ok(Algorithm::Doubling(Box::new(inner)));
        }
        match s {
            "base" => Ok(Algorithm::Base),
            "reset" => Ok(Algorithm::Reset),
            "parallel" => Ok(Algorithm::Parallel),
            "first-level" => Ok(Algorithm::FirstLevel),
            "second-level" => Ok(Algorithm::SecondLevel),
            "recursive" => Ok(Algorithm::Recursive),
            other => Err(invalid(format!("unknown algorithm '{other}'"))),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Base => f.write_str("base"),
            Algorithm::Reset => f.write_str("reset"),
            Algorithm::Parallel => f.write_str("parallel"),
            Algorithm::FirstLevel => f.write_str("first-level"),
            Algorithm::SecondLevel => f.write_str("second-level"),
            Algorithm::Recursive => f.write_str("recursive"),
            Algorithm::Doubling(inner) => write!(f, "doubling({inner})"),
        }
    }
}

/// Fully resolved settings of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub base: BaseKind,
    pub environment: EnvironmentConfig,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub eta: Option<f64>,
    pub sigma: Option<f64>,
    pub t_r: Option<u64>,
    pub grid: usize,
}

impl RunConfig {
    /// Tuning parameter `C` handed to the algorithms that take one.
    pub fn segments(&self) -> u64 {
        self.environment.segments
    }

    pub fn horizon(&self) -> u64 {
        self.environment.horizon
    }

    pub fn validate(&self) -> Result<()> {
        self.environment.validate()?;
        if self.grid < 2 {
            return Err(invalid("comparator grid needs at least 2 points"));
        }
        if let Some(eta) = self.eta {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(invalid("eta override must be positive"));
            }
        }
        if let Some(sigma) = self.sigma {
            if !(0.0..=1.0).contains(&sigma) {
                return Err(invalid("sigma override must lie in [0, 1]"));
            }
        }
        if let Some(t_r) = self.t_r {
            if t_r < 2 {
                return Err(invalid("t_r override must be at least 2"));
            }
        }
        let top = match &self.algorithm {
            Algorithm::Doubling(inner) => inner.as_ref(),
            a => a,
        };
        if self.eta.is_some() && !matches!(top, Algorithm::Parallel | Algorithm::FirstLevel | Algorithm::SecondLevel) {
            return Err(invalid(format!("--eta does not apply to {}", self.algorithm)));
        }
        if self.sigma.is_some() && *top != Algorithm::FirstLevel {
            return Err(invalid(format!("--sigma does not apply to {}", self.algorithm)));
        }
        if self.t_r.is_some() && *top != Algorithm::Reset {
            return Err(invalid(format!("--t-r does not apply to {}", self.algorithm)));
        }
        Ok(())
    }
}

/// Raw settings merged from a config file and flags.
#[derive(Debug, Clone, Default)]
struct Settings {
    algo: Option<String>,
    base: Option<String>,
    env: Option<String>,
    horizon: Option<u64>,
    segments: Option<u64>,
    noise: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    eta: Option<f64>,
    sigma: Option<f64>,
    t_r: Option<u64>,
    grid: Option<usize>,
    horizons: Option<String>,
    seeds_per_point: Option<u64>,
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse { line, message: format!("bad value '{value}' for {key}") })
}

impl Settings {
    fn from_file_text(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let n = i + 1;
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: n, message: format!("expected key=value, got '{line}'") })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "algo" | "algorithm" => s.algo = Some(value.to_string()),
                "base" => s.base = Some(value.to_string()),
                "env" => s.env = Some(value.to_string()),
                "T" => s.horizon = Some(parse_value(n, key, value)?),
                "C" => s.segments = Some(parse_value(n, key, value)?),
                "noise" => s.noise = Some(parse_value(n, key, value)?),
                "seed" => s.seed = Some(parse_value(n, key, value)?),
                "out" | "output" => s.out = Some(PathBuf::from(value)),
                "eta" => s.eta = Some(parse_value(n, key, value)?),
                "sigma" => s.sigma = Some(parse_value(n, key, value)?),
                "t_r" => s.t_r = Some(parse_value(n, key, value)?),
                "grid" => s.grid = Some(parse_value(n, key, value)?),
                "horizons" => s.horizons = Some(value.to_string()),
                "seeds_per_point" => s.seeds_per_point = Some(parse_value(n, key, value)?),
                other => return Err(Error::Parse { line: n, message: format!("unknown key '{other}'") }),
            }
        }
        Ok(s)
    }

    fn overlay(&mut self, a: &RunArgs) {
        macro_rules! take {
            ($($field:ident <- $arg:ident),*) => {
                $(if a.$arg.is_some() { self.$field = a.$arg.clone(); })*
            };
        }
        take!(algo <- algo, base <- base, env <- env, horizon <- horizon, segments <- segments,
              noise <- noise, seed <- seed, out <- out, eta <- eta, sigma <- sigma, t_r <- t_r,
              grid <- grid);
    }

    fn load(args: &RunArgs) -> Result<Self> {
        let mut s = match &args.config {
            Some(path) => Settings::from_file_text(&fs::read_to_string(path)?)?,
            None => Settings::default(),
        };
        s.overlay(args);
        Ok(s)
    }

    fn resolve(&self) -> Result<RunConfig> {
        let algorithm = self.algo.as_deref().unwrap_or("recursive").parse()?;
        let base = self.base.as_deref().unwrap_or("ogd").parse()?;
        let kind: EnvironmentKind = self.env.as_deref().unwrap_or("piecewise-mean-squared").parse()?;
        let horizon = self.horizon.ok_or_else(|| invalid("--T is required"))?;
        let segments = self.segments.unwrap_or(1);
        let seed = self.seed.unwrap_or(0);
        let environment = EnvironmentConfig::new(kind, horizon, segments, seed).with_noise(self.noise.unwrap_or(0.0));
        let cfg = RunConfig {
            algorithm,
            base,
            environment,
            seed,
            out: self.out.clone(),
            eta: self.eta,
            sigma: self.sigma,
            t_r: self.t_r,
            grid: self.grid.unwrap_or(DEFAULT_GRID_RESOLUTION),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn resolve_run(args: &RunArgs) -> Result<RunConfig> {
    Settings::load(args)?.resolve()
}

/// Gradient-norm bound of the environment's normalized losses on `[0, 1]`.
fn gradient_bound(kind: EnvironmentKind) -> f64 {
    match kind {
        EnvironmentKind::PiecewiseMeanSquared => 2.0,
        EnvironmentKind::PiecewiseExpertLinear => (EXPERT_KNOTS - 1) as f64,
        EnvironmentKind::Zero => 1.0,
    }
}

/// Smallest horizon `algorithm` can be built for.
fn min_horizon(algorithm: &Algorithm) -> u64 {
    match algorithm {
        Algorithm::Parallel | Algorithm::FirstLevel => 2,
        Algorithm::SecondLevel => 4,
        _ => 1,
    }
}

fn build_with<L: Learner + 'static>(
    prototype: L,
    algorithm: &Algorithm,
    cfg: &RunConfig,
    horizon: u64,
) -> Result<Box<dyn Forecaster>> {
    let alpha = prototype.spec().alpha;
    let segments = cfg.segments();
    Ok(match algorithm {
        Algorithm::Base => Box::new(Standalone::new(prototype)),
        Algorithm::Reset => {
            let period = cfg.t_r.unwrap_or_else(|| optimal_period(horizon, segments, alpha));
            Box::new(Resetting::new(prototype, ResetPolicy::periodic(period)?))
        }
        Algorithm::Parallel => {
            let m = build_parallel(&prototype, horizon)?;
            Box::new(match cfg.eta {
                Some(eta) => m.with_eta(eta),
                None => m,
            })
        }
        Algorithm::FirstLevel => {
            let mut m = build_first_level(&prototype, segments.min(horizon - 1), horizon)?;
            if let Some(eta) = cfg.eta {
                m = m.with_eta(eta);
            }
            if let Some(sigma) = cfg.sigma {
                m = m.with_sigma(sigma)?;
            }
            Box::new(m)
        }
        Algorithm::SecondLevel => {
            let m = build_second_level(&prototype, horizon)?;
            Box::new(match cfg.eta {
                Some(eta) => m.with_eta(eta),
                None => m,
            })
        }
        Algorithm::Recursive => Box::new(recursive::build(&prototype, horizon)?),
        Algorithm::Doubling(inner) => {
            let inner = inner.as_ref().clone();
            let cfg = cfg.clone();
            Box::new(Doubling::wrap(move |h| {
                // blocks too short for the inner algorithm run the bare base learner
                if h < min_horizon(&inner) {
                    Ok(Box::new(Standalone::new(prototype.clone())) as Box<dyn Forecaster>)
                } else {
                    build_with(prototype.clone(), &inner, &cfg, h)
                }
            })?)
        }
    })
}

/// Instantiate the configured algorithm for `horizon`.
pub fn build_algorithm(cfg: &RunConfig, horizon: u64) -> Result<Box<dyn Forecaster>> {
    let domain = Domain::unit_interval();
    match cfg.base {
        BaseKind::Ogd => {
            let ogd = OnlineGradientDescent::new(domain, gradient_bound(cfg.environment.kind))?;
            build_with(ogd, &cfg.algorithm, cfg, horizon)
        }
        BaseKind::Hedge => build_with(GridHedge::new(domain, HEDGE_GRID)?, &cfg.algorithm, cfg, horizon),
    }
}

fn base_alpha(_cfg: &RunConfig) -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub algorithm: String,
    pub horizon: u64,
    pub segments: u64,
    pub experts: usize,
    pub final_regret: f64,
    pub bound_ratio: f64,
    pub active_learners: usize,
    pub base_updates: u64,
}

impl std::fmt::Display for RunSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "algorithm={} T={} C={} experts={} final_regret={} bound_ratio={} active_learners={} base_updates={}",
            self.algorithm,
            self.horizon,
            self.segments,
            self.experts,
            self.final_regret,
            self.bound_ratio,
            self.active_learners,
            self.base_updates
        )
    }
}

/// Run one experiment. The CSV goes to `cfg.out` when set, otherwise to
/// `stdout` ahead of the summary line.
pub fn cmd_run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<RunSummary> {
    let seq = generate(&cfg.environment)?;
    let mut algorithm = build_algorithm(cfg, cfg.horizon())?;
    let experts = algorithm.experts();
    let trace = run_experiment(algorithm.as_mut(), &seq, cfg.grid, cfg.seed)?;
    match &cfg.out {
        Some(path) => {
            let mut file = io::BufWriter::new(fs::File::create(path)?);
            trace.write_csv(&mut file)?;
            file.flush()?;
        }
        None => trace.write_csv(&mut *stdout)?,
    }
    let summary = RunSummary {
        algorithm: cfg.algorithm.to_string(),
        horizon: cfg.horizon(),
        segments: cfg.segments(),
        experts,
        final_regret: trace.final_regret(),
        bound_ratio: bound_ratio(&trace, cfg.segments(), cfg.horizon(), base_alpha(cfg)),
        active_learners: trace.active_learners.last().copied().unwrap_or(0),
        base_updates: trace.base_updates,
    };
    writeln!(stdout, "{summary}")?;
    Ok(summary)
}

pub fn parse_horizons(text: &str) -> Result<Vec<u64>> {
    let horizons = text
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| invalid(format!("bad horizon '{s}'"))))
        .collect::<Result<Vec<_>>>()?;
    if horizons.len() < 4 {
        return Err(invalid(format!("a sweep needs at least 4 horizons, got {}", horizons.len())));
    }
    Ok(horizons)
}

pub fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<SweepOutcome> {
    let mut settings = Settings::load(&args.run)?;
    if args.horizons.is_some() {
        settings.horizons = args.horizons.clone();
    }
    if args.seeds_per_point.is_some() {
        settings.seeds_per_point = args.seeds_per_point;
    }
    let horizons = parse_horizons(settings.horizons.as_deref().ok_or_else(|| invalid("--horizons is required"))?)?;
    let seeds = settings.seeds_per_point.unwrap_or(10);
    if settings.horizon.is_none() {
        settings.horizon = Some(horizons[0]);
    }
    let outcome = match args.plant {
        Some(exponent) => planted(&horizons, exponent),
        None => {
            let cfg = settings.resolve()?;
            for &h in &horizons {
                EnvironmentConfig { horizon: h, ..cfg.environment.clone() }.validate()?;
            }
            let alpha = base_alpha(&cfg);
            sweep_exponent(|h| build_algorithm(&cfg, h), &cfg.environment, &horizons, seeds, alpha, cfg.grid)?
        }
    };
    match &settings.out {
        Some(path) => {
            let mut file = io::BufWriter::new(fs::File::create(path)?);
            outcome.write_csv(&mut file)?;
            file.flush()?;
        }
        None => outcome.write_csv(&mut *stdout)?,
    }
    Ok(outcome)
}

fn planted(horizons: &[u64], exponent: f64) -> SweepOutcome {
    let points: Vec<SweepPoint> = horizons
        .iter()
        .map(|&h| {
            let r = (h as f64).powf(exponent);
            SweepPoint { horizon: h, regrets: vec![r], mean_regret: r, std_err: 0.0, mean_bound_ratio: 0.0 }
        })
        .collect();
    let means: Vec<f64> = points.iter().map(|p| p.mean_regret).collect();
    SweepOutcome { fit: fit_exponent(horizons, &means), points }
}

/// Phased reset times of every expert up to `T` and the reset target of
/// each `t` with `t + 1 <= T`.
pub fn cmd_schedule(horizon: u64, stdout: &mut dyn Write) -> Result<()> {
    if horizon < 2 {
        return Err(invalid(format!("schedule needs T >= 2, got {horizon}")));
    }
    let n = ceil_log2(horizon);
    for i in 1..=n {
        let policy = ResetPolicy::phased(i);
        let times: Vec<String> = policy.reset_times(horizon).map(|t| t.to_string()).collect();
        writeln!(
            stdout,
            "expert {i} period={} first={} resets={}",
            policy.period(),
            policy.phase(),
            times.join(",")
        )?;
    }
    for t in 1..horizon {
        match reset_target(t, n) {
            Some(j) => writeln!(stdout, "t={t} next={} target={j}", t + 1)?,
            None => writeln!(stdout, "t={t} next={} target=none", t + 1)?,
        }
    }
    Ok(())
}

pub fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Run(args) => {
            let cfg = resolve_run(args)?;
            cmd_run(&cfg, stdout)?;
        }
        Command::Sweep(args) => {
            cmd_sweep(args, stdout)?;
        }
        Command::Schedule { horizon } => cmd_schedule(*horizon, stdout)?,
    }
    Ok(())
}

pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("RE_LOG")).init();
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut lock = io::BufWriter::new(stdout.lock());
    let result = dispatch(&cli, &mut lock).and_then(|()| lock.flush().map_err(Error::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(horizon: u64, algo: &str) -> RunArgs {
        RunArgs { horizon: Some(horizon), algo: Some(algo.into()), ..Default::default() }
    }

    #[test]
    fn algorithm_names_round_trip() {
        for name in ["base", "reset", "parallel", "first-level", "second-level", "recursive", "doubling(recursive)"] {
            assert_eq!(name.parse::<Algorithm>().unwrap().to_string(), name);
        }
        assert_eq!("doubling:parallel".parse::<Algorithm>().unwrap().to_string(), "doubling(parallel)");
        assert!("doubling(doubling(base))".parse::<Algorithm>().is_err());
        assert!("hedge".parse::<Algorithm>().is_err());
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(&path, "# comment\nalgo=parallel\nT=64\nC=2  # trailing\nseed=3\nnoise=0.1\n").unwrap();
        let a = RunArgs { config: Some(path), seed: Some(9), ..Default::default() };
        let cfg = resolve_run(&a).unwrap();
        assert_eq!(cfg.algorithm, Algorithm::Parallel);
        assert_eq!(cfg.horizon(), 64);
        assert_eq!(cfg.segments(), 2);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.environment.noise, 0.1);
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(matches!(Settings::from_file_text("T=4\nbogus=1\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn invalid_settings_name_the_precondition() {
        let err = resolve_run(&RunArgs { segments: Some(9), ..args(4, "base") }).unwrap_err();
        assert!(err.to_string().contains("1 <= C <= T"), "{err}");
        let err = resolve_run(&RunArgs { eta: Some(0.1), ..args(16, "recursive") }).unwrap_err();
        assert!(err.to_string().contains("--eta"), "{err}");
        assert!(resolve_run(&RunArgs { t_r: Some(1), ..args(16, "reset") }).is_err());
    }

    #[test]
    fn parallel_summary_reports_experts() {
        let cfg = resolve_run(&args(16, "parallel")).unwrap();
        let mut out = Vec::new();
        let summary = cmd_run(&cfg, &mut out).unwrap();
        assert_eq!(summary.experts, 4);
        let text = String::from_utf8(out).unwrap();
        assert!(text.lines().last().unwrap().contains("experts=4"));
    }

    #[test]
    fn every_algorithm_runs() {
        for algo in ["base", "reset", "parallel", "first-level", "second-level", "recursive", "doubling(recursive)", "doubling(second-level)"] {
            for base in ["ogd", "hedge"] {
                let a = RunArgs { segments: Some(3), noise: Some(0.1), base: Some(base.into()), grid: Some(65), ..args(40, algo) };
                let cfg = resolve_run(&a).unwrap();
                let summary = cmd_run(&cfg, &mut Vec::new()).unwrap();
                assert!(summary.final_regret.is_finite(), "{algo}/{base}");
            }
        }
    }

    #[test]
    fn schedule_for_eight() {
        let mut out = Vec::new();
        cmd_schedule(8, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("expert 1 period=2 first=1 resets=1,3,5,7\n"));
        assert!(text.contains("expert 3 period=8 first=4 resets=4\n"));
        assert!(text.contains("t=3 next=4 target=3\n"));
        assert!(text.contains("t=7 next=8 target=none\n"));
        assert_eq!(text.lines().filter(|l| l.starts_with("t=")).count(), 7);
        assert!(cmd_schedule(1, &mut Vec::new()).is_err());
    }

    #[test]
    fn planted_sweep_recovers_exponent() {
        let a = SweepArgs { horizons: Some("256,512,1024,2048".into()), plant: Some(0.6), ..Default::default() };
        let mut out = Vec::new();
        let outcome = cmd_sweep(&a, &mut out).unwrap();
        assert!((outcome.fit.unwrap().slope - 0.6).abs() < 1e-9);
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("T,mean_regret,std_err,slope\n"));
        let slope: f64 = text.lines().last().unwrap().strip_prefix("fit,,,").unwrap().parse().unwrap();
        assert!((slope - 0.6).abs() < 1e-9);
    }

    #[test]
    fn sweep_needs_four_horizons() {
        let a = SweepArgs { horizons: Some("256,512,1024".into()), plant: Some(0.5), ..Default::default() };
        assert!(cmd_sweep(&a, &mut Vec::new()).is_err());
    }
}
