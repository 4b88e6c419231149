//! Piecewise-stationary loss sequences and the hindsight comparators.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;

use crate::belief::{grid_axis, Belief, Domain};
use crate::error::{invalid, Error, Result};
use crate::loss::LossFunction;
use crate::rng::{stream_rng, BOUNDARY_STREAM, ENVIRONMENT_STREAM};

/// Points per coordinate used by the comparators unless told otherwise.
pub const DEFAULT_GRID_RESOLUTION: usize = 1025;

/// Knots of the piecewise-expert-linear environment.
pub const EXPERT_KNOTS: usize = 9;

/// Smallest jump between consecutive segment means in the squared-loss kind.
pub const MIN_MEAN_JUMP: f64 = 0.25;

const BEST_EXPERT_LOSS: f64 = 0.2;
const OTHER_EXPERT_LOSS: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvironmentKind {
    /// `(x - y_t)^2 / normalizer` with `y_t` uniform noise around the segment mean.
    PiecewiseMeanSquared,
    /// Tabulated losses on an even knot grid; one knot is best per segment.
    PiecewiseExpertLinear,
    /// Identically zero losses.
    Zero,
}

impl EnvironmentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EnvironmentKind::PiecewiseMeanSquared => "piecewise-mean-squared",
            EnvironmentKind::PiecewiseExpertLinear => "piecewise-expert-linear",
            EnvironmentKind::Zero => "zero",
        }
    }
}

impl fmt::Display for EnvironmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnvironmentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "piecewise-mean-squared" | "mean" => Ok(EnvironmentKind::PiecewiseMeanSquared),
            "piecewise-expert-linear" | "expert" => Ok(EnvironmentKind::PiecewiseExpertLinear),
            "zero" => Ok(EnvironmentKind::Zero),
            other => Err(invalid(format!("unknown environment kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentConfig {
    pub kind: EnvironmentKind,
    pub horizon: u64,
    /// Number of stationary segments.
    pub segments: u64,
    pub noise: f64,
    pub seed: u64,
    /// Divides raw losses; `None` picks the smallest value that keeps every
    /// loss in `[0, 1]`.
    pub normalization: Option<f64>,
    /// Interior change points `T_1 < ... < T_{C-1}`; sampled when absent.
    pub boundaries: Option<Vec<u64>>,
    /// Segment means for the squared kind; sampled when absent.
    pub means: Option<Vec<f64>>,
}

impl EnvironmentConfig {
    pub fn new(kind: EnvironmentKind, horizon: u64, segments: u64, seed: u64) -> Self {
        EnvironmentConfig {
            kind,
            horizon,
            segments,
            noise: 0.0,
            seed,
            normalization: None,
            boundaries: None,
            means: None,
        }
    }

    pub fn with_noise(mut self, noise: f64) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_boundaries(mut self, boundaries: Vec<u64>) -> Self {
        self.boundaries = Some(boundaries);
        self
    }

    pub fn with_means(mut self, means: Vec<f64>) -> Self {
        self.means = Some(means);
        self
    }

    pub fn with_normalization(mut self, normalization: f64) -> Self {
        self.normalization = Some(normalization);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(invalid("horizon T must be positive"));
        }
        if self.segments == 0 || self.segments > self.horizon {
            return Err(invalid(format!(
                "segment count C must satisfy 1 <= C <= T (C={}, T={})",
                self.segments, self.horizon
            )));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(invalid("noise scale must be finite and nonnegative"));
        }
        if let Some(n) = self.normalization {
            if !(n > 0.0 && n.is_finite()) {
                return Err(invalid("normalization constant must be positive"));
            }
        }
        if let Some(b) = &self.boundaries {
            if b.len() as u64 != self.segments - 1 {
                return Err(invalid(format!(
                    "expected {} boundaries for C={}, got {}",
                    self.segments - 1,
                    self.segments,
                    b.len()
                )));
            }
            if b.windows(2).any(|w| w[0] >= w[1]) || b.iter().any(|&x| x == 0 || x >= self.horizon) {
                return Err(invalid("boundaries must be strictly increasing within 1..T-1"));
            }
        }
        if let Some(m) = &self.means {
            if m.len() as u64 != self.segments {
                return Err(invalid("need exactly one mean per segment"));
            }
            if m.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(invalid("segment means must lie in [0, 1]"));
            }
        }
        Ok(())
    }

    /// Line-based `key=value` text form; `parse` inverts it exactly.
    pub fn to_text(&self) -> String {
        let join = |v: &[String]| v.join(",");
        let boundaries = self
            .boundaries
            .as_ref()
            .map(|b| join(&b.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
            .unwrap_or_default();
        let means = self
            .means
            .as_ref()
            .map(|m| join(&m.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
            .unwrap_or_default();
        let normalization = self.normalization.map(|n| n.to_string()).unwrap_or_default();
        format!(
            "kind={}\nT={}\nC={}\nseed={}\nnoise={}\nnormalization={}\nboundaries={}\nmeans={}\n",
            self.kind, self.horizon, self.segments, self.seed, self.noise, normalization, boundaries, means
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = EnvironmentConfig::new(EnvironmentKind::PiecewiseMeanSquared, 0, 0, 0);
        let (mut saw_kind, mut saw_t, mut saw_c) = (false, false, false);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse { line: i + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got '{line}'")))?;
            let value = value.trim();
            match key.trim() {
                "kind" => {
                    cfg.kind = value.parse().map_err(|e: Error| err(e.to_string()))?;
                    saw_kind = true;
                }
                "T" => {
                    cfg.horizon = value.parse().map_err(|_| err(format!("bad T '{value}'")))?;
                    saw_t = true;
                }
                "C" => {
                    cfg.segments = value.parse().map_err(|_| err(format!("bad C '{value}'")))?;
                    saw_c = true;
                }
                "seed" => cfg.seed = value.parse().map_err(|_| err(format!("bad seed '{value}'")))?,
                "noise" => cfg.noise = value.parse().map_err(|_| err(format!("bad noise '{value}'")))?,
                "normalization" => {
                    cfg.normalization = if value.is_empty() {
                        None
                    } else {
                        Some(value.parse().map_err(|_| err(format!("bad normalization '{value}'")))?)
                    }
                }
                "boundaries" => cfg.boundaries = parse_list(value).map_err(&err)?,
                "means" => cfg.means = parse_list(value).map_err(&err)?,
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }
        if !(saw_kind && saw_t && saw_c) {
            return Err(Error::Parse { line: 0, message: "kind, T and C are required".into() });
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_list<T: FromStr>(value: &str) -> std::result::Result<Option<Vec<T>>, String> {
    if value.is_empty() {
        return Ok(None);
    }
    value
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| format!("bad list entry '{s}'")))
        .collect::<std::result::Result<Vec<T>, String>>()
        .map(Some)
}

/// The dynamic comparator's segmentation: change points `T_c` with
/// `T_C = T`, and the generating optimum of each segment.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentSchedule {
    change_points: Vec<u64>,
    optima: Vec<Belief>,
}

impl SegmentSchedule {
    pub fn new(change_points: Vec<u64>, optima: Vec<Belief>) -> Result<Self> {
        if change_points.is_empty() || change_points.len() != optima.len() {
            return Err(invalid("schedule needs one optimum per segment"));
        }
        if change_points[0] == 0 || change_points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("change points must be strictly increasing positive integers"));
        }
        Ok(SegmentSchedule { change_points, optima })
    }

    /// A single segment covering `1..=horizon`.
    pub fn single(horizon: u64, optimum: Belief) -> Result<Self> {
        Self::new(vec![horizon], vec![optimum])
    }

    pub fn change_points(&self) -> &[u64] {
        &self.change_points
    }

    pub fn segment_lengths(&self) -> Vec<u64> {
        let mut prev = 0;
        self.change_points
            .iter()
            .map(|&c| {
                let len = c - prev;
                prev = c;
                len
            })
            .collect()
    }

    pub fn segment_count(&self) -> u64 {
        self.change_points.len() as u64
    }

    pub fn optima(&self) -> &[Belief] {
        &self.optima
    }

    pub fn horizon(&self) -> u64 {
        *self.change_points.last().unwrap()
    }

    /// Zero-based index ranges `[start, end)` of each segment.
    pub fn ranges(&self) -> Vec<(usize, usize)> {
        let mut prev = 0usize;
        self.change_points
            .iter()
            .map(|&c| {
                let r = (prev, c as usize);
                prev = c as usize;
                r
            })
            .collect()
    }
}

/// The losses `l_1..l_T` of one environment realization.
#[derive(Debug, Clone, PartialEq)]
pub struct LossSequence {
    losses: Vec<LossFunction>,
    schedule: SegmentSchedule,
    domain: Domain,
    clamps: u64,
}

impl LossSequence {
    pub fn new(losses: Vec<LossFunction>, schedule: SegmentSchedule, domain: Domain) -> Result<Self> {
        if losses.is_empty() {
            return Err(invalid("loss sequence must be nonempty"));
        }
        if let Some((i, l)) = losses.iter().enumerate().find(|(i, l)| l.time_index() != *i as u64 + 1) {
            return Err(Error::Sequencing { expected: i as u64 + 1, got: l.time_index() });
        }
        if schedule.horizon() != losses.len() as u64 {
            return Err(Error::LengthMismatch {
                schedule: schedule.horizon(),
                sequence: losses.len() as u64,
            });
        }
        Ok(LossSequence { losses, schedule, domain, clamps: 0 })
    }

    pub fn losses(&self) -> &[LossFunction] {
        &self.losses
    }

    pub fn schedule(&self) -> &SegmentSchedule {
        &self.schedule
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.losses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.losses.is_empty()
    }

    pub fn horizon(&self) -> u64 {
        self.losses.len() as u64
    }

    /// Steps whose raw loss could exceed 1 somewhere on the domain and was clamped.
    pub fn clamps(&self) -> u64 {
        self.clamps
    }
}

pub fn generate(config: &EnvironmentConfig) -> Result<LossSequence> {
    config.validate()?;
    let horizon = config.horizon;
    let change_points = match &config.boundaries {
        Some(b) => b.iter().copied().chain(std::iter::once(horizon)).collect::<Vec<_>>(),
        None => sample_change_points(horizon, config.segments, config.seed),
    };
    let lengths: Vec<u64> = std::iter::once(0)
        .chain(change_points.iter().copied())
        .zip(&change_points)
        .map(|(prev, c)| c - prev)
        .collect();
    let domain = Domain::unit_interval();
    let mut rng = stream_rng(config.seed, ENVIRONMENT_STREAM);
    let mut losses = Vec::with_capacity(horizon as usize);
    let mut clamps = 0u64;
    let mut optima = Vec::with_capacity(lengths.len());

    match config.kind {
        EnvironmentKind::PiecewiseMeanSquared => {
            let means = match &config.means {
                Some(m) => m.clone(),
                None => sample_means(lengths.len(), &mut rng),
            };
            let spread = domain.diameter() + config.noise;
            let scale = config.normalization.unwrap_or(domain.dim() as f64 * spread * spread);
            let mut t = 1u64;
            for (mean, len) in means.iter().zip(&lengths) {
                optima.push(Belief::scalar(*mean));
                for _ in 0..*len {
                    let target = if config.noise > 0.0 {
                        mean + config.noise * rng.gen_range(-1.0..=1.0)
                    } else {
                        *mean
                    };
                    let worst = (target - domain.lo()[0]).powi(2).max((domain.hi()[0] - target).powi(2));
                    if worst > scale {
                        clamps += 1;
                    }
                    losses.push(LossFunction::squared(t, vec![target], scale)?);
                    t += 1;
                }
            }
        }
        EnvironmentKind::PiecewiseExpertLinear => {
            let knots = grid_axis(0.0, 1.0, EXPERT_KNOTS);
            let normalizer = config.normalization.unwrap_or(1.0);
            let mut prev: Option<usize> = None;
            let mut t = 1u64;
            for len in &lengths {
                let best = loop {
                    let k = rng.gen_range(0..EXPERT_KNOTS);
                    if Some(k) != prev {
                        break k;
                    }
                };
                prev = Some(best);
                optima.push(Belief::scalar(knots[best]));
                for _ in 0..*len {
                    let values = (0..EXPERT_KNOTS)
                        .map(|k| {
                            let base = if k == best { BEST_EXPERT_LOSS } else { OTHER_EXPERT_LOSS };
                            let noisy = if config.noise > 0.0 {
                                base + config.noise * rng.gen_range(-1.0..=1.0)
                            } else {
                                base
                            };
                            let v = noisy / normalizer;
                            if !(0.0..=1.0).contains(&v) {
                                clamps += 1;
                            }
                            v.clamp(0.0, 1.0)
                        })
                        .collect();
                    losses.push(LossFunction::tabulated(t, 0.0, 1.0, values)?);
                    t += 1;
                }
            }
        }
        EnvironmentKind::Zero => {
            for _ in &lengths {
                optima.push(domain.midpoint());
            }
            losses.extend((1..=horizon).map(|t| LossFunction::constant(t, 0.0, 1)));
        }
    }
    if clamps > 0 {
        log::info!("environment clamped {clamps} losses into [0, 1]");
    }
    let schedule = SegmentSchedule::new(change_points, optima)?;
    let mut seq = LossSequence::new(losses, schedule, domain)?;
    seq.clamps = clamps;
    Ok(seq)
}

/// Uniform `(C-1)`-subset of `{1..T-1}` as interior change points, plus `T`.
fn sample_change_points(horizon: u64, segments: u64, seed: u64) -> Vec<u64> {
    let mut rng = stream_rng(seed, BOUNDARY_STREAM);
    let mut interior: Vec<u64> = if segments > 1 {
        index::sample(&mut rng, (horizon - 1) as usize, (segments - 1) as usize)
            .into_iter()
            .map(|i| i as u64 + 1)
            .collect()
    } else {
        Vec::new()
    };
    interior.sort_unstable();
    interior.push(horizon);
    interior
}

/// Segment means on the default comparator grid, consecutive ones at least
/// `MIN_MEAN_JUMP` apart.
fn sample_means(count: usize, rng: &mut impl Rng) -> Vec<f64> {
    let last = (DEFAULT_GRID_RESOLUTION - 1) as f64;
    let mut means: Vec<f64> = Vec::with_capacity(count);
    for _ in 0..count {
        let m = loop {
            let m = rng.gen_range(0..DEFAULT_GRID_RESOLUTION) as f64 / last;
            match means.last() {
                Some(p) if (m - p).abs() < MIN_MEAN_JUMP => continue,
                _ => break m,
            }
        };
        means.push(m);
    }
    means
}

/// Index into `grid` minimizing the summed loss over `losses`, with ties
/// going to the earliest grid point, and that minimum.
fn grid_argmin(losses: &[LossFunction], grid: &[Belief]) -> (usize, f64) {
    let mut best = (0usize, f64::INFINITY);
    for (i, point) in grid.iter().enumerate() {
        let total: f64 = losses.iter().map(|l| l.evaluate(point)).sum();
        if total < best.1 {
            best = (i, total);
        }
    }
    best
}

/// Best fixed belief in hindsight over a grid search, and its cumulative loss.
pub fn static_comparator(seq: &LossSequence, grid_resolution: usize) -> (Belief, f64) {
    let grid = seq.domain.grid(grid_resolution);
    let (i, total) = grid_argmin(&seq.losses, &grid);
    (grid[i].clone(), total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicComparator {
    /// Per-segment grid optima.
    pub optima: Vec<Belief>,
    /// Comparator loss at each step.
    pub per_step: Vec<f64>,
    pub cumulative: f64,
}

/// Best piecewise-constant belief sequence for the given segmentation.
pub fn dynamic_comparator(
    seq: &LossSequence,
    schedule: &SegmentSchedule,
    grid_resolution: usize,
) -> Result<DynamicComparator> {
    if schedule.horizon() != seq.horizon() {
        return Err(Error::LengthMismatch { schedule: schedule.horizon(), sequence: seq.horizon() });
    }
    let grid = seq.domain.grid(grid_resolution);
    let mut optima = Vec::with_capacity(schedule.change_points.len());
    let mut per_step = Vec::with_capacity(seq.len());
    for (start, end) in schedule.ranges() {
        let slice = &seq.losses[start..end];
        let (i, _) = grid_argmin(slice, &grid);
        per_step.extend(slice.iter().map(|l| l.evaluate(&grid[i])));
        optima.push(grid[i].clone());
    }
    let cumulative = per_step.iter().sum();
    Ok(DynamicComparator { optima, per_step, cumulative })
}
