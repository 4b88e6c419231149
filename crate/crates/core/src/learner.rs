//! The base-learner contract and the concrete static-environment learners.
//!
//! A base learner produces a belief, observes a loss, and updates. Its
//! static regret is assumed to be at most `K * T^(1 - alpha)` with
//! `0 < alpha <= 0.5`; every meta-algorithm in this crate is generic over
//! this trait.

use rand::{Rng, RngCore};

use crate::belief::{Belief, Domain};
use crate::error::{invalid, Error, Result};
use crate::loss::LossFunction;

/// Static-regret characteristics of a base learner.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseLearnerSpec {
    pub name: String,
    /// Regret exponent parameter: static regret is `O(T^(1 - alpha))`.
    pub alpha: f64,
    /// Constant `K` in the static regret bound `K * T^(1 - alpha)`.
    pub regret_constant: f64,
    pub domain: Domain,
}

impl BaseLearnerSpec {
    pub fn new(name: &str, alpha: f64, regret_constant: f64, domain: Domain) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 0.5) {
            return Err(invalid(format!("alpha must lie in (0, 0.5], got {alpha}")));
        }
        if !(regret_constant > 0.0) {
            return Err(invalid("regret constant must be positive"));
        }
        Ok(BaseLearnerSpec { name: name.to_string(), alpha, regret_constant, domain })
    }

    pub fn belief_dimension(&self) -> usize {
        self.domain.dim()
    }
}

pub trait Learner: Clone + Send {
    fn spec(&self) -> &BaseLearnerSpec;

    /// Current belief. Never mutates.
    fn predict(&self) -> Belief;

    /// Steps taken since construction or the last reset.
    fn steps(&self) -> u64;

    /// Incur the loss of the current belief, then update on the feedback.
    /// `loss.time_index()` must equal `steps() + 1`.
    fn step(&mut self, loss: &LossFunction) -> Result<f64>;

    /// Return to the freshly constructed state.
    fn reset(&mut self);

    fn expected_loss(&self, loss: &LossFunction) -> f64 {
        loss.evaluate(&self.predict())
    }

    /// Realized belief; randomized learners draw here.
    fn sample(&self, _rng: &mut dyn RngCore) -> Belief {
        self.predict()
    }
}

pub(crate) fn check_time(expected: u64, loss: &LossFunction) -> Result<()> {
    if loss.time_index() != expected {
        return Err(Error::Sequencing { expected, got: loss.time_index() });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    Constant(f64),
    /// `eta_t = diameter / (gradient_bound * sqrt(t))`.
    InverseSqrt { diameter: f64, gradient_bound: f64 },
}

impl StepSize {
    pub fn at(&self, t: u64) -> f64 {
        match *self {
            StepSize::Constant(eta) => eta,
            StepSize::InverseSqrt { diameter, gradient_bound } => {
                diameter / (gradient_bound * (t as f64).sqrt())
            }
        }
    }
}

/// Projected online gradient descent on a box.
#[derive(Debug, Clone)]
pub struct OnlineGradientDescent {
    spec: BaseLearnerSpec,
    step_size: StepSize,
    initial: Belief,
    belief: Belief,
    t: u64,
}

impl OnlineGradientDescent {
    /// Starts at the box midpoint with `eta_t = D / (G sqrt(t))`, where `D` is
    /// the box diameter and `G` bounds the gradient norm. The regret constant
    /// defaults to `1.5 * D * G`.
    pub fn new(domain: Domain, gradient_bound: f64) -> Result<Self> {
        if !(gradient_bound > 0.0) {
            return Err(invalid("gradient bound must be positive"));
        }
        let diameter = domain.diameter();
        let initial = domain.midpoint();
        let spec = BaseLearnerSpec::new("ogd", 0.5, 1.5 * diameter * gradient_bound, domain)?;
        Ok(OnlineGradientDescent {
            spec,
            step_size: StepSize::InverseSqrt { diameter, gradient_bound },
            belief: initial.clone(),
            initial,
            t: 0,
        })
    }

    pub fn with_step_size(mut self, step_size: StepSize) -> Self {
        self.step_size = step_size;
        self
    }

    pub fn with_initial(mut self, initial: Belief) -> Result<Self> {
        if !self.spec.domain.contains(&initial) {
            return Err(invalid("initial belief outside the domain"));
        }
        self.belief = initial.clone();
        self.initial = initial;
        Ok(self)
    }
}

impl Learner for OnlineGradientDescent {
    fn spec(&self) -> &BaseLearnerSpec {
        &self.spec
    }

    fn predict(&self) -> Belief {
        self.belief.clone()
    }

    fn steps(&self) -> u64 {
        self.t
    }

    fn step(&mut self, loss: &LossFunction) -> Result<f64> {
        check_time(self.t + 1, loss)?;
        let incurred = loss.evaluate(&self.belief);
        let grad = loss.gradient(&self.belief).ok_or(Error::MissingGradient)?;
        self.t += 1;
        let eta = self.step_size.at(self.t);
        for (x, g) in self.belief.0.iter_mut().zip(&grad) {
            *x -= eta * g;
        }
        self.spec.domain.project(&mut self.belief);
        Ok(incurred)
    }

    fn reset(&mut self) {
        self.belief = self.initial.clone();
        self.t = 0;
    }
}

/// Follow-the-leader for squared losses: the running mean of the observed
/// minimizers, projected onto the domain.
#[derive(Debug, Clone)]
pub struct SampleMean {
    spec: BaseLearnerSpec,
    initial: Belief,
    sum: Vec<f64>,
    t: u64,
}

impl SampleMean {
    pub fn new(domain: Domain) -> Result<Self> {
        let initial = domain.midpoint();
        let sum = vec![0.0; domain.dim()];
        let spec = BaseLearnerSpec::new("sample-mean", 0.5, 1.5 * domain.diameter(), domain)?;
        Ok(SampleMean { spec, initial, sum, t: 0 })
    }
}

impl Learner for SampleMean {
    fn spec(&self) -> &BaseLearnerSpec {
        &self.spec
    }

    fn predict(&self) -> Belief {
        if self.t == 0 {
            return self.initial.clone();
        }
        let mut b = Belief(self.sum.iter().map(|s| s / self.t as f64).collect());
        self.spec.domain.project(&mut b);
        b
    }

    fn steps(&self) -> u64 {
        self.t
    }

    fn step(&mut self, loss: &LossFunction) -> Result<f64> {
        check_time(self.t + 1, loss)?;
        let incurred = loss.evaluate(&self.predict());
        let target = loss.minimizer().ok_or(Error::MissingMinimizer)?;
        for (s, y) in self.sum.iter_mut().zip(target) {
            *s += y;
        }
        self.t += 1;
        Ok(incurred)
    }

    fn reset(&mut self) {
        self.sum.iter_mut().for_each(|s| *s = 0.0);
        self.t = 0;
    }
}

/// Exponential weights over a fixed grid of candidate beliefs with the
/// anytime rate `eta_t = sqrt(8 ln K / t)`.
///
/// The incurred loss is the expectation under the grid distribution; the
/// deterministic belief it reports is the weighted mean of the grid.
#[derive(Debug, Clone)]
pub struct GridHedge {
    spec: BaseLearnerSpec,
    points: Vec<Belief>,
    cumulative: Vec<f64>,
    t: u64,
}

impl GridHedge {
    pub fn new(domain: Domain, resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(invalid("grid hedge needs at least two points per coordinate"));
        }
        let points = domain.grid(resolution);
        let ln_k = (points.len() as f64).ln();
        let constant = (2.0 * ln_k).sqrt() + (ln_k / 8.0).sqrt();
        let spec = BaseLearnerSpec::new("grid-hedge", 0.5, constant, domain)?;
        let cumulative = vec![0.0; points.len()];
        Ok(GridHedge { spec, points, cumulative, t: 0 })
    }

    pub fn points(&self) -> &[Belief] {
        &self.points
    }

    /// Current distribution over grid points.
    pub fn weights(&self) -> Vec<f64> {
        let eta = (8.0 * (self.points.len() as f64).ln() / (self.t + 1) as f64).sqrt();
        let best = self.cumulative.iter().cloned().fold(f64::INFINITY, f64::min);
        let raw: Vec<f64> = self.cumulative.iter().map(|l| (-eta * (l - best)).exp()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    }
}

impl Learner for GridHedge {
    fn spec(&self) -> &BaseLearnerSpec {
        &self.spec
    }

    fn predict(&self) -> Belief {
        let w = self.weights();
        let dim = self.spec.belief_dimension();
        let mut mean = vec![0.0; dim];
        for (p, b) in w.iter().zip(&self.points) {
            for (m, x) in mean.iter_mut().zip(&b.0) {
                *m += p * x;
            }
        }
        let mut b = Belief(mean);
        self.spec.domain.project(&mut b);
        b
    }

    fn steps(&self) -> u64 {
        self.t
    }

    fn step(&mut self, loss: &LossFunction) -> Result<f64> {
        check_time(self.t + 1, loss)?;
        let w = self.weights();
        let mut incurred = 0.0;
        for ((p, b), cum) in w.iter().zip(&self.points).zip(self.cumulative.iter_mut()) {
            let l = loss.evaluate(b);
            incurred += p * l;
            *cum += l;
        }
        self.t += 1;
        Ok(incurred.clamp(0.0, 1.0))
    }

    fn reset(&mut self) {
        self.cumulative.iter_mut().for_each(|c| *c = 0.0);
        self.t = 0;
    }

    fn expected_loss(&self, loss: &LossFunction) -> f64 {
        let w = self.weights();
        w.iter()
            .zip(&self.points)
            .map(|(p, b)| p * loss.evaluate(b))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Belief {
        let w = self.weights();
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (p, b) in w.iter().zip(&self.points) {
            acc += p;
            if u < acc {
                return b.clone();
            }
        }
        self.points[self.points.len() - 1].clone()
    }
}
