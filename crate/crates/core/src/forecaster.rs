//! The uniform interface the evaluation harness drives.
//!
//! Base learners, wrappers and mixtures all report the expected loss of
//! their (possibly randomized) play, so they compose and are compared on
//! the same footing.

use rand::RngCore;

use crate::belief::Belief;
use crate::error::Result;
use crate::learner::Learner;
use crate::loss::LossFunction;

pub trait Forecaster: Send {
    /// Known horizon, if the algorithm is tuned for one.
    fn horizon(&self) -> Option<u64>;

    /// Number of completed steps.
    fn clock(&self) -> u64;

    /// Expected loss of the current randomized play under `loss`.
    fn expected_loss(&self, loss: &LossFunction) -> f64;

    /// Play one round. Returns the expected loss computed with the
    /// distribution that generated this round's play.
    fn step(&mut self, loss: &LossFunction) -> Result<f64>;

    /// Draw the realized belief for the current round.
    fn sample(&self, rng: &mut dyn RngCore) -> Belief;

    /// Base learners currently instantiated.
    fn active_learners(&self) -> usize;

    /// Total base-learner updates performed so far.
    fn base_updates(&self) -> u64;

    /// Number of first-layer experts; equals `active_learners` unless the
    /// algorithm says otherwise.
    fn experts(&self) -> usize {
        self.active_learners()
    }

    /// Every mixing distribution the algorithm currently maintains.
    fn weight_simplices(&self) -> Vec<Vec<f64>> {
        Vec::new()
    }
}

/// A base learner run on its own, with no resets or mixing.
#[derive(Debug, Clone)]
pub struct Standalone<L> {
    learner: L,
    clock: u64,
}

impl<L: Learner> Standalone<L> {
    pub fn new(learner: L) -> Self {
        Standalone { learner, clock: 0 }
    }

    pub fn learner(&self) -> &L {
        &self.learner
    }
}

impl<L: Learner> Forecaster for Standalone<L> {
    fn horizon(&self) -> Option<u64> {
        None
    }

    fn clock(&self) -> u64 {
        self.clock
    }

    fn expected_loss(&self, loss: &LossFunction) -> f64 {
        self.learner.expected_loss(loss)
    }

    fn step(&mut self, loss: &LossFunction) -> Result<f64> {
        let l = self.learner.step(loss)?;
        self.clock += 1;
        Ok(l)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Belief {
        self.learner.sample(rng)
    }

    fn active_learners(&self) -> usize {
        1
    }

    fn base_updates(&self) -> u64 {
        self.clock
    }
}

impl<F: Forecaster + ?Sized> Forecaster for Box<F> {
    fn horizon(&self) -> Option<u64> {
        (**self).horizon()
    }

    fn clock(&self) -> u64 {
        (**self).clock()
    }

    fn expected_loss(&self, loss: &LossFunction) -> f64 {
        (**self).expected_loss(loss)
    }

    fn step(&mut self, loss: &LossFunction) -> Result<f64> {
        (**self).step(loss)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Belief {
        (**self).sample(rng)
    }

    fn active_learners(&self) -> usize {
        (**self).active_learners()
    }

    fn base_updates(&self) -> u64 {
        (**self).base_updates()
    }

    fn experts(&self) -> usize {
        (**self).experts()
    }

    fn weight_simplices(&self) -> Vec<Vec<f64>> {
        (**self).weight_simplices()
    }
}
