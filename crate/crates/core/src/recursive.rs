//! Recursive experts.
//!
//! A node of horizon `tau` mixes two experts with Hedge at rate
//! `sqrt(1 / tau)`: the base learner run for all `tau` steps, and a child
//! node covering the first half followed by a fresh child covering the
//! second half. The recursion bottoms out at `tau = 1`, where the node is
//! the bare base learner. A run of horizon `T` therefore keeps
//! `floor(log2 T) + 1` base learners alive and performs `T (log2 T + 1)`
//! base updates when `T` is a power of two.
//!
//! Each node reports the expected loss of its hierarchical draw,
//! `p0 l(x0) + p1 E[l(x1)]`, computed with the weights that generated the
//! draw, and the parent uses that expectation as the child's loss.

use rand::{Rng, RngCore};

use crate::belief::Belief;
use crate::error::{invalid, Error, Result};
use crate::forecaster::Forecaster;
use crate::learner::{check_time, Learner};
use crate::loss::LossFunction;
use crate::mixture::WeightVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChildPhase {
    FirstHalf,
    SecondHalf,
}

/// A child replacement: `depth` of the node that rolled over, and the
/// global time of the step after which it happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rollover {
    pub depth: u32,
    pub time: u64,
}

#[derive(Debug, Clone)]
pub struct RecursiveNode<L> {
    horizon: u64,
    clock: u64,
    origin: u64,
    depth: u32,
    weights: WeightVector,
    base: L,
    prototype: L,
    child: Option<Box<RecursiveNode<L>>>,
    phase: ChildPhase,
    retired_updates: u64,
}

/// Build the recursive mixture for horizon `T >= 1`.
pub fn build<L: Learner>(prototype: &L, horizon: u64) -> Result<RecursiveNode<L>> {
    if horizon == 0 {
        return Err(invalid("recursive experts need a positive horizon"));
    }
    let mut fresh = prototype.clone();
    fresh.reset();
    Ok(RecursiveNode::new(fresh, horizon, 0, 0))
}

impl<L: Learner> RecursiveNode<L> {
    fn new(prototype: L, horizon: u64, origin: u64, depth: u32) -> Self {
        let eta = (1.0 / horizon as f64).sqrt();
        let (weights, child) = if horizon == 1 {
            (WeightVector::uniform(1, eta), None)
        } else {
            let child = RecursiveNode::new(prototype.clone(), horizon / 2, origin, depth + 1);
            (WeightVector::uniform(2, eta), Some(Box::new(child)))
        };
        RecursiveNode {
            horizon,
            clock: 0,
            origin,
            depth,
            weights,
            base: prototype.clone(),
            prototype,
            child,
            phase: ChildPhase::FirstHalf,
            retired_updates: 0,
        }
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn local_clock(&self) -> u64 {
        self.clock
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn eta(&self) -> f64 {
        self.weights.eta()
    }

    /// `(p0, p1)` over base and child; a leaf reports `(1, 0)`.
    pub fn weights(&self) -> (f64, f64) {
        let w = self.weights.weights();
        (w[0], w.get(1).copied().unwrap_or(0.0))
    }

    pub fn base(&self) -> &L {
        &self.base
    }

    pub fn child(&self) -> Option<&RecursiveNode<L>> {
        self.child.as_deref()
    }

    pub fn child_phase(&self) -> ChildPhase {
        self.phase
    }

    /// The active chain of nodes from this one down to its current leaf.
    pub fn chain(&self) -> Vec<&RecursiveNode<L>> {
        let mut out = vec![self];
        let mut node = self;
        while let Some(c) = node.child.as_deref() {
            out.push(c);
            node = c;
        }
        out
    }

    pub fn active_learner_count(&self) -> usize {
        1 + self.child.as_ref().map_or(0, |c| c.active_learner_count())
    }

    pub fn node_step(&mut self, loss: &LossFunction) -> Result<f64> {
        self.step_inner(loss, None)
    }

    /// Like [`node_step`](Self::node_step), recording child rollovers.
    pub fn step_traced(&mut self, loss: &LossFunction, log: &mut Vec<Rollover>) -> Result<f64> {
        self.step_inner(loss, Some(log))
    }

    fn step_inner(&mut self, loss: &LossFunction, mut log: Option<&mut Vec<Rollover>>) -> Result<f64> {
        if self.clock >= self.horizon {
            return Err(Error::HorizonExhausted { horizon: self.horizon });
        }
        check_time(self.clock + 1, loss)?;
        let base_loss = self.base.step(loss)?;
        let expected = match self.child.as_deref_mut() {
            None => base_loss,
            Some(child) => {
                let local = loss.with_time(child.clock + 1);
                let child_loss = child.step_inner(&local, log.as_deref_mut())?.clamp(0.0, 1.0);
                let pair = [base_loss, child_loss];
                let expected = self.weights.expectation(&pair);
                self.weights.ew_update(&pair)?;
                expected
            }
        };
        self.clock += 1;
        if self.phase == ChildPhase::FirstHalf && self.child.is_some() && self.clock == self.horizon / 2 {
            self.child_rollover()?;
            if let Some(log) = log {
                log.push(Rollover { depth: self.depth, time: self.origin + self.clock });
            }
        }
        Ok(expected.clamp(0.0, 1.0))
    }

    /// Replace the first-half child with a fresh node for the second half.
    /// The node's own weights carry over.
    pub fn child_rollover(&mut self) -> Result<()> {
        let half = self.horizon / 2;
        if self.child.is_none() || self.phase != ChildPhase::FirstHalf || self.clock != half {
            return Err(invalid(format!(
                "rollover only happens once, at local clock {half} (clock is {})",
                self.clock
            )));
        }
        let old = self.child.take().expect("checked above");
        self.retired_updates += old.base_updates_total();
        let fresh = RecursiveNode::new(
            self.prototype.clone(),
            self.horizon - half,
            self.origin + half,
            self.depth + 1,
        );
        self.child = Some(Box::new(fresh));
        self.phase = ChildPhase::SecondHalf;
        Ok(())
    }

    /// Expected loss of the hierarchical draw under `loss`, without stepping.
    pub fn node_expected_loss(&self, loss: &LossFunction) -> f64 {
        let base = self.base.expected_loss(loss);
        match self.child.as_deref() {
            None => base,
            Some(child) => self.weights.expectation(&[base, child.node_expected_loss(loss)]),
        }
    }

    /// Draw the realized belief: the base with probability `p0`, otherwise
    /// recurse into the child.
    pub fn node_sample(&self, rng: &mut dyn RngCore) -> Belief {
        match self.child.as_deref() {
            Some(child) => {
                let u: f64 = rng.gen();
                if u < self.weights.weights()[0] {
                    self.base.sample(rng)
                } else {
                    child.node_sample(rng)
                }
            }
            None => self.base.sample(rng),
        }
    }

    fn base_updates_total(&self) -> u64 {
        self.clock + self.retired_updates + self.child.as_ref().map_or(0, |c| c.base_updates_total())
    }
}

impl<L: Learner> Forecaster for RecursiveNode<L> {
    fn horizon(&self) -> Option<u64> {
        Some(self.horizon)
    }

    fn clock(&self) -> u64 {
        self.clock
    }

    fn expected_loss(&self, loss: &LossFunction) -> f64 {
        self.node_expected_loss(loss)
    }

    fn step(&mut self, loss: &LossFunction) -> Result<f64> {
        self.node_step(loss)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Belief {
        self.node_sample(rng)
    }

    fn active_learners(&self) -> usize {
        self.active_learner_count()
    }

    fn base_updates(&self) -> u64 {
        self.base_updates_total()
    }

    fn weight_simplices(&self) -> Vec<Vec<f64>> {
        self.chain().iter().map(|n| n.weights.weights().to_vec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::Domain;
    use crate::learner::OnlineGradientDescent;
    use approx::assert_relative_eq;

    fn ogd() -> OnlineGradientDescent {
        OnlineGradientDescent::new(Domain::unit_interval(), 2.0).unwrap()
    }

    fn sq(t: u64, y: f64) -> LossFunction {
        LossFunction::squared(t, vec![y], 1.0).unwrap()
    }

    #[test]
    fn leaf_is_the_base_learner() {
        let mut leaf = build(&ogd(), 1).unwrap();
        let mut plain = ogd();
        assert_eq!(leaf.weights(), (1.0, 0.0));
        assert_eq!(leaf.active_learner_count(), 1);
        let l = sq(1, 0.1);
        assert_eq!(leaf.node_step(&l).unwrap(), plain.step(&l).unwrap());
        assert_eq!(leaf.node_step(&sq(2, 0.1)), Err(Error::HorizonExhausted { horizon: 1 }));
    }

    #[test]
    fn chain_structure() {
        let root = build(&ogd(), 8).unwrap();
        let horizons: Vec<u64> = root.chain().iter().map(|n| n.horizon()).collect();
        assert_eq!(horizons, vec![8, 4, 2, 1]);
        assert_eq!(root.active_learner_count(), 4);
        for k in 0..=14u32 {
            assert_eq!(build(&ogd(), 1 << k).unwrap().active_learner_count(), k as usize + 1);
        }
        assert!(build(&ogd(), 0).is_err());
    }

    #[test]
    fn rate_is_inverse_sqrt_horizon() {
        assert_relative_eq!(build(&ogd(), 2).unwrap().eta(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn two_step_hand_arithmetic() {
        // root base at 0 and child leaf at 1 under l(x) = x: losses (0, 1)
        let mut root = build(&ogd(), 2).unwrap();
        root.base = ogd().with_initial(Belief::scalar(0.0)).unwrap();
        root.child.as_mut().unwrap().base = ogd().with_initial(Belief::scalar(1.0)).unwrap();
        let loss = LossFunction::affine(1, 0.0, vec![1.0]).unwrap();
        let expected = root.node_step(&loss).unwrap();
        assert_relative_eq!(expected, 0.5, epsilon = 1e-15);
        let p0 = 1.0 / (1.0 + (-(0.5f64).sqrt()).exp());
        assert_relative_eq!(root.weights().0, p0, epsilon = 1e-15);
        assert_relative_eq!(root.weights().0, 0.6698, epsilon = 1e-4);
    }

    #[test]
    fn zero_losses_keep_weights() {
        let mut root = build(&ogd(), 16).unwrap();
        for t in 1..=16 {
            root.node_step(&LossFunction::constant(t, 0.0, 1)).unwrap();
            for n in root.chain() {
                if n.child().is_some() {
                    assert_eq!(n.weights(), (0.5, 0.5));
                }
            }
        }
    }

    #[test]
    fn rollover_schedule_for_eight() {
        let mut root = build(&ogd(), 8).unwrap();
        let mut log = vec![];
        for t in 1..=8 {
            root.step_traced(&sq(t, 0.3), &mut log).unwrap();
        }
        let at = |d: u32| log.iter().filter(|r| r.depth == d).map(|r| r.time).collect::<Vec<_>>();
        assert_eq!(at(0), vec![4]);
        assert_eq!(at(1), vec![2, 6]);
        assert_eq!(at(2), vec![1, 3, 5, 7]);
        assert_eq!(at(3), Vec::<u64>::new());
    }

    #[test]
    fn rollover_once_for_four() {
        let mut root = build(&ogd(), 4).unwrap();
        root.node_step(&sq(1, 0.2)).unwrap();
        assert_eq!(root.child_phase(), ChildPhase::FirstHalf);
        assert!(root.child_rollover().is_err());
        root.node_step(&sq(2, 0.2)).unwrap();
        assert_eq!(root.child_phase(), ChildPhase::SecondHalf);
        let child = root.child().unwrap();
        assert_eq!(child.weights(), (0.5, 0.5));
        assert_eq!(child.local_clock(), 0);
        assert_eq!(child.base().steps(), 0);
        assert_ne!(root.weights(), (0.5, 0.5));
    }

    #[test]
    fn point_mass_sampling_returns_root_base() {
        let mut root = build(&ogd(), 4).unwrap();
        root.weights = WeightVector::point_mass(2, 0, root.eta());
        let mut rng = crate::rng::stream_rng(1, 0);
        for _ in 0..100 {
            assert_eq!(root.node_sample(&mut rng), root.base().predict());
        }
    }

    #[test]
    fn uneven_horizon_splits_floor_then_ceil() {
        let mut root = build(&ogd(), 5).unwrap();
        assert_eq!(root.child().unwrap().horizon(), 2);
        root.node_step(&sq(1, 0.4)).unwrap();
        root.node_step(&sq(2, 0.4)).unwrap();
        assert_eq!(root.child().unwrap().horizon(), 3);
        for t in 3..=5 {
            root.node_step(&sq(t, 0.4)).unwrap();
        }
        assert!(root.node_step(&sq(6, 0.4)).is_err());
    }

    #[test]
    fn update_count_is_t_log_t() {
        for k in 0..=8u32 {
            let horizon = 1u64 << k;
            let mut root = build(&ogd(), horizon).unwrap();
            for t in 1..=horizon {
                root.node_step(&sq(t, 0.6)).unwrap();
                assert_eq!(root.active_learner_count(), k as usize + 1);
            }
            assert_eq!(root.base_updates(), horizon * (k as u64 + 1));
        }
    }
}
