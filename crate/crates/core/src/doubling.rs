//! Unknown horizons via the doubling trick: block `i` covers global times
//! `2^i ..= 2^(i+1) - 1` and runs a fresh algorithm tuned for horizon `2^i`.

use rand::RngCore;

use crate::belief::Belief;
use crate::error::Result;
use crate::forecaster::Forecaster;
use crate::learner::check_time;
use crate::loss::LossFunction;

/// Block index `i = floor(log2 t)` and one-based offset `t - 2^i + 1`.
pub fn block_of(t: u64) -> (u32, u64) {
    assert!(t >= 1, "time starts at 1");
    let i = 63 - t.leading_zeros();
    (i, t - (1u64 << i) + 1)
}

/// Anytime wrapper around a known-horizon algorithm factory.
pub struct Doubling<A, F> {
    factory: F,
    current: A,
    clock: u64,
    retired_updates: u64,
    horizons_used: Vec<u64>,
    block_losses: Vec<f64>,
}

impl<A, F> Doubling<A, F>
where
    A: Forecaster,
    F: Fn(u64) -> Result<A> + Send,
{
    pub fn wrap(factory: F) -> Result<Self> {
        let current = factory(1)?;
        Ok(Doubling {
            factory,
            current,
            clock: 0,
            retired_updates: 0,
            horizons_used: Vec::new(),
            block_losses: Vec::new(),
        })
    }

    /// Horizons of the blocks that have taken at least one step.
    pub fn horizons_used(&self) -> &[u64] {
        &self.horizons_used
    }

    /// Cumulative expected loss within each block.
    pub fn block_losses(&self) -> &[f64] {
        &self.block_losses
    }

    pub fn current(&self) -> &A {
        &self.current
    }
}

impl<A, F> Forecaster for Doubling<A, F>
where
    A: Forecaster,
    F: Fn(u64) -> Result<A> + Send,
{
    fn horizon(&self) -> Option<u64> {
        None
    }

    fn clock(&self) -> u64 {
        self.clock
    }

    fn expected_loss(&self, loss: &LossFunction) -> f64 {
        self.current.expected_loss(loss)
    }

    fn step(&mut self, loss: &LossFunction) -> Result<f64> {
        check_time(self.clock + 1, loss)?;
        let t = self.clock + 1;
        let (block, offset) = block_of(t);
        if offset == 1 {
            self.horizons_used.push(1 << block);
            self.block_losses.push(0.0);
        }
        let l = self.current.step(&loss.with_time(offset))?;
        *self.block_losses.last_mut().expect("block opened above") += l;
        self.clock = t;
        if offset == 1u64 << block {
            let next = (self.factory)(1 << (block + 1))?;
            self.retired_updates += self.current.base_updates();
            self.current = next;
        }
        Ok(l)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Belief {
        self.current.sample(rng)
    }

    fn active_learners(&self) -> usize {
        self.current.active_learners()
    }

    fn base_updates(&self) -> u64 {
        self.retired_updates + self.current.base_updates()
    }

    fn experts(&self) -> usize {
        self.current.experts()
    }

    fn weight_simplices(&self) -> Vec<Vec<f64>> {
        self.current.weight_simplices()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::Domain;
    use crate::learner::OnlineGradientDescent;
    use crate::recursive::{build, RecursiveNode};

    fn factory(h: u64) -> Result<RecursiveNode<OnlineGradientDescent>> {
        build(&OnlineGradientDescent::new(Domain::unit_interval(), 2.0)?, h)
    }

    #[test]
    fn block_examples() {
        assert_eq!(block_of(1), (0, 1));
        assert_eq!(block_of(7), (2, 4));
        for k in 0..=20 {
            assert_eq!(block_of(1 << k), (k, 1));
        }
    }

    #[test]
    fn horizons_for_ten_steps() {
        let mut d = Doubling::wrap(factory).unwrap();
        for t in 1..=10 {
            d.step(&LossFunction::squared(t, vec![0.3], 1.0).unwrap()).unwrap();
        }
        assert_eq!(d.horizons_used(), &[1, 2, 4, 8]);
        assert_eq!(d.current().local_clock(), 3);
    }

    #[test]
    fn single_step_uses_unit_horizon() {
        let mut d = Doubling::wrap(factory).unwrap();
        d.step(&LossFunction::squared(1, vec![0.3], 1.0).unwrap()).unwrap();
        assert_eq!(d.horizons_used(), &[1]);
    }

    #[test]
    fn cumulative_is_sum_of_blocks() {
        let mut d = Doubling::wrap(factory).unwrap();
        let mut total = 0.0;
        for t in 1..=37 {
            total += d.step(&LossFunction::squared(t, vec![(t as f64 * 0.1).fract()], 1.0).unwrap()).unwrap();
        }
        let blocks: f64 = d.block_losses().iter().sum();
        assert!((total - blocks).abs() < 1e-12);
    }
}
