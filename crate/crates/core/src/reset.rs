//! Periodic restarts of a base learner.

use rand::RngCore;

use crate::belief::Belief;
use crate::error::{invalid, Result};
use crate::forecaster::Forecaster;
use crate::learner::{check_time, Learner};
use crate::loss::LossFunction;

/// Restart after observing the loss at every time `t` with
/// `t mod period == phase` (`phase == 0` means multiples of `period`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResetPolicy {
    period: u64,
    phase: u64,
}

impl ResetPolicy {
    pub fn new(period: u64, phase: u64) -> Result<Self> {
        if period < 2 {
            return Err(invalid(format!("reset period must be at least 2, got {period}")));
        }
        if phase >= period {
            return Err(invalid(format!("phase {phase} must be below the period {period}")));
        }
        Ok(ResetPolicy { period, phase })
    }

    pub fn periodic(period: u64) -> Result<Self> {
        Self::new(period, 0)
    }

    /// Period `2^i` with first reset at `2^(i-1)`, for `i >= 1`.
    pub fn phased(i: u32) -> Self {
        assert!((1..64).contains(&i), "phased policy index out of range");
        ResetPolicy { period: 1 << i, phase: 1 << (i - 1) }
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn phase(&self) -> u64 {
        self.phase
    }

    pub fn should_reset(&self, t: u64) -> bool {
        t % self.period == self.phase
    }

    /// Reset times in `1..=horizon`.
    pub fn reset_times(&self, horizon: u64) -> impl Iterator<Item = u64> + '_ {
        let first = if self.phase == 0 { self.period } else { self.phase };
        (first..=horizon).step_by(self.period as usize)
    }
}

pub fn should_reset(policy: &ResetPolicy, t: u64) -> bool {
    policy.should_reset(t)
}

/// Reset period minimizing the periodic-restart regret bound,
/// `round((alpha T / C)^(1 / (1 + alpha)))` clamped to `[2, T]`.
pub fn optimal_period(horizon: u64, segments: u64, alpha: f64) -> u64 {
    let raw = (alpha * horizon as f64 / segments.max(1) as f64).powf(1.0 / (1.0 + alpha));
    (raw.round() as u64).clamp(2, horizon.max(2))
}

/// A base learner restarted according to a [`ResetPolicy`].
///
/// The loss at time `t` is incurred by the current belief and observed by
/// the inner learner before the policy is consulted, so a reset at `t`
/// takes effect from `t + 1`.
#[derive(Debug, Clone)]
pub struct Resetting<L> {
    inner: L,
    policy: ResetPolicy,
    clock: u64,
    last_run_length: u64,
}

impl<L: Learner> Resetting<L> {
    pub fn new(mut inner: L, policy: ResetPolicy) -> Self {
        inner.reset();
        Resetting { inner, policy, clock: 0, last_run_length: 0 }
    }

    pub fn inner(&self) -> &L {
        &self.inner
    }

    pub fn policy(&self) -> ResetPolicy {
        self.policy
    }

    pub fn predict(&self) -> Belief {
        self.inner.predict()
    }

    /// Steps since the last reset.
    pub fn inner_steps(&self) -> u64 {
        self.inner.steps()
    }

    /// Inner step counter right after the most recent step, before any
    /// reset triggered by that step.
    pub fn last_run_length(&self) -> u64 {
        self.last_run_length
    }

    pub fn step_with_reset(&mut self, loss: &LossFunction) -> Result<f64> {
        check_time(self.clock + 1, loss)?;
        let local = loss.with_time(self.inner.steps() + 1);
        let incurred = self.inner.step(&local)?;
        self.clock += 1;
        self.last_run_length = self.inner.steps();
        if self.policy.should_reset(self.clock) {
            self.inner.reset();
        }
        Ok(incurred)
    }
}

impl<L: Learner> Forecaster for Resetting<L> {
    fn horizon(&self) -> Option<u64> {
        None
    }

    fn clock(&self) -> u64 {
        self.clock
    }

    fn expected_loss(&self, loss: &LossFunction) -> f64 {
        self.inner.expected_loss(loss)
    }

    fn step(&mut self, loss: &LossFunction) -> Result<f64> {
        self.step_with_reset(loss)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Belief {
        self.inner.sample(rng)
    }

    fn active_learners(&self) -> usize {
        1
    }

    fn base_updates(&self) -> u64 {
        self.clock
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::Domain;
    use crate::error::Error;
    use crate::learner::OnlineGradientDescent;

    fn ogd() -> OnlineGradientDescent {
        OnlineGradientDescent::new(Domain::unit_interval(), 2.0).unwrap()
    }

    fn sq(t: u64, y: f64) -> LossFunction {
        LossFunction::squared(t, vec![y], 1.0).unwrap()
    }

    #[test]
    fn divisibility() {
        let p = ResetPolicy::periodic(4).unwrap();
        assert!(p.should_reset(8));
        assert!(!ResetPolicy::periodic(2).unwrap().should_reset(3));
    }

    #[test]
    fn phased_reset_times() {
        let p = ResetPolicy::new(4, 2).unwrap();
        let times: Vec<u64> = (1..=12).filter(|&t| p.should_reset(t)).collect();
        assert_eq!(times, vec![2, 6, 10]);
        assert_eq!(p.reset_times(12).collect::<Vec<_>>(), times);
        assert_eq!(ResetPolicy::phased(2), p);
    }

    #[test]
    fn trivial_period_rejected() {
        assert!(ResetPolicy::new(1, 0).is_err());
        assert!(ResetPolicy::new(4, 4).is_err());
    }

    #[test]
    fn inner_counter_under_phased_policy() {
        let mut r = Resetting::new(ogd(), ResetPolicy::new(4, 2).unwrap());
        let mut counts = vec![];
        for t in 1..=8 {
            r.step(&sq(t, 0.3)).unwrap();
            counts.push(r.last_run_length());
        }
        assert_eq!(counts, vec![1, 2, 1, 2, 3, 4, 1, 2]);
    }

    #[test]
    fn period_two_sees_fresh_pairs() {
        let mut r = Resetting::new(ogd(), ResetPolicy::periodic(2).unwrap());
        let fresh = ogd().predict();
        for t in 1..=10 {
            if t % 2 == 1 {
                assert_eq!(r.predict(), fresh);
            }
            r.step(&sq(t, 0.9)).unwrap();
        }
    }

    #[test]
    fn long_period_matches_unwrapped() {
        let horizon = 50;
        let mut wrapped = Resetting::new(ogd(), ResetPolicy::periodic(horizon + 1).unwrap());
        let mut plain = ogd();
        for t in 1..=horizon {
            assert_eq!(wrapped.predict(), plain.predict());
            let y = (t as f64 * 0.37).fract();
            assert_eq!(wrapped.step(&sq(t, y)).unwrap(), plain.step(&sq(t, y)).unwrap());
        }
    }

    #[test]
    fn sequencing_uses_global_clock() {
        let mut r = Resetting::new(ogd(), ResetPolicy::periodic(2).unwrap());
        r.step(&sq(1, 0.2)).unwrap();
        r.step(&sq(2, 0.2)).unwrap();
        assert_eq!(r.step(&sq(1, 0.2)), Err(Error::Sequencing { expected: 3, got: 1 }));
    }

    #[test]
    fn optimal_period_values() {
        // (0.5 * 1024 / 4)^(2/3) = 128^(2/3) = 25.398...
        assert_eq!(optimal_period(1024, 4, 0.5), 25);
        assert_eq!(optimal_period(2, 2, 0.5), 2);
        assert_eq!(optimal_period(1000, 1000, 0.5), 2);
    }
}
