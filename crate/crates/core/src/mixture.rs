//! Exponential-weights merging of resetting learners.
//!
//! Three mixtures share the same building blocks:
//!
//! - [`ParallelMerge`]: Hedge over `N = ceil(log2 T)` learners restarted
//!   every `2^i` steps.
//! - [`SharedMixture`]: Hedge with probability sharing over learners with
//!   period `2^i` and first reset at `2^(i-1)`. At each step a fraction
//!   `sigma` of the post-update mass is routed to the unique expert whose
//!   schedule resets at `t + 1`.
//! - [`SecondLevelMixture`]: Hedge over `N` sharing mixtures tuned for
//!   switch budgets `2^i`. The inner mixtures differ only in `(sigma, eta)`
//!   and read one common expert pool.

use rand::{Rng, RngCore};

use crate::belief::Belief;
use crate::error::{invalid, Error, Result};
use crate::forecaster::Forecaster;
use crate::learner::{check_time, Learner};
use crate::loss::LossFunction;
use crate::reset::{ResetPolicy, Resetting};

/// Weights that fall below this after an update are raised to it.
pub const WEIGHT_FLOOR: f64 = 1e-300;

/// `ceil(log2 T)` for `T >= 1`.
pub fn ceil_log2(t: u64) -> u32 {
    assert!(t >= 1);
    64 - (t - 1).leading_zeros()
}

/// A distribution over experts together with its learning rate.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
    eta: f64,
    floored: u64,
}

impl WeightVector {
    pub fn uniform(n: usize, eta: f64) -> Self {
        assert!(n > 0, "weight vector needs at least one expert");
        WeightVector { weights: vec![1.0 / n as f64; n], eta, floored: 0 }
    }

    pub fn point_mass(n: usize, index: usize, eta: f64) -> Self {
        assert!(index < n);
        let mut weights = vec![0.0; n];
        weights[index] = 1.0;
        WeightVector { weights, eta, floored: 0 }
    }

    pub fn from_weights(weights: Vec<f64>, eta: f64) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if weights.is_empty() || weights.iter().any(|w| !(*w >= 0.0)) || (total - 1.0).abs() > 1e-9 {
            return Err(invalid("weights must be a probability vector"));
        }
        Ok(WeightVector { weights, eta, floored: 0 })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn set_eta(&mut self, eta: f64) {
        self.eta = eta;
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Times a weight was raised to [`WEIGHT_FLOOR`].
    pub fn floored(&self) -> u64 {
        self.floored
    }

    /// `sum_i p_i l_i`.
    pub fn expectation(&self, losses: &[f64]) -> f64 {
        self.weights.iter().zip(losses).map(|(p, l)| p * l).sum()
    }

    fn check_losses(&self, losses: &[f64]) -> Result<()> {
        if losses.len() != self.weights.len() {
            return Err(invalid(format!(
                "expected {} losses, got {}",
                self.weights.len(),
                losses.len()
            )));
        }
        if let Some(l) = losses.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(Error::UnboundedLoss { value: *l });
        }
        Ok(())
    }

    /// `p_i <- p_i exp(-eta l_i) / sum_j p_j exp(-eta l_j)`.
    pub fn ew_update(&mut self, losses: &[f64]) -> Result<()> {
        self.shared_update(losses, 0.0, None)
    }

    /// `p_i <- (1 - sigma) p_i exp(-eta l_i) + sigma g_i`, normalized, where
    /// `g_j = sum_i p_i exp(-eta l_i)` for `j = target` and zero otherwise.
    pub fn shared_update(&mut self, losses: &[f64], sigma: f64, target: Option<usize>) -> Result<()> {
        self.check_losses(losses)?;
        let decayed: Vec<f64> =
            self.weights.iter().zip(losses).map(|(p, l)| p * (-self.eta * l).exp()).collect();
        let mass: f64 = decayed.iter().sum();
        let mut next: Vec<f64> = decayed.iter().map(|d| (1.0 - sigma) * d).collect();
        if let Some(j) = target {
            next[j] += sigma * mass;
        }
        for (w, old) in next.iter_mut().zip(&self.weights) {
            if *old > 0.0 && *w < WEIGHT_FLOOR {
                *w = WEIGHT_FLOOR;
                self.floored += 1;
            }
        }
        let total: f64 = next.iter().sum();
        for w in next.iter_mut() {
            *w /= total;
        }
        self.weights = next;
        Ok(())
    }

    /// Draw an index with probability `p_i`.
    pub fn sample(&self, rng: &mut dyn RngCore) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, p) in self.weights.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        // rounding left u above the total: take the last expert with mass
        self.weights.iter().rposition(|p| *p > 0.0).unwrap_or(0)
    }
}

pub fn ew_update(w: &mut WeightVector, losses: &[f64]) -> Result<()> {
    w.ew_update(losses)
}

pub fn sample_expert(w: &WeightVector, rng: &mut dyn RngCore) -> usize {
    w.sample(rng)
}

/// One-based index `j` of the phased expert (period `2^j`, first reset
/// `2^(j-1)`) that resets at `t + 1`, i.e. `j = trailing_zeros(t + 1) + 1`,
/// or `None` when `j > n`.
pub fn reset_target(t: u64, n: u32) -> Option<u32> {
    let j = (t + 1).trailing_zeros() + 1;
    (j <= n).then_some(j)
}

/// Learners shared by the first- and second-level mixtures.
#[derive(Debug, Clone)]
struct ExpertPool<L> {
    experts: Vec<Resetting<L>>,
    updates: u64,
}

impl<L: Learner> ExpertPool<L> {
    fn new(prototype: &L, policies: impl Iterator<Item = ResetPolicy>) -> Self {
        ExpertPool {
            experts: policies.map(|p| Resetting::new(prototype.clone(), p)).collect(),
            updates: 0,
        }
    }

    fn step(&mut self, loss: &LossFunction) -> Result<Vec<f64>> {
        let losses = self
            .experts
            .iter_mut()
            .map(|e| e.step_with_reset(loss))
            .collect::<Result<Vec<f64>>>()?;
        self.updates += losses.len() as u64;
        Ok(losses)
    }

    fn expected_losses(&self, loss: &LossFunction) -> Vec<f64> {
        self.experts.iter().map(|e| e.expected_loss(loss)).collect()
    }

    fn len(&self) -> usize {
        self.experts.len()
    }
}

/// Hedge over periodically restarted copies of a base learner.
#[derive(Debug, Clone)]
pub struct ParallelMerge<L> {
    pool: ExpertPool<L>,
    weights: WeightVector,
    horizon: u64,
    clock: u64,
}

/// `N = ceil(log2 T)` learners restarted every `2^i` steps, uniform initial
/// weights, `eta = sqrt(ln N / T)`.
pub fn build_parallel<L: Learner>(prototype: &L, horizon: u64) -> Result<ParallelMerge<L>> {
    if horizon < 2 {
        return Err(invalid(format!("parallel merging needs T >= 2, got {horizon}")));
    }
    let n = ceil_log2(horizon);
    let policies = (1..=n).map(|i| ResetPolicy::periodic(1 << i).expect("period >= 2"));
    let eta = ((n as f64).ln() / horizon as f64).sqrt();
    Ok(ParallelMerge {
        pool: ExpertPool::new(prototype, policies),
        weights: WeightVector::uniform(n as usize, eta),
        horizon,
        clock: 0,
    })
}

impl<L: Learner> ParallelMerge<L> {
    pub fn with_eta(mut self, eta: f64) -> Self {
        self.weights.set_eta(eta);
        self
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn experts(&self) -> &[Resetting<L>] {
        &self.pool.experts
    }
}

impl<L: Learner> Forecaster for ParallelMerge<L> {
    fn horizon(&self) -> Option<u64> {
        Some(self.horizon)
    }

    fn clock(&self) -> u64 {
        self.clock
    }

    fn expected_loss(&self, loss: &LossFunction) -> f64 {
        self.weights.expectation(&self.pool.expected_losses(loss))
    }

    fn step(&mut self, loss: &LossFunction) -> Result<f64> {
        check_time(self.clock + 1, loss)?;
        let losses = self.pool.step(loss)?;
        let expected = self.weights.expectation(&losses);
        self.weights.ew_update(&losses)?;
        self.clock += 1;
        Ok(expected)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Belief {
        let i = self.weights.sample(rng);
        self.pool.experts[i].sample(rng)
    }

    fn active_learners(&self) -> usize {
        self.pool.len()
    }

    fn base_updates(&self) -> u64 {
        self.pool.updates
    }

    fn weight_simplices(&self) -> Vec<Vec<f64>> {
        vec![self.weights.weights.clone()]
    }
}

/// Weights of one probability-sharing mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct SharingWeights {
    weights: WeightVector,
    sigma: f64,
    switch_budget: u64,
}

impl SharingWeights {
    /// `sigma = C / T`, `eta = sqrt((C / T) ln(T / C))`, all mass on expert 1.
    pub fn tuned(switch_budget: u64, horizon: u64) -> Result<Self> {
        if switch_budget == 0 || switch_budget >= horizon {
            return Err(invalid(format!(
                "switch budget must satisfy 1 <= C < T (C={switch_budget}, T={horizon})"
            )));
        }
        let n = ceil_log2(horizon) as usize;
        let ratio = switch_budget as f64 / horizon as f64;
        let eta = (ratio * (horizon as f64 / switch_budget as f64).ln()).sqrt();
        Ok(SharingWeights { weights: WeightVector::point_mass(n, 0, eta), sigma: ratio, switch_budget })
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn eta(&self) -> f64 {
        self.weights.eta
    }

    pub fn switch_budget(&self) -> u64 {
        self.switch_budget
    }

    /// Probability-sharing update after observing the losses of time `t`.
    pub fn update(&mut self, losses: &[f64], t: u64) -> Result<()> {
        let target = reset_target(t, self.weights.len() as u32).map(|j| j as usize - 1);
        self.weights.shared_update(losses, self.sigma, target)
    }
}

pub fn shared_update(w: &mut SharingWeights, losses: &[f64], t: u64) -> Result<()> {
    w.update(losses, t)
}

/// Hedge with probability sharing over phased resetting learners.
#[derive(Debug, Clone)]
pub struct SharedMixture<L> {
    pool: ExpertPool<L>,
    sharing: SharingWeights,
    horizon: u64,
    clock: u64,
}

fn phased_pool<L: Learner>(prototype: &L, horizon: u64) -> ExpertPool<L> {
    ExpertPool::new(prototype, (1..=ceil_log2(horizon)).map(ResetPolicy::phased))
}

/// First-level mixture tuned for `C` switches over horizon `T`.
pub fn build_first_level<L: Learner>(prototype: &L, switches: u64, horizon: u64) -> Result<SharedMixture<L>> {
    let sharing = SharingWeights::tuned(switches, horizon)?;
    Ok(SharedMixture { pool: phased_pool(prototype, horizon), sharing, horizon, clock: 0 })
}

impl<L: Learner> SharedMixture<L> {
    pub fn with_eta(mut self, eta: f64) -> Self {
        self.sharing.weights.set_eta(eta);
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&sigma) {
            return Err(invalid(format!("sharing rate must lie in [0, 1], got {sigma}")));
        }
        self.sharing.sigma = sigma;
        Ok(self)
    }

    pub fn sharing(&self) -> &SharingWeights {
        &self.sharing
    }

    pub fn experts(&self) -> &[Resetting<L>] {
        &self.pool.experts
    }
}

impl<L: Learner> Forecaster for SharedMixture<L> {
    fn horizon(&self) -> Option<u64> {
        Some(self.horizon)
    }

    fn clock(&self) -> u64 {
        self.clock
    }

    fn expected_loss(&self, loss: &LossFunction) -> f64 {
        self.sharing.weights.expectation(&self.pool.expected_losses(loss))
    }

    fn step(&mut self, loss: &LossFunction) -> Result<f64> {
        check_time(self.clock + 1, loss)?;
        let t = self.clock + 1;
        let losses = self.pool.step(loss)?;
        let expected = self.sharing.weights.expectation(&losses);
        self.sharing.update(&losses, t)?;
        self.clock = t;
        Ok(expected)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Belief {
        let i = self.sharing.weights.sample(rng);
        self.pool.experts[i].sample(rng)
    }

    fn active_learners(&self) -> usize {
        self.pool.len()
    }

    fn base_updates(&self) -> u64 {
        self.pool.updates
    }

    fn weight_simplices(&self) -> Vec<Vec<f64>> {
        vec![self.sharing.weights.weights.clone()]
    }
}

/// Hedge over sharing mixtures tuned for switch budgets `2^i`.
#[derive(Debug, Clone)]
pub struct SecondLevelMixture<L> {
    pool: ExpertPool<L>,
    inner: Vec<SharingWeights>,
    outer: WeightVector,
    horizon: u64,
    clock: u64,
}

/// `N = ceil(log2 T)` first-level mixtures with switch budgets
/// `min(2^i, T - 1)`, uniform outer weights, outer rate
/// `eta' = sqrt(ln ln T / T)`.
pub fn build_second_level<L: Learner>(prototype: &L, horizon: u64) -> Result<SecondLevelMixture<L>> {
    if horizon < 4 {
        return Err(invalid(format!("second-level merging needs T >= 4, got {horizon}")));
    }
    let n = ceil_log2(horizon);
    let inner = (1..=n)
        .map(|i| SharingWeights::tuned((1u64 << i).min(horizon - 1), horizon))
        .collect::<Result<Vec<_>>>()?;
    let eta = ((horizon as f64).ln().ln() / horizon as f64).sqrt();
    Ok(SecondLevelMixture {
        pool: phased_pool(prototype, horizon),
        inner,
        outer: WeightVector::uniform(n as usize, eta),
        horizon,
        clock: 0,
    })
}

impl<L: Learner> SecondLevelMixture<L> {
    pub fn with_eta(mut self, eta: f64) -> Self {
        self.outer.set_eta(eta);
        self
    }

    pub fn outer(&self) -> &WeightVector {
        &self.outer
    }

    pub fn inner(&self) -> &[SharingWeights] {
        &self.inner
    }

    /// Expected loss of each first-level mixture under `loss`.
    pub fn inner_expected_losses(&self, loss: &LossFunction) -> Vec<f64> {
        let expert = self.pool.expected_losses(loss);
        self.inner.iter().map(|s| s.weights.expectation(&expert).clamp(0.0, 1.0)).collect()
    }
}

pub fn second_level_step<L: Learner>(m: &mut SecondLevelMixture<L>, loss: &LossFunction) -> Result<f64> {
    m.step(loss)
}

impl<L: Learner> Forecaster for SecondLevelMixture<L> {
    fn horizon(&self) -> Option<u64> {
        Some(self.horizon)
    }

    fn clock(&self) -> u64 {
        self.clock
    }

    fn expected_loss(&self, loss: &LossFunction) -> f64 {
        self.outer.expectation(&self.inner_expected_losses(loss))
    }

    fn step(&mut self, loss: &LossFunction) -> Result<f64> {
        check_time(self.clock + 1, loss)?;
        let t = self.clock + 1;
        let losses = self.pool.step(loss)?;
        let inner_expected: Vec<f64> =
            self.inner.iter().map(|s| s.weights.expectation(&losses).clamp(0.0, 1.0)).collect();
        let expected = self.outer.expectation(&inner_expected);
        for s in self.inner.iter_mut() {
            s.update(&losses, t)?;
        }
        self.outer.ew_update(&inner_expected)?;
        self.clock = t;
        Ok(expected)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Belief {
        let i = self.outer.sample(rng);
        let k = self.inner[i].weights.sample(rng);
        self.pool.experts[k].sample(rng)
    }

    fn active_learners(&self) -> usize {
        self.pool.len()
    }

    fn base_updates(&self) -> u64 {
        self.pool.updates
    }

    fn weight_simplices(&self) -> Vec<Vec<f64>> {
        std::iter::once(self.outer.weights.clone())
            .chain(self.inner.iter().map(|s| s.weights.weights.clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::Domain;
    use crate::learner::OnlineGradientDescent;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ogd() -> OnlineGradientDescent {
        OnlineGradientDescent::new(Domain::unit_interval(), 2.0).unwrap()
    }

    #[test]
    fn equal_losses_leave_weights() {
        let mut w = WeightVector::from_weights(vec![0.2, 0.3, 0.5], 0.7).unwrap();
        w.ew_update(&[0.4, 0.4, 0.4]).unwrap();
        for (a, b) in w.weights().iter().zip([0.2, 0.3, 0.5]) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn ew_hand_arithmetic() {
        // (0.5, 0.5) * (1, 1/2) = (0.5, 0.25) -> (2/3, 1/3)
        let mut w = WeightVector::uniform(2, std::f64::consts::LN_2);
        w.ew_update(&[0.0, 1.0]).unwrap();
        assert_relative_eq!(w.weights()[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(w.weights()[1], 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn single_expert_keeps_unit_weight() {
        let mut w = WeightVector::uniform(1, 3.0);
        w.ew_update(&[0.9]).unwrap();
        assert_eq!(w.weights(), &[1.0]);
    }

    #[test]
    fn rejects_unbounded_loss() {
        let mut w = WeightVector::uniform(2, 1.0);
        assert_eq!(w.ew_update(&[0.0, 1.5]), Err(Error::UnboundedLoss { value: 1.5 }));
        assert!(w.ew_update(&[0.0]).is_err());
    }

    #[test]
    fn point_mass_sampling() {
        let w = WeightVector::point_mass(3, 0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!((0..1000).all(|_| w.sample(&mut rng) == 0));
    }

    #[test]
    fn fair_coin_sampling() {
        let w = WeightVector::uniform(2, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 100_000;
        let hits = (0..n).filter(|_| w.sample(&mut rng) == 0).count();
        assert!((hits as f64 / n as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn sampling_is_reproducible() {
        let w = WeightVector::from_weights(vec![0.1, 0.6, 0.3], 1.0).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50).map(|_| w.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
    }

    #[test]
    fn parallel_construction() {
        let m = build_parallel(&ogd(), 16).unwrap();
        assert_eq!(m.active_learners(), 4);
        assert_relative_eq!(m.weights().eta(), (4f64.ln() / 16.0).sqrt(), epsilon = 1e-15);
        assert_relative_eq!(m.weights().eta(), 0.2944, epsilon = 1e-4);
        let periods: Vec<u64> = m.experts().iter().map(|e| e.policy().period()).collect();
        assert_eq!(periods, vec![2, 4, 8, 16]);
        assert!(m.experts().iter().all(|e| e.policy().phase() == 0));

        let tiny = build_parallel(&ogd(), 2).unwrap();
        assert_eq!(tiny.active_learners(), 1);
        assert_eq!(tiny.weights().weights(), &[1.0]);
        assert_eq!(build_parallel(&ogd(), 17).unwrap().active_learners(), 5);
        assert!(build_parallel(&ogd(), 1).is_err());
    }

    #[test]
    fn reset_target_examples() {
        assert_eq!(reset_target(11, 10), Some(3));
        assert_eq!(reset_target(1, 10), Some(2));
        assert_eq!(reset_target(2, 10), Some(1));
        assert_eq!(reset_target(15, 4), None);
        assert_eq!(reset_target(15, 5), Some(5));
    }

    #[test]
    fn sharing_with_zero_sigma_is_hedge() {
        let mut a = WeightVector::from_weights(vec![0.5, 0.3, 0.2], 0.8).unwrap();
        let mut b = a.clone();
        let losses = [0.1, 0.7, 0.35];
        a.ew_update(&losses).unwrap();
        b.shared_update(&losses, 0.0, Some(2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sharing_with_unit_sigma_moves_everything() {
        let mut w = WeightVector::from_weights(vec![0.5, 0.3, 0.2], 0.8).unwrap();
        w.shared_update(&[0.1, 0.7, 0.35], 1.0, Some(1)).unwrap();
        assert!(w.weights()[1] > 1.0 - 1e-12);
    }

    #[test]
    fn sharing_hand_arithmetic() {
        let mut w = WeightVector::from_weights(vec![0.5, 0.3, 0.2], 0.5).unwrap();
        let target = reset_target(11, 3).map(|j| j as usize - 1);
        assert_eq!(target, Some(2));
        w.shared_update(&[0.0, 0.0, 0.0], 0.1, target).unwrap();
        let expected = [0.45, 0.27, 0.28];
        for (a, b) in w.weights().iter().zip(expected) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }
        // the reset target gains mass: 0.2 -> 0.28
        assert!(w.weights()[2] > 0.2);
    }

    #[test]
    fn sharing_without_target_renormalizes() {
        let mut w = WeightVector::from_weights(vec![0.25, 0.75], 0.0).unwrap();
        w.shared_update(&[0.0, 0.0], 0.3, None).unwrap();
        assert_relative_eq!(w.weights()[0], 0.25, epsilon = 1e-15);
        assert_relative_eq!(w.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn underflow_is_floored() {
        let mut w = WeightVector::from_weights(vec![1e-200, 1.0 - 1e-200], 1000.0).unwrap();
        w.ew_update(&[1.0, 0.0]).unwrap();
        assert_eq!(w.floored(), 1);
        assert!(w.weights()[0] > 0.0);
        let mut z = WeightVector::point_mass(2, 1, 1000.0);
        z.ew_update(&[1.0, 0.0]).unwrap();
        assert_eq!(z.floored(), 0);
        assert_eq!(z.weights()[0], 0.0);
    }

    #[test]
    fn first_level_construction() {
        let m = build_first_level(&ogd(), 4, 1024).unwrap();
        assert_relative_eq!(m.sharing().sigma(), 1.0 / 256.0, epsilon = 1e-15);
        assert_relative_eq!(m.sharing().eta(), 0.1472, epsilon = 1e-4);
        let w = m.sharing().weights().weights();
        assert_eq!(w[0], 1.0);
        assert!(w[1..].iter().all(|p| *p == 0.0));
        assert_eq!(w.len(), 10);
        for (i, e) in m.experts().iter().enumerate() {
            assert_eq!(e.policy(), ResetPolicy::phased(i as u32 + 1));
        }

        let tiny = build_first_level(&ogd(), 1, 2).unwrap();
        assert_eq!(tiny.active_learners(), 1);
        assert_eq!(tiny.sharing().sigma(), 0.5);
        assert!(build_first_level(&ogd(), 8, 8).is_err());
    }

    #[test]
    fn second_level_construction() {
        let m = build_second_level(&ogd(), 16).unwrap();
        let budgets: Vec<u64> = m.inner().iter().map(|s| s.switch_budget()).collect();
        assert_eq!(budgets, vec![2, 4, 8, 15]);
        assert!(m.outer().weights().iter().all(|p| *p == 0.25));
        assert_relative_eq!(m.outer().eta(), 0.2525, epsilon = 1e-4);
        assert!(build_second_level(&ogd(), 3).is_err());
    }

    #[test]
    fn second_level_outer_update() {
        let mut outer = WeightVector::uniform(2, std::f64::consts::LN_2);
        outer.ew_update(&[0.0, 1.0]).unwrap();
        assert_relative_eq!(outer.weights()[0], 2.0 / 3.0, epsilon = 1e-15);

        // equal inner losses: a constant loss gives every inner mixture the same expectation
        let mut m = build_second_level(&ogd(), 16).unwrap();
        let before = m.outer().weights().to_vec();
        let l = m.step(&LossFunction::constant(1, 0.3, 1)).unwrap();
        assert_relative_eq!(l, 0.3, epsilon = 1e-15);
        for (a, b) in m.outer().weights().iter().zip(before) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn mixture_expected_loss_is_convex_combination() {
        let w = WeightVector::from_weights(vec![0.25, 0.75], 1.0).unwrap();
        assert_relative_eq!(w.expectation(&[0.0, 1.0]), 0.75);
    }
}
