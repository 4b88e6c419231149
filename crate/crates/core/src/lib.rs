//! Meta-algorithms that turn an online learner built for a static
//! environment into one that competes with the best piecewise-constant
//! comparator in an environment that changes an unknown number of times.
//!
//! The layers, from simplest to strongest:
//!
//! - [`reset::Resetting`]: restart the base learner periodically.
//! - [`mixture::ParallelMerge`]: Hedge over `ceil(log2 T)` restart periods.
//! - [`mixture::SharedMixture`] / [`mixture::SecondLevelMixture`]: Hedge with
//!   probability sharing over phased restarts, and a mixture over the
//!   sharing mixtures' switch budgets.
//! - [`recursive::RecursiveNode`]: the base learner mixed with two
//!   half-horizon copies of the whole construction, recursively.
//! - [`doubling::Doubling`]: anytime operation by restarting on blocks of
//!   length `2^i`.
//!
//! [`environment`] generates piecewise-stationary loss sequences and the
//! hindsight comparators; [`evaluation`] runs experiments and fits regret
//! exponents.

pub mod belief;
pub mod cli;
pub mod doubling;
pub mod environment;
pub mod error;
pub mod evaluation;
pub mod forecaster;
pub mod learner;
pub mod loss;
pub mod mixture;
pub mod recursive;
pub mod reset;
pub mod rng;

pub use belief::{Belief, Domain};
pub use error::{Error, Result};
pub use forecaster::{Forecaster, Standalone};
pub use learner::{BaseLearnerSpec, GridHedge, Learner, OnlineGradientDescent, SampleMean, StepSize};
pub use loss::LossFunction;
