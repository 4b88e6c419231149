//! Hedge over ceil(log2 T) copies of OGD restarted with periods 2, 4, 8, ...
//! Prints how the mixture weight moves between periods as the environment
//! changes.
//!
//!     cargo run --example parallel_merge

use recursive_experts::environment::{generate, EnvironmentConfig, EnvironmentKind};
use recursive_experts::mixture::build_parallel;
use recursive_experts::{Domain, Forecaster, OnlineGradientDescent, Result};

fn main() -> Result<()> {
    let horizon = 4096;
    let cfg = EnvironmentConfig::new(EnvironmentKind::PiecewiseMeanSquared, horizon, 6, 5).with_noise(0.05);
    let seq = generate(&cfg)?;
    let mut merge = build_parallel(&OnlineGradientDescent::new(Domain::unit_interval(), 2.0)?, horizon)?;
    println!("N = {} experts, eta = {:.4}", merge.experts().len(), merge.weights().eta());
    let periods: Vec<u64> = merge.experts().iter().map(|e| e.policy().period()).collect();
    println!("periods {periods:?}");

    let mut total = 0.0;
    for loss in seq.losses() {
        total += merge.step(loss)?;
        if loss.time_index() % 512 == 0 {
            let w: Vec<String> = merge.weights().weights().iter().map(|w| format!("{w:.2}")).collect();
            println!("t={:>5} loss so far {total:8.3} weights [{}]", loss.time_index(), w.join(" "));
        }
    }
    println!("base updates: {}", merge.base_updates());
    Ok(())
}
