//! The recursive construction: a base learner mixed with a half-horizon copy
//! of itself, which rolls over to a fresh copy at the midpoint. Prints the
//! node chain, the rollover times and the final regret against OGD alone.
//!
//!     cargo run --example recursive_experts

use recursive_experts::environment::{generate, EnvironmentConfig, EnvironmentKind, DEFAULT_GRID_RESOLUTION};
use recursive_experts::evaluation::run_experiment;
use recursive_experts::recursive;
use recursive_experts::{Domain, Forecaster, OnlineGradientDescent, Result, Standalone};

fn main() -> Result<()> {
    let ogd = OnlineGradientDescent::new(Domain::unit_interval(), 2.0)?;

    let mut small = recursive::build(&ogd, 16)?;
    let horizons: Vec<u64> = small.chain().iter().map(|n| n.horizon()).collect();
    println!("T=16 chain horizons {horizons:?}");
    let toy = generate(&EnvironmentConfig::new(EnvironmentKind::PiecewiseMeanSquared, 16, 2, 1))?;
    let mut rollovers = Vec::new();
    for loss in toy.losses() {
        small.step_traced(loss, &mut rollovers)?;
    }
    for depth in 0..4 {
        let times: Vec<u64> = rollovers.iter().filter(|r| r.depth == depth).map(|r| r.time).collect();
        println!("  depth {depth} rolls its child over after t = {times:?}");
    }
    println!("  base updates {} = T(log2 T + 1)", small.base_updates());

    let horizon = 8192;
    let cfg = EnvironmentConfig::new(EnvironmentKind::PiecewiseMeanSquared, horizon, 4, 42).with_noise(0.1);
    let seq = generate(&cfg)?;
    let mut rec = recursive::build(&ogd, horizon)?;
    let mut base = Standalone::new(ogd);
    let rec_trace = run_experiment(&mut rec, &seq, DEFAULT_GRID_RESOLUTION, 42)?;
    let base_trace = run_experiment(&mut base, &seq, DEFAULT_GRID_RESOLUTION, 42)?;
    println!("\nT={horizon}, C=4");
    println!("  recursive experts regret {:.3} with {} active learners", rec_trace.final_regret(), rec.active_learners());
    println!("  OGD alone regret         {:.3}", base_trace.final_regret());
    let (p0, p1) = rec.weights();
    println!("  root weights: base {p0:.3}, child {p1:.3}");
    Ok(())
}
