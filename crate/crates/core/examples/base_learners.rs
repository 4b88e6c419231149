//! Three base learners on the same piecewise-stationary sequence, each run
//! once without any restarts.
//!
//!     cargo run --example base_learners

use recursive_experts::environment::{generate, EnvironmentConfig, EnvironmentKind, DEFAULT_GRID_RESOLUTION};
use recursive_experts::evaluation::run_experiment;
use recursive_experts::{Domain, GridHedge, OnlineGradientDescent, Result, SampleMean, Standalone};

fn main() -> Result<()> {
    let cfg = EnvironmentConfig::new(EnvironmentKind::PiecewiseMeanSquared, 2000, 3, 11).with_noise(0.1);
    let seq = generate(&cfg)?;
    let domain = Domain::unit_interval();

    let mut ogd = Standalone::new(OnlineGradientDescent::new(domain.clone(), 2.0)?);
    let mut mean = Standalone::new(SampleMean::new(domain.clone())?);
    let mut hedge = Standalone::new(GridHedge::new(domain, 33)?);

    println!("segment ends: {:?}", seq.schedule().change_points());
    for (name, trace) in [
        ("ogd", run_experiment(&mut ogd, &seq, DEFAULT_GRID_RESOLUTION, 1)?),
        ("sample-mean", run_experiment(&mut mean, &seq, DEFAULT_GRID_RESOLUTION, 1)?),
        ("grid-hedge", run_experiment(&mut hedge, &seq, DEFAULT_GRID_RESOLUTION, 1)?),
    ] {
        println!(
            "{name:>12}: loss {:8.3}  comparator {:8.3}  dynamic regret {:8.3}",
            trace.final_loss(),
            trace.final_comparator(),
            trace.final_regret()
        );
    }
    Ok(())
}
