//! Probability sharing over phased restarts, with the switch budget either
//! given (first level) or mixed over (second level). The base learner is
//! exponential weights over a grid, since the expert-linear losses are flat
//! away from the best knot and give gradient methods nothing to follow.
//!
//!     cargo run --example switching_mixtures

use recursive_experts::environment::{generate, EnvironmentConfig, EnvironmentKind, DEFAULT_GRID_RESOLUTION};
use recursive_experts::evaluation::run_experiment;
use recursive_experts::mixture::{build_first_level, build_second_level};
use recursive_experts::cli::HEDGE_GRID;
use recursive_experts::{Domain, GridHedge, Result};

fn main() -> Result<()> {
    let horizon = 2048;
    let hedge = GridHedge::new(Domain::unit_interval(), HEDGE_GRID)?;
    let cfg = EnvironmentConfig::new(EnvironmentKind::PiecewiseExpertLinear, horizon, 4, 21).with_noise(0.05);
    let seq = generate(&cfg)?;

    for budget in [1, 4, 16] {
        let mut first = build_first_level(&hedge, budget, horizon)?;
        let sharing = first.sharing();
        let (sigma, eta) = (sharing.sigma(), sharing.eta());
        let trace = run_experiment(&mut first, &seq, DEFAULT_GRID_RESOLUTION, 1)?;
        println!("first level, C={budget:>2}: sigma {sigma:.5} eta {eta:.4} regret {:.3}", trace.final_regret());
    }

    let mut second = build_second_level(&hedge, horizon)?;
    let budgets: Vec<u64> = second.inner().iter().map(|s| s.switch_budget()).collect();
    let trace = run_experiment(&mut second, &seq, DEFAULT_GRID_RESOLUTION, 1)?;
    println!("second level over budgets {budgets:?}: regret {:.3}", trace.final_regret());
    let outer: Vec<String> = second.outer().weights().iter().map(|w| format!("{w:.3}")).collect();
    println!("final outer weights [{}]", outer.join(" "));
    Ok(())
}
