//! Periodic restarts: the tuned period for a few (T, C) pairs, the phased
//! schedules the switching mixtures use, and a resetting OGD run.
//!
//!     cargo run --example reset_schedule

use recursive_experts::environment::{generate, EnvironmentConfig, EnvironmentKind, DEFAULT_GRID_RESOLUTION};
use recursive_experts::evaluation::run_experiment;
use recursive_experts::mixture::{ceil_log2, reset_target};
use recursive_experts::reset::{optimal_period, ResetPolicy, Resetting};
use recursive_experts::{Domain, OnlineGradientDescent, Result, Standalone};

fn main() -> Result<()> {
    for (t, c) in [(1000, 10), (4096, 4), (10_000, 100)] {
        println!("T={t:>6} C={c:>3} -> t_r = {}", optimal_period(t, c, 0.5));
    }

    let horizon = 16;
    println!("\nphased schedules up to T={horizon}");
    for i in 1..=ceil_log2(horizon) {
        let times: Vec<u64> = ResetPolicy::phased(i).reset_times(horizon).collect();
        println!("  expert {i}: {times:?}");
    }
    let targets: Vec<String> = (1..horizon)
        .map(|t| reset_target(t, ceil_log2(horizon)).map_or("-".into(), |j| j.to_string()))
        .collect();
    println!("  expert reset after t = 1..{}: {}", horizon - 1, targets.join(" "));

    let cfg = EnvironmentConfig::new(EnvironmentKind::PiecewiseMeanSquared, 4096, 8, 3);
    let seq = generate(&cfg)?;
    let ogd = OnlineGradientDescent::new(Domain::unit_interval(), 2.0)?;
    let period = optimal_period(4096, 8, 0.5);
    let mut plain = Standalone::new(ogd.clone());
    let mut resetting = Resetting::new(ogd, ResetPolicy::periodic(period)?);
    let plain = run_experiment(&mut plain, &seq, DEFAULT_GRID_RESOLUTION, 0)?;
    let reset = run_experiment(&mut resetting, &seq, DEFAULT_GRID_RESOLUTION, 0)?;
    println!("\nC=8, T=4096: never reset {:.2}, reset every {period} steps {:.2}", plain.final_regret(), reset.final_regret());
    Ok(())
}
