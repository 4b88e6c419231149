//! Running a known-horizon algorithm without knowing T: fresh copies tuned
//! for 1, 2, 4, ... steps on consecutive blocks.
//!
//!     cargo run --example horizon_doubling

use recursive_experts::doubling::{block_of, Doubling};
use recursive_experts::environment::{generate, EnvironmentConfig, EnvironmentKind, DEFAULT_GRID_RESOLUTION};
use recursive_experts::evaluation::run_experiment;
use recursive_experts::recursive;
use recursive_experts::{Domain, OnlineGradientDescent, Result};

fn main() -> Result<()> {
    for t in [1, 2, 3, 7, 8, 1000] {
        let (i, offset) = block_of(t);
        println!("t={t:>4} -> block {i}, step {offset} of {}", 1u64 << i);
    }

    let ogd = OnlineGradientDescent::new(Domain::unit_interval(), 2.0)?;
    let cfg = EnvironmentConfig::new(EnvironmentKind::PiecewiseMeanSquared, 3000, 4, 8);
    let seq = generate(&cfg)?;
    let mut anytime = Doubling::wrap(|h| recursive::build(&ogd, h))?;
    let trace = run_experiment(&mut anytime, &seq, DEFAULT_GRID_RESOLUTION, 8)?;
    println!("\nblock horizons {:?}", anytime.horizons_used());
    let per_block: Vec<String> = anytime.block_losses().iter().map(|l| format!("{l:.2}")).collect();
    println!("loss per block [{}]", per_block.join(", "));
    println!("anytime recursive experts regret {:.3}", trace.final_regret());

    let mut known = recursive::build(&ogd, 3000)?;
    let known = run_experiment(&mut known, &seq, DEFAULT_GRID_RESOLUTION, 8)?;
    println!("with T known in advance      {:.3}", known.final_regret());
    Ok(())
}
