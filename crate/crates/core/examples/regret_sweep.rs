//! Mean dynamic regret over seeds for growing T, and the fitted exponent of
//! regret against T, for each algorithm. Writes one CSV per algorithm into
//! the directory given as the first argument (default: current directory).
//!
//!     cargo run --release --example regret_sweep -- /tmp/sweeps

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use recursive_experts::cli::{build_algorithm, resolve_run, RunArgs};
use recursive_experts::evaluation::sweep_exponent;
use recursive_experts::Result;

fn main() -> Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let horizons: Vec<u64> = (8..=12).map(|k| 1u64 << k).collect();
    println!("{:>14} {:>10} {:>12}", "algorithm", "exponent", "ratio trend");
    for algo in ["base", "reset", "parallel", "first-level", "second-level", "recursive"] {
        let args = RunArgs {
            algo: Some(algo.into()),
            horizon: Some(horizons[0]),
            segments: Some(4),
            noise: Some(0.1),
            ..Default::default()
        };
        let cfg = resolve_run(&args)?;
        let outcome = sweep_exponent(|h| build_algorithm(&cfg, h), &cfg.environment, &horizons, 10, 0.5, cfg.grid)?;
        outcome.write_csv(BufWriter::new(File::create(dir.join(format!("sweep-{algo}.csv")))?))?;
        let slope = outcome.fit.as_ref().map(|f| f.slope).unwrap_or(f64::NAN);
        println!("{algo:>14} {slope:>10.3} {:>12.4}", outcome.ratio_trend());
    }
    Ok(())
}
