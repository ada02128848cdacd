//! Running named scenarios from a configuration file into a directory.
//!
//! ```text
//! cargo run --example run_scenarios -- configs/paper_pulsed.json out
//! ```

use std::path::PathBuf;

use pairsource::pipeline::{load_config, run_scenario, RunOptions, Scenario, SourceConfig};
use pairsource::Result;

pub fn run(config: Option<PathBuf>, out: PathBuf) -> Result<bool> {
    let cfg = match config {
        Some(p) => load_config(&p)?,
        None => SourceConfig::paper_pulsed(),
    };
    let opts = RunOptions::new(out);
    let mut ok = true;
    for scenario in [Scenario::SplitterSweep, Scenario::WalkoffBudget, Scenario::TomographyPulsed] {
        for report in run_scenario(scenario, &cfg, &opts)? {
            for c in &report.checks {
                println!("{} {:<32} {:.6}", c.status, c.id, c.computed);
            }
            ok &= report.passed();
        }
    }
    Ok(ok)
}

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args.next().map(PathBuf::from);
    let out = args.next().map_or_else(|| std::env::temp_dir().join("pairsource"), PathBuf::from);
    let ok = run(config, out)?;
    std::process::exit(if ok { 0 } else { 1 });
}
