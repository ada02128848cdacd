//! Validating source configurations: every problem in a file is reported
//! with its JSON path.

use pairsource::pipeline::{validate_config, SourceConfig};
use pairsource::{Error, Result};

pub fn run() -> Result<usize> {
    let good = SourceConfig::paper_cw().to_json();
    validate_config(&good.to_string())?;

    let mut bad = good.clone();
    bad["splitter"]["t_h"] = 1.2.into();
    bad["pump"].as_object_mut().unwrap().remove("phase");
    bad["grid"]["points"] = 16.into();
    match validate_config(&bad.to_string()) {
        Err(Error::Config(issues)) => {
            for i in &issues {
                println!("{i}");
            }
            Ok(issues.len())
        }
        Err(e) => Err(e),
        Ok(_) => Ok(0),
    }
}

fn main() -> Result<()> {
    println!("{} issues", run()?);
    Ok(())
}
