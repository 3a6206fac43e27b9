//! Batch verification runner: scenario configs in, ordered check reports out.

pub mod checks;
pub mod config;
pub mod error;
pub mod report;
pub mod sample;

use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use config::ScenarioConfig;
pub use error::CliError;
pub use report::{emit, parse, Format, Record, Report, Summary};

use checks::{CheckSpec, Ctx};

/// FNV-1a, used to give each check its own stream of the config's generator.
fn stream_id(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// The generator a check draws from: the config seed, on a stream named after the check.
/// Checks run concurrently, so this keeps each one independent of scheduling.
pub fn check_rng(seed: u64, name: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(name));
    rng
}

fn run_check(spec: &'static CheckSpec, cfg: &ScenarioConfig) -> Vec<Record> {
    let ctx = Ctx {
        cfg,
        check: spec.name,
    };
    let mut rng = check_rng(cfg.seed, spec.name);
    catch_unwind(AssertUnwindSafe(|| (spec.run)(&ctx, &mut rng))).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "check panicked".into());
        vec![Record::failed(
            spec.name,
            report::Params::new(),
            cfg.tolerance(spec.name, 0.0),
            msg,
        )]
    })
}

/// Runs the checks named in `cfg.checks` (each once) and assembles the ordered report.
pub fn run(cfg: &ScenarioConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let mut names: Vec<&str> = cfg.checks.iter().map(String::as_str).collect();
    names.sort_unstable();
    names.dedup();
    let specs = names
        .iter()
        .map(|n| checks::find(n).ok_or_else(|| CliError::UnknownCheck(n.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let records: Vec<Record> = specs
        .par_iter()
        .flat_map_iter(|spec| run_check(spec, cfg))
        .collect();
    Ok(Report::from_records(records))
}

/// `cfg` with its check list filled from `suite` when empty, or checked against it otherwise.
pub fn select_suite(mut cfg: ScenarioConfig, suite: &str) -> Result<ScenarioConfig, CliError> {
    let members = checks::suite(suite).ok_or_else(|| CliError::UnknownSuite(suite.to_string()))?;
    if cfg.checks.is_empty() {
        cfg.checks = members.iter().map(|s| s.to_string()).collect();
    } else {
        for c in &cfg.checks {
            if checks::find(c).is_none() {
                return Err(CliError::UnknownCheck(c.clone()));
            }
            if !members.contains(&c.as_str()) {
                return Err(CliError::NotInSuite {
                    check: c.clone(),
                    suite: suite.to_string(),
                });
            }
        }
    }
    Ok(cfg)
}
