use serde::{Deserialize, Serialize};

use super::scenario::{Profile, Scenario};
use crate::error::{Error, Result};
use crate::huncc::{build_pair_dataset, dataset_digest, HunccSpec};
use crate::mine::{train, TrainTrace};

/// How far above `ln(eval batch)` a reported estimate may sit before the run
/// is rejected.
pub const CEILING_SLACK_NATS: f64 = 0.5;

/// Outcome of one scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub final_mi_nats: f64,
    /// `ln(eval batch)`.
    pub ceiling_nats: f64,
    /// SHA-256 of the dataset in `.cmin` encoding.
    pub dataset_digest: String,
    pub trace: TrainTrace,
    pub config_echo: Scenario,
}

fn in_scenario(name: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::InScenario {
        scenario: name.to_string(),
        source: Box::new(e),
    }
}

/// Builds the scenario's dataset, trains on it and reports the smoothed
/// estimate. Fails if the estimate breaks the `ln(eval batch)` ceiling.
pub fn run_scenario(s: &Scenario) -> Result<Report> {
    let ctx = in_scenario(&s.name);
    s.validate().map_err(&ctx)?;
    let dataset = build_pair_dataset(&s.pair_spec(), s.n_samples, s.seed).map_err(&ctx)?;
    let cfg = s.mine_config();
    let (_, trace) = train(&dataset, &cfg).map_err(&ctx)?;
    let final_mi_nats = trace
        .final_estimate(cfg.ema_decay)
        .ok_or_else(|| ctx(Error::InvalidScenario("no epochs to report".into())))?;
    let ceiling_nats = cfg.ceiling_nats();
    if final_mi_nats > ceiling_nats + CEILING_SLACK_NATS {
        return Err(ctx(Error::CeilingExceeded {
            estimate: final_mi_nats,
            ceiling: ceiling_nats,
        }));
    }
    Ok(Report {
        scenario: s.name.clone(),
        final_mi_nats,
        ceiling_nats,
        dataset_digest: dataset_digest(&dataset),
        trace,
        config_echo: s.clone(),
    })
}

/// Fixes channel 0 to all-ones, draws the rest uniform, and estimates the MI
/// between that message alone and the full link bundle.
pub fn individual_secrecy_probe(spec: HunccSpec, profile: Profile, n_samples: Option<usize>, seed: u64) -> Result<Report> {
    let mut s = Scenario::probe(profile).with_seed(seed);
    s.scheme = crate::huncc::Cryptosystem::Huncc(spec);
    if let Some(n) = n_samples {
        s.n_samples = n;
    }
    run_scenario(&s)
}
