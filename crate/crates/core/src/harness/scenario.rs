use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ciphers::BLOCK_LEN;
use crate::error::{Error, Result};
use crate::huncc::{Cryptosystem, HunccSpec, PairSpec, ProbeLayout};
use crate::mine::MineConfig;
use crate::sources::Source;

/// Run sizes. `Quick` fits a desk machine, `Paper` uses the full sample
/// counts and epoch budgets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    #[default]
    Quick,
    Paper,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "paper" => Ok(Profile::Paper),
            other => Err(Error::InvalidScenario(format!("unknown profile `{other}`"))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Quick => "quick",
            Profile::Paper => "paper",
        })
    }
}

#[derive(Clone, Copy)]
enum Scale {
    /// 16-byte plaintexts.
    Baseline,
    /// Baseline inputs under the longer budget used for real ciphers.
    Cipher,
    /// 8 channels of 16 bytes.
    Network,
    /// 8 channels, large sample count.
    Sweep,
}

impl Profile {
    fn sizes(self, scale: Scale) -> (usize, usize, usize) {
        // (n_samples, batch_size, epochs)
        match (self, scale) {
            (Profile::Quick, Scale::Baseline | Scale::Cipher) => (20_000, 2_000, 300),
            (Profile::Quick, Scale::Network | Scale::Sweep) => (100_000, 2_000, 150),
            (Profile::Paper, Scale::Baseline) => (100_000, 10_000, 2_000),
            (Profile::Paper, Scale::Cipher) => (100_000, 10_000, 5_000),
            (Profile::Paper, Scale::Network) => (100_000, 10_000, 5_000),
            (Profile::Paper, Scale::Sweep) => (500_000, 10_000, 5_000),
        }
    }

    /// Adam step size. The quick profile takes far fewer steps than the
    /// full one and compensates with a larger step.
    pub fn learning_rate(self) -> f64 {
        match self {
            Profile::Quick => 1e-3,
            Profile::Paper => 1e-4,
        }
    }

    /// The GE alphas of the uniformity sweep.
    pub fn sweep_alphas(self) -> Vec<f64> {
        match self {
            Profile::Quick => vec![0.01, 0.03, 0.05, 0.1, 0.5],
            Profile::Paper => vec![0.01, 0.02, 0.03, 0.05, 0.075, 0.10, 0.15, 0.20, 0.5],
        }
    }
}

/// One fully specified experiment: a pair dataset and an estimator run on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub source: Source,
    pub scheme: Cryptosystem,
    #[serde(default = "one")]
    pub channels: usize,
    #[serde(default = "block")]
    pub msg_len: usize,
    /// Channel holding the all-ones message, if any.
    #[serde(default)]
    pub constant_channel: Option<usize>,
    #[serde(default)]
    pub x_layout: ProbeLayout,
    pub n_samples: usize,
    #[serde(default)]
    pub mine: MineConfig,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}

fn block() -> usize {
    BLOCK_LEN
}

impl Scenario {
    fn sized(name: &str, source: Source, scheme: Cryptosystem, channels: usize, profile: Profile, scale: Scale) -> Self {
        let (n_samples, batch_size, epochs) = profile.sizes(scale);
        Scenario {
            name: name.to_string(),
            source,
            scheme,
            channels,
            msg_len: BLOCK_LEN,
            constant_channel: None,
            x_layout: ProbeLayout::AllMessages,
            n_samples,
            mine: MineConfig {
                batch_size,
                epochs,
                lr: profile.learning_rate(),
                ..MineConfig::default()
            },
            seed: 0,
        }
    }

    /// A cell of the uniformity sweep: GE(alpha) plaintexts on 8 channels.
    pub fn sweep_cell(alpha: f64, scheme: Cryptosystem, profile: Profile) -> Result<Self> {
        let name = format!("table1/{}/{alpha}", scheme.name());
        Ok(Scenario::sized(&name, Source::ge(alpha)?, scheme, 8, profile, Scale::Sweep))
    }

    /// The all-ones message on channel 0 against the HUNCC link bundle.
    pub fn probe(profile: Profile) -> Self {
        Scenario {
            constant_channel: Some(0),
            x_layout: ProbeLayout::ConstantMessage,
            ..Scenario::sized(
                "probe",
                Source::Uniform,
                Cryptosystem::Huncc(HunccSpec::default()),
                8,
                profile,
                Scale::Network,
            )
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn pair_spec(&self) -> PairSpec {
        PairSpec {
            source: self.source,
            system: self.scheme,
            channels: self.channels,
            msg_len: self.msg_len,
            constant_channel: self.constant_channel,
            x_layout: self.x_layout,
        }
    }

    /// Estimator settings with the scenario seed applied.
    pub fn mine_config(&self) -> MineConfig {
        MineConfig {
            seed: self.seed,
            ..self.mine.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::InvalidScenario("scenario needs a name".into()));
        }
        self.pair_spec().validate()?;
        self.mine.validate()?;
        if self.n_samples < self.mine.min_samples() {
            return Err(Error::InvalidScenario(format!(
                "{} samples cannot fill a batch of {} and an evaluation batch of {}",
                self.n_samples,
                self.mine.batch_size,
                self.mine.eval_batch_size()
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }
}

const SINGLE: &[(&str, Cryptosystem)] = &[
    ("none", Cryptosystem::None),
    ("otp", Cryptosystem::Otp),
    ("otp_with_key", Cryptosystem::OtpWithKey),
    ("xor_repeat", Cryptosystem::XorRepeat),
    ("caesar", Cryptosystem::Caesar),
    ("spn", Cryptosystem::Spn),
    ("aes128_ecb", Cryptosystem::Aes128Ecb),
    ("aes128_ctr", Cryptosystem::Aes128Ctr),
];

/// Every name accepted by [`preset`].
pub fn preset_names() -> Vec<&'static str> {
    let mut v: Vec<&str> = SINGLE.iter().map(|(n, _)| *n).collect();
    v.extend([
        "aes128_ecb_ge",
        "nibble",
        "huncc",
        "huncc_full_aes",
        "probe",
        "fig1",
        "fig2",
        "fig3",
        "table1",
    ]);
    v
}

/// Scenarios registered under `name`. Group names (`fig1`, `fig2`, `fig3`,
/// `table1`) expand to several scenarios.
pub fn preset(name: &str, profile: Profile) -> Result<Vec<Scenario>> {
    let baseline = |n: &str, sys: Cryptosystem, scale: Scale| {
        Scenario::sized(n, Source::Uniform, sys, 1, profile, scale)
    };
    if let Some(&(n, sys)) = SINGLE.iter().find(|(n, _)| *n == name) {
        let scale = match sys {
            Cryptosystem::None | Cryptosystem::Otp | Cryptosystem::OtpWithKey | Cryptosystem::XorRepeat => {
                Scale::Baseline
            }
            _ => Scale::Cipher,
        };
        return Ok(vec![baseline(n, sys, scale)]);
    }
    let huncc = Cryptosystem::Huncc(HunccSpec::default());
    Ok(match name {
        "aes128_ecb_ge" => vec![Scenario::sized(
            name,
            Source::ge(0.02)?,
            Cryptosystem::Aes128Ecb,
            1,
            profile,
            Scale::Cipher,
        )],
        "nibble" => vec![Scenario::sized(
            name,
            Source::ReplicatedNibble,
            Cryptosystem::None,
            1,
            profile,
            Scale::Baseline,
        )],
        "huncc" => vec![Scenario::sized(name, Source::Uniform, huncc, 8, profile, Scale::Network)],
        "huncc_full_aes" => vec![Scenario::sized(
            name,
            Source::Uniform,
            Cryptosystem::Aes128Ecb,
            8,
            profile,
            Scale::Network,
        )],
        "probe" => vec![Scenario::probe(profile)],
        "fig1" => ["none", "xor_repeat", "otp", "otp_with_key"]
            .iter()
            .map(|n| preset(n, profile).map(|mut v| v.remove(0)))
            .collect::<Result<_>>()?,
        "fig2" => ["aes128_ecb", "aes128_ctr", "spn", "caesar", "aes128_ecb_ge"]
            .iter()
            .map(|n| preset(n, profile).map(|mut v| v.remove(0)))
            .collect::<Result<_>>()?,
        "fig3" => ["huncc", "huncc_full_aes", "probe"]
            .iter()
            .map(|n| preset(n, profile).map(|mut v| v.remove(0)))
            .collect::<Result<_>>()?,
        "table1" => super::SweepSpec::table1(profile).cells()?,
        other => {
            return Err(Error::InvalidScenario(format!(
                "unknown scenario `{other}`; known: {}",
                preset_names().join(", ")
            )))
        }
    })
}
