//! Plaintext/output pair datasets for every cryptosystem under test.
//!
//! Sample `i` draws all of its randomness (plaintext, OTP pad, CTR nonce)
//! from its own stream derived from `(seed, i)`; keys and the generator
//! matrix come from dataset-wide streams. Building is therefore independent
//! of iteration order.

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize};

use super::{huncc_encrypt, HunccConfig};
use crate::ciphers::{
    aes128_ctr_encrypt, otp_encrypt, KeyMaterial, Scheme, Spn, BLOCK_LEN,
};
use crate::error::{Error, Result};
use crate::gf256::Gf256Matrix;
use crate::mine::Dataset;
use crate::seed;
use crate::sources::Source;

/// HUNCC options; the number of links is the number of channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HunccSpec {
    pub n_encrypted: usize,
}

impl Default for HunccSpec {
    fn default() -> Self {
        HunccSpec { n_encrypted: 1 }
    }
}

/// What turns plaintexts into the observed outputs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Cryptosystem {
    None,
    Otp,
    /// OTP ciphertext followed by the pad itself.
    OtpWithKey,
    XorRepeat,
    Caesar,
    Spn,
    Aes128Ecb,
    Aes128Ctr,
    Huncc(HunccSpec),
}

impl Cryptosystem {
    pub fn name(&self) -> &'static str {
        match self {
            Cryptosystem::None => "none",
            Cryptosystem::Otp => "otp",
            Cryptosystem::OtpWithKey => "otp_with_key",
            Cryptosystem::XorRepeat => "xor_repeat",
            Cryptosystem::Caesar => "caesar",
            Cryptosystem::Spn => "spn",
            Cryptosystem::Aes128Ecb => "aes128_ecb",
            Cryptosystem::Aes128Ctr => "aes128_ctr",
            Cryptosystem::Huncc(_) => "huncc",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "none" => Cryptosystem::None,
            "otp_with_key" => Cryptosystem::OtpWithKey,
            "huncc" => Cryptosystem::Huncc(HunccSpec::default()),
            other => match other.parse::<Scheme>()? {
                Scheme::Otp => Cryptosystem::Otp,
                Scheme::XorRepeat => Cryptosystem::XorRepeat,
                Scheme::Caesar => Cryptosystem::Caesar,
                Scheme::Spn => Cryptosystem::Spn,
                Scheme::Aes128Ecb => Cryptosystem::Aes128Ecb,
                Scheme::Aes128Ctr => Cryptosystem::Aes128Ctr,
            },
        })
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CryptosystemRepr {
    Name(String),
    Huncc {
        #[serde(rename = "type")]
        kind: String,
        #[serde(default)]
        n_encrypted: Option<usize>,
    },
}

impl<'de> Deserialize<'de> for Cryptosystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match CryptosystemRepr::deserialize(d)? {
            CryptosystemRepr::Name(n) => Cryptosystem::from_name(&n).map_err(D::Error::custom),
            CryptosystemRepr::Huncc { kind, n_encrypted } => {
                let sys = Cryptosystem::from_name(&kind).map_err(D::Error::custom)?;
                match (sys, n_encrypted) {
                    (Cryptosystem::Huncc(_), Some(n)) => Ok(Cryptosystem::Huncc(HunccSpec { n_encrypted: n })),
                    (s, None) => Ok(s),
                    (s, Some(_)) => Err(D::Error::custom(format!(
                        "`n_encrypted` only applies to huncc, not {}",
                        s.name()
                    ))),
                }
            }
        }
    }
}

/// Which plaintext bytes the estimator sees as `x`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeLayout {
    /// Every channel's message.
    #[default]
    AllMessages,
    /// Only the message of the constant channel.
    ConstantMessage,
}

/// Recipe for a pair dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub source: Source,
    pub system: Cryptosystem,
    /// Independent plaintext messages per sample (HUNCC links).
    #[serde(default = "one")]
    pub channels: usize,
    #[serde(default = "block")]
    pub msg_len: usize,
    /// Channel whose message is all-ones in every sample.
    #[serde(default)]
    pub constant_channel: Option<usize>,
    #[serde(default)]
    pub x_layout: ProbeLayout,
}

fn one() -> usize {
    1
}

fn block() -> usize {
    BLOCK_LEN
}

impl PairSpec {
    pub fn single(source: Source, system: Cryptosystem) -> Self {
        PairSpec {
            source,
            system,
            channels: 1,
            msg_len: BLOCK_LEN,
            constant_channel: None,
            x_layout: ProbeLayout::AllMessages,
        }
    }

    pub fn channels(mut self, n: usize) -> Self {
        self.channels = n;
        self
    }

    pub fn plaintext_len(&self) -> usize {
        self.channels * self.msg_len
    }

    pub fn dx(&self) -> usize {
        match self.x_layout {
            ProbeLayout::AllMessages => self.plaintext_len(),
            ProbeLayout::ConstantMessage => self.msg_len,
        }
    }

    pub fn dy(&self) -> usize {
        match self.system {
            Cryptosystem::OtpWithKey => 2 * self.plaintext_len(),
            _ => self.plaintext_len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScenario(m));
        self.source.validate()?;
        if self.channels == 0 || self.msg_len == 0 {
            return bad("channels and message length must be nonzero".into());
        }
        if let Some(c) = self.constant_channel {
            if c >= self.channels {
                return bad(format!("constant channel {c} of {}", self.channels));
            }
        }
        if self.x_layout == ProbeLayout::ConstantMessage && self.constant_channel.is_none() {
            return bad("constant_message layout needs a constant channel".into());
        }
        let aes_like = matches!(
            self.system,
            Cryptosystem::Spn | Cryptosystem::Aes128Ecb | Cryptosystem::Huncc(_)
        );
        if aes_like && self.msg_len % BLOCK_LEN != 0 {
            return bad(format!(
                "{} needs {BLOCK_LEN}-byte blocks, message length is {}",
                self.system.name(),
                self.msg_len
            ));
        }
        if let Cryptosystem::Huncc(h) = self.system {
            if h.n_encrypted == 0 || h.n_encrypted > self.channels {
                return bad(format!(
                    "{} encrypted links out of {}",
                    h.n_encrypted, self.channels
                ));
            }
        }
        Ok(())
    }
}

enum Prepared {
    None,
    Otp { with_key: bool },
    Fixed(KeyMaterial),
    Spn(Spn),
    Ctr([u8; BLOCK_LEN]),
    Huncc(HunccConfig),
}

fn prepare(spec: &PairSpec, seed: u64) -> Result<Prepared> {
    let mut keys = seed::stream(seed, "dataset/keys", 0);
    let len = spec.plaintext_len();
    Ok(match spec.system {
        Cryptosystem::None => Prepared::None,
        Cryptosystem::Otp => Prepared::Otp { with_key: false },
        Cryptosystem::OtpWithKey => Prepared::Otp { with_key: true },
        Cryptosystem::XorRepeat => Prepared::Fixed(KeyMaterial::random(Scheme::XorRepeat, len, &mut keys)),
        Cryptosystem::Caesar => Prepared::Fixed(KeyMaterial::random(Scheme::Caesar, len, &mut keys)),
        Cryptosystem::Aes128Ecb => Prepared::Fixed(KeyMaterial::random(Scheme::Aes128Ecb, len, &mut keys)),
        Cryptosystem::Spn => {
            let km = KeyMaterial::random(Scheme::Spn, len, &mut keys);
            Prepared::Spn(Spn::from_key_bytes(km.key())?)
        }
        Cryptosystem::Aes128Ctr => Prepared::Ctr(keys.random()),
        Cryptosystem::Huncc(h) => {
            let g = Gf256Matrix::random_invertible(
                spec.channels,
                &mut seed::stream(seed, "dataset/generator", 0),
            )?;
            Prepared::Huncc(HunccConfig {
                n_links: spec.channels,
                n_encrypted: h.n_encrypted,
                msg_len_bytes: spec.msg_len,
                g,
                cipher_key: KeyMaterial::random(Scheme::Aes128Ecb, BLOCK_LEN, &mut keys),
            })
        }
    })
}

fn sample<R: Rng + ?Sized>(spec: &PairSpec, prepared: &Prepared, rng: &mut R) -> Result<(Vec<u8>, Vec<u8>)> {
    let mut plain = Vec::with_capacity(spec.plaintext_len());
    for c in 0..spec.channels {
        if spec.constant_channel == Some(c) {
            plain.extend(std::iter::repeat_n(0xFF, spec.msg_len));
        } else {
            plain.extend(spec.source.bytes(spec.msg_len, rng)?);
        }
    }
    let y = match prepared {
        Prepared::None => plain.clone(),
        Prepared::Otp { with_key } => {
            let (mut y, k) = otp_encrypt(&plain, rng);
            if *with_key {
                y.extend(k);
            }
            y
        }
        Prepared::Fixed(km) => km.encrypt(&plain)?,
        Prepared::Spn(spn) => {
            let mut y = Vec::with_capacity(plain.len());
            for block in plain.chunks_exact(BLOCK_LEN) {
                y.extend(spn.encrypt(block)?);
            }
            y
        }
        Prepared::Ctr(key) => {
            let nonce: [u8; BLOCK_LEN] = rng.random();
            aes128_ctr_encrypt(&plain, key, &nonce)
        }
        Prepared::Huncc(cfg) => {
            let m = Gf256Matrix::from_vec(spec.channels, spec.msg_len, plain.clone())?;
            huncc_encrypt(&m, cfg)?.to_bytes()
        }
    };
    let x = match spec.x_layout {
        ProbeLayout::AllMessages => plain,
        ProbeLayout::ConstantMessage => {
            let c = spec.constant_channel.unwrap_or(0);
            plain[c * spec.msg_len..(c + 1) * spec.msg_len].to_vec()
        }
    };
    Ok((x, y))
}

/// `n_samples` pairs for `spec`, deterministic in `seed`.
pub fn build_pair_dataset(spec: &PairSpec, n_samples: usize, seed: u64) -> Result<Dataset> {
    spec.validate()?;
    if n_samples == 0 {
        return Err(Error::InvalidScenario("dataset needs at least one sample".into()));
    }
    let prepared = prepare(spec, seed)?;
    let mut ds = Dataset::with_capacity(spec.dx(), spec.dy(), n_samples);
    for i in 0..n_samples {
        let mut rng = seed::stream(seed, "dataset/sample", i as u64);
        let (x, y) = sample(spec, &prepared, &mut rng)?;
        ds.push(&x, &y)?;
    }
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn no_encryption_copies() {
        let d = build_pair_dataset(&PairSpec::single(Source::Uniform, Cryptosystem::None), 100, 1).unwrap();
        for i in 0..d.len() {
            assert_eq!(d.x_row(i), d.y_row(i));
        }
        assert_eq!((d.dx(), d.dy()), (16, 16));
    }

    #[test]
    fn otp_pads_never_repeat() {
        let spec = PairSpec::single(Source::Uniform, Cryptosystem::OtpWithKey);
        let d = build_pair_dataset(&spec, 100_000, 2).unwrap();
        assert_eq!(d.dy(), 32);
        let mut pads = HashSet::new();
        for i in 0..d.len() {
            let y = d.y_row(i);
            let (ct, pad) = y.split_at(16);
            let x = d.x_row(i);
            assert!(x.iter().zip(pad).zip(ct).all(|((a, k), c)| a ^ k == *c));
            assert!(pads.insert(pad.to_vec()));
        }
    }

    #[test]
    fn huncc_scale_shapes() {
        let spec = PairSpec::single(Source::ge(0.5).unwrap(), Cryptosystem::Huncc(HunccSpec::default())).channels(8);
        let d = build_pair_dataset(&spec, 50, 3).unwrap();
        assert_eq!((d.dx(), d.dy()), (128, 128));
        let probe = PairSpec {
            constant_channel: Some(3),
            x_layout: ProbeLayout::ConstantMessage,
            ..PairSpec::single(Source::Uniform, Cryptosystem::Huncc(HunccSpec::default())).channels(8)
        };
        let d = build_pair_dataset(&probe, 10, 3).unwrap();
        assert_eq!(d.input_dim(), 144);
        assert!(d.x_row(0).iter().all(|&b| b == 0xFF));
    }

    #[test]
    fn deterministic_per_seed() {
        for sys in ["xor_repeat", "caesar", "spn", "aes128_ecb", "aes128_ctr", "otp", "huncc"] {
            let spec = PairSpec::single(Source::Uniform, Cryptosystem::from_name(sys).unwrap()).channels(2);
            let a = build_pair_dataset(&spec, 200, 9).unwrap();
            let b = build_pair_dataset(&spec, 200, 9).unwrap();
            let c = build_pair_dataset(&spec, 200, 10).unwrap();
            assert_eq!(a, b, "{sys}");
            assert_ne!(a, c, "{sys}");
        }
    }

    #[test]
    fn ecb_repeats_equal_blocks_ctr_does_not() {
        let spec = PairSpec::single(Source::Constant { byte: 7 }, Cryptosystem::Aes128Ecb);
        let d = build_pair_dataset(&spec, 10, 4).unwrap();
        assert!((1..10).all(|i| d.y_row(i) == d.y_row(0)));
        let spec = PairSpec::single(Source::Constant { byte: 7 }, Cryptosystem::Aes128Ctr);
        let d = build_pair_dataset(&spec, 10, 4).unwrap();
        assert!((1..10).all(|i| d.y_row(i) != d.y_row(0)));
    }

    #[test]
    fn config_forms_and_validation() {
        let s: Cryptosystem = serde_json::from_str(r#""aes128_ecb""#).unwrap();
        assert_eq!(s, Cryptosystem::Aes128Ecb);
        let s: Cryptosystem = serde_json::from_str(r#"{"type": "huncc", "n_encrypted": 2}"#).unwrap();
        assert_eq!(s, Cryptosystem::Huncc(HunccSpec { n_encrypted: 2 }));
        assert!(serde_json::from_str::<Cryptosystem>(r#""rot13""#).is_err());
        assert!(serde_json::from_str::<Cryptosystem>(r#"{"type": "otp", "n_encrypted": 2}"#).is_err());

        let mut spec = PairSpec::single(Source::Uniform, Cryptosystem::Huncc(HunccSpec { n_encrypted: 3 })).channels(2);
        assert!(spec.validate().is_err());
        spec.system = Cryptosystem::Aes128Ecb;
        spec.msg_len = 10;
        assert!(spec.validate().is_err());
        assert!(build_pair_dataset(&PairSpec::single(Source::Uniform, Cryptosystem::None), 0, 1).is_err());
    }
}
