//! Plaintext sources and the uniformity measurements applied to them.

pub mod entropy;
pub mod ge;
pub mod lzw;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
pub use entropy::{byte_entropy, entropy_of_counts};
pub use ge::{ge_bits, ge_bytes, BitStream, GeParams, InitialState};
pub use lzw::{lzw_codes, lzw_compress, lzw_decompress};

/// Bits per message in the HUNCC uniformity experiments.
pub const MESSAGE_BITS: usize = 128;

/// Where plaintext bytes come from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Source {
    Uniform,
    /// Every byte equal to `byte` (all-ones by default).
    Constant { byte: u8 },
    Ge(GeParams),
    /// One uniform nibble `v` per message, every byte equal to `v·0x11`.
    ReplicatedNibble,
}

impl Source {
    pub fn ge(alpha: f64) -> Result<Self> {
        Ok(Source::Ge(GeParams::new(alpha)?))
    }

    /// `n` plaintext bytes. GE output is one chain of `8n` bits.
    pub fn bytes<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<u8>> {
        match self {
            Source::Uniform => uniform_bytes(n, rng),
            Source::Constant { byte } => {
                if n == 0 {
                    return Err(Error::InvalidParam("byte count must be at least 1".into()));
                }
                Ok(vec![*byte; n])
            }
            Source::Ge(p) => ge_bytes(p, n, rng),
            Source::ReplicatedNibble => {
                if n == 0 {
                    return Err(Error::InvalidParam("byte count must be at least 1".into()));
                }
                Ok(vec![(rng.random::<u8>() & 0x0F) * 0x11; n])
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Source::Ge(p) => p.validate(),
            _ => Ok(()),
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            Source::Ge(p) => Some(p.alpha),
            _ => None,
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum TaggedSource {
    Uniform,
    Constant {
        #[serde(default = "all_ones")]
        byte: u8,
    },
    Ge {
        alpha: f64,
        #[serde(default)]
        initial_state: InitialState,
    },
    ReplicatedNibble,
}

fn all_ones() -> u8 {
    0xFF
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SourceRepr {
    Name(String),
    Tagged(TaggedSource),
}

impl<'de> Deserialize<'de> for Source {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let s = match SourceRepr::deserialize(d)? {
            SourceRepr::Name(n) => match n.as_str() {
                "uniform" => Source::Uniform,
                "constant" => Source::Constant { byte: all_ones() },
                "nibble" | "replicated_nibble" => Source::ReplicatedNibble,
                other => {
                    return Err(D::Error::custom(format!(
                        "unknown source `{other}` (GE sources need an alpha)"
                    )))
                }
            },
            SourceRepr::Tagged(TaggedSource::Uniform) => Source::Uniform,
            SourceRepr::Tagged(TaggedSource::Constant { byte }) => Source::Constant { byte },
            SourceRepr::Tagged(TaggedSource::ReplicatedNibble) => Source::ReplicatedNibble,
            SourceRepr::Tagged(TaggedSource::Ge {
                alpha,
                initial_state,
            }) => Source::Ge(
                GeParams::with_initial(alpha, initial_state).map_err(D::Error::custom)?,
            ),
        };
        Ok(s)
    }
}

/// `n` i.i.d. uniform bytes.
pub fn uniform_bytes<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<u8>> {
    if n == 0 {
        return Err(Error::InvalidParam("byte count must be at least 1".into()));
    }
    let mut v = vec![0u8; n];
    rng.fill(&mut v[..]);
    Ok(v)
}

/// Generates `total_bits` of GE output, splits it into messages of
/// `message_bits`, LZW-compresses each message on its own and returns the
/// mean plug-in byte entropy of the compressed messages. Passing
/// `message_bits == total_bits` compresses the stream as a whole.
pub fn entropy_after_compression<R: Rng + ?Sized>(
    params: &GeParams,
    total_bits: usize,
    message_bits: usize,
    rng: &mut R,
) -> Result<f64> {
    if message_bits == 0 || message_bits % 8 != 0 || total_bits < message_bits {
        return Err(Error::InvalidParam(format!(
            "cannot split {total_bits} bits into {message_bits}-bit messages"
        )));
    }
    let n_messages = total_bits / message_bits;
    let mut sum = 0.0;
    for _ in 0..n_messages {
        let packed = ge_bits(params, message_bits, rng)?.pack()?;
        sum += byte_entropy(&lzw_compress(&packed)?)?;
    }
    Ok(sum / n_messages as f64)
}
