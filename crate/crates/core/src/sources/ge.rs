//! Symmetric two-state Gilbert-Elliott bit source.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    Zero,
    One,
    /// Uniform over both states, which is the stationary law of the chain.
    #[default]
    Stationary,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeParams {
    /// Probability of switching state at each step, in both directions.
    pub alpha: f64,
    #[serde(default)]
    pub initial_state: InitialState,
}

impl GeParams {
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_initial(alpha, InitialState::Stationary)
    }

    pub fn with_initial(alpha: f64, initial_state: InitialState) -> Result<Self> {
        let p = GeParams {
            alpha,
            initial_state,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParam(format!(
                "GE alpha must lie in [0, 1], got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// A sequence of bits, one per `u8` (0 or 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitStream(pub Vec<u8>);

impl BitStream {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// MSB-first packing; the length must be a multiple of 8.
    pub fn pack(&self) -> Result<Vec<u8>> {
        if self.0.len() % 8 != 0 {
            return Err(Error::InvalidParam(format!(
                "cannot pack {} bits into whole bytes",
                self.0.len()
            )));
        }
        Ok(self
            .0
            .chunks_exact(8)
            .map(|c| c.iter().fold(0u8, |acc, &b| (acc << 1) | b))
            .collect())
    }

    pub fn unpack(bytes: &[u8]) -> BitStream {
        BitStream(
            bytes
                .iter()
                .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1))
                .collect(),
        )
    }
}

/// Emits the chain state at each step, switching with probability `alpha`
/// before each subsequent bit.
pub fn ge_bits<R: Rng + ?Sized>(params: &GeParams, count: usize, rng: &mut R) -> Result<BitStream> {
    params.validate()?;
    if count == 0 {
        return Err(Error::InvalidParam("bit count must be at least 1".into()));
    }
    let mut state = match params.initial_state {
        InitialState::Zero => 0u8,
        InitialState::One => 1,
        InitialState::Stationary => rng.random_bool(0.5) as u8,
    };
    let mut bits = Vec::with_capacity(count);
    bits.push(state);
    for _ in 1..count {
        if rng.random_bool(params.alpha) {
            state ^= 1;
        }
        bits.push(state);
    }
    Ok(BitStream(bits))
}

/// GE bits packed into `n_bytes` bytes.
pub fn ge_bytes<R: Rng + ?Sized>(params: &GeParams, n_bytes: usize, rng: &mut R) -> Result<Vec<u8>> {
    ge_bits(params, 8 * n_bytes, rng)?.pack()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    fn lag1_agreement(bits: &[u8]) -> f64 {
        let same = bits.windows(2).filter(|w| w[0] == w[1]).count();
        same as f64 / (bits.len() - 1) as f64
    }

    #[test]
    fn absorbing_when_alpha_zero() {
        let p = GeParams::with_initial(0.0, InitialState::One).unwrap();
        let b = ge_bits(&p, 1000, &mut seed::stream(0, "ge", 0)).unwrap();
        assert!(b.0.iter().all(|&x| x == 1));
        let p = GeParams::with_initial(0.0, InitialState::Zero).unwrap();
        let b = ge_bytes(&p, 4, &mut seed::stream(0, "ge", 0)).unwrap();
        assert_eq!(b, vec![0; 4]);
    }

    #[test]
    fn fair_bits_at_half() {
        let n = 1_000_000;
        let b = ge_bits(&GeParams::new(0.5).unwrap(), n, &mut seed::stream(1, "ge", 0)).unwrap();
        // agreement rate 1/2, binomial sd sqrt(n)/2
        let agree = lag1_agreement(&b.0);
        let sd = 0.5 / ((n - 1) as f64).sqrt();
        assert!((agree - 0.5).abs() < 4.0 * sd, "agreement {agree}");
    }

    #[test]
    fn sticky_chain_at_one_percent() {
        let b = ge_bits(&GeParams::new(0.01).unwrap(), 1_000_000, &mut seed::stream(2, "ge", 0)).unwrap();
        let agree = lag1_agreement(&b.0);
        assert!((agree - 0.99).abs() < 0.005, "agreement {agree}");
    }

    #[test]
    fn stationary_fraction_of_ones() {
        let n = 1_000_000;
        for (i, alpha) in [0.05, 0.2, 0.5, 1.0].into_iter().enumerate() {
            let b = ge_bits(&GeParams::new(alpha).unwrap(), n, &mut seed::stream(3, "ge", i as u64)).unwrap();
            let frac = b.0.iter().map(|&x| x as f64).sum::<f64>() / n as f64;
            // variance of the sample mean for a symmetric chain with
            // lag correlation rho = 1 - 2 alpha: (1/4n)(1 + rho)/(1 - rho)
            let rho = 1.0 - 2.0 * alpha;
            let sd = if alpha == 1.0 {
                0.5 / n as f64
            } else {
                (0.25 / n as f64 * (1.0 + rho) / (1.0 - rho)).sqrt()
            };
            assert!((frac - 0.5).abs() <= 4.0 * sd + 1e-12, "alpha {alpha}: {frac}");
        }
    }

    #[test]
    fn packing_is_msb_first() {
        let bs = BitStream(vec![1, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(bs.pack().unwrap(), vec![0x81, 0x55]);
        assert_eq!(BitStream::unpack(&[0x81, 0x55]), bs);
        assert!(BitStream(vec![1, 0, 1]).pack().is_err());
    }

    #[test]
    fn rejects_bad_params() {
        assert!(GeParams::new(-0.1).is_err());
        assert!(GeParams::new(1.5).is_err());
        let p = GeParams::new(0.3).unwrap();
        assert!(ge_bits(&p, 0, &mut seed::stream(0, "ge", 0)).is_err());
    }
}
