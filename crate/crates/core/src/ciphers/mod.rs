//! The encryption schemes under analysis.
//!
//! Each scheme is a deterministic function of the plaintext, dataset-wide key
//! material and, for OTP and CTR, explicit per-sample randomness. None of
//! this is hardened crypto: it exists to produce plaintext/ciphertext pairs.

pub mod aes;
pub mod spn;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use aes::{Aes128, BLOCK_LEN};
pub use spn::Spn;

/// Cipher families that take key material.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Otp,
    XorRepeat,
    Caesar,
    Spn,
    Aes128Ecb,
    Aes128Ctr,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Otp => "otp",
            Scheme::XorRepeat => "xor_repeat",
            Scheme::Caesar => "caesar",
            Scheme::Spn => "spn",
            Scheme::Aes128Ecb => "aes128_ecb",
            Scheme::Aes128Ctr => "aes128_ctr",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "otp" => Scheme::Otp,
            "xor_repeat" => Scheme::XorRepeat,
            "caesar" => Scheme::Caesar,
            "spn" => Scheme::Spn,
            "aes128_ecb" => Scheme::Aes128Ecb,
            "aes128_ctr" => Scheme::Aes128Ctr,
            other => return Err(Error::InvalidScenario(format!("unknown scheme `{other}`"))),
        })
    }
}

/// Key bytes for a scheme, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyMaterial {
    scheme: Scheme,
    key: Vec<u8>,
    nonce: Option<[u8; BLOCK_LEN]>,
}

impl KeyMaterial {
    pub fn new(scheme: Scheme, key: Vec<u8>, nonce: Option<[u8; BLOCK_LEN]>) -> Result<Self> {
        let want = match scheme {
            Scheme::Aes128Ecb | Scheme::Aes128Ctr => Some(BLOCK_LEN),
            Scheme::Caesar => Some(1),
            Scheme::Spn => Some(2 * BLOCK_LEN),
            Scheme::Otp | Scheme::XorRepeat => None,
        };
        if let Some(n) = want {
            if key.len() != n {
                return Err(Error::InvalidKey(format!(
                    "{scheme} needs {n} key bytes, got {}",
                    key.len()
                )));
            }
        } else if key.is_empty() {
            return Err(Error::InvalidKey(format!("{scheme} key must be nonempty")));
        }
        if nonce.is_some() && scheme != Scheme::Aes128Ctr {
            return Err(Error::InvalidKey(format!("{scheme} takes no nonce")));
        }
        Ok(KeyMaterial { scheme, key, nonce })
    }

    /// Fresh dataset-wide key material. XOR keys are `block_len` bytes; OTP
    /// material here is only a template since pads are drawn per sample.
    /// CTR material carries a random nonce.
    pub fn random<R: Rng + ?Sized>(scheme: Scheme, block_len: usize, rng: &mut R) -> Self {
        let len = match scheme {
            Scheme::Aes128Ecb | Scheme::Aes128Ctr => BLOCK_LEN,
            Scheme::Caesar => 1,
            Scheme::Spn => 2 * BLOCK_LEN,
            Scheme::Otp | Scheme::XorRepeat => block_len.max(1),
        };
        let mut key = vec![0u8; len];
        rng.fill(&mut key[..]);
        let nonce = (scheme == Scheme::Aes128Ctr).then(|| rng.random());
        KeyMaterial { scheme, key, nonce }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn key(&self) -> &[u8] {
        &self.key
    }

    pub fn nonce(&self) -> Option<&[u8; BLOCK_LEN]> {
        self.nonce.as_ref()
    }

    pub(crate) fn aes_key(&self) -> Result<[u8; BLOCK_LEN]> {
        self.key.as_slice().try_into().map_err(|_| {
            Error::InvalidKey(format!("AES-128 needs 16 key bytes, got {}", self.key.len()))
        })
    }

    /// Encrypts with the fixed key. OTP has no fixed key and CTR needs a
    /// nonce in the key material.
    pub fn encrypt(&self, x: &[u8]) -> Result<Vec<u8>> {
        match self.scheme {
            Scheme::XorRepeat => xor_repeating(x, &self.key),
            Scheme::Caesar => Ok(caesar_encrypt(x, self.key[0])),
            Scheme::Spn => Spn::from_key_bytes(&self.key)?.encrypt(x),
            Scheme::Aes128Ecb => aes128_ecb_encrypt(x, &self.aes_key()?),
            Scheme::Aes128Ctr => Ok(aes128_ctr_encrypt(x, &self.aes_key()?, self.ctr_nonce()?)),
            Scheme::Otp => Err(Error::InvalidKey("OTP pads are per sample".into())),
        }
    }

    pub fn decrypt(&self, y: &[u8]) -> Result<Vec<u8>> {
        match self.scheme {
            Scheme::XorRepeat => xor_repeating(y, &self.key),
            Scheme::Caesar => Ok(caesar_decrypt(y, self.key[0])),
            Scheme::Spn => Spn::from_key_bytes(&self.key)?.decrypt(y),
            Scheme::Aes128Ecb => aes128_ecb_decrypt(y, &self.aes_key()?),
            Scheme::Aes128Ctr => Ok(aes128_ctr_decrypt(y, &self.aes_key()?, self.ctr_nonce()?)),
            Scheme::Otp => Err(Error::InvalidKey("OTP pads are per sample".into())),
        }
    }

    fn ctr_nonce(&self) -> Result<&[u8; BLOCK_LEN]> {
        self.nonce
            .as_ref()
            .ok_or_else(|| Error::InvalidKey("CTR key material has no nonce".into()))
    }
}

/// One-time pad: returns `(x ⊕ k, k)` for a fresh uniform pad `k`.
pub fn otp_encrypt<R: Rng + ?Sized>(x: &[u8], rng: &mut R) -> (Vec<u8>, Vec<u8>) {
    let mut k = vec![0u8; x.len()];
    rng.fill(&mut k[..]);
    let y = x.iter().zip(&k).map(|(a, b)| a ^ b).collect();
    (y, k)
}

/// `y[i] = x[i] ⊕ k[i mod |k|]`. Also its own inverse.
pub fn xor_repeating(x: &[u8], k: &[u8]) -> Result<Vec<u8>> {
    if k.is_empty() {
        return Err(Error::InvalidKey("repeating-XOR key must be nonempty".into()));
    }
    Ok(x.iter()
        .zip(k.iter().cycle())
        .map(|(a, b)| a ^ b)
        .collect())
}

/// Bytewise shift mod 256.
pub fn caesar_encrypt(x: &[u8], shift: u8) -> Vec<u8> {
    x.iter().map(|b| b.wrapping_add(shift)).collect()
}

pub fn caesar_decrypt(y: &[u8], shift: u8) -> Vec<u8> {
    caesar_encrypt(y, shift.wrapping_neg())
}

fn check_aes_len(len: usize) -> Result<()> {
    if len == 0 || len % BLOCK_LEN != 0 {
        return Err(Error::InvalidBlock(format!(
            "AES input must be a nonzero multiple of {BLOCK_LEN} bytes, got {len}"
        )));
    }
    Ok(())
}

pub fn aes128_ecb_encrypt(x: &[u8], key: &[u8; BLOCK_LEN]) -> Result<Vec<u8>> {
    check_aes_len(x.len())?;
    Ok(ecb_with(&Aes128::new(key), x, Aes128::encrypt_block))
}

pub fn aes128_ecb_decrypt(y: &[u8], key: &[u8; BLOCK_LEN]) -> Result<Vec<u8>> {
    check_aes_len(y.len())?;
    Ok(ecb_with(&Aes128::new(key), y, Aes128::decrypt_block))
}

pub(crate) fn ecb_with(
    aes: &Aes128,
    data: &[u8],
    f: fn(&Aes128, &mut [u8; BLOCK_LEN]),
) -> Vec<u8> {
    let mut out = data.to_vec();
    for chunk in out.chunks_exact_mut(BLOCK_LEN) {
        let block: &mut [u8; BLOCK_LEN] = chunk.try_into().unwrap();
        f(aes, block);
    }
    out
}

/// Counter block `j`: the nonce read as a big-endian 128-bit integer plus `j`.
pub fn ctr_counter_block(nonce: &[u8; BLOCK_LEN], j: u64) -> [u8; BLOCK_LEN] {
    u128::from_be_bytes(*nonce)
        .wrapping_add(j as u128)
        .to_be_bytes()
}

/// CTR mode. A ragged final block uses a truncated keystream.
pub fn aes128_ctr_encrypt(x: &[u8], key: &[u8; BLOCK_LEN], nonce: &[u8; BLOCK_LEN]) -> Vec<u8> {
    ctr_with(&Aes128::new(key), x, nonce)
}

pub(crate) fn ctr_with(aes: &Aes128, x: &[u8], nonce: &[u8; BLOCK_LEN]) -> Vec<u8> {
    let mut out = x.to_vec();
    for (j, chunk) in out.chunks_mut(BLOCK_LEN).enumerate() {
        let mut ks = ctr_counter_block(nonce, j as u64);
        aes.encrypt_block(&mut ks);
        for (b, k) in chunk.iter_mut().zip(ks) {
            *b ^= k;
        }
    }
    out
}

pub fn aes128_ctr_decrypt(y: &[u8], key: &[u8; BLOCK_LEN], nonce: &[u8; BLOCK_LEN]) -> Vec<u8> {
    aes128_ctr_encrypt(y, key, nonce)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use std::collections::HashSet;

    fn h(s: &str) -> Vec<u8> {
        hex::decode(s).unwrap()
    }

    fn key16(s: &str) -> [u8; 16] {
        h(s).try_into().unwrap()
    }

    #[test]
    fn ecb_known_answers() {
        let y = aes128_ecb_encrypt(
            &h("00112233445566778899aabbccddeeff"),
            &key16("000102030405060708090a0b0c0d0e0f"),
        )
        .unwrap();
        assert_eq!(hex::encode(y), "69c4e0d86a7b0430d8cdb78070b4c55a");

        // SP 800-38A F.1.1
        let key = key16("2b7e151628aed2a6abf7158809cf4f3c");
        let pt = h("6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e51");
        let ct = aes128_ecb_encrypt(&pt, &key).unwrap();
        assert_eq!(
            hex::encode(&ct),
            "3ad77bb40d7a3660a89ecaf32466ef97f5d3d58503b9699de785895a96fdbaaf"
        );
        assert_eq!(aes128_ecb_decrypt(&ct, &key).unwrap(), pt);
    }

    #[test]
    fn ecb_rejects_ragged_and_repeats_blocks() {
        let key = [7u8; 16];
        assert!(aes128_ecb_encrypt(&[0; 17], &key).is_err());
        assert!(aes128_ecb_encrypt(&[], &key).is_err());
        let y = aes128_ecb_encrypt(&[0xAB; 32], &key).unwrap();
        assert_eq!(y[..16], y[16..]);
    }

    #[test]
    fn ctr_known_answer() {
        // SP 800-38A F.5.1, first two blocks
        let key = key16("2b7e151628aed2a6abf7158809cf4f3c");
        let nonce = key16("f0f1f2f3f4f5f6f7f8f9fafbfcfdfeff");
        let pt = h("6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e51");
        let ct = aes128_ctr_encrypt(&pt, &key, &nonce);
        assert_eq!(
            hex::encode(&ct),
            "874d6191b620e3261bef6864990db6ce9806f66b7970fdff8617187bb9fffdff"
        );
        assert_eq!(aes128_ctr_decrypt(&ct, &key, &nonce), pt);
    }

    #[test]
    fn ctr_keystream_is_ecb_of_counters() {
        let mut rng = seed::stream(11, "ctr", 0);
        let key: [u8; 16] = rng.random();
        let mut nonce: [u8; 16] = rng.random();
        nonce[8..].fill(0xFF); // force a carry across the low 64 bits
        let ks = aes128_ctr_encrypt(&[0u8; 48], &key, &nonce);
        let counters: Vec<u8> = (0..3).flat_map(|j| ctr_counter_block(&nonce, j)).collect();
        assert_eq!(ks, aes128_ecb_encrypt(&counters, &key).unwrap());
        assert_eq!(ctr_counter_block(&[0xFF; 16], 1), [0; 16]);
        // ragged tail
        assert_eq!(aes128_ctr_encrypt(&[0u8; 20], &key, &nonce), ks[..20]);
    }

    #[test]
    fn otp_properties() {
        let mut rng = seed::stream(1, "otp", 0);
        let (y, k) = otp_encrypt(&[0u8; 16], &mut rng);
        assert_eq!(y, k);
        let x: [u8; 16] = rng.random();
        let (y, k) = otp_encrypt(&x, &mut rng);
        assert_eq!(xor_repeating(&y, &k).unwrap(), x);
    }

    /// Byte histogram of OTP output on uniform plaintexts stays within a
    /// 4-sigma band of the chi-square distribution with 255 dof.
    #[test]
    fn otp_output_histogram_uniform() {
        let mut rng = seed::stream(2, "otp", 0);
        let mut counts = [0u64; 256];
        let n_samples = 100_000;
        for _ in 0..n_samples {
            let x: [u8; 16] = rng.random();
            let (y, _) = otp_encrypt(&x, &mut rng);
            for b in y {
                counts[b as usize] += 1;
            }
        }
        let total = (n_samples * 16) as f64;
        let expect = total / 256.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        let dof = 255.0f64;
        assert!((chi2 - dof).abs() < 4.0 * (2.0 * dof).sqrt(), "chi2 = {chi2}");
    }

    #[test]
    fn xor_and_caesar() {
        let x: Vec<u8> = (0..16).collect();
        assert_eq!(xor_repeating(&x, &[0; 16]).unwrap(), x);
        assert_eq!(
            xor_repeating(&x, &[0xFF]).unwrap(),
            x.iter().map(|b| !b).collect::<Vec<_>>()
        );
        let k = [1, 2, 3];
        assert_eq!(xor_repeating(&xor_repeating(&x, &k).unwrap(), &k).unwrap(), x);
        assert!(xor_repeating(&x, &[]).is_err());

        assert_eq!(caesar_encrypt(&x, 0), x);
        assert_eq!(caesar_encrypt(&[0xFF], 1), vec![0x00]);
        for s in [1u8, 3, 128, 255] {
            assert_eq!(caesar_encrypt(&caesar_encrypt(&x, s), 0u8.wrapping_sub(s)), x);
            assert_eq!(caesar_decrypt(&caesar_encrypt(&x, s), s), x);
        }
    }

    #[test]
    fn ctr_fresh_nonces_never_collide() {
        let mut rng = seed::stream(3, "ctr", 0);
        let key: [u8; 16] = rng.random();
        let x = [0x42u8; 16];
        let mut seen = HashSet::new();
        for _ in 0..100_000 {
            let nonce: [u8; 16] = rng.random();
            assert!(seen.insert(aes128_ctr_encrypt(&x, &key, &nonce)));
        }
    }

    #[test]
    fn key_material_roundtrips() {
        let mut rng = seed::stream(4, "km", 0);
        let x: [u8; 32] = rng.random();
        for scheme in [Scheme::XorRepeat, Scheme::Caesar, Scheme::Spn, Scheme::Aes128Ecb, Scheme::Aes128Ctr] {
            let mut km = KeyMaterial::random(scheme, 16, &mut rng);
            if scheme == Scheme::Aes128Ctr {
                km = KeyMaterial::new(scheme, km.key().to_vec(), Some(rng.random())).unwrap();
            }
            let x: &[u8] = if scheme == Scheme::Spn { &x[..16] } else { &x };
            let y = km.encrypt(x).unwrap();
            assert_ne!(y, x, "{scheme}");
            assert_eq!(km.decrypt(&y).unwrap(), x, "{scheme}");
        }
        let otp = KeyMaterial::random(Scheme::Otp, 16, &mut rng);
        assert!(otp.encrypt(&x).is_err());
        let ctr = KeyMaterial::new(Scheme::Aes128Ctr, vec![0; 16], None).unwrap();
        assert!(ctr.encrypt(&x).is_err());
    }

    #[test]
    fn key_material_validation() {
        assert!(KeyMaterial::new(Scheme::Aes128Ecb, vec![0; 15], None).is_err());
        assert!(KeyMaterial::new(Scheme::Caesar, vec![0; 2], None).is_err());
        assert!(KeyMaterial::new(Scheme::Caesar, vec![3], None).is_ok());
        assert!(KeyMaterial::new(Scheme::XorRepeat, vec![], None).is_err());
        assert!(KeyMaterial::new(Scheme::Aes128Ecb, vec![0; 16], Some([0; 16])).is_err());
        assert!(KeyMaterial::new(Scheme::Aes128Ctr, vec![0; 16], Some([0; 16])).is_ok());
        for s in ["otp", "xor_repeat", "caesar", "spn", "aes128_ecb", "aes128_ctr"] {
            assert_eq!(s.parse::<Scheme>().unwrap().to_string(), s);
        }
        assert!("rot13".parse::<Scheme>().is_err());
    }
}
