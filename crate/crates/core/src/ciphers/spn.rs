//! One-round substitution-permutation block cipher built from AES stages:
//! AddRoundKey(k0), SubBytes, ShiftRows, MixColumns, AddRoundKey(k1).

use super::aes::{
    add_round_key, inv_mix_columns, inv_shift_rows, inv_sub_bytes, mix_columns, shift_rows,
    sub_bytes, State, BLOCK_LEN,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Spn {
    k0: [u8; BLOCK_LEN],
    k1: [u8; BLOCK_LEN],
}

impl Spn {
    pub fn new(k0: [u8; BLOCK_LEN], k1: [u8; BLOCK_LEN]) -> Self {
        Spn { k0, k1 }
    }

    /// Splits 32 key bytes into the two round keys.
    pub fn from_key_bytes(key: &[u8]) -> Result<Self> {
        if key.len() != 2 * BLOCK_LEN {
            return Err(Error::InvalidKey(format!(
                "SPN needs {} key bytes, got {}",
                2 * BLOCK_LEN,
                key.len()
            )));
        }
        Ok(Spn {
            k0: key[..BLOCK_LEN].try_into().unwrap(),
            k1: key[BLOCK_LEN..].try_into().unwrap(),
        })
    }

    pub fn encrypt(&self, x: &[u8]) -> Result<Vec<u8>> {
        let mut s = to_state(x)?;
        add_round_key(&mut s, &self.k0);
        sub_bytes(&mut s);
        shift_rows(&mut s);
        mix_columns(&mut s);
        add_round_key(&mut s, &self.k1);
        Ok(s.to_vec())
    }

    pub fn decrypt(&self, y: &[u8]) -> Result<Vec<u8>> {
        let mut s = to_state(y)?;
        add_round_key(&mut s, &self.k1);
        inv_mix_columns(&mut s);
        inv_shift_rows(&mut s);
        inv_sub_bytes(&mut s);
        add_round_key(&mut s, &self.k0);
        Ok(s.to_vec())
    }
}

fn to_state(x: &[u8]) -> Result<State> {
    x.try_into().map_err(|_| {
        Error::InvalidBlock(format!("SPN block must be {BLOCK_LEN} bytes, got {}", x.len()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use rand::Rng;

    #[test]
    fn zero_keys_zero_block() {
        let mut s = [0u8; 16];
        sub_bytes(&mut s);
        assert_eq!(s, [0x63; 16]);
        // constant columns are fixed by ShiftRows and by MixColumns (2^3^1^1 = 1)
        let spn = Spn::new([0; 16], [0; 16]);
        assert_eq!(spn.encrypt(&[0; 16]).unwrap(), vec![0x63; 16]);
    }

    #[test]
    fn roundtrip_and_length_check() {
        let mut rng = seed::stream(5, "spn", 0);
        let spn = Spn::new(rng.random(), rng.random());
        for _ in 0..100 {
            let x: [u8; 16] = rng.random();
            assert_eq!(spn.decrypt(&spn.encrypt(&x).unwrap()).unwrap(), x);
        }
        assert!(spn.encrypt(&[0; 15]).is_err());
        assert!(Spn::from_key_bytes(&[0; 16]).is_err());
    }

    #[test]
    fn single_byte_flip_touches_one_column() {
        let mut rng = seed::stream(5, "spn", 1);
        let spn = Spn::new(rng.random(), rng.random());
        let x: [u8; 16] = rng.random();
        let y = spn.encrypt(&x).unwrap();
        for pos in 0..16 {
            for delta in 1..=255u8 {
                let mut x2 = x;
                x2[pos] ^= delta;
                let y2 = spn.encrypt(&x2).unwrap();
                let changed = y.iter().zip(&y2).filter(|(a, b)| a != b).count();
                assert!((1..=4).contains(&changed), "pos {pos} delta {delta}: {changed}");
            }
        }
    }
}
