//! Hybrid universal network coding cryptosystem.
//!
//! `n` messages of `L` bytes are mixed by an invertible generator `G` over
//! GF(2^8), and the first `n_encrypted` coded links are then encrypted with
//! a conventional cipher (AES-128 ECB by default). The remaining links go out
//! coded but in the clear. A receiver holding `G` and the key inverts both
//! steps.

pub mod dataset;
pub mod format;

use rand::Rng;

use crate::ciphers::{KeyMaterial, Scheme, BLOCK_LEN};
use crate::error::{Error, Result};
use crate::gf256::{rlnc_decode, rlnc_encode, Gf256Matrix};

pub use dataset::{build_pair_dataset, Cryptosystem, HunccSpec, PairSpec, ProbeLayout};
pub use format::{dataset_digest, read_dataset, write_dataset};

#[derive(Clone, Debug, PartialEq)]
pub struct HunccConfig {
    pub n_links: usize,
    pub n_encrypted: usize,
    pub msg_len_bytes: usize,
    pub g: Gf256Matrix,
    pub cipher_key: KeyMaterial,
}

impl HunccConfig {
    /// Random invertible `G` and a random AES-128 ECB link key.
    pub fn random<R: Rng + ?Sized>(
        n_links: usize,
        n_encrypted: usize,
        msg_len_bytes: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let g = Gf256Matrix::random_invertible(n_links, rng)?;
        let cipher_key = KeyMaterial::random(Scheme::Aes128Ecb, BLOCK_LEN, rng);
        let cfg = HunccConfig {
            n_links,
            n_encrypted,
            msg_len_bytes,
            g,
            cipher_key,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_encrypted == 0 || self.n_encrypted > self.n_links {
            return Err(Error::InvalidParam(format!(
                "{} encrypted links out of {}",
                self.n_encrypted, self.n_links
            )));
        }
        if self.g.rows() != self.n_links || !self.g.is_square() {
            return Err(Error::Dimension(format!(
                "generator is {}x{} for {} links",
                self.g.rows(),
                self.g.cols(),
                self.n_links
            )));
        }
        if self.msg_len_bytes == 0 {
            return Err(Error::InvalidParam("messages must be nonempty".into()));
        }
        if matches!(self.cipher_key.scheme(), Scheme::Aes128Ecb | Scheme::Aes128Ctr)
            && self.msg_len_bytes % BLOCK_LEN != 0
        {
            return Err(Error::InvalidParam(format!(
                "AES links need a multiple of {BLOCK_LEN} bytes, got {}",
                self.msg_len_bytes
            )));
        }
        if self.cipher_key.scheme() == Scheme::Otp {
            return Err(Error::InvalidKey("link cipher needs a fixed key".into()));
        }
        Ok(())
    }
}

/// What goes out on the links.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkBundle {
    pub links: Vec<Vec<u8>>,
    pub encrypted_mask: Vec<bool>,
}

impl LinkBundle {
    /// Link-major concatenation: link 0, then link 1, ...
    pub fn to_bytes(&self) -> Vec<u8> {
        self.links.concat()
    }
}

/// Codes the messages (rows of an `n×L` matrix) and encrypts the first
/// `n_encrypted` links.
pub fn huncc_encrypt(messages: &Gf256Matrix, cfg: &HunccConfig) -> Result<LinkBundle> {
    cfg.validate()?;
    if messages.rows() != cfg.n_links || messages.cols() != cfg.msg_len_bytes {
        return Err(Error::Dimension(format!(
            "messages are {}x{}, config expects {}x{}",
            messages.rows(),
            messages.cols(),
            cfg.n_links,
            cfg.msg_len_bytes
        )));
    }
    let coded = rlnc_encode(messages, &cfg.g)?;
    let mut links = Vec::with_capacity(cfg.n_links);
    let mut encrypted_mask = Vec::with_capacity(cfg.n_links);
    for i in 0..cfg.n_links {
        let encrypt = i < cfg.n_encrypted;
        links.push(if encrypt {
            cfg.cipher_key.encrypt(coded.row(i))?
        } else {
            coded.row(i).to_vec()
        });
        encrypted_mask.push(encrypt);
    }
    Ok(LinkBundle {
        links,
        encrypted_mask,
    })
}

/// Legitimate receiver: decrypt the masked links, then undo the coding.
pub fn huncc_decrypt(bundle: &LinkBundle, cfg: &HunccConfig) -> Result<Gf256Matrix> {
    cfg.validate()?;
    if bundle.links.len() != cfg.n_links || bundle.encrypted_mask.len() != cfg.n_links {
        return Err(Error::Dimension(format!(
            "bundle has {} links, config expects {}",
            bundle.links.len(),
            cfg.n_links
        )));
    }
    let rows = bundle
        .links
        .iter()
        .zip(&bundle.encrypted_mask)
        .map(|(link, &enc)| {
            if enc {
                cfg.cipher_key.decrypt(link)
            } else {
                Ok(link.clone())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let coded = Gf256Matrix::from_rows(&rows)?;
    rlnc_decode(&coded, &cfg.g)
}
