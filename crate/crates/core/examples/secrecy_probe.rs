//! Individual secrecy of HUNCC: one message fixed to all ones, the other
//! seven uniform, and the estimator sees only the fixed message against the
//! eight links.
//!
//! ```text
//! cargo run --release --example secrecy_probe -- [n_encrypted] [seed]
//! ```

use crypto_mine::harness::{individual_secrecy_probe, Profile};
use crypto_mine::huncc::HunccSpec;

fn main() -> crypto_mine::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_encrypted: usize = args.next().map_or(1, |s| s.parse().expect("n_encrypted"));
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));

    let r = individual_secrecy_probe(HunccSpec { n_encrypted }, Profile::Quick, None, seed)?;
    println!(
        "{} of 8 links encrypted: {:.4} nats over {} samples (dataset {})",
        n_encrypted,
        r.final_mi_nats,
        r.config_echo.n_samples,
        &r.dataset_digest[..16]
    );
    Ok(())
}
