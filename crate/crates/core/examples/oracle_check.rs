//! Trains on the replicated-nibble dataset, whose exact MI is 4 ln 2, and
//! compares the neural estimate with the oracle.
//!
//! ```text
//! cargo run --release --example oracle_check -- [seed]
//! ```

use crypto_mine::harness::{preset, run_scenario, Profile};
use crypto_mine::oracle::{exact_mi, JointTable};

fn main() -> crypto_mine::Result<()> {
    let seed: u64 = std::env::args().nth(1).map_or(0, |s| s.parse().expect("seed"));
    let identity = (0..16)
        .map(|i| (0..16).map(|j| if i == j { 1.0 / 16.0 } else { 0.0 }).collect())
        .collect();
    let exact = exact_mi(&JointTable::new(identity)?);

    let r = run_scenario(&preset("nibble", Profile::Quick)?.remove(0).with_seed(seed))?;
    println!("exact {exact:.4} nats, estimated {:.4} nats", r.final_mi_nats);
    Ok(())
}
