//! Trains the estimator on the no-encryption, repeating-XOR and one-time-pad
//! baselines and prints each learning curve.
//!
//! ```text
//! cargo run --release --example mine_baseline -- [epochs] [seed]
//! ```
//!
//! The default of 60 epochs takes about a minute per scenario; the quick
//! profile uses 300.

use crypto_mine::harness::{preset, run_scenario, Profile};

fn main() -> crypto_mine::Result<()> {
    let mut args = std::env::args().skip(1);
    let epochs: usize = args.next().map_or(60, |s| s.parse().expect("epochs"));
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));

    for name in ["none", "xor_repeat", "otp"] {
        let mut s = preset(name, Profile::Quick)?.remove(0).with_seed(seed);
        s.mine.epochs = epochs;
        let r = run_scenario(&s)?;
        let step = (epochs / 6).max(1);
        let curve: Vec<String> = r
            .trace
            .records
            .iter()
            .filter(|t| t.epoch % step == 0)
            .map(|t| format!("{}:{:.2}", t.epoch, t.raw_dv_nats))
            .collect();
        println!("{name:<11} {:.3} nats (ceiling {:.2})  {}", r.final_mi_nats, r.ceiling_nats, curve.join(" "));
    }
    Ok(())
}
