//! Runs the cipher comparison group (AES ECB and CTR, SPN, Caesar, AES ECB
//! on correlated inputs) and prints a results table as CSV.
//!
//! ```text
//! cargo run --release --example cipher_comparison -- [quick|paper] [seed]
//! ```

use crypto_mine::harness::{preset, run_scenario, write_rows_csv, Profile, ResultRow};

fn main() -> crypto_mine::Result<()> {
    let mut args = std::env::args().skip(1);
    let profile: Profile = args.next().as_deref().unwrap_or("quick").parse()?;
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));

    let mut rows = vec![];
    for s in preset("fig2", profile)? {
        let r = run_scenario(&s.with_seed(seed))?;
        eprintln!("{:<14} {:.4}", r.scenario, r.final_mi_nats);
        rows.push(ResultRow::from(&r));
    }
    write_rows_csv(&rows, std::io::stdout())
}
