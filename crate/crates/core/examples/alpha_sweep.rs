//! HUNCC against full AES encryption as plaintext uniformity varies.
//!
//! ```text
//! cargo run --release --example alpha_sweep -- [jobs] [seeds...]
//! ```
//!
//! Each cell of the quick grid trains on 100 000 eight-channel samples.
//! Prints one line per alpha with the mean over seeds for each scheme.

use crypto_mine::harness::{default_jobs, sweep_alpha, Profile, SweepSpec};

fn main() -> crypto_mine::Result<()> {
    let mut args = std::env::args().skip(1);
    let jobs = args.next().map_or_else(default_jobs, |s| s.parse().expect("jobs"));
    let seeds: Vec<u64> = args.map(|s| s.parse().expect("seed")).collect();

    let mut spec = SweepSpec::table1(Profile::Quick);
    if !seeds.is_empty() {
        spec.seeds = seeds;
    }
    let result = sweep_alpha(&spec, jobs)?;
    for f in &result.failures {
        eprintln!("{} (seed {}) failed: {}", f.scenario, f.seed, f.error);
    }
    println!("{:>6} {:>9} {:>11} {:>11}", "alpha", "huncc", "aes128_ecb", "aes128_ctr");
    for &alpha in &spec.alphas {
        let cell = |scheme| result.mean(alpha, scheme).map_or("-".into(), |v| format!("{v:.4}"));
        println!("{alpha:>6} {:>9} {:>11} {:>11}", cell("huncc"), cell("aes128_ecb"), cell("aes128_ctr"));
    }
    Ok(())
}
