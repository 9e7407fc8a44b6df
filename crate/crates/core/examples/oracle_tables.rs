//! Exact mutual information of small joint tables, and the plug-in
//! estimate from samples converging to it.
//!
//! ```text
//! cargo run --example oracle_tables
//! ```

use crypto_mine::oracle::{exact_mi, miller_madow_bias, plugin_mi_from_samples, JointTable};
use crypto_mine::seed;
use rand::Rng;

fn main() -> crypto_mine::Result<()> {
    let eps = 0.1;
    let bsc = JointTable::new(vec![vec![(1.0 - eps) / 2.0, eps / 2.0], vec![eps / 2.0, (1.0 - eps) / 2.0]])?;
    println!("binary symmetric channel, flip 0.1: {:.4} nats", exact_mi(&bsc));

    let identity: Vec<Vec<f64>> = (0..16)
        .map(|i| (0..16).map(|j| if i == j { 1.0 / 16.0 } else { 0.0 }).collect())
        .collect();
    println!("uniform nibble copied: {:.4} nats (4 ln 2)", exact_mi(&JointTable::new(identity)?));

    println!("\nplug-in estimate for y = x xor 0x0f on nibbles");
    let mut rng = seed::stream(0, "example/oracle", 0);
    for n in [100usize, 1_000, 10_000, 100_000] {
        let xs: Vec<u32> = (0..n).map(|_| rng.random_range(0..16)).collect();
        let ys: Vec<u32> = xs.iter().map(|x| x ^ 0x0F).collect();
        let zs: Vec<u32> = (0..n).map(|_| rng.random_range(0..16)).collect();
        println!(
            "  n={n:>6}  dependent {:.4}  independent {:.4}  (bias bound {:.4})",
            plugin_mi_from_samples(&xs, &ys)?,
            plugin_mi_from_samples(&xs, &zs)?,
            miller_madow_bias(16, 16, n)
        );
    }
    Ok(())
}
