//! Builds a pair dataset for a named scenario, writes it as `.cmin`, reads
//! it back and prints its digest.
//!
//! ```text
//! cargo run --example dataset_io -- [scenario] [path]
//! ```

use std::fs::File;
use std::io::BufReader;

use crypto_mine::harness::{preset, Profile};
use crypto_mine::huncc::{build_pair_dataset, dataset_digest, read_dataset, write_dataset};

fn main() -> crypto_mine::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "huncc".into());
    let path = args.next().unwrap_or_else(|| std::env::temp_dir().join("pairs.cmin").display().to_string());

    let s = preset(&name, Profile::Quick)?.remove(0);
    let ds = build_pair_dataset(&s.pair_spec(), 1_000, s.seed)?;
    write_dataset(&ds, File::create(&path)?)?;
    let back = read_dataset(BufReader::new(File::open(&path)?))?;
    assert_eq!(back, ds);

    println!("{name}: {} pairs, x {} bytes, y {} bytes", ds.len(), ds.dx(), ds.dy());
    println!("written to {path}");
    println!("sha256 {}", dataset_digest(&back));
    Ok(())
}
