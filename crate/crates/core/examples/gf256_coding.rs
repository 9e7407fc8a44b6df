//! GF(2^8) arithmetic and random linear network coding.
//!
//! ```text
//! cargo run --example gf256_coding
//! ```

use crypto_mine::gf256::{gf_inv, gf_mul, rlnc_decode, rlnc_encode, Gf256Matrix};
use crypto_mine::seed;

fn main() -> crypto_mine::Result<()> {
    println!("0x57 * 0x83 = {:#04x}", gf_mul(0x57, 0x83));
    println!("inverse of 0x02 = {:#04x}", gf_inv(0x02)?);

    let mut rng = seed::stream(1, "example/gf256", 0);
    let g = Gf256Matrix::random_invertible(4, &mut rng)?;
    println!("\ngenerator G:");
    for r in 0..g.rows() {
        println!("  {}", hex(g.row(r)));
    }

    let messages = Gf256Matrix::from_rows(&[b"four messages, ", b"sixteen bytes, ", b"coded together ", b"over GF(2^8).  "])?;
    let coded = rlnc_encode(&messages, &g)?;
    println!("\ncoded links:");
    for r in 0..coded.rows() {
        println!("  {}", hex(coded.row(r)));
    }

    let back = rlnc_decode(&coded, &g)?;
    assert_eq!(back, messages);
    println!("\ndecoded:");
    for r in 0..back.rows() {
        println!("  {:?}", String::from_utf8_lossy(back.row(r)));
    }
    Ok(())
}

fn hex(b: &[u8]) -> String {
    b.iter().map(|v| format!("{v:02x}")).collect()
}
