//! Plug-in byte entropy of LZW-compressed Gilbert-Elliott streams.
//!
//! Prints, for each alpha, the entropy of the raw packed bytes, of each
//! 128-bit message compressed on its own, and of the whole stream compressed
//! at once.
//!
//! ```text
//! cargo run --release --example lzw_entropy -- [total_bits] [seed]
//! ```

use crypto_mine::seed;
use crypto_mine::sources::{byte_entropy, entropy_after_compression, ge_bits, GeParams, MESSAGE_BITS};

fn main() -> crypto_mine::Result<()> {
    let mut args = std::env::args().skip(1);
    let total_bits: usize = args.next().map_or(Ok(1 << 20), |s| s.parse()).expect("total_bits");
    let master: u64 = args.next().map_or(Ok(0), |s| s.parse()).expect("seed");

    println!("alpha,raw_nats,per_message_nats,whole_stream_nats");
    for (i, alpha) in [0.01, 0.02, 0.05, 0.1, 0.5].into_iter().enumerate() {
        let params = GeParams::new(alpha)?;
        let raw = ge_bits(&params, total_bits, &mut seed::stream(master, "raw", i as u64))?.pack()?;
        let per_message =
            entropy_after_compression(&params, total_bits, MESSAGE_BITS, &mut seed::stream(master, "msg", i as u64))?;
        let whole =
            entropy_after_compression(&params, total_bits, total_bits, &mut seed::stream(master, "whole", i as u64))?;
        println!("{alpha},{:.4},{per_message:.4},{whole:.4}", byte_entropy(&raw)?);
    }
    Ok(())
}
