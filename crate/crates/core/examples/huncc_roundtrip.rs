//! Eight messages coded with a random G, link 0 encrypted with AES, then
//! decoded by a receiver holding G and the key.
//!
//! ```text
//! cargo run --example huncc_roundtrip
//! ```

use crypto_mine::gf256::Gf256Matrix;
use crypto_mine::huncc::{huncc_decrypt, huncc_encrypt, HunccConfig};
use crypto_mine::seed;
use crypto_mine::sources::Source;

fn main() -> crypto_mine::Result<()> {
    let mut rng = seed::stream(3, "example/huncc", 0);
    let cfg = HunccConfig::random(8, 1, 16, &mut rng)?;

    let mut plain = vec![0xFF; 16]; // message 0 is all ones
    plain.extend(Source::ge(0.05)?.bytes(7 * 16, &mut rng)?);
    let messages = Gf256Matrix::from_vec(8, 16, plain)?;

    let bundle = huncc_encrypt(&messages, &cfg)?;
    for (i, link) in bundle.links.iter().enumerate() {
        let tag = if bundle.encrypted_mask[i] { "aes" } else { "   " };
        let bytes: String = link.iter().map(|b| format!("{b:02x}")).collect();
        println!("link {i} {tag} {bytes}");
    }
    assert_eq!(huncc_decrypt(&bundle, &cfg)?, messages);
    println!("receiver recovered all 8 messages");
    Ok(())
}
