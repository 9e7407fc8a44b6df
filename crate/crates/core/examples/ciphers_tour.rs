//! Encrypts one plaintext under every scheme and decrypts it again.
//!
//! ```text
//! cargo run --example ciphers_tour
//! ```

use crypto_mine::ciphers::{aes128_ecb_encrypt, otp_encrypt, KeyMaterial, Scheme, BLOCK_LEN};
use crypto_mine::seed;

fn hex(b: &[u8]) -> String {
    b.iter().map(|v| format!("{v:02x}")).collect()
}

fn main() -> crypto_mine::Result<()> {
    // FIPS-197 appendix C.1
    let key: [u8; 16] = std::array::from_fn(|i| i as u8);
    let pt: [u8; 16] = std::array::from_fn(|i| (i as u8) * 0x11);
    println!("AES-128 known answer: {}", hex(&aes128_ecb_encrypt(&pt, &key)?));

    let mut rng = seed::stream(0, "example/ciphers", 0);
    let x = b"attack at dawn!!";
    println!("\nplaintext           {}", hex(x));
    for scheme in [
        Scheme::XorRepeat,
        Scheme::Caesar,
        Scheme::Spn,
        Scheme::Aes128Ecb,
        Scheme::Aes128Ctr,
    ] {
        let km = KeyMaterial::random(scheme, BLOCK_LEN, &mut rng);
        let y = km.encrypt(x)?;
        assert_eq!(km.decrypt(&y)?, x);
        println!("{:<19} {}", scheme.name(), hex(&y));
    }
    let (y, pad) = otp_encrypt(x, &mut rng);
    println!("{:<19} {} (pad {})", "otp", hex(&y), hex(&pad));
    Ok(())
}
