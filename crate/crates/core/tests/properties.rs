use crypto_mine::ciphers::{KeyMaterial, Scheme, BLOCK_LEN};
use crypto_mine::huncc::{build_pair_dataset, dataset_digest, read_dataset, write_dataset, Cryptosystem, PairSpec};
use crypto_mine::mine::{dv_objective_permuted, marginal_permutation, Dataset, MlpParams};
use crypto_mine::seed;
use crypto_mine::sources::{entropy_after_compression, GeParams, Source, MESSAGE_BITS};
use proptest::prelude::*;

fn scheme() -> impl Strategy<Value = Scheme> {
    prop_oneof![
        Just(Scheme::XorRepeat),
        Just(Scheme::Caesar),
        Just(Scheme::Spn),
        Just(Scheme::Aes128Ecb),
        Just(Scheme::Aes128Ctr),
    ]
}

fn system() -> impl Strategy<Value = Cryptosystem> {
    prop_oneof![
        Just("none"),
        Just("otp"),
        Just("otp_with_key"),
        Just("xor_repeat"),
        Just("caesar"),
        Just("spn"),
        Just("aes128_ecb"),
        Just("aes128_ctr"),
        Just("huncc"),
    ]
    .prop_map(|n| Cryptosystem::from_name(n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fixed_key_schemes_invert(s in scheme(), key_seed: u64, blocks in 1usize..4, data_seed: u64) {
        let km = KeyMaterial::random(s, blocks * BLOCK_LEN, &mut seed::stream(key_seed, "prop/key", 0));
        let len = if s == Scheme::Spn { BLOCK_LEN } else { blocks * BLOCK_LEN };
        let x = Source::Uniform.bytes(len, &mut seed::stream(data_seed, "prop/x", 0)).unwrap();
        prop_assert_eq!(km.decrypt(&km.encrypt(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn datasets_are_deterministic_and_shaped(
        sys in system(),
        channels in 1usize..4,
        alpha in prop_oneof![Just(None), (0.01f64..0.5).prop_map(Some)],
        n in 1usize..40,
        s: u64,
    ) {
        let source = alpha.map_or(Source::Uniform, |a| Source::ge(a).unwrap());
        let spec = PairSpec::single(source, sys).channels(channels);
        let a = build_pair_dataset(&spec, n, s).unwrap();
        let b = build_pair_dataset(&spec, n, s).unwrap();
        prop_assert_eq!(dataset_digest(&a), dataset_digest(&b));
        prop_assert_eq!(a.len(), n);
        prop_assert_eq!(a.dx(), 16 * channels);
        let dy = if sys == Cryptosystem::OtpWithKey { 32 * channels } else { 16 * channels };
        prop_assert_eq!(a.dy(), dy);
    }

    #[test]
    fn cmin_roundtrip(dx in 1usize..20, dy in 1usize..20, n in 0usize..30, s: u64) {
        let mut rng = seed::stream(s, "prop/cmin", 0);
        let x = Source::Uniform.bytes(n * dx + 1, &mut rng).unwrap()[..n * dx].to_vec();
        let y = Source::Uniform.bytes(n * dy + 1, &mut rng).unwrap()[..n * dy].to_vec();
        let ds = Dataset::new(dx, dy, x, y).unwrap();
        let mut buf = vec![];
        write_dataset(&ds, &mut buf).unwrap();
        prop_assert_eq!(buf.len(), 22 + n * (dx + dy));
        prop_assert_eq!(read_dataset(&buf[..]).unwrap(), ds);
    }

    /// The permuted DV estimate never exceeds ln B, whatever the weights.
    #[test]
    fn dv_estimate_below_ln_b(b in 2usize..40, s: u64, scale in 0.1f64..50.0) {
        let mut rng = seed::stream(s, "prop/dv", 0);
        let ds = build_pair_dataset(&PairSpec::single(Source::Uniform, Cryptosystem::None), b, s).unwrap();
        let idx: Vec<usize> = (0..b).collect();
        let batch = ds.batch(&idx);
        let mut p = MlpParams::init(&[32, 6, 6, 1], &mut rng).unwrap();
        p.iter_mut().for_each(|v| *v *= scale);
        let perm = marginal_permutation(b, &mut rng).unwrap();
        let v = dv_objective_permuted(&p, &batch, &perm, 0.1).unwrap();
        prop_assert!(v.mi_nats <= (b as f64).ln() + 1e-9, "{} > ln {}", v.mi_nats, b);
    }
}

#[test]
fn compressed_entropy_rises_with_alpha() {
    let alphas = [0.01, 0.02, 0.05, 0.1, 0.5];
    let means: Vec<f64> = alphas
        .iter()
        .map(|&a| {
            let p = GeParams::new(a).unwrap();
            (0..20u64)
                .map(|s| entropy_after_compression(&p, 1 << 14, MESSAGE_BITS, &mut seed::stream(s, "prop/lzw", 0)).unwrap())
                .sum::<f64>()
                / 20.0
        })
        .collect();
    assert!(means.windows(2).all(|w| w[0] <= w[1]), "{means:?}");
}
