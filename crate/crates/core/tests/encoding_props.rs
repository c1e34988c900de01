use clonalg::encoding::{decode_genome, decode_variable, random_genome, Bounds, Genome, MAX_CODE};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bounds() -> impl Strategy<Value = Bounds> {
    prop_oneof![
        Just(Bounds::new(-100.0, 100.0).unwrap()),
        Just(Bounds::new(-5.12, 5.12).unwrap()),
        Just(Bounds::new(-32.0, 32.0).unwrap()),
        Just(Bounds::new(0.0, 6.0).unwrap()),
        Just(Bounds::new(-2.048, 2.048).unwrap()),
        Just(Bounds::new(-10.0, 10.0).unwrap()),
    ]
}

proptest! {
    #[test]
    fn random_genomes_decode_inside_bounds(seed in any::<u64>(), b in bounds()) {
        let g = random_genome(&mut ChaCha8Rng::seed_from_u64(seed));
        let x = decode_genome(&g, b);
        prop_assert_eq!(x.len(), 10);
        prop_assert!(x.iter().all(|&v| b.contains(v)));
        // Deterministic down to the bit.
        let y = decode_genome(&g, b);
        prop_assert!(x.iter().zip(&y).all(|(p, q)| p.to_bits() == q.to_bits()));
    }

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let g = random_genome(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(g.to_string().parse::<Genome>().unwrap(), g);
    }

    #[test]
    fn segment_decode_matches_code_decode(code in 0..=MAX_CODE, b in bounds()) {
        let mut codes = [0u32; 10];
        codes[3] = code;
        let g = Genome::from_codes(codes);
        prop_assert_eq!(decode_variable(&g.segment(3), b), decode_genome(&g, b)[3]);
    }
}

#[test]
fn decode_is_monotone_over_random_code_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let b = Bounds::new(-100.0, 100.0).unwrap();
    for _ in 0..10_000 {
        let u = rng.gen_range(0..=MAX_CODE);
        let v = rng.gen_range(0..=MAX_CODE);
        let (lo, hi) = (u.min(v), u.max(v));
        assert!(b.decode_code(lo) <= b.decode_code(hi), "{lo} {hi}");
    }
}

#[test]
fn adjacent_codes_are_one_step_apart() {
    for (lo, hi) in [(-100.0, 100.0), (-5.12, 5.12), (0.0, 6.0)] {
        let b = Bounds::new(lo, hi).unwrap();
        let step = (hi - lo) / 1_048_575.0;
        assert_eq!(b.step(), step);
        for u in [0, 1, 1000, 524_287, 524_288, MAX_CODE - 1] {
            let d = b.decode_code(u + 1) - b.decode_code(u);
            // Differences of values near |hi| carry that magnitude's rounding.
            assert!(
                (d - step).abs() <= 4.0 * f64::EPSILON * hi.abs().max(lo.abs()),
                "{u}: {d} vs {step}"
            );
        }
    }
}

#[test]
fn distinct_seeds_give_distinct_genomes() {
    let mut differing = 0;
    for s in 0..100u64 {
        let a = random_genome(&mut ChaCha8Rng::seed_from_u64(s));
        let b = random_genome(&mut ChaCha8Rng::seed_from_u64(s + 1000));
        differing += (a != b) as usize;
    }
    assert_eq!(differing, 100);
}
