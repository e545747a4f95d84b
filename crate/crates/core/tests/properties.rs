mod common;

use circorth::numtheory::{divisors, factorize, gcd, mobius};
use circorth::{
    autocorrelation, block_compose, build_constraint_table, classify, dfs_enumerate, eigenvalue_moduli,
    enumerate_max_d, family_generator, is_orthogonal, row_sums, BaseBlock, Family, Generator, SearchOptions,
};
use common::{doubled_row, dft_moduli_ok, mobius_naive, periodic4};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn generator() -> impl Strategy<Value = Generator> {
    (2usize..=40)
        .prop_flat_map(|n| (Just(n), 0i64..=2 * n as i64, prop::collection::vec(prop::bool::ANY, n - 1)))
        .prop_map(|(n, d2, bits)| {
            let signs: Vec<i8> = bits.iter().map(|&b| if b { -1 } else { 1 }).collect();
            Generator::new(n, d2, &signs).unwrap()
        })
}

proptest! {
    #[test]
    fn autocorrelation_is_symmetric_and_matches_oracle(g in generator()) {
        let prof = autocorrelation(&g);
        let row = doubled_row(g.d2() as i64, &g.signs());
        let n = g.order();
        for m in 0..n {
            prop_assert_eq!(prof.values4[m], periodic4(&row, m));
            prop_assert_eq!(prof.values4[m], prof.values4[(n - m) % n]);
        }
        let d2 = g.d2() as i64;
        prop_assert_eq!(prof.peak4(), d2 * d2 + 4 * (n as i64 - 1));
        prop_assert_eq!(is_orthogonal(&g), prof.is_perfect());
    }

    #[test]
    fn total_autocorrelation_is_square_of_row_sum(g in generator()) {
        // Σ_m r(m) = (Σ c_j)²
        let prof = autocorrelation(&g);
        let sums = row_sums(&g);
        prop_assert_eq!(prof.values4.iter().sum::<i64>(), sums.same2 * sums.same2);
        if let Some(alt) = sums.alternating2 {
            let signed: i64 = prof.values4.iter().enumerate().map(|(m, v)| if m % 2 == 0 { *v } else { -v }).sum();
            prop_assert_eq!(signed, alt * alt);
        }
    }

    #[test]
    fn text_round_trip(g in generator()) {
        let back: Generator = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn mobius_is_multiplicative(a in 1u64..5000, b in 1u64..5000) {
        prop_assume!(gcd(a, b) == 1);
        prop_assert_eq!(mobius(a * b).unwrap(), mobius(a).unwrap() * mobius(b).unwrap());
    }

    #[test]
    fn factorization_multiplies_back(v in 1u64..1_000_000_000) {
        let f = factorize(v).unwrap();
        prop_assert_eq!(f.product(), v);
        prop_assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
    }
}

#[test]
fn orthogonality_iff_eigenvalue_moduli() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut pool: Vec<Generator> = Vec::new();
    // every known solution up to 32, each with one sign flipped as a near miss
    for n in 2..=32 {
        for g in enumerate_max_d(n) {
            let mut signs = g.signs();
            let j = rng.gen_range(0..signs.len());
            signs[j] = -signs[j];
            pool.push(Generator::new(n, g.d2() as i64, &signs).unwrap());
            pool.push(g);
        }
    }
    while pool.len() < 1000 {
        let n = rng.gen_range(2..=32);
        let d2 = rng.gen_range(0..=2 * n as i64);
        let signs: Vec<i8> = (1..n).map(|_| if rng.gen() { 1 } else { -1 }).collect();
        pool.push(Generator::new(n, d2, &signs).unwrap());
    }
    let mut positives = 0;
    for g in &pool {
        let exact = is_orthogonal(g);
        positives += exact as usize;
        assert_eq!(exact, eigenvalue_moduli(g, 1e-6), "{g}");
        assert_eq!(exact, dft_moduli_ok(&doubled_row(g.d2() as i64, &g.signs()), 1e-6), "{g}");
    }
    assert!(positives >= 50);
}

#[test]
fn mobius_mass_is_two_to_the_r() {
    for n in 1..=1000u64 {
        let mass: u64 = divisors(n).unwrap().iter().map(|&d| mobius(d).unwrap().unsigned_abs() as u64).sum();
        assert_eq!(mass, 1 << factorize(n).unwrap().r(), "n={n}");
        assert_eq!(mobius(n).unwrap(), mobius_naive(n), "n={n}");
    }
}

#[test]
fn constructions_are_orthogonal_and_classified() {
    for n in 2..=64 {
        let gens = enumerate_max_d(n);
        let want = if n % 4 == 0 { 4 } else if n % 2 == 0 { 2 } else { 1 };
        assert_eq!(gens.len(), want, "n={n}");
        for g in gens {
            assert!(is_orthogonal(&g), "{g}");
            assert_eq!(g.d2(), n as u64 - 2);
            assert!(classify(&g).is_some());
        }
    }
}

#[test]
fn constructions_are_complete_up_to_20() {
    for n in 2..=20 {
        let mut built: Vec<String> = enumerate_max_d(n).iter().map(|g| g.sign_string()).collect();
        let rep = dfs_enumerate(n, n as u64 - 2, &SearchOptions::default()).unwrap();
        let mut found: Vec<String> = rep.solutions.iter().map(|s| s.generator.sign_string()).collect();
        built.sort();
        found.sort();
        assert_eq!(built, found, "n={n}");
    }
}

#[test]
fn transpose_duality_and_blocks() {
    for n in (4..=64).step_by(4) {
        let a = family_generator(Family::G4a, n).unwrap();
        let b = family_generator(Family::G4b, n).unwrap();
        assert_eq!(a.reversed(), b);
        assert_eq!(b.reversed(), a);
    }
    for block in BaseBlock::ALL {
        let m = block.order();
        for copies in 1..=16 {
            let n = m * copies;
            if n < 2 {
                continue;
            }
            let g = block_compose(block, copies).unwrap();
            assert_eq!(g, family_generator(block.family(), n).unwrap(), "{block:?} x{copies}");
        }
    }
}

#[test]
fn constraint_tables_expand_to_gcd_constant_symmetric_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (n, d2, s) in [(120u64, 10u64, 0u64), (924, 58, 1)] {
        for table in build_constraint_table(n, d2, s).unwrap() {
            for _ in 0..16 {
                let assignment = rng.gen_range(0..table.case_count());
                let g = table.expand(assignment);
                assert_eq!(g.order() as u64, n);
                assert!(g.is_symmetric());
                let signs = table.divisor_signs(assignment);
                for j in 1..n {
                    let m = gcd(j, n);
                    assert_eq!(g.sign(j as usize), g.sign(m as usize));
                    assert_eq!(g.sign(m as usize), signs[&m], "n={n} m={m}");
                }
            }
        }
    }
}
