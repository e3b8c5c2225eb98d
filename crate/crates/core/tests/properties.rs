use num_prime::nt_funcs::is_prime64;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use toric_np::geometry::{enumerate_weight_level, hodge_closed_form, hodge_numbers, weight, LatticePoint};
use toric_np::slopes::{alpha, b_sequence, g_map, predicted_np, varpi};
use toric_np::rat;

fn prime_above(n: u32) -> impl Strategy<Value = u64> {
    let primes: Vec<u64> = ((n as u64 + 1)..600).filter(|&p| is_prime64(p)).collect();
    prop::sample::select(primes)
}

proptest! {
    #[test]
    fn weight_is_subadditive(n in 2u32..9, a1 in -40i64..40, b1 in -40i64..40, a2 in -40i64..40, b2 in -40i64..40) {
        let u = LatticePoint::new(a1, b1);
        let v = LatticePoint::new(a2, b2);
        prop_assert!(weight(n, u + v) <= weight(n, u) + weight(n, v));
    }

    #[test]
    fn weight_denominator_divides_n(n in 2u32..9, a in -40i64..40, b in -40i64..40) {
        let w = weight(n, LatticePoint::new(a, b));
        let den = w.denom().to_i64().unwrap();
        prop_assert_eq!(n as i64 % den, 0);
    }

    #[test]
    fn alpha_matches_residue(n in 2u32..12, p in prime_above(1), i in -50i64..50, j in -50i64..50) {
        prop_assume!(n as u64 % p != 0);
        let a = alpha(n, p, i, j);
        prop_assert_eq!(a, (i - p as i64 * j).rem_euclid(n as i64));
    }

    #[test]
    fn g_is_multiplication_by_inverse(n in 2u32..12, p in prime_above(1)) {
        prop_assume!(n as u64 % p != 0);
        let w = varpi(n, p).unwrap();
        prop_assert_eq!((w * p as i64).rem_euclid(n as i64), 1);
        let g = g_map(n, p).unwrap();
        let nu = n as usize;
        for i in 1..nu {
            prop_assert_eq!(g[i], (w as usize * i) % nu);
            prop_assert_eq!(g[nu + i], nu + (w as usize * i) % nu);
        }
    }

    #[test]
    fn predicted_polygon_is_symmetric(p in prime_above(6)) {
        for n in 2..=6u32 {
            let r = predicted_np(n, p).unwrap();
            let s = r.polygon.slopes();
            let last = s.len() - 1;
            for i in 0..=last {
                prop_assert_eq!(&s[i] + &s[last - i], rat(2, 1));
            }
            prop_assert_eq!(r.polygon.endpoint(), (2 * n as i64 + 1, rat(2 * n as i64 + 1, 1)));
        }
    }
}

/// The minimal assignments only see `p` through `p mod n`.
#[test]
fn b_sequence_depends_only_on_residue() {
    for n in 2..=8u32 {
        let mut seen: std::collections::BTreeMap<u64, (u64, Vec<i64>)> = Default::default();
        for p in (n as u64 + 1..400).filter(|&p| is_prime64(p)) {
            let b = b_sequence(n, p).unwrap();
            let entry = seen.entry(p % n as u64).or_insert((p, b.clone()));
            assert_eq!(entry.1, b, "n = {n}: p = {} and p = {p} share a residue", entry.0);
        }
    }
}

#[test]
fn hodge_numbers_small_cases() {
    // Level 0 is the origin alone.
    let lvl0 = enumerate_weight_level(2, 0).unwrap();
    assert_eq!(lvl0.points, vec![LatticePoint::new(0, 0)]);
    for n in 2..=12 {
        let data = hodge_numbers(n).unwrap();
        assert_eq!(data.h.iter().sum::<i64>(), 2 * n as i64 + 1);
        assert!(data.h.iter().all(|&h| h == 1));
        assert_eq!(data.polygon, hodge_closed_form(n));
    }
}

#[test]
fn ordinary_iff_residue_one() {
    for n in 2..=6u32 {
        for p in (n as u64 + 1..200).filter(|&p| is_prime64(p)) {
            let r = predicted_np(n, p).unwrap();
            let is_hodge = r.polygon == hodge_closed_form(n);
            assert_eq!(is_hodge, p % n as u64 == 1, "n = {n}, p = {p}");
            assert_eq!(r.ordinary, is_hodge);
        }
    }
}
