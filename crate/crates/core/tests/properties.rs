//! Property tests against independent brute-force oracles.

use num_complex::Complex64;
use proptest::prelude::*;

use palindrome_lab::arith::{factorize, is_squarefree, kth_residue_solutions, mobius};
use palindrome_lab::census::{q_star_direct, q_star_mobius, restricted_count, s_b};
use palindrome_lab::digits::{digital_reverse, from_digits, is_palindrome, to_digits};
use palindrome_lab::enumerate::{count_fixed_length, stream_fixed_length, stream_up_to};
use palindrome_lab::expsum::{k2_full, k2_stationary_phase};
use palindrome_lab::harness::{cartesian_grid, fit_prop1};
use palindrome_lab::oscillate::{fourier_transform, Triangle};
use palindrome_lab::{Base, ExpSumParams, SbStrategy};

fn base(b: u32) -> Base {
    Base::new(b).unwrap()
}

/// Radix rendering through the standard formatter, for the bases it supports.
fn std_radix(n: u128, b: u32) -> String {
    match b {
        2 => format!("{n:b}"),
        8 => format!("{n:o}"),
        10 => format!("{n}"),
        16 => format!("{n:x}"),
        _ => unreachable!(),
    }
}

fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn naive_k2(p: &ExpSumParams) -> Complex64 {
    let c = p.c as i128;
    let mut s = Complex64::new(0.0, 0.0);
    for x in 1..=c {
        if gcd(x as u128, c as u128) != 1 || gcd((x + p.q as i128).rem_euclid(c) as u128, c as u128) != 1 {
            continue;
        }
        let inv = |v: i128| (1..=c).find(|y| (v * y).rem_euclid(c) == 1 % c).unwrap();
        let xb = inv(x);
        let yb = inv((x + p.q as i128).rem_euclid(c));
        let phase = (p.a1 as i128 * x + p.a2 as i128 * xb * xb + p.a3 as i128 * yb * yb).rem_euclid(c);
        s += Complex64::from_polar(1.0, std::f64::consts::TAU * phase as f64 / c as f64);
    }
    s / (c as f64).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn digits_round_trip(n in 0u128..(1 << 127), b in 2u32..=64) {
        prop_assert_eq!(from_digits(&to_digits(n, base(b))).unwrap(), n);
    }

    #[test]
    fn digits_match_std_formatting(n in any::<u64>(), b in prop::sample::select(vec![2u32, 8, 10, 16])) {
        let rendered: String = to_digits(n as u128, base(b))
            .digits()
            .iter()
            .rev()
            .map(|&d| char::from_digit(d, b).unwrap())
            .collect();
        prop_assert_eq!(rendered, std_radix(n as u128, b));
    }

    #[test]
    fn reverse_is_an_involution(n in 1u128..(1 << 100), b in 2u32..=64) {
        prop_assume!(n % b as u128 != 0);
        let r = digital_reverse(n, base(b)).unwrap();
        prop_assert_eq!(digital_reverse(r, base(b)).unwrap(), n);
    }

    #[test]
    fn palindrome_predicate_matches_strings(n in 0u128..2_000_000, b in prop::sample::select(vec![2u32, 8, 10, 16])) {
        let s = std_radix(n, b);
        let expected = n % b as u128 != 0 && s.chars().eq(s.chars().rev());
        prop_assert_eq!(is_palindrome(n, base(b)), expected);
    }

    #[test]
    fn streams_are_increasing_palindromes(b in 2u32..=16, x in 1u128..200_000, restricted: bool) {
        let bb = base(b);
        let v: Vec<u128> = stream_up_to(bb, x, restricted).unwrap().collect();
        prop_assert!(v.windows(2).all(|w| w[0] < w[1]));
        for &n in &v {
            prop_assert!(n <= x && is_palindrome(n, bb));
            if restricted {
                prop_assert_eq!(gcd(n, bb.cube_minus_base()), 1);
            }
        }
        let brute = (1..=x.min(20_000))
            .filter(|&n| is_palindrome(n, bb) && (!restricted || gcd(n, bb.cube_minus_base()) == 1))
            .count();
        prop_assert_eq!(v.iter().filter(|&&n| n <= 20_000).count(), brute);
    }

    #[test]
    fn fixed_length_matches_brute_force(b in 2u32..=16, n in 1u32..=6, restricted: bool) {
        let bb = base(b);
        let lo = (b as u128).pow(n - 1);
        let hi = (b as u128).pow(n);
        prop_assume!(hi <= 2_000_000);
        let brute: Vec<u128> = (lo..hi)
            .filter(|&m| is_palindrome(m, bb) && (!restricted || gcd(m, bb.cube_minus_base()) == 1))
            .collect();
        let got: Vec<u128> = stream_fixed_length(bb, n, restricted).unwrap().collect();
        if !restricted {
            prop_assert_eq!(count_fixed_length(bb, n).unwrap(), brute.len() as u128);
        }
        prop_assert_eq!(got, brute);
    }

    #[test]
    fn prefix_split_partitions_the_stream(b in 2u32..=16, x in 1u128..1_000_000, parts in 1usize..9, restricted: bool) {
        let s = stream_up_to(base(b), x, restricted).unwrap();
        let whole: Vec<u128> = s.clone().collect();
        let mut joined: Vec<u128> = s.split_at_prefix(parts).into_iter().flatten().collect();
        joined.sort_unstable();
        prop_assert_eq!(joined, whole);
    }

    #[test]
    fn mobius_vanishes_exactly_off_squarefree(n in 1u128..1_000_000_000_000) {
        let f = trial_factor(n as u64);
        let sf = f.iter().all(|&(_, e)| e == 1);
        prop_assert_eq!(is_squarefree(n), sf);
        let expected = if sf { if f.len() % 2 == 0 { 1 } else { -1 } } else { 0 };
        prop_assert_eq!(mobius(n), expected);
    }

    #[test]
    fn factorization_multiplies_back(n in 1u128..(1 << 90)) {
        let f = factorize(n);
        let mut prod = 1u128;
        for w in f.pairs().windows(2) {
            prop_assert!(w[0].0 < w[1].0);
        }
        for &(p, e) in f.pairs() {
            prop_assert!(p >= 2);
            prop_assert_eq!(factorize(p).pairs().to_vec(), vec![(p, 1)]);
            prod *= p.pow(e);
        }
        prop_assert_eq!(prod, n);
    }

    #[test]
    fn residue_solutions_match_brute_force(q in 2u64..10_000, a in any::<i64>(), k in 2u32..=3) {
        let target = (a as i128).rem_euclid(q as i128) as u64;
        let brute: Vec<u64> = (1..q).filter(|&w| gcd(w as u128, q as u128) == 1).filter(|&w| {
            let mut v = 1u64;
            for _ in 0..k { v = v * w % q; }
            v == target
        }).collect();
        let got = kth_residue_solutions(a as i128, k, q).unwrap();
        prop_assert_eq!(&got, &brute);
        if q % 3 != 0 && k == 3 {
            let omega = trial_factor(q).len() as u32;
            prop_assert!(got.len() as u64 <= 3u64.pow(omega));
        }
    }

    #[test]
    fn census_routes_agree(b in 2u32..=12, x in 1u128..3_000_000) {
        let bb = base(b);
        prop_assert_eq!(q_star_direct(bb, x).unwrap(), q_star_mobius(bb, x).unwrap());
    }

    #[test]
    fn sb_strategies_agree_and_are_bounded(b in 2u32..=12, x in 1u128..10_000_000, d in 1u128..400) {
        let bb = base(b);
        let scan = s_b(bb, x, d, SbStrategy::Scan).unwrap();
        prop_assert_eq!(scan, s_b(bb, x, d, SbStrategy::Multiples).unwrap());
        prop_assert_eq!(scan, s_b(bb, x, d, SbStrategy::Auto).unwrap());
        prop_assert!(scan <= restricted_count(bb, x).unwrap());
    }

    #[test]
    fn prop1_ratios_are_finite(b in 2u32..=10, xs in prop::collection::vec(1_000u128..1_000_000, 1..4), ds in prop::collection::vec(1u128..50, 1..3)) {
        let fit = fit_prop1(base(b), &cartesian_grid(&xs, &ds)).unwrap();
        for p in &fit.points {
            prop_assert!(p.ratio.is_finite() && p.ratio >= 0.0);
            prop_assert!(fit.fitted_constant >= p.ratio);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn k2_matches_naive_sum(a1 in -1000i64..1000, a2 in -1000i64..1000, a3 in -1000i64..1000, q in -50i64..50, c in 2u64..300) {
        let p = ExpSumParams::new(a1, a2, a3, q, c).unwrap();
        prop_assert!((k2_full(&p) - naive_k2(&p)).norm() < 1e-9 * (c as f64).sqrt());
    }

    #[test]
    fn k2_conjugation(a1 in any::<i32>(), a2 in any::<i32>(), a3 in any::<i32>(), q in any::<i32>(), c in 1u64..5000) {
        let p = ExpSumParams::new(a1 as i64, a2 as i64, a3 as i64, q as i64, c).unwrap();
        let n = ExpSumParams::new(-(a1 as i64), -(a2 as i64), -(a3 as i64), q as i64, c).unwrap();
        prop_assert!((k2_full(&n) - k2_full(&p).conj()).norm() < 1e-9 * (c as f64).sqrt());
    }

    #[test]
    fn stationary_phase_identity(a1 in -1_000_000i64..1_000_000, a2 in -1_000_000i64..1_000_000, a3 in -1_000_000i64..1_000_000, q in -1_000_000i64..1_000_000, c in 2u64..3000) {
        let p = ExpSumParams::new(a1, a2, a3, q, c).unwrap();
        let sp = k2_stationary_phase(&p).unwrap();
        prop_assert!((k2_full(&p) - sp).norm() < 1e-9 * (c as f64).sqrt());
    }

    #[test]
    fn triangle_transform_is_sinc_squared(k in -50.0f64..50.0) {
        let s = if k == 0.0 { 1.0 } else { (std::f64::consts::PI * k).sin() / (std::f64::consts::PI * k) };
        let got = fourier_transform(&Triangle, k).unwrap();
        prop_assert!((got - Complex64::new(s * s, 0.0)).norm() < 1e-8, "k={} got={}", k, got);
    }
}
