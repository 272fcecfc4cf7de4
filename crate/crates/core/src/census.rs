//! Square-free censuses over palindrome sets.
//!
//! * [`q_star_direct`] / [`q_star_mobius`]: the square-free count of the
//!   restricted palindromes up to `x`, once by testing every element and once
//!   through `μ²(n) = Σ_{d² | n} μ(d)`. The two routes share only the
//!   enumeration.
//! * [`s_b`]: restricted palindromes up to `x` with a square divisor `d²`,
//!   `d ∈ [D, 2D]`, by two independent strategies.
//! * [`equidistribution_discrepancy`]: residue-class discrepancy of the
//!   restricted palindromes modulo square moduli.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factorize, gcd, is_squarefree, isqrt, mobius};
use crate::digits::{is_palindrome, Base};
use crate::enumerate::{count_fixed_length, stream_fixed_length, stream_up_to, EnumError, PalindromeStream};

/// Number of prefix partitions used for parallel scans. Fixed so that work
/// distribution never depends on the pool size.
const SCAN_PARTS: usize = 64;

/// `1/ζ(2)`, the density of square-free integers.
pub const INV_ZETA2: f64 = 6.0 / (PI * PI);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error(transparent)]
    Enumerate(#[from] EnumError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("work estimate {estimate} exceeds the budget {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },
    #[error("arithmetic overflow")]
    Overflow,
}

/// The predicted density of square-free restricted palindromes:
/// `(1/ζ(2)) · ∏_{p | b³-b} p²/(p²-1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityConstant {
    /// Exact Euler-factor correction `∏ p²/(p²-1)`.
    pub factor: Ratio<u128>,
    pub value: f64,
}

pub fn density_constant(b: Base) -> Result<DensityConstant, CensusError> {
    let mut factor = Ratio::from_integer(1u128);
    for p in factorize(b.cube_minus_base()).primes() {
        let p2 = p.checked_mul(p).ok_or(CensusError::Overflow)?;
        let term = Ratio::new(p2, p2 - 1);
        let numer = factor.numer().checked_mul(*term.numer()).ok_or(CensusError::Overflow)?;
        let denom = factor.denom().checked_mul(*term.denom()).ok_or(CensusError::Overflow)?;
        factor = Ratio::new(numer, denom);
    }
    let value = INV_ZETA2 * (*factor.numer() as f64 / *factor.denom() as f64);
    Ok(DensityConstant { factor, value })
}

/// One row of a square-free census.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub base: u32,
    /// `"up_to"` (restricted palindromes `<= x`) or `"fixed_length"`
    /// (unrestricted `N`-digit palindromes).
    pub scope_kind: String,
    pub scope_value: u128,
    pub total: u128,
    pub squarefree: u128,
    #[serde(serialize_with = "crate::report::sig12")]
    pub ratio: f64,
    /// Predicted density.
    #[serde(serialize_with = "crate::report::sig12")]
    pub predicted: f64,
    /// `predicted · total`.
    #[serde(serialize_with = "crate::report::sig12")]
    pub predicted_count: f64,
    #[serde(serialize_with = "crate::report::sig12")]
    pub abs_error: f64,
}

impl CensusRecord {
    fn new(b: Base, scope_kind: &str, scope_value: u128, total: u128, squarefree: u128, predicted: f64) -> Self {
        let ratio = if total > 0 { squarefree as f64 / total as f64 } else { 0.0 };
        CensusRecord {
            base: b.get(),
            scope_kind: scope_kind.to_string(),
            scope_value,
            total,
            squarefree,
            ratio,
            predicted,
            predicted_count: predicted * total as f64,
            abs_error: if total > 0 { (ratio - predicted).abs() } else { 0.0 },
        }
    }
}

/// Runs `f` over prefix partitions of `stream` in parallel and returns the
/// partial results in partition order.
fn scan_parts<T, F>(stream: PalindromeStream, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(PalindromeStream) -> T + Sync + Send,
{
    stream.split_at_prefix(SCAN_PARTS).into_par_iter().map(f).collect()
}

fn count_where(stream: PalindromeStream, pred: impl Fn(u128) -> bool + Sync + Send) -> (u128, u128) {
    scan_parts(stream, |s| {
        let mut total = 0u128;
        let mut hits = 0u128;
        for n in s {
            total += 1;
            hits += pred(n) as u128;
        }
        (total, hits)
    })
    .into_iter()
    .fold((0, 0), |(t, h), (a, b)| (t + a, h + b))
}

/// `#𝒫_b*(x)`.
pub fn restricted_count(b: Base, x: u128) -> Result<u128, CensusError> {
    Ok(count_where(stream_up_to(b, x, true)?, |_| false).0)
}

/// Square-free restricted palindromes `<= x`, testing each element.
pub fn q_star_direct(b: Base, x: u128) -> Result<u128, CensusError> {
    Ok(count_where(stream_up_to(b, x, true)?, is_squarefree).1)
}

/// Every `d >= 1` with `d² | n`, from the factorization of `n`.
fn square_divisors(n: u128) -> Vec<u128> {
    let mut out = vec![1u128];
    for &(p, e) in factorize(n).iter() {
        let len = out.len();
        let mut pk = 1u128;
        for _ in 0..e / 2 {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out
}

/// Square-free restricted palindromes `<= x` via Möbius inversion:
/// `Σ_{d <= √x, (d, b³-b) = 1} μ(d) · #{n ∈ 𝒫_b*(x) : d² | n}`.
///
/// The stream is read once; each element contributes to the count of every
/// `d` whose square divides it.
pub fn q_star_mobius(b: Base, x: u128) -> Result<u128, CensusError> {
    let (counts, _) = divisor_counts(b, x)?;
    let m = b.cube_minus_base();
    let root = isqrt(x);
    let mut sum: i128 = 0;
    for (&d, &count) in &counts {
        if d <= root && gcd(d, m) == 1 {
            sum += mobius(d) as i128 * count as i128;
        }
    }
    u128::try_from(sum).map_err(|_| CensusError::Overflow)
}

/// `d -> #{n ∈ 𝒫_b*(x) : d² | n}` for every `d` with a nonzero count, plus
/// `#𝒫_b*(x)`.
pub fn divisor_counts(b: Base, x: u128) -> Result<(BTreeMap<u128, u128>, u128), CensusError> {
    let partials = scan_parts(stream_up_to(b, x, true)?, |s| {
        let mut local: BTreeMap<u128, u128> = BTreeMap::new();
        let mut total = 0u128;
        for n in s {
            total += 1;
            for d in square_divisors(n) {
                *local.entry(d).or_default() += 1;
            }
        }
        (local, total)
    });
    let mut counts = BTreeMap::new();
    let mut total = 0;
    for (local, t) in partials {
        total += t;
        for (d, c) in local {
            *counts.entry(d).or_default() += c;
        }
    }
    Ok((counts, total))
}

/// Restricted census up to `x` against [`density_constant`].
pub fn q_star_record(b: Base, x: u128) -> Result<CensusRecord, CensusError> {
    let (total, squarefree) = count_where(stream_up_to(b, x, true)?, is_squarefree);
    let predicted = density_constant(b)?.value;
    Ok(CensusRecord::new(b, "up_to", x, total, squarefree, predicted))
}

/// Unrestricted census over `N`-digit palindromes against `1/ζ(2)`.
pub fn q_fixed_length(b: Base, n: u32) -> Result<CensusRecord, CensusError> {
    let (total, squarefree) = count_where(stream_fixed_length(b, n, false)?, is_squarefree);
    debug_assert_eq!(Ok(total), count_fixed_length(b, n));
    Ok(CensusRecord::new(b, "fixed_length", n as u128, total, squarefree, INV_ZETA2))
}

/// How [`s_b`] finds palindromes with a large square divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SbStrategy {
    /// Stream palindromes and test each `d²`.
    Scan,
    /// Walk multiples of each `d²` and test the palindrome condition.
    Multiples,
    /// Pick the cheaper of the two by [`s_b_cost`].
    Auto,
}

/// Moduli `d ∈ [D, 2D]` that can divide a restricted palindrome `<= x`:
/// coprime to `b³ - b` and with `d² <= x`.
fn admissible_moduli(b: Base, x: u128, big_d: u128) -> Vec<u128> {
    let m = b.cube_minus_base();
    let top = (2 * big_d).min(isqrt(x));
    (big_d..=top).filter(|&d| gcd(d, m) == 1).collect()
}

/// Estimated probe counts `(scan, multiples)` for [`s_b`].
pub fn s_b_cost(b: Base, x: u128, big_d: u128) -> (u128, u128) {
    let moduli = admissible_moduli(b, x, big_d);
    let prefixes = stream_up_to(b, x, true).map_or(u128::MAX, |s| s.prefixes_remaining());
    let scan = prefixes.saturating_mul(moduli.len() as u128 + 1);
    let multiples = moduli.iter().map(|&d| x / (d * d)).sum::<u128>() + moduli.len() as u128;
    (scan, multiples)
}

/// `S_b(x, D) = #{n ∈ 𝒫_b*(x) : d² | n for some d ∈ [D, 2D]}`.
pub fn s_b(b: Base, x: u128, big_d: u128, strategy: SbStrategy) -> Result<u128, CensusError> {
    if x == 0 || big_d == 0 {
        return Err(CensusError::InvalidArgument("x and D must be >= 1".into()));
    }
    let strategy = match strategy {
        SbStrategy::Auto => {
            let (scan, multiples) = s_b_cost(b, x, big_d);
            if scan <= multiples {
                SbStrategy::Scan
            } else {
                SbStrategy::Multiples
            }
        }
        s => s,
    };
    let moduli = admissible_moduli(b, x, big_d);
    if moduli.is_empty() {
        return Ok(0);
    }
    match strategy {
        SbStrategy::Scan => {
            let squares: Vec<u128> = moduli.iter().map(|d| d * d).collect();
            Ok(count_where(stream_up_to(b, x, true)?, |n| squares.iter().any(|&s| n % s == 0)).1)
        }
        SbStrategy::Multiples => {
            let m = b.cube_minus_base();
            let per_d: Vec<Vec<u128>> = moduli
                .par_iter()
                .map(|&d| {
                    let sq = d * d;
                    (1..=x / sq).map(|k| k * sq).filter(|&n| is_palindrome(n, b) && gcd(n, m) == 1).collect()
                })
                .collect();
            Ok(merge_dedup(per_d).len() as u128)
        }
        SbStrategy::Auto => unreachable!(),
    }
}

/// Merges sorted lists, keeping one copy of each value.
fn merge_dedup(lists: Vec<Vec<u128>>) -> Vec<u128> {
    lists.into_iter().fold(Vec::new(), |acc, list| {
        let mut out = Vec::with_capacity(acc.len() + list.len());
        let (mut i, mut j) = (0, 0);
        while i < acc.len() || j < list.len() {
            let next = match (acc.get(i), list.get(j)) {
                (Some(&a), Some(&l)) if a <= l => {
                    i += 1;
                    if a == l {
                        j += 1;
                    }
                    a
                }
                (Some(_), Some(&l)) | (None, Some(&l)) => {
                    j += 1;
                    l
                }
                (Some(&a), None) => {
                    i += 1;
                    a
                }
                (None, None) => unreachable!(),
            };
            if out.last() != Some(&next) {
                out.push(next);
            }
        }
        out
    })
}

/// Upper bound on `#palindromes · #moduli` for a discrepancy evaluation.
pub const DISCREPANCY_BUDGET: u128 = 1_000_000_000;

/// `Σ_{d <= d_max, (d, b³-b) = 1} μ²(d) · sup_{y <= x} max_a |Σ_{n ∈ 𝒫_b*(y)}
/// (1_{n ≡ a (d²)} - 1/d²)|`.
///
/// The inner sum only changes at palindromes, so the supremum is taken over
/// the prefixes of the sorted palindrome list, which is exact.
pub fn equidistribution_discrepancy(b: Base, x: u128, d_max: u128) -> Result<f64, CensusError> {
    if d_max == 0 || d_max > isqrt(x) {
        return Err(CensusError::InvalidArgument(format!("d_max must lie in [1, √x], got {d_max}")));
    }
    let m = b.cube_minus_base();
    let moduli: Vec<u128> = (1..=d_max).filter(|&d| gcd(d, m) == 1 && is_squarefree(d)).collect();
    let palindromes: Vec<u128> = stream_up_to(b, x, true)?.collect();
    let estimate = palindromes.len() as u128 * moduli.len() as u128;
    if estimate > DISCREPANCY_BUDGET {
        return Err(CensusError::BudgetExceeded { estimate, budget: DISCREPANCY_BUDGET });
    }
    let terms: Vec<f64> = moduli.par_iter().map(|&d| residue_discrepancy(&palindromes, d * d)).collect();
    Ok(terms.iter().sum())
}

/// `sup_k max_a |#{j < k : n_j ≡ a} - k/modulus|` over prefixes of `values`.
fn residue_discrepancy(values: &[u128], modulus: u128) -> f64 {
    let mut counts: HashMap<u128, u64> = HashMap::new();
    // count_of_counts[c] = number of residues hit exactly c times, c >= 1
    let mut count_of_counts: Vec<u128> = vec![0];
    let mut distinct = 0u128;
    let mut max_count = 0u64;
    let mut min_count = 0u64;
    let mut sup = 0.0f64;
    for (k, &n) in values.iter().enumerate() {
        let c = counts.entry(n % modulus).or_insert(0);
        let old = *c;
        *c += 1;
        let new = *c;
        if count_of_counts.len() <= new as usize {
            count_of_counts.push(0);
        }
        if old == 0 {
            distinct += 1;
        } else {
            count_of_counts[old as usize] -= 1;
        }
        count_of_counts[new as usize] += 1;
        max_count = max_count.max(new);
        if distinct == modulus {
            // every class is hit; the minimum moves up once its level empties
            if min_count == 0 || (old == min_count && count_of_counts[old as usize] == 0) {
                min_count = (1..).find(|&l| count_of_counts[l as usize] > 0).unwrap();
            }
        }
        let mean = (k + 1) as f64 / modulus as f64;
        sup = sup.max(max_count as f64 - mean).max(mean - min_count as f64);
    }
    sup
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u32) -> Base {
        Base::new(n).unwrap()
    }

    /// Independent oracle: scan every integer, string palindromes, trial
    /// squarefreeness.
    fn brute_restricted(base: u32, x: u128) -> Vec<u128> {
        let m = (base as u128).pow(3) - base as u128;
        (1..=x)
            .filter(|&n| {
                let s = crate::digits::to_digits(n, b(base)).digits().to_vec();
                let mut r = s.clone();
                r.reverse();
                s[0] != 0 && s == r && gcd(n, m) == 1
            })
            .collect()
    }

    fn trial_squarefree(n: u128) -> bool {
        (2..).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0)
    }

    #[test]
    fn density_examples() {
        let c10 = density_constant(b(10)).unwrap();
        assert_eq!(c10.factor, Ratio::new(605, 384));
        // exact rational times 6/π²; rounds to 0.957802
        assert!((c10.value - 0.957_801_814_118_974).abs() < 1e-14);
        assert!((c10.value - 0.957_804).abs() < 5e-6);
        let c2 = density_constant(b(2)).unwrap();
        assert_eq!(c2.factor, Ratio::new(3, 2));
        assert!((c2.value - 9.0 / (PI * PI)).abs() < 1e-15);
        assert!((INV_ZETA2 - 0.607_927).abs() < 5e-7);
    }

    #[test]
    fn q_star_examples() {
        assert_eq!(q_star_direct(b(10), 100), Ok(2));
        assert_eq!(q_star_direct(b(10), 1), Ok(1));
        assert_eq!(q_star_mobius(b(10), 100), Ok(2));
        let brute = brute_restricted(2, 10_000);
        let expect = brute.iter().filter(|&&n| trial_squarefree(n)).count() as u128;
        assert_eq!(q_star_direct(b(2), 10_000), Ok(expect));
        assert_eq!(q_star_mobius(b(2), 10_000), Ok(expect));
    }

    #[test]
    fn direct_matches_brute_scan() {
        for base in [2u32, 3, 5, 10] {
            for x in [10u128, 1_000, 50_000] {
                let brute = brute_restricted(base, x);
                let sf = brute.iter().filter(|&&n| trial_squarefree(n)).count() as u128;
                assert_eq!(restricted_count(b(base), x), Ok(brute.len() as u128));
                assert_eq!(q_star_direct(b(base), x), Ok(sf), "b={base} x={x}");
            }
        }
    }

    #[test]
    fn mobius_identity_small_grid() {
        for base in [2u32, 3, 4, 5, 7, 10, 12] {
            for x in [1u128, 7, 100, 999, 10_000, 1_000_000] {
                assert_eq!(q_star_direct(b(base), x), q_star_mobius(b(base), x), "b={base} x={x}");
            }
        }
    }

    #[test]
    fn decimal_census_values() {
        // frozen from the brute-force scan oracle above
        let r = q_star_record(b(10), 10_000).unwrap();
        assert_eq!((r.total, r.squarefree), (25, 24));
        let r = q_star_record(b(10), 1_000_000).unwrap();
        assert_eq!((r.total, r.squarefree), (266, 254));
        let brute = brute_restricted(10, 1_000_000);
        assert_eq!(brute.len(), 266);
        assert_eq!(brute.iter().filter(|&&n| trial_squarefree(n)).count(), 254);
        assert!(r.abs_error < 0.05);
    }

    #[test]
    fn fixed_length_examples() {
        let r = q_fixed_length(b(10), 1).unwrap();
        // 4, 8 and 9 are the non-square-free digits
        assert_eq!((r.total, r.squarefree), (9, 6));
        let r = q_fixed_length(b(10), 2).unwrap();
        let expect = (11..100u128).step_by(11).filter(|&n| trial_squarefree(n)).count() as u128;
        assert_eq!((r.total, r.squarefree), (9, expect));
        assert_eq!(expect, 6); // 44, 88 and 99 drop out
        let r = q_fixed_length(b(2), 3).unwrap();
        assert_eq!((r.total, r.squarefree), (2, 2));
        assert_eq!(r.predicted, INV_ZETA2);
    }

    #[test]
    fn s_b_examples() {
        for strategy in [SbStrategy::Scan, SbStrategy::Multiples, SbStrategy::Auto] {
            assert_eq!(s_b(b(10), 1000, 2, strategy), Ok(0));
            assert_eq!(s_b(b(10), 10_000, 5, strategy), Ok(1));
            assert_eq!(s_b(b(10), 10_000, 101, strategy), Ok(0));
        }
        // the unique witness is 343 = 7³
        let hits: Vec<u128> =
            brute_restricted(10, 10_000).into_iter().filter(|&n| (5..=10u128).any(|d| n % (d * d) == 0)).collect();
        assert_eq!(hits, vec![343]);
    }

    #[test]
    fn s_b_strategies_agree() {
        for base in [2u32, 3, 10] {
            for x in [1_000u128, 100_000, 3_000_000] {
                for big_d in [1u128, 2, 3, 5, 8, 13, 40, 100, 400] {
                    let a = s_b(b(base), x, big_d, SbStrategy::Scan).unwrap();
                    let m = s_b(b(base), x, big_d, SbStrategy::Multiples).unwrap();
                    assert_eq!(a, m, "b={base} x={x} D={big_d}");
                    assert!(a <= restricted_count(b(base), x).unwrap());
                }
            }
        }
    }

    #[test]
    fn dyadic_blocks_cover_non_squarefree() {
        for base in [2u32, 10] {
            let x = 1_000_000u128;
            let total = restricted_count(b(base), x).unwrap();
            let sf = q_star_direct(b(base), x).unwrap();
            let mut dyadic = 0;
            let mut big_d = 2u128;
            while big_d * big_d <= x {
                dyadic += s_b(b(base), x, big_d, SbStrategy::Auto).unwrap();
                big_d *= 2;
            }
            assert!(total - sf <= dyadic, "b={base}");
        }
    }

    #[test]
    fn merge_dedup_sorted() {
        let out = merge_dedup(vec![vec![1, 4, 9], vec![4, 5], vec![], vec![9, 10]]);
        assert_eq!(out, vec![1, 4, 5, 9, 10]);
    }

    /// Direct evaluation: every prefix, every residue class.
    fn brute_discrepancy(base: u32, x: u128, d_max: u128) -> f64 {
        let ps = brute_restricted(base, x);
        let m = (base as u128).pow(3) - base as u128;
        let mut total = 0.0;
        for d in (1..=d_max).filter(|&d| gcd(d, m) == 1 && trial_squarefree(d)) {
            let q = d * d;
            let mut sup = 0.0f64;
            for k in 0..=ps.len() {
                for a in 0..q {
                    let c = ps[..k].iter().filter(|&&n| n % q == a).count() as f64;
                    sup = sup.max((c - k as f64 / q as f64).abs());
                }
            }
            total += sup;
        }
        total
    }

    #[test]
    fn discrepancy_examples() {
        assert_eq!(equidistribution_discrepancy(b(10), 10_000, 1), Ok(0.0));
        let v = equidistribution_discrepancy(b(10), 10_000, 3).unwrap();
        assert!((v - brute_discrepancy(10, 10_000, 3)).abs() < 1e-12);
        for (base, x, d_max) in [(10u32, 10_000u128, 13u128), (2, 4096, 15), (3, 20_000, 20)] {
            let v = equidistribution_discrepancy(b(base), x, d_max).unwrap();
            let w = brute_discrepancy(base, x, d_max);
            assert!((v - w).abs() < 1e-9, "b={base} x={x} d_max={d_max}: {v} vs {w}");
        }
        assert!(equidistribution_discrepancy(b(10), 100, 11).is_err());
    }

    #[test]
    fn discrepancy_monotone_in_d_max() {
        let mut prev = 0.0;
        for d_max in 1..=40 {
            let v = equidistribution_discrepancy(b(2), 1 << 12, d_max).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }
}
