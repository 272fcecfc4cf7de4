//! Complete quadratic Kloosterman sums
//!
//! `K₂(a1, a2, a3, q; c) = c^{-1/2} Σ_{x mod c, (x(x+q), c) = 1} e((a1·x + a2·x̄² + a3·(x+q)̄²)/c)`,
//! their evaluation through the p-adic stationary phase identity, empirical
//! constants for pointwise and q-averaged bounds, and a numerical check of
//! Poisson summation twisted by a periodic weight.
//!
//! Phases are reduced modulo `c` in integer arithmetic before the single
//! division that feeds the complex exponential.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factorize, gcd_u64, mod_inverse};
use crate::digits::Base;
use crate::oscillate::{fourier_transform, pairwise_sum, CompactFunction, OscError};
use crate::report::{sig12, sig12_complex};

#[derive(Debug, Error)]
pub enum ExpSumError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("tail bound failure: {0}")]
    TailBoundFailure(String),
    #[error(transparent)]
    Oscillate(#[from] OscError),
}

/// Arguments of `K₂(a1, a2, a3, q; c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExpSumParams {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub q: i64,
    pub c: u64,
}

impl ExpSumParams {
    pub fn new(a1: i64, a2: i64, a3: i64, q: i64, c: u64) -> Result<Self, ExpSumError> {
        if c == 0 {
            return Err(ExpSumError::InvalidArgument("modulus c must be >= 1".into()));
        }
        Ok(Self { a1, a2, a3, q, c })
    }

    /// Parameters of the simplified sum `K₂(a1, a2; c)`.
    pub fn simple(a1: i64, a2: i64, c: u64) -> Result<Self, ExpSumError> {
        Self::new(a1, a2, 0, 0, c)
    }

    /// The parameters with `a1, a2, a3` negated.
    pub fn conjugate(self) -> Self {
        Self { a1: -self.a1, a2: -self.a2, a3: -self.a3, ..self }
    }
}

/// `c = c1·c2` with `c1 = ∏ p^⌊α/2⌋` and `c2 = ∏ p^⌈α/2⌉`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StationarySplit {
    pub c: u64,
    pub c1: u64,
    pub c2: u64,
    /// `(p, α)` pairs of `c`, primes ascending.
    pub factorization: Vec<(u64, u32)>,
}

/// Above this modulus `k2` evaluates through the stationary phase identity.
pub const STATIONARY_THRESHOLD: u64 = 1 << 12;

fn reduce(a: impl Into<i128>, m: u64) -> u64 {
    a.into().rem_euclid(m as i128) as u64
}

fn mul(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    mod_inverse(a as i128, m as u128).expect("caller checked coprimality") as u64
}

/// `e(num/den)`, `0 <= num < den`.
fn unit_root(num: u64, den: u64) -> Complex64 {
    // symmetric representative halves the argument of sin_cos
    let centred = if num > den / 2 { num as f64 - den as f64 } else { num as f64 };
    let (s, c) = (TAU * centred / den as f64).sin_cos();
    Complex64::new(c, s)
}

/// Units `x` and `x + q` modulo `c`, with their inverses modulo `c`.
fn unit_pair(x: u64, p: &ExpSumParams) -> Option<(u64, u64)> {
    let c = p.c;
    let x = x % c;
    let y = (x as i128 + p.q as i128).rem_euclid(c as i128) as u64;
    if gcd_u64(x, c) != 1 || gcd_u64(y, c) != 1 {
        return None;
    }
    Some((inverse(x, c), inverse(y, c)))
}

/// `F(x) mod c` for the phase `a1·x + a2·x̄² + a3·ȳ²`, given `x̄, ȳ` modulo `c`.
fn phase_mod_c(x: u64, x_inv: u64, y_inv: u64, p: &ExpSumParams) -> u64 {
    let c = p.c;
    let t1 = mul(reduce(p.a1, c), x % c, c);
    let t2 = mul(reduce(p.a2, c), mul(x_inv, x_inv, c), c);
    let t3 = mul(reduce(p.a3, c), mul(y_inv, y_inv, c), c);
    ((t1 as u128 + t2 as u128 + t3 as u128) % c as u128) as u64
}

/// `F'(x) ≡ a1 - 2a2·x̄³ - 2a3·ȳ³ (mod c1)`, given `x̄, ȳ` modulo `c1`.
fn derivative_mod_c1(x_inv: u64, y_inv: u64, p: &ExpSumParams, c1: u64) -> u64 {
    let cube = |v: u64| mul(mul(v, v, c1), v, c1);
    let t2 = mul(reduce(2 * p.a2 as i128, c1), cube(x_inv), c1);
    let t3 = mul(reduce(p.a3, c1), mul(2, cube(y_inv), c1), c1);
    let a1 = reduce(p.a1, c1) as u128;
    ((a1 + 2 * c1 as u128 - t2 as u128 - t3 as u128) % c1 as u128) as u64
}

/// Direct `O(c)` evaluation of `K₂(a1, a2, a3, q; c)`.
pub fn k2_full(p: &ExpSumParams) -> Complex64 {
    let c = p.c;
    if c == 1 {
        return Complex64::new(1.0, 0.0);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for x in 1..=c {
        if let Some((xi, yi)) = unit_pair(x, p) {
            sum += unit_root(phase_mod_c(x, xi, yi, p), c);
        }
    }
    sum / (c as f64).sqrt()
}

/// `K₂(a1, a2; c) = K₂(a1, a2, 0, 0; c)`.
pub fn k2_simple(a1: i64, a2: i64, c: u64) -> Complex64 {
    k2_full(&ExpSumParams { a1, a2, a3: 0, q: 0, c })
}

pub fn stationary_split(c: u64) -> Result<StationarySplit, ExpSumError> {
    if c < 2 {
        return Err(ExpSumError::InvalidArgument(format!("stationary split needs c >= 2, got {c}")));
    }
    let factorization: Vec<(u64, u32)> = factorize(c as u128).iter().map(|&(p, e)| (p as u64, e)).collect();
    let (mut c1, mut c2) = (1u64, 1u64);
    for &(p, e) in &factorization {
        c1 *= p.pow(e / 2);
        c2 *= p.pow(e.div_ceil(2));
    }
    Ok(StationarySplit { c, c1, c2, factorization })
}

/// `K₂` through the exact stationary phase identity
/// `K₂ = (c1/√c) Σ_{w mod c2, (w(w+q), c) = 1, F'(w) ≡ 0 (c1)} e(F(w)/c)`.
///
/// Writing `x = w + z·c2` gives `F(x) ≡ F(w) + z·c2·F'(w) (mod c)` since
/// `c | c2²`; the sum over `z mod c1` is then `c1` or `0`.
pub fn k2_stationary_phase(p: &ExpSumParams) -> Result<Complex64, ExpSumError> {
    let split = stationary_split(p.c)?;
    let (c, c1) = (p.c, split.c1);
    let mut sum = Complex64::new(0.0, 0.0);
    for w in 1..=split.c2 {
        let Some((wi_c, yi_c)) = unit_pair(w, p) else { continue };
        // inverses modulo c reduce to inverses modulo c1 | c
        let (wi_c1, yi_c1) = (wi_c % c1, yi_c % c1);
        if derivative_mod_c1(wi_c1, yi_c1, p, c1) != 0 {
            continue;
        }
        sum += unit_root(phase_mod_c(w, wi_c, yi_c, p), c);
    }
    Ok(sum * (c1 as f64 / (c as f64).sqrt()))
}

/// `K₂` by whichever route is cheaper: direct for `c <= STATIONARY_THRESHOLD`.
pub fn k2(p: &ExpSumParams) -> Complex64 {
    if p.c <= STATIONARY_THRESHOLD {
        k2_full(p)
    } else {
        k2_stationary_phase(p).expect("c > threshold >= 2")
    }
}

/// `#{w mod c1 : (w(w+q), c) = 1, a1 - 2a2·w̄³ - 2a3·(w+q)̄³ ≡ 0 (mod c1)}`,
/// inverses taken modulo `c1`. Equal to 1 when `c1 = 1`.
pub fn count_critical_points(p: &ExpSumParams) -> Result<u64, ExpSumError> {
    let split = stationary_split(p.c)?;
    let c1 = split.c1;
    if c1 == 1 {
        return Ok(1);
    }
    let mut count = 0;
    for w in 1..=c1 {
        if unit_pair(w, p).is_none() {
            continue;
        }
        let w_inv = inverse(w % c1, c1);
        let y_inv = inverse((w as i128 + p.q as i128).rem_euclid(c1 as i128) as u64, c1);
        if derivative_mod_c1(w_inv, y_inv, p, c1) == 0 {
            count += 1;
        }
    }
    Ok(count)
}

/// `Σ_{|q| <= Q} |K₂(m, a, -a, q; c)|`.
pub fn k2_q_average(m: i64, a: i64, big_q: u64, c: u64) -> Result<f64, ExpSumError> {
    if c == 0 {
        return Err(ExpSumError::InvalidArgument("modulus c must be >= 1".into()));
    }
    let span = i64::try_from(big_q).map_err(|_| ExpSumError::InvalidArgument(format!("Q = {big_q} too large")))?;
    let terms: Vec<f64> =
        (-span..=span).into_par_iter().map(|q| k2(&ExpSumParams { a1: m, a2: a, a3: -a, q, c }).norm()).collect();
    Ok(terms.iter().sum())
}

// ---------------------------------------------------------------------------
// Identity grid

/// One comparison of the direct and stationary phase evaluations.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityRecord {
    pub params: ExpSumParams,
    #[serde(serialize_with = "sig12_complex")]
    pub full: Complex64,
    #[serde(serialize_with = "sig12_complex")]
    pub stationary: Complex64,
    #[serde(serialize_with = "sig12")]
    pub diff: f64,
    #[serde(serialize_with = "sig12")]
    pub tolerance: f64,
    pub ok: bool,
}

/// Tolerance for the identity: `1e-9·√c`.
pub fn identity_tolerance(c: u64) -> f64 {
    1e-9 * (c as f64).sqrt()
}

pub fn check_identity(p: &ExpSumParams) -> Result<IdentityRecord, ExpSumError> {
    let full = k2_full(p);
    let stationary = k2_stationary_phase(p)?;
    let diff = (full - stationary).norm();
    let tolerance = identity_tolerance(p.c);
    Ok(IdentityRecord { params: *p, full, stationary, diff, tolerance, ok: diff < tolerance })
}

/// Moduli of the identity grid: prime powers `p^α <= limit` for
/// `p ∈ {2, 3, 5, 7, 11}`, then powers `b^K <= limit` for `b ∈ {2, 10}`
/// (the binary powers appear twice and receive independent samples).
pub fn identity_moduli(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for base in [2u64, 3, 5, 7, 11, 2, 10] {
        let mut c = base;
        while c <= limit {
            out.push(c);
            c *= base;
        }
    }
    out
}

/// `per_modulus` random tuples for every modulus of [`identity_moduli`].
/// Coefficients are drawn from `±10^6` so reduction modulo `c` is exercised.
pub fn identity_grid(limit: u64, per_modulus: usize, seed: u64) -> Vec<ExpSumParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for c in identity_moduli(limit) {
        for _ in 0..per_modulus {
            out.push(ExpSumParams {
                a1: rng.gen_range(-1_000_000..=1_000_000),
                a2: rng.gen_range(-1_000_000..=1_000_000),
                a3: rng.gen_range(-1_000_000..=1_000_000),
                q: rng.gen_range(-(c as i64)..=c as i64),
                c,
            });
        }
    }
    out
}

pub fn run_identity_grid(grid: &[ExpSumParams]) -> Result<Vec<IdentityRecord>, ExpSumError> {
    grid.par_iter().map(check_identity).collect()
}

// ---------------------------------------------------------------------------
// Empirical constants

/// `(m, a)` pairs with `gcd(a, b) = 1`.
pub fn coefficient_samples(b: Base, count: usize, seed: u64) -> Vec<(i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bb = b.get() as u64;
    (0..count)
        .map(|_| {
            let m = rng.gen_range(-1_000_000..=1_000_000);
            let a = loop {
                let a: i64 = rng.gen_range(1..=1_000_000);
                if gcd_u64(a as u64, bb) == 1 {
                    break a;
                }
            };
            (m, a)
        })
        .collect()
}

/// All divisors of `b^n`, ascending.
pub fn divisors_of_power(b: Base, n: u32) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, e) in factorize(b.as_u128()).iter() {
        let p = p as u64;
        let mut next = Vec::new();
        for &d in &divs {
            let mut pk = 1u64;
            for _ in 0..=e * n {
                next.push(d * pk);
                pk = pk.saturating_mul(p);
            }
        }
        divs = next;
    }
    divs.sort_unstable();
    divs
}

/// Ratio `|K₂| / count_critical_points` per exponent at one prime.
#[derive(Debug, Clone, Serialize)]
pub struct StationaryConstantFit {
    pub prime: u64,
    /// `(α, max ratio)` over the sampled tuples.
    pub per_exponent: Vec<(u32, f64)>,
    #[serde(serialize_with = "sig12")]
    pub kappa: f64,
    /// Tuples where every unit residue mod `c1` is critical.
    pub degenerate: usize,
}

pub fn fit_stationary_constant(
    prime: u64,
    exponents: &[u32],
    samples: usize,
    seed: u64,
) -> Result<StationaryConstantFit, ExpSumError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_exponent = Vec::with_capacity(exponents.len());
    let mut degenerate = 0;
    for &alpha in exponents {
        let c = prime
            .checked_pow(alpha)
            .filter(|&c| c >= 2)
            .ok_or_else(|| ExpSumError::InvalidArgument(format!("{prime}^{alpha} is not a usable modulus")))?;
        let tuples: Vec<ExpSumParams> = (0..samples)
            .map(|_| ExpSumParams {
                a1: rng.gen_range(-1_000_000..=1_000_000),
                a2: rng.gen_range(-1_000_000..=1_000_000),
                a3: rng.gen_range(-1_000_000..=1_000_000),
                q: rng.gen_range(-(c.min(1 << 40) as i64)..=c.min(1 << 40) as i64),
                c,
            })
            .collect();
        let split = stationary_split(c)?;
        let units_mod_c1 = if split.c1 == 1 { 1 } else { split.c1 - split.c1 / prime };
        let rows: Vec<(f64, bool)> = tuples
            .par_iter()
            .map(|p| {
                let count = count_critical_points(p)?;
                let value = k2(p).norm();
                let ratio = if count == 0 { 0.0 } else { value / count as f64 };
                Ok((ratio, split.c1 > 1 && count == units_mod_c1))
            })
            .collect::<Result<_, ExpSumError>>()?;
        degenerate += rows.iter().filter(|r| r.1).count();
        per_exponent.push((alpha, rows.iter().map(|r| r.0).fold(0.0, f64::max)));
    }
    let kappa = per_exponent.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(StationaryConstantFit { prime, per_exponent, kappa, degenerate })
}

/// Pointwise constant for `|K₂(m, a; c)|` over divisors `c` of `b^n`, fitted
/// on `c <= split` and checked on the larger divisors.
#[derive(Debug, Clone, Serialize)]
pub struct PointwiseFit {
    pub base: u32,
    pub n_max: u32,
    pub split: u64,
    #[serde(serialize_with = "sig12")]
    pub fitted: f64,
    #[serde(serialize_with = "sig12")]
    pub max_beyond: f64,
    pub moduli: usize,
    pub holds: bool,
}

pub fn fit_pointwise_constant(
    b: Base,
    n_max: u32,
    split: u64,
    samples: &[(i64, i64)],
) -> Result<PointwiseFit, ExpSumError> {
    let divisors = divisors_of_power(b, n_max);
    let maxima: Vec<(u64, f64)> = divisors
        .par_iter()
        .map(|&c| {
            let worst = samples
                .iter()
                .map(|&(m, a)| k2(&ExpSumParams { a1: m, a2: a, a3: 0, q: 0, c }).norm())
                .fold(0.0, f64::max);
            (c, worst)
        })
        .collect();
    let fitted = maxima.iter().filter(|r| r.0 <= split).map(|r| r.1).fold(0.0, f64::max);
    let max_beyond = maxima.iter().filter(|r| r.0 > split).map(|r| r.1).fold(0.0, f64::max);
    Ok(PointwiseFit {
        base: b.get(),
        n_max,
        split,
        fitted,
        max_beyond,
        moduli: divisors.len(),
        // relative slack for rounding in the two routes
        holds: max_beyond <= fitted * (1.0 + 1e-9),
    })
}

/// Constant `C'` with `Σ_{|q|<=Q} |K₂(m, a, -a, q; c)| <= C'(Q + √(b^n))`
/// over every divisor `c` of `b^n`, every `Q` and every sample.
#[derive(Debug, Clone, Serialize)]
pub struct AverageFit {
    pub base: u32,
    pub n: u32,
    pub qs: Vec<u64>,
    #[serde(serialize_with = "sig12")]
    pub constant: f64,
}

pub fn fit_average_constant(b: Base, n: u32, qs: &[u64], samples: &[(i64, i64)]) -> Result<AverageFit, ExpSumError> {
    let scale = (b.get() as f64).powf(n as f64 / 2.0);
    let mut points = Vec::new();
    for c in divisors_of_power(b, n) {
        for &big_q in qs {
            for &(m, a) in samples {
                points.push((c, big_q, m, a));
            }
        }
    }
    let ratios: Vec<f64> = points
        .par_iter()
        .map(|&(c, big_q, m, a)| Ok(k2_q_average(m, a, big_q, c)? / (big_q as f64 + scale)))
        .collect::<Result<_, ExpSumError>>()?;
    Ok(AverageFit { base: b.get(), n, qs: qs.to_vec(), constant: ratios.iter().copied().fold(0.0, f64::max) })
}

// ---------------------------------------------------------------------------
// Poisson summation

/// Largest truncation `M` tried for the dual sum.
pub const POISSON_M_MAX: u64 = 1000;

/// Both sides of `Σ_n f(n)g(n) = q^{-1/2} Σ_m f̂(m/q) ĝ(m)`.
#[derive(Debug, Clone, Serialize)]
pub struct PoissonReport {
    pub q: u64,
    #[serde(serialize_with = "sig12_complex")]
    pub lhs: Complex64,
    #[serde(serialize_with = "sig12_complex")]
    pub rhs: Complex64,
    #[serde(serialize_with = "sig12")]
    pub diff: f64,
    /// The dual sum runs over `|m| <= m_cut`.
    pub m_cut: u64,
    /// Decay order used for the tail estimate.
    pub decay_order: u32,
    /// Bound on the discarded part of the dual sum.
    #[serde(serialize_with = "sig12")]
    pub tail_bound: f64,
    /// `tail_bound <= tolerance`; a false value is reported, not raised.
    pub tail_within_tolerance: bool,
}

/// `ĝ(m) = q^{-1/2} Σ_{y=1}^{q} g(y) e(my/q)`, where `g[y mod q]` holds `g(y)`.
pub fn periodic_transform(g: &[Complex64], m: i64) -> Complex64 {
    let q = g.len() as u64;
    let terms: Vec<Complex64> = (1..=q).map(|y| g[(y % q) as usize] * unit_root(mul(reduce(m, q), y, q), q)).collect();
    pairwise_sum(&terms) / (q as f64).sqrt()
}

/// Evaluates both sides for `f` and the `q`-periodic `g` given by its values
/// `g[0..q]`. The dual sum is truncated where the decay bound of `f̂` puts the
/// tail below `tolerance`, capped at [`POISSON_M_MAX`].
pub fn poisson_check<F: CompactFunction + ?Sized>(
    f: &F,
    g: &[Complex64],
    tolerance: f64,
) -> Result<PoissonReport, ExpSumError> {
    if g.is_empty() {
        return Err(ExpSumError::InvalidArgument("g needs at least one value".into()));
    }
    let q = g.len() as u64;
    let (lo, hi) = f.support();
    let lhs_terms: Vec<Complex64> =
        (lo.ceil() as i64..=hi.floor() as i64).map(|n| g[reduce(n, q) as usize] * f.eval(n as f64)).collect();
    let lhs = pairwise_sum(&lhs_terms);

    // |ĝ(m)| <= q^{-1/2} Σ|g|; tail <= 2 q^{-1/2} G Σ_{m>M} C (q/(2πm))^s
    let g_mass = g.iter().map(|v| v.norm()).sum::<f64>() / (q as f64).sqrt();
    let tail = |order: u32, constant: f64, m_cut: u64| -> f64 {
        let s = order as f64;
        2.0 * g_mass / (q as f64).sqrt() * constant * (q as f64 / TAU).powf(s) * (m_cut as f64).powf(1.0 - s)
            / (s - 1.0)
    };
    let usable: Vec<_> = f.decay_bounds().into_iter().filter(|d| d.order >= 2).collect();
    if usable.is_empty() {
        return Err(ExpSumError::TailBoundFailure("no decay bound of order > 1 is available for f".into()));
    }
    let mut best: Option<(u64, u32, f64)> = None;
    for d in &usable {
        // smallest M with tail(M) <= tolerance, by doubling then bisection
        let m_cut = if tail(d.order, d.constant, POISSON_M_MAX) > tolerance {
            POISSON_M_MAX
        } else {
            let (mut lo_m, mut hi_m) = (1u64, POISSON_M_MAX);
            while lo_m < hi_m {
                let mid = (lo_m + hi_m) / 2;
                if tail(d.order, d.constant, mid) <= tolerance {
                    hi_m = mid;
                } else {
                    lo_m = mid + 1;
                }
            }
            lo_m
        };
        let bound = tail(d.order, d.constant, m_cut);
        let better = match best {
            None => true,
            Some((bm, _, bb)) => (bound <= tolerance && m_cut < bm) || (bb > tolerance && bound < bb),
        };
        if better {
            best = Some((m_cut, d.order, bound));
        }
    }
    let (m_cut, decay_order, tail_bound) = best.expect("usable is nonempty");

    let span = m_cut as i64;
    let dual_terms: Vec<Complex64> = (-span..=span)
        .into_par_iter()
        .map(|m| -> Result<Complex64, ExpSumError> {
            let gh = periodic_transform(g, m);
            if gh.norm() == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            Ok(fourier_transform(f, m as f64 / q as f64)? * gh)
        })
        .collect::<Result<_, _>>()?;
    let rhs = pairwise_sum(&dual_terms) / (q as f64).sqrt();
    Ok(PoissonReport {
        q,
        lhs,
        rhs,
        diff: (lhs - rhs).norm(),
        m_cut,
        decay_order,
        tail_bound,
        tail_within_tolerance: tail_bound <= tolerance,
    })
}

/// `g(n) = e(h·n/q)` as its `q` values.
pub fn additive_character(h: i64, q: u64) -> Vec<Complex64> {
    (0..q).map(|n| unit_root(mul(reduce(h, q), n, q), q)).collect()
}
