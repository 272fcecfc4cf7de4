//! Verification campaigns: empirical constants for the `S_b(x, D)` bound
//! shapes, the smoothed Weyl–van der Corput inequality, and convergence
//! tables for the square-free densities.

pub mod acceptance;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::factorize;
use crate::census::{q_fixed_length, q_star_record, s_b, s_b_cost, CensusError, CensusRecord, SbStrategy};
use crate::digits::Base;
use crate::enumerate::{count_fixed_length, stream_up_to};
use crate::oscillate::{bump_eval, BumpKind, OscError};
use crate::report::sig12;

/// Palindromes a single campaign may enumerate.
pub const PALINDROME_BUDGET: u128 = 1_000_000_000;
/// `s_b` probe operations a single campaign may spend.
pub const PROBE_BUDGET: u128 = 100_000_000;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Oscillate(#[from] OscError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// One grid point of a [`BoundFit`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitPoint {
    pub x: u128,
    pub d: u128,
    /// `S_b(x, D)`.
    pub count: u128,
    /// The bound shape at `(x, D)` without its constant.
    #[serde(serialize_with = "sig12")]
    pub shape: f64,
    /// `count / shape`.
    #[serde(serialize_with = "sig12")]
    pub ratio: f64,
    /// Scan and multiples strategies returned the same count.
    pub strategies_agree: bool,
}

/// Empirical implied constant of a bound shape over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundFit {
    pub label: String,
    pub base: u32,
    pub points: Vec<FitPoint>,
    /// Maximum observed ratio.
    #[serde(serialize_with = "sig12")]
    pub fitted_constant: f64,
    /// The maximum is attained below the largest `x` of the grid.
    pub stable: bool,
    /// Relative growth of the running maximum from the smallest to the
    /// largest `x` (0 when the constant never increases).
    #[serde(serialize_with = "sig12")]
    pub growth: f64,
    /// Grid points skipped, with the reason.
    pub notes: Vec<String>,
    /// The campaign stopped at the probe budget; `points` is partial.
    pub aborted: bool,
}

impl BoundFit {
    fn from_points(label: &str, b: Base, points: Vec<FitPoint>, notes: Vec<String>, aborted: bool) -> Self {
        let fitted_constant = points.iter().map(|p| p.ratio).fold(0.0, f64::max);
        let x_max = points.iter().map(|p| p.x).max().unwrap_or(0);
        let x_min = points.iter().map(|p| p.x).min().unwrap_or(0);
        let stable = x_min == x_max
            || fitted_constant == 0.0
            || points.iter().any(|p| p.x < x_max && p.ratio == fitted_constant);
        // running maximum over x ≤ x_min versus over the whole grid
        let first = points.iter().filter(|p| p.x == x_min).map(|p| p.ratio).fold(0.0, f64::max);
        let growth = if fitted_constant == first {
            0.0
        } else if first == 0.0 {
            f64::INFINITY
        } else {
            fitted_constant / first - 1.0
        };
        BoundFit { label: label.to_string(), base: b.get(), points, fitted_constant, stable, growth, notes, aborted }
    }

    pub fn observed(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.ratio).collect()
    }

    pub fn strategies_agree(&self) -> bool {
        self.points.iter().all(|p| p.strategies_agree)
    }
}

/// `(x, D)` for every `x` and `D`.
pub fn cartesian_grid(xs: &[u128], ds: &[u128]) -> Vec<(u128, u128)> {
    xs.iter().flat_map(|&x| ds.iter().map(move |&d| (x, d))).collect()
}

/// `(x, ⌈x^{num/den}⌉)` for every `x`, computed exactly.
pub fn power_grid(xs: &[u128], num: u32, den: u32) -> Vec<(u128, u128)> {
    xs.iter().map(|&x| (x, ceil_power(x, num, den))).collect()
}

/// Smallest `D` with `D^den >= x^num`.
pub fn ceil_power(x: u128, num: u32, den: u32) -> u128 {
    let guess = (x as f64).powf(num as f64 / den as f64).ceil() as u128;
    let mut d = guess.saturating_sub(2).max(1);
    while compare_powers(d, den, x, num) == std::cmp::Ordering::Less {
        d += 1;
    }
    while d > 1 && compare_powers(d - 1, den, x, num) != std::cmp::Ordering::Less {
        d -= 1;
    }
    d
}

/// Compares `d^p` with `x^q` exactly.
pub fn compare_powers(d: u128, p: u32, x: u128, q: u32) -> std::cmp::Ordering {
    if let (Some(l), Some(r)) = (d.checked_pow(p), x.checked_pow(q)) {
        return l.cmp(&r);
    }
    let l = p as f64 * (d as f64).ln();
    let r = q as f64 * (x as f64).ln();
    if (l - r).abs() > 1e-9 * l.abs().max(r.abs()) {
        return l.partial_cmp(&r).expect("finite logs");
    }
    // too close for floating point: equal iff the prime exponents scale
    let fd = factorize(d);
    let fx = factorize(x);
    let same =
        fd.omega() == fx.omega() && fd.iter().zip(fx.iter()).all(|(&(pd, ed), &(px, ex))| pd == px && ed * p == ex * q);
    if same {
        std::cmp::Ordering::Equal
    } else {
        l.partial_cmp(&r).expect("finite logs")
    }
}

/// Evaluates `S_b` on the grid with both strategies, keeping points whose
/// cumulative probe cost stays within [`PROBE_BUDGET`].
fn evaluate_grid(
    b: Base,
    grid: &[(u128, u128)],
    shape: impl Fn(u128, u128) -> f64 + Sync,
) -> Result<(Vec<FitPoint>, bool), HarnessError> {
    let mut spent = 0u128;
    let mut affordable = Vec::with_capacity(grid.len());
    let mut aborted = false;
    for &(x, d) in grid {
        let (scan, multiples) = s_b_cost(b, x, d);
        spent = spent.saturating_add(scan).saturating_add(multiples);
        if spent > PROBE_BUDGET {
            aborted = true;
            break;
        }
        affordable.push((x, d));
    }
    let points = affordable
        .par_iter()
        .map(|&(x, d)| {
            let scan = s_b(b, x, d, SbStrategy::Scan)?;
            let multiples = s_b(b, x, d, SbStrategy::Multiples)?;
            let shape = shape(x, d);
            Ok(FitPoint { x, d, count: scan, shape, ratio: scan as f64 / shape, strategies_agree: scan == multiples })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok((points, aborted))
}

/// Ratios `S_b(x, D)·D^{3/2}/x` against the shape `x/D^{3/2}`.
pub fn fit_prop1(b: Base, grid: &[(u128, u128)]) -> Result<BoundFit, HarnessError> {
    validate_grid(grid)?;
    let (points, aborted) = evaluate_grid(b, grid, |x, d| x as f64 / (d as f64).powf(1.5))?;
    Ok(BoundFit::from_points("x/D^(3/2)", b, points, Vec::new(), aborted))
}

/// Ratios against `x^{2/3}/D^{2/3}` on `x^{1/4} <= D <= x^{2/5}` and against
/// `x^{7/11}/D^{13/22}` on `x^{3/13} <= D <= x^{8/31}`. Points outside a
/// window are skipped with a note.
pub fn fit_prop2_prop3(b: Base, grid: &[(u128, u128)]) -> Result<(BoundFit, BoundFit), HarnessError> {
    use std::cmp::Ordering::*;
    validate_grid(grid)?;
    let in_window = |x: u128, d: u128, lo: (u32, u32), hi: (u32, u32)| {
        // D^den >= x^num for the lower end, D^den <= x^num for the upper
        compare_powers(d, lo.1, x, lo.0) != Less && compare_powers(d, hi.1, x, hi.0) != Greater
    };
    let mut fits = Vec::new();
    type Shape = fn(u128, u128) -> f64;
    let second: Shape = |x, d| (x as f64 / d as f64).powf(2.0 / 3.0);
    let third: Shape = |x, d| (x as f64).powf(7.0 / 11.0) / (d as f64).powf(13.0 / 22.0);
    for (label, lo, hi, shape) in
        [("x^(2/3)/D^(2/3)", (1, 4), (2, 5), second), ("x^(7/11)/D^(13/22)", (3, 13), (8, 31), third)]
    {
        let mut notes = Vec::new();
        let mut kept = Vec::new();
        for &(x, d) in grid {
            if in_window(x, d, lo, hi) {
                kept.push((x, d));
            } else {
                notes.push(format!("x={x} D={d}: outside x^({}/{}) <= D <= x^({}/{})", lo.0, lo.1, hi.0, hi.1));
            }
        }
        let (points, aborted) = evaluate_grid(b, &kept, shape)?;
        fits.push(BoundFit::from_points(label, b, points, notes, aborted));
    }
    let third = fits.pop().expect("two fits");
    let second = fits.pop().expect("two fits");
    Ok((second, third))
}

fn validate_grid(grid: &[(u128, u128)]) -> Result<(), HarnessError> {
    if let Some(&(x, d)) = grid.iter().find(|&&(x, d)| x == 0 || d == 0) {
        return Err(HarnessError::InvalidArgument(format!("grid point (x={x}, D={d}) must be positive")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Weyl–van der Corput

/// `z_n` for `n = start, start + 1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSequence {
    pub start: i64,
    pub values: Vec<Complex64>,
}

impl ComplexSequence {
    pub fn get(&self, n: i64) -> Option<Complex64> {
        usize::try_from(n - self.start).ok().and_then(|i| self.values.get(i).copied())
    }

    fn covers(&self, lo: i64, hi: i64) -> bool {
        lo >= self.start && hi < self.start + self.values.len() as i64
    }
}

/// Both sides of the smoothed Weyl–van der Corput inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VdcReport {
    pub family: String,
    pub d: u64,
    pub q: u64,
    /// `|Σ_{D <= d <= 2D} z_d|`.
    #[serde(serialize_with = "sig12")]
    pub lhs: f64,
    /// `Σ_{q <= Q} |Σ_d ψ(d/D) z_d conj(z_{d+q})|`.
    #[serde(serialize_with = "sig12")]
    pub correlations: f64,
    /// `D/√Q + √(D/Q)·√correlations`.
    #[serde(serialize_with = "sig12")]
    pub rhs: f64,
    #[serde(serialize_with = "sig12")]
    pub ratio: f64,
}

pub fn weyl_vdc_check(z: &ComplexSequence, big_d: u64, big_q: u64) -> Result<VdcReport, HarnessError> {
    if big_d == 0 || big_q == 0 || big_q.saturating_mul(big_q) > big_d {
        return Err(HarnessError::InvalidArgument(format!("need 1 <= Q <= √D, got D={big_d} Q={big_q}")));
    }
    let d = big_d as i64;
    let (lo, hi) = (d / 2, (5 * d + 1) / 2);
    if !z.covers(lo, hi + big_q as i64) {
        return Err(HarnessError::InvalidArgument(format!(
            "sequence must cover [{lo}, {}], it covers [{}, {}]",
            hi + big_q as i64,
            z.start,
            z.start + z.values.len() as i64 - 1
        )));
    }
    if let Some(v) = z.values.iter().find(|v| v.norm() > 1.0 + 1e-12) {
        return Err(HarnessError::InvalidArgument(format!("|z_n| must be <= 1, found {}", v.norm())));
    }
    let at = |n: i64| z.get(n).expect("coverage checked");
    let lhs = (d..=2 * d).map(at).sum::<Complex64>().norm();
    let weights: Vec<(i64, f64)> = (lo..=hi)
        .map(|n| Ok((n, bump_eval(BumpKind::Psi, n as f64 / big_d as f64, 0)?)))
        .collect::<Result<_, OscError>>()?;
    let correlations: f64 = (1..=big_q as i64)
        .map(|q| weights.iter().map(|&(n, w)| at(n) * at(n + q).conj() * w).sum::<Complex64>().norm())
        .sum();
    let (df, qf) = (big_d as f64, big_q as f64);
    let rhs = df / qf.sqrt() + (df / qf).sqrt() * correlations.sqrt();
    Ok(VdcReport { family: String::new(), d: big_d, q: big_q, lhs, correlations, rhs, ratio: lhs / rhs })
}

/// Test sequences for [`weyl_vdc_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VdcFamily {
    /// `z_d = 1`.
    Constant,
    /// Independent uniform phases.
    RandomPhases,
    /// `e(θd)`.
    Linear,
    /// `e(αd²)`.
    Quadratic,
}

impl VdcFamily {
    pub const ALL: [VdcFamily; 4] =
        [VdcFamily::Constant, VdcFamily::RandomPhases, VdcFamily::Linear, VdcFamily::Quadratic];

    pub fn name(self) -> &'static str {
        match self {
            VdcFamily::Constant => "constant",
            VdcFamily::RandomPhases => "random_phases",
            VdcFamily::Linear => "linear",
            VdcFamily::Quadratic => "quadratic",
        }
    }
}

/// A member of `family` covering `[0, 3D + Q]`.
pub fn vdc_sequence(family: VdcFamily, big_d: u64, big_q: u64, rng: &mut ChaCha8Rng) -> ComplexSequence {
    let len = 3 * big_d + big_q + 1;
    let e = |t: f64| Complex64::from_polar(1.0, std::f64::consts::TAU * t.fract());
    let values = match family {
        VdcFamily::Constant => vec![Complex64::new(1.0, 0.0); len as usize],
        VdcFamily::RandomPhases => (0..len).map(|_| e(rng.gen::<f64>())).collect(),
        VdcFamily::Linear => {
            let theta: f64 = rng.gen();
            (0..len).map(|n| e(theta * n as f64)).collect()
        }
        VdcFamily::Quadratic => {
            let alpha: f64 = rng.gen();
            (0..len).map(|n| e(alpha * (n * n) as f64)).collect()
        }
    };
    ComplexSequence { start: 0, values }
}

/// Reports and fitted constant over a family sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VdcFit {
    pub reports: Vec<VdcReport>,
    #[serde(serialize_with = "sig12")]
    pub constant: f64,
    /// `constant <= 4`.
    pub within_envelope: bool,
}

/// Every family at every `D`, with `Q` running over powers of two up to `√D`.
pub fn fit_vdc(ds: &[u64], seed: u64) -> Result<VdcFit, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for &d in ds {
        let mut q = 1;
        while q * q <= d {
            for family in VdcFamily::ALL {
                cases.push((family, d, q, vdc_sequence(family, d, q, &mut rng)));
            }
            q *= 2;
        }
    }
    let reports = cases
        .par_iter()
        .map(|(family, d, q, z)| {
            let mut r = weyl_vdc_check(z, *d, *q)?;
            r.family = family.name().to_string();
            Ok(r)
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let constant = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(VdcFit { reports, constant, within_envelope: constant.is_finite() && constant <= 4.0 })
}

// ---------------------------------------------------------------------------
// Convergence tables

/// Census rows for the restricted density at each `x`, then the unrestricted
/// density for every length `N <= log_b(max x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub records: Vec<CensusRecord>,
    /// The campaign stopped at the palindrome budget; `records` is partial.
    pub aborted: bool,
}

pub fn asymptotic_report(b: Base, xs: &[u128]) -> Result<AsymptoticReport, HarnessError> {
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::InvalidArgument("xs must be strictly increasing".into()));
    }
    let mut jobs: Vec<(bool, u128, u128)> = Vec::new();
    for &x in xs {
        jobs.push((true, x, stream_up_to(b, x, true).map_err(CensusError::from)?.prefixes_remaining()));
    }
    if let Some(&x_max) = xs.last() {
        let mut n = 1u32;
        while b.checked_pow(n).is_some_and(|p| p <= x_max) {
            jobs.push((false, n as u128, count_fixed_length(b, n).map_err(CensusError::from)?));
            n += 1;
        }
    }
    let mut spent = 0u128;
    let mut records = Vec::with_capacity(jobs.len());
    let mut aborted = false;
    for (restricted, scope, cost) in jobs {
        spent = spent.saturating_add(cost);
        if spent > PALINDROME_BUDGET {
            aborted = true;
            break;
        }
        records.push(if restricted { q_star_record(b, scope)? } else { q_fixed_length(b, scope as u32)? });
    }
    Ok(AsymptoticReport { records, aborted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering::*;

    #[test]
    fn exact_power_comparisons() {
        assert_eq!(compare_powers(2, 13, 8, 4), Greater); // 2^13 vs 2^12
        assert_eq!(compare_powers(8, 13, 8192, 3), Equal);
        // beyond u128: 10^62 vs 10^64
        assert_eq!(compare_powers(100, 31, 100_000_000, 8), Less);
        assert_eq!(compare_powers(1 << 20, 31, 1 << 31, 20), Equal);
        assert_eq!(ceil_power(1_000_000, 2, 5), 252);
        assert_eq!(ceil_power(10_000_000, 2, 5), 631);
        assert_eq!(ceil_power(100_000_000, 2, 5), 1585);
        assert_eq!(ceil_power(1 << 20, 1, 4), 32);
        assert_eq!(ceil_power((1 << 20) + 1, 1, 4), 33);
    }

    #[test]
    fn prop1_examples() {
        let fit = fit_prop1(Base::DECIMAL, &power_grid(&[1_000_000], 2, 5)).unwrap();
        let p = &fit.points[0];
        // S_10(10^6, 252) = 1 by the census oracle
        assert_eq!((p.x, p.d, p.count), (1_000_000, 252, 1));
        assert!((p.ratio - 252f64.powf(1.5) / 1e6).abs() < 1e-15);
        assert!(p.strategies_agree);
        // D > √x
        let fit = fit_prop1(Base::DECIMAL, &[(10_000, 101)]).unwrap();
        assert_eq!(fit.points[0].ratio, 0.0);
        assert!(fit.stable && fit.growth == 0.0);
        assert!(fit_prop1(Base::DECIMAL, &[(0, 1)]).is_err());
    }

    #[test]
    fn prop1_per_base() {
        for b in [Base::BINARY, Base::DECIMAL] {
            let fit = fit_prop1(b, &cartesian_grid(&[10_000, 100_000, 1_000_000], &[5, 10, 20])).unwrap();
            assert!(fit.strategies_agree());
            assert!(fit.observed().iter().all(|r| r.is_finite() && *r >= 0.0));
            assert!(fit.observed().iter().all(|r| *r <= fit.fitted_constant));
        }
    }

    #[test]
    fn prop2_prop3_windows() {
        let x = 100_000_000u128;
        // D = 10^2.5 ≈ 317 sits inside [x^{1/4}, x^{2/5}] = [100, 1585]
        let (p2, p3) = fit_prop2_prop3(Base::DECIMAL, &[(x, 317), (x, 50)]).unwrap();
        assert_eq!(p2.points.len(), 1);
        assert_eq!(p2.notes.len(), 1);
        // [x^{3/13}, x^{8/31}] = [70.3, 115.9]: both points are outside
        assert!(p3.points.is_empty());
        assert_eq!(p3.notes.len(), 2);
        // x = 50: [x^{3/13}, x^{8/31}] = [2.47, 2.74] holds no integer
        let (_, p3) = fit_prop2_prop3(Base::DECIMAL, &[(50, 2), (50, 3)]).unwrap();
        assert!(p3.points.is_empty() && p3.notes.len() == 2);
        let (_, p3) = fit_prop2_prop3(Base::DECIMAL, &[(1000, 5)]).unwrap();
        assert_eq!(p3.points.len(), 1);
    }

    #[test]
    fn vdc_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let z = vdc_sequence(VdcFamily::Constant, 400, 20, &mut rng);
        let r = weyl_vdc_check(&z, 400, 20).unwrap();
        assert_eq!(r.lhs, 401.0);
        assert!(r.rhs >= 400.0 / 20f64.sqrt());
        let r1 = weyl_vdc_check(&z, 400, 1).unwrap();
        assert!(r1.ratio < 1.0);
        // coverage and Q ≤ √D
        assert!(weyl_vdc_check(&z, 400, 21).is_err());
        let short = ComplexSequence { start: 300, values: z.values.clone() };
        assert!(weyl_vdc_check(&short, 400, 4).is_err());
    }

    #[test]
    fn vdc_family_within_envelope() {
        let fit = fit_vdc(&[100, 400, 1600], 3).unwrap();
        assert!(fit.within_envelope, "constant {}", fit.constant);
        assert!(fit.reports.iter().all(|r| r.ratio.is_finite() && r.ratio >= 0.0));
        assert_eq!(fit.reports.len(), 4 * (4 + 5 + 6));
    }

    #[test]
    fn asymptotic_examples() {
        let r = asymptotic_report(Base::DECIMAL, &[10_000, 1_000_000]).unwrap();
        assert!(!r.aborted);
        assert_eq!(r.records.len(), 2 + 6);
        let last_restricted = &r.records[1];
        assert!((last_restricted.ratio - 0.957804).abs() < 0.05);
        // N = 1: six of the nine one-digit palindromes are square-free
        assert_eq!(r.records[2].scope_kind, "fixed_length");
        assert_eq!((r.records[2].squarefree, r.records[2].total), (6, 9));
        assert!(asymptotic_report(Base::DECIMAL, &[100, 10]).is_err());
    }
}
