//! The acceptance suite. Every criterion returns a deterministic outcome whose
//! detail line depends only on the options, never on timing or thread count.

use rayon::prelude::*;
use serde::Serialize;

use super::{fit_prop1, power_grid, HarnessError};
use crate::arith::{factorize, gcd_u64, kth_residue_solutions, pow_mod_u64};
use crate::census::{density_constant, q_fixed_length, q_star_direct, q_star_mobius, q_star_record, INV_ZETA2};
use crate::digits::Base;
use crate::expsum::{
    additive_character, coefficient_samples, fit_average_constant, identity_grid, poisson_check, run_identity_grid,
};
use crate::oscillate::random::{first_derivative_specs, second_derivative_specs};
use crate::oscillate::{check_first_derivative_bound, check_second_derivative_bound, SmoothBump, Triangle};
use crate::report::round_sig12;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Number of criteria run in-process; the determinism criterion compares
/// whole runs and lives with the binary.
pub const CRITERIA: [u32; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AcceptanceOptions {
    /// Shrinks the residue-solver sweep from `q <= 10^4` to `q <= 10^3`.
    pub quick: bool,
    pub seed: u64,
}

impl Default for AcceptanceOptions {
    fn default() -> Self {
        Self { quick: false, seed: DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(id: u32, name: &str, passed: bool, detail: String) -> CriterionOutcome {
    CriterionOutcome { id, name: name.to_string(), passed, detail }
}

fn failed(id: u32, name: &str, err: impl std::fmt::Display) -> CriterionOutcome {
    outcome(id, name, false, format!("error: {err}"))
}

/// Twelve significant digits, the report precision.
fn num(v: f64) -> String {
    let r = round_sig12(v);
    if r != 0.0 && (r.abs() < 1e-4 || r.abs() >= 1e12) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

pub fn run_criterion(id: u32, opts: &AcceptanceOptions) -> CriterionOutcome {
    match id {
        1 => mobius_identity(),
        2 => density_convergence(),
        3 => unrestricted_density(),
        4 => stationary_phase_identity(opts),
        5 => oscillatory_constants(opts),
        6 => poisson_identity(),
        7 => cubic_residue_bound(opts),
        8 => square_divisor_shape(),
        9 => averaged_kloosterman(opts),
        _ => outcome(id, "unknown", false, format!("no criterion {id}")),
    }
}

pub fn run_all(opts: &AcceptanceOptions) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|&id| run_criterion(id, opts)).collect()
}

fn mobius_identity() -> CriterionOutcome {
    const NAME: &str = "mobius_identity";
    let mut cells = Vec::new();
    for b in [2u32, 3, 10] {
        for x in [1_000u128, 100_000, 10_000_000] {
            let base = Base::new(b).expect("valid base");
            match (q_star_direct(base, x), q_star_mobius(base, x)) {
                (Ok(d), Ok(m)) => cells.push((b, x, d, m)),
                (Err(e), _) | (_, Err(e)) => return failed(1, NAME, e),
            }
        }
    }
    let mismatches: Vec<_> = cells.iter().filter(|c| c.2 != c.3).collect();
    let detail = if mismatches.is_empty() {
        format!("{} cells agree; b=10 x=10^7 count {}", cells.len(), cells.last().map_or(0, |c| c.2))
    } else {
        format!("mismatches (b, x, direct, mobius): {mismatches:?}")
    };
    outcome(1, NAME, mismatches.is_empty(), detail)
}

fn density_convergence() -> CriterionOutcome {
    const NAME: &str = "density_convergence";
    let target = match density_constant(Base::DECIMAL) {
        Ok(c) => c.value,
        Err(e) => return failed(2, NAME, e),
    };
    let (small, large) = match (q_star_record(Base::DECIMAL, 10_000), q_star_record(Base::DECIMAL, 100_000_000)) {
        (Ok(s), Ok(l)) => (s, l),
        (Err(e), _) | (_, Err(e)) => return failed(2, NAME, e),
    };
    let passed = large.abs_error <= 0.05 && large.abs_error <= small.abs_error;
    let detail = format!(
        "constant {}; x=10^4 ratio {} error {}; x=10^8 ratio {} error {}",
        num(target),
        num(small.ratio),
        num(small.abs_error),
        num(large.ratio),
        num(large.abs_error)
    );
    outcome(2, NAME, passed, detail)
}

fn unrestricted_density() -> CriterionOutcome {
    const NAME: &str = "unrestricted_density";
    match q_fixed_length(Base::DECIMAL, 9) {
        Ok(r) => {
            let error = (r.ratio - INV_ZETA2).abs();
            let detail = format!("N=9 {}/{} ratio {} error {}", r.squarefree, r.total, num(r.ratio), num(error));
            outcome(3, NAME, error <= 0.03, detail)
        }
        Err(e) => failed(3, NAME, e),
    }
}

fn stationary_phase_identity(opts: &AcceptanceOptions) -> CriterionOutcome {
    const NAME: &str = "stationary_phase_identity";
    let grid = identity_grid(10_000, 50, opts.seed);
    match run_identity_grid(&grid) {
        Ok(records) => {
            let bad = records.iter().filter(|r| !r.ok).count();
            let worst = records.iter().map(|r| r.diff / r.tolerance).fold(0.0, f64::max);
            let passed = bad == 0 && records.len() >= 2000;
            let detail = format!("{} tuples, {bad} violations, worst diff/tolerance {}", records.len(), num(worst));
            outcome(4, NAME, passed, detail)
        }
        Err(e) => failed(4, NAME, e),
    }
}

fn oscillatory_constants(opts: &AcceptanceOptions) -> CriterionOutcome {
    const NAME: &str = "oscillatory_constants";
    let first = first_derivative_specs(opts.seed, 100);
    let second = second_derivative_specs(opts.seed.wrapping_add(1), 100);
    let first_ok: Vec<Result<f64, String>> = first
        .par_iter()
        .map(|(spec, m)| match check_first_derivative_bound(spec, *m) {
            Ok(r) if r.holds => Ok(r.lhs / r.rhs),
            Ok(r) => Err(format!("{}: {} > {}", r.label, num(r.lhs), num(r.rhs))),
            Err(e) => Err(format!("{}: {e}", spec.label)),
        })
        .collect();
    let second_ok: Vec<Result<f64, String>> = second
        .par_iter()
        .map(|(spec, r, k)| match check_second_derivative_bound(spec, *r, *k) {
            Ok(rep) if rep.holds => Ok(rep.lhs / rep.rhs),
            Ok(rep) => Err(format!("{}: {} > {}", rep.label, num(rep.lhs), num(rep.rhs))),
            Err(e) => Err(format!("{}: {e}", spec.label)),
        })
        .collect();
    fn summarize(v: &[Result<f64, String>]) -> (f64, Vec<&String>) {
        let worst = v.iter().filter_map(|r| r.as_ref().ok()).fold(0.0f64, |a, &b| a.max(b));
        let errors = v.iter().filter_map(|r| r.as_ref().err()).collect();
        (worst, errors)
    }
    let (w1, e1) = summarize(&first_ok);
    let (w2, e2) = summarize(&second_ok);
    let passed = e1.is_empty() && e2.is_empty() && first.len() == 100 && second.len() == 100;
    let mut detail = format!(
        "first derivative: {} specs, {} violations, max lhs/bound {}; second derivative: {} specs, {} violations, max lhs/bound {}",
        first.len(),
        e1.len(),
        num(w1),
        second.len(),
        e2.len(),
        num(w2)
    );
    if let Some(e) = e1.first().or(e2.first()) {
        detail.push_str(&format!("; first violation {e}"));
    }
    outcome(5, NAME, passed, detail)
}

fn poisson_identity() -> CriterionOutcome {
    const NAME: &str = "poisson_identity";
    let mut parts = Vec::new();
    let mut passed = true;
    match poisson_check(&Triangle, &additive_character(0, 1), 1e-10) {
        Ok(r) => {
            passed &= r.diff < 1e-8;
            parts.push(format!("triangle q=1 diff {}", num(r.diff)));
        }
        Err(e) => return failed(6, NAME, e),
    }
    let psi = SmoothBump::psi();
    for q in [2u64, 3, 5] {
        match poisson_check(&psi, &additive_character(1, q), 1e-10) {
            Ok(r) => {
                passed &= r.diff < 1e-8;
                parts.push(format!("psi q={q} diff {} (M={})", num(r.diff), r.m_cut));
            }
            Err(e) => return failed(6, NAME, e),
        }
    }
    outcome(6, NAME, passed, parts.join("; "))
}

/// Per modulus: `(violations of the 3^ω bound, solver mismatches)`.
fn residue_sweep(q: u64) -> Result<(u64, u64), HarnessError> {
    let omega = factorize(q as u128).omega() as u32;
    let mut violations = 0;
    let mut mismatches = 0;
    for k in [2u32, 3] {
        // brute force: group the units by their k-th power
        let mut table: Vec<(u64, u64)> =
            (1..q).filter(|&w| gcd_u64(w, q) == 1).map(|w| (pow_mod_u64(w, k as u64, q), w)).collect();
        table.sort_unstable();
        let mut i = 0;
        for a in 0..q {
            let start = i;
            while i < table.len() && table[i].0 == a {
                i += 1;
            }
            let brute = &table[start..i];
            let solved = kth_residue_solutions(a as i128, k, q)
                .map_err(|e| HarnessError::InvalidArgument(format!("q={q} k={k} a={a}: {e}")))?;
            if solved.len() != brute.len() || solved.iter().zip(brute).any(|(s, b)| *s != b.1) {
                mismatches += 1;
            }
            if k == 3 && q % 3 != 0 && brute.len() as u64 > 3u64.pow(omega) {
                violations += 1;
            }
        }
    }
    Ok((violations, mismatches))
}

fn cubic_residue_bound(opts: &AcceptanceOptions) -> CriterionOutcome {
    const NAME: &str = "cubic_residue_bound";
    let limit: u64 = if opts.quick { 1_000 } else { 10_000 };
    let rows: Result<Vec<(u64, u64)>, HarnessError> = (2..=limit).into_par_iter().map(residue_sweep).collect();
    match rows {
        Ok(rows) => {
            let violations: u64 = rows.iter().map(|r| r.0).sum();
            let mismatches: u64 = rows.iter().map(|r| r.1).sum();
            let detail = format!(
                "q <= {limit}{}: {violations} bound violations, {mismatches} solver mismatches (k = 2, 3)",
                if opts.quick { " (quick)" } else { "" }
            );
            outcome(7, NAME, violations == 0 && mismatches == 0, detail)
        }
        Err(e) => failed(7, NAME, e),
    }
}

fn square_divisor_shape() -> CriterionOutcome {
    const NAME: &str = "square_divisor_shape";
    let grid = power_grid(&[1_000_000, 10_000_000, 100_000_000], 2, 5);
    match fit_prop1(Base::DECIMAL, &grid) {
        Ok(fit) => {
            let passed = !fit.aborted && fit.points.len() == grid.len() && fit.growth < 0.10 && fit.strategies_agree();
            let points: Vec<String> = fit
                .points
                .iter()
                .map(|p| format!("S({}, {}) = {} ratio {}", p.x, p.d, p.count, num(p.ratio)))
                .collect();
            let detail = format!(
                "{}; constant {} growth {}; strategies agree: {}",
                points.join(", "),
                num(fit.fitted_constant),
                num(fit.growth),
                fit.strategies_agree()
            );
            outcome(8, NAME, passed, detail)
        }
        Err(e) => failed(8, NAME, e),
    }
}

fn averaged_kloosterman(opts: &AcceptanceOptions) -> CriterionOutcome {
    const NAME: &str = "averaged_kloosterman";
    let samples = coefficient_samples(Base::BINARY, 8, opts.seed);
    let mut constants = Vec::new();
    for n in [8u32, 10, 12] {
        match fit_average_constant(Base::BINARY, n, &[4, 16, 64], &samples) {
            Ok(fit) => constants.push(fit.constant),
            Err(e) => return failed(9, NAME, e),
        }
    }
    let first = constants[0];
    let later = constants[1..].iter().copied().fold(0.0, f64::max);
    let passed = constants.iter().all(|c| c.is_finite()) && later <= 1.25 * first;
    let shown: Vec<String> = [8, 10, 12].iter().zip(&constants).map(|(n, c)| format!("N={n} C'={}", num(*c))).collect();
    outcome(9, NAME, passed, shown.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_sweep_small() {
        for q in 2..200 {
            assert_eq!(residue_sweep(q).unwrap(), (0, 0), "q={q}");
        }
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run_criterion(42, &AcceptanceOptions::default()).passed);
    }

    #[test]
    fn fast_criteria_pass() {
        let opts = AcceptanceOptions { quick: true, ..Default::default() };
        for id in [3, 6, 8, 9] {
            let o = run_criterion(id, &opts);
            assert!(o.passed, "{o:?}");
        }
    }
}
