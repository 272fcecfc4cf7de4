//! Adaptive Gauss–Kronrod (7/15) quadrature for complex integrands.
//!
//! The interval is first cut at the caller's breakpoints and then into
//! panels that each hold at most a few oscillations of the integrand. Panels
//! are refined independently (in parallel) and their results are combined by
//! a fixed pairwise reduction, so the value does not depend on scheduling.

use num_complex::Complex64;
use rayon::prelude::*;

use super::OscError;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Target absolute error for the whole integral.
    pub abs_tol: f64,
    /// Maximum bisection depth below an initial panel.
    pub max_depth: u32,
    /// Maximum oscillations per initial panel.
    pub max_oscillations: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-12, max_depth: 40, max_oscillations: 4.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// Sum of the per-panel `|K15 - G7|` estimates.
    pub error: f64,
    pub evaluations: usize,
    /// Some panel stopped refining because its error estimate had reached
    /// rounding level (e.g. large phases).
    pub noise_limited: bool,
}

/// Upper limit on initial panels, to fail fast on absurd frequencies.
const MAX_PANELS: usize = 20_000_000;

fn gauss_kronrod<F: Fn(f64) -> Complex64>(f: &F, l: f64, r: f64) -> (Complex64, f64) {
    let half = 0.5 * (r - l);
    let mid = 0.5 * (r + l);
    let fc = f(mid);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

/// Refines `[l, r]` (whose rule result is `whole`) until the error estimate
/// meets `tol`. Bisection stops early when it no longer halves the estimate:
/// the panel has then reached its rounding floor.
fn adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    l: f64,
    r: f64,
    whole: (Complex64, f64),
    tol: f64,
    depth: u32,
    out: &mut PanelSum,
) {
    let (value, err) = whole;
    let mid = 0.5 * (l + r);
    if err <= tol || depth == 0 || mid <= l || mid >= r {
        out.value += value;
        out.error += err;
        out.unresolved |= err > tol;
        return;
    }
    let left = gauss_kronrod(f, l, mid);
    let right = gauss_kronrod(f, mid, r);
    out.evaluations += 30;
    if left.1 + right.1 >= 0.5 * err {
        out.value += left.0 + right.0;
        out.error += left.1 + right.1;
        out.noise_limited = true;
        return;
    }
    adaptive(f, l, mid, left, 0.5 * tol, depth - 1, out);
    adaptive(f, mid, r, right, 0.5 * tol, depth - 1, out);
}

#[derive(Debug, Default, Clone, Copy)]
struct PanelSum {
    value: Complex64,
    error: f64,
    evaluations: usize,
    unresolved: bool,
    noise_limited: bool,
}

/// Sums in a balanced binary tree; deterministic for a given input order.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

fn split_by_frequency(l: f64, r: f64, freq: &dyn Fn(f64) -> f64, max_osc: f64, out: &mut Vec<(f64, f64)>, depth: u32) {
    let m = 0.5 * (l + r);
    let peak = freq(l).abs().max(freq(m).abs()).max(freq(r).abs());
    if depth == 0 || (r - l) * peak <= max_osc || m <= l || m >= r {
        out.push((l, r));
        return;
    }
    split_by_frequency(l, m, freq, max_osc, out, depth - 1);
    split_by_frequency(m, r, freq, max_osc, out, depth - 1);
}

/// `∫ f` over `[breaks[0], breaks.last()]`.
///
/// `freq(x)` is the local oscillation frequency of `f` in cycles per unit
/// length (e.g. `|F'(x)|/2π` for `e^{iF(x)}`); it only guides the initial
/// subdivision.
pub fn integrate<F>(
    f: &F,
    breaks: &[f64],
    freq: &(dyn Fn(f64) -> f64 + Sync),
    opts: QuadOptions,
) -> Result<QuadResult, OscError>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|v| v.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() < 2 {
        return Ok(QuadResult { value: Complex64::new(0.0, 0.0), error: 0.0, evaluations: 0, noise_limited: false });
    }
    let total = pts[pts.len() - 1] - pts[0];
    let mut panels = Vec::new();
    for w in pts.windows(2) {
        split_by_frequency(w[0], w[1], freq, opts.max_oscillations, &mut panels, 40);
        if panels.len() > MAX_PANELS {
            return Err(OscError::InvalidInput(format!("more than {MAX_PANELS} panels needed")));
        }
    }
    let sums: Vec<PanelSum> = panels
        .par_iter()
        .map(|&(l, r)| {
            let mut acc = PanelSum { evaluations: 15, ..Default::default() };
            let whole = gauss_kronrod(f, l, r);
            adaptive(f, l, r, whole, opts.abs_tol * (r - l) / total, opts.max_depth, &mut acc);
            acc
        })
        .collect();
    let values: Vec<Complex64> = sums.iter().map(|s| s.value).collect();
    let error: f64 = sums.iter().map(|s| s.error).sum();
    let evaluations = sums.iter().map(|s| s.evaluations).sum();
    let noise_limited = sums.iter().any(|s| s.noise_limited);
    let result = QuadResult { value: pairwise_sum(&values), error, evaluations, noise_limited };
    if sums.iter().any(|s| s.unresolved) && error > opts.abs_tol {
        return Err(OscError::NonConvergence { achieved: error, requested: opts.abs_tol, value: result.value });
    }
    Ok(result)
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(f: &F, breaks: &[f64], opts: QuadOptions) -> Result<f64, OscError>
where
    F: Fn(f64) -> f64 + Sync,
{
    let g = |x: f64| Complex64::new(f(x), 0.0);
    Ok(integrate(&g, breaks, &|_| 0.0, opts)?.value.re)
}
