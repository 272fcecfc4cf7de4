//! Oscillatory integrals over ℝ: smooth bump functions, Fourier transforms,
//! and checks of explicit first/second-derivative bounds and of
//! non-stationary phase decay.

pub mod jet;
pub mod quad;
pub mod random;

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use jet::{Jet, K_MAX};
pub use quad::{integrate, pairwise_sum, QuadOptions, QuadResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OscError {
    #[error("derivative order {order} exceeds the supported maximum {max}")]
    OrderTooHigh { order: usize, max: usize },
    #[error("quadrature did not converge: error {achieved:e} above {requested:e}")]
    NonConvergence { achieved: f64, requested: f64, value: Complex64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Points used to verify hypotheses by sampling.
pub const SAMPLE_POINTS: usize = 10_000;

/// Largest accepted implied constant when sampling the phase hypothesis of
/// the non-stationary decay check.
pub const HYPOTHESIS_CONSTANT: f64 = 10.0;

// ---------------------------------------------------------------------------
// Bumps

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpKind {
    /// Supported on `[1/2, 5/2]`, equal to 1 on `[1, 2]`.
    Psi,
    /// Supported on `[-2, 2]`, equal to 1 on `[-1, 1]`.
    Phi,
}

/// `S(t) = h(t) / (h(t) + h(1-t))`, `h(t) = exp(-1/t)`: 0 for `t <= 0`, 1 for
/// `t >= 1`, C^∞. Within 0.005 of either end every derivative up to
/// [`K_MAX`] is below 1e-40, so those tails are replaced by constants to keep
/// the jet arithmetic away from `0 · ∞`.
fn transition(t: Jet) -> Jet {
    let tv = t.value();
    if tv <= 0.005 {
        return Jet::constant(0.0);
    }
    if tv >= 0.995 {
        return Jet::constant(1.0);
    }
    let one = Jet::constant(1.0);
    let h0 = (-t.recip()).exp();
    let h1 = (-(one - t).recip()).exp();
    h0 / (h0 + h1)
}

fn bump_jet(kind: BumpKind, x: f64) -> Jet {
    match kind {
        BumpKind::Psi => {
            if x <= 0.5 || x >= 2.5 {
                Jet::constant(0.0)
            } else if x < 1.0 {
                transition(Jet::affine(2.0 * x - 1.0, 2.0))
            } else if x <= 2.0 {
                Jet::constant(1.0)
            } else {
                transition(Jet::affine(5.0 - 2.0 * x, -2.0))
            }
        }
        BumpKind::Phi => {
            if x <= -2.0 || x >= 2.0 {
                Jet::constant(0.0)
            } else if x < -1.0 {
                transition(Jet::affine(x + 2.0, 1.0))
            } else if x <= 1.0 {
                Jet::constant(1.0)
            } else {
                transition(Jet::affine(2.0 - x, -1.0))
            }
        }
    }
}

/// Value (`order = 0`) or derivative of a bump at `x`.
pub fn bump_eval(kind: BumpKind, x: f64, order: usize) -> Result<f64, OscError> {
    if order > K_MAX {
        return Err(OscError::OrderTooHigh { order, max: K_MAX });
    }
    Ok(bump_jet(kind, x).derivative(order))
}

/// A continuous, compactly supported real function.
pub trait CompactFunction: Sync {
    fn support(&self) -> (f64, f64);

    fn eval(&self, x: f64) -> f64;

    /// Points where the function is not smooth, including the support ends.
    fn breakpoints(&self) -> Vec<f64>;

    /// The `order`-th derivative, when available.
    fn derivative(&self, _x: f64, _order: usize) -> Option<f64> {
        None
    }

    /// Known bounds `|f̂(k)| <= constant / (2π|k|)^order`.
    fn decay_bounds(&self) -> Vec<DecayBound> {
        Vec::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayBound {
    pub order: u32,
    /// `‖f^(order)‖₁` or the total variation of `f^(order-1)`.
    pub constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmoothBump {
    pub kind: BumpKind,
}

impl SmoothBump {
    pub fn psi() -> Self {
        SmoothBump { kind: BumpKind::Psi }
    }

    pub fn phi() -> Self {
        SmoothBump { kind: BumpKind::Phi }
    }
}

/// `‖f^(k)‖₁` by quadrature on the smooth pieces.
fn derivative_l1<F: CompactFunction + ?Sized>(f: &F, k: usize) -> f64 {
    let breaks = f.breakpoints();
    let g = |x: f64| f.derivative(x, k).unwrap_or(0.0).abs();
    quad::integrate_real(&g, &breaks, QuadOptions { abs_tol: 1e-9, ..Default::default() }).unwrap_or(f64::INFINITY)
}

impl CompactFunction for SmoothBump {
    fn support(&self) -> (f64, f64) {
        match self.kind {
            BumpKind::Psi => (0.5, 2.5),
            BumpKind::Phi => (-2.0, 2.0),
        }
    }

    fn eval(&self, x: f64) -> f64 {
        bump_jet(self.kind, x).value()
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self.kind {
            BumpKind::Psi => vec![0.5, 1.0, 2.0, 2.5],
            BumpKind::Phi => vec![-2.0, -1.0, 1.0, 2.0],
        }
    }

    fn derivative(&self, x: f64, order: usize) -> Option<f64> {
        bump_eval(self.kind, x, order).ok()
    }

    fn decay_bounds(&self) -> Vec<DecayBound> {
        // 1% headroom over the quadrature estimate of the L1 norm
        (2..=8).map(|k| DecayBound { order: k as u32, constant: 1.01 * derivative_l1(self, k) }).collect()
    }
}

/// `max(0, 1 - |x|)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Triangle;

impl CompactFunction for Triangle {
    fn support(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }

    fn eval(&self, x: f64) -> f64 {
        (1.0 - x.abs()).max(0.0)
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![-1.0, 0.0, 1.0]
    }

    fn derivative(&self, x: f64, order: usize) -> Option<f64> {
        match order {
            0 => Some(self.eval(x)),
            1 if x.abs() < 1.0 && x != 0.0 => Some(-x.signum()),
            1 => Some(0.0),
            _ => None,
        }
    }

    fn decay_bounds(&self) -> Vec<DecayBound> {
        // f'' is the measure δ₋₁ - 2δ₀ + δ₁ with total mass 4
        vec![DecayBound { order: 2, constant: 4.0 }]
    }
}

/// Piecewise-linear interpolant of samples, zero outside the sample range.
/// The end samples must be zero for continuity.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Sampled {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, OscError> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(OscError::InvalidInput("need at least two (x, y) samples".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(OscError::InvalidInput("sample abscissae must increase".into()));
        }
        if ys[0] != 0.0 || *ys.last().unwrap() != 0.0 {
            return Err(OscError::InvalidInput("end samples must be 0 for a continuous extension".into()));
        }
        Ok(Sampled { xs, ys })
    }

    fn slopes(&self) -> Vec<f64> {
        self.xs.windows(2).zip(self.ys.windows(2)).map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0])).collect()
    }
}

impl CompactFunction for Sampled {
    fn support(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo || x >= hi {
            return 0.0;
        }
        let i = self.xs.partition_point(|&v| v <= x) - 1;
        let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        self.ys[i] + t * (self.ys[i + 1] - self.ys[i])
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.xs.clone()
    }

    fn decay_bounds(&self) -> Vec<DecayBound> {
        // total variation of f' = Σ |slope jumps|, including the jumps from 0
        let s = self.slopes();
        let mut tv = s[0].abs() + s[s.len() - 1].abs();
        tv += s.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>();
        vec![DecayBound { order: 2, constant: tv }]
    }
}

// ---------------------------------------------------------------------------
// Fourier transform

/// Frequencies at and above this use the twice-integrated-by-parts form when
/// second derivatives are available.
const IBP_THRESHOLD: f64 = 8.0;

/// `f̂(k) = ∫ f(u) e(-ku) du` with absolute error around 1e-13.
///
/// For `|k| >= 8` and a `C²` function the transform is evaluated as
/// `(2πik)^{-2} ∫ f''(u) e(-ku) du`; the inner tolerance is scaled by
/// `(2πk)²` so both routes target the same absolute error.
pub fn fourier_transform<F: CompactFunction + ?Sized>(f: &F, k: f64) -> Result<Complex64, OscError> {
    let breaks = f.breakpoints();
    let opts = QuadOptions { abs_tol: 1e-13, ..Default::default() };
    let freq = |_: f64| k.abs();
    let (lo, hi) = f.support();
    let probe = 0.5 * (lo + hi);
    if k.abs() >= IBP_THRESHOLD && f.derivative(probe, 2).is_some() {
        let g = |u: f64| Complex64::from_polar(f.derivative(u, 2).unwrap_or(0.0), -TAU * k * u);
        let inner = QuadOptions { abs_tol: opts.abs_tol * (TAU * k).powi(2), ..opts };
        let r = quad::integrate(&g, &breaks, &freq, inner)?;
        let factor = Complex64::new(0.0, TAU * k);
        return Ok(r.value / (factor * factor));
    }
    let g = |u: f64| Complex64::from_polar(f.eval(u), -TAU * k * u);
    Ok(quad::integrate(&g, &breaks, &freq, opts)?.value)
}

/// `max_k |f̂(k)|·|k|^order` over `ks`, a fitted constant for the bound
/// `|f̂(k)| <= C/|k|^order`.
pub fn fit_decay_constant<F: CompactFunction + ?Sized>(f: &F, order: u32, ks: &[f64]) -> Result<f64, OscError> {
    let mut c = 0.0f64;
    for &k in ks {
        c = c.max(fourier_transform(f, k)?.norm() * k.abs().powi(order as i32));
    }
    Ok(c)
}

// ---------------------------------------------------------------------------
// Phase integrals

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `∫_a^b G(x) e^{iF(x)} dx` together with what the bound checks need.
#[derive(Clone)]
pub struct PhaseSpec {
    pub label: String,
    pub a: f64,
    pub b: f64,
    pub phase: RealFn,
    pub phase_d1: RealFn,
    pub phase_d2: RealFn,
    pub amplitude: RealFn,
    /// `M >= sup |G|`.
    pub amplitude_bound: f64,
}

impl fmt::Debug for PhaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhaseSpec")
            .field("label", &self.label)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("amplitude_bound", &self.amplitude_bound)
            .finish_non_exhaustive()
    }
}

impl PhaseSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        label: impl Into<String>,
        a: f64,
        b: f64,
        phase: impl Fn(f64) -> f64 + Send + Sync + 'static,
        phase_d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        phase_d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
        amplitude: impl Fn(f64) -> f64 + Send + Sync + 'static,
        amplitude_bound: f64,
    ) -> Self {
        PhaseSpec {
            label: label.into(),
            a,
            b,
            phase: Arc::new(phase),
            phase_d1: Arc::new(phase_d1),
            phase_d2: Arc::new(phase_d2),
            amplitude: Arc::new(amplitude),
            amplitude_bound,
        }
    }

    fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let n = SAMPLE_POINTS;
        (0..n).map(move |i| self.a + (self.b - self.a) * i as f64 / (n - 1) as f64)
    }
}

/// Adaptive quadrature of `∫_a^b G e^{iF}`, subdividing by the local
/// frequency `|F'|/2π`.
pub fn oscillatory_integral(spec: &PhaseSpec) -> Result<QuadResult, OscError> {
    if spec.a >= spec.b {
        return Err(OscError::InvalidInput(format!("empty interval [{}, {}]", spec.a, spec.b)));
    }
    let f = |x: f64| Complex64::from_polar((spec.amplitude)(x), (spec.phase)(x));
    let freq = |x: f64| (spec.phase_d1)(x).abs() / TAU;
    quad::integrate(&f, &[spec.a, spec.b], &freq, QuadOptions::default())
}

/// Number of monotone pieces of sampled values (non-strict monotonicity;
/// flat steps never start a new piece).
pub fn monotone_pieces(values: &[f64]) -> usize {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let tiny = 1e-13 * scale;
    let mut pieces = 1;
    let mut direction = 0i8;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        let s = if d > tiny {
            1
        } else if d < -tiny {
            -1
        } else {
            0
        };
        if s != 0 {
            if direction != 0 && s != direction {
                pieces += 1;
            }
            direction = s;
        }
    }
    pieces
}

/// Outcome of an explicit-constant bound check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub label: String,
    pub bound: String,
    #[serde(serialize_with = "crate::report::sig12")]
    pub lhs: f64,
    #[serde(serialize_with = "crate::report::sig12")]
    pub rhs: f64,
    #[serde(serialize_with = "crate::report::sig12")]
    pub quad_error: f64,
    pub holds: bool,
}

fn check_amplitude_range(spec: &PhaseSpec, g: &[f64]) -> Result<(), OscError> {
    let m = spec.amplitude_bound;
    if let Some(v) = g.iter().find(|&&v| !(0.0..=m).contains(&v)) {
        return Err(OscError::Precondition(format!("G = {v} outside [0, M = {m}]")));
    }
    Ok(())
}

/// `|∫ G e^{iF}| <= 4M/m` for `|F'| >= m` of one sign, `F'` and `G`
/// monotone, `0 <= G <= M`. Preconditions are verified on a dense grid.
pub fn check_first_derivative_bound(spec: &PhaseSpec, m: f64) -> Result<BoundReport, OscError> {
    if !(m > 0.0) {
        return Err(OscError::InvalidInput(format!("m must be positive, got {m}")));
    }
    let d1: Vec<f64> = spec.grid().map(|x| (spec.phase_d1)(x)).collect();
    if !(d1.iter().all(|&v| v >= m) || d1.iter().all(|&v| v <= -m)) {
        return Err(OscError::Precondition(format!("|F'| >= {m} with one sign fails on the grid")));
    }
    if monotone_pieces(&d1) > 1 {
        return Err(OscError::Precondition("F' is not monotone".into()));
    }
    let g: Vec<f64> = spec.grid().map(|x| (spec.amplitude)(x)).collect();
    if monotone_pieces(&g) > 1 {
        return Err(OscError::Precondition("G is not monotone".into()));
    }
    check_amplitude_range(spec, &g)?;
    let r = oscillatory_integral(spec)?;
    let lhs = r.value.norm();
    let rhs = 4.0 * spec.amplitude_bound / m;
    Ok(BoundReport {
        label: spec.label.clone(),
        bound: "4M/m".into(),
        lhs,
        rhs,
        quad_error: r.error,
        holds: lhs <= rhs,
    })
}

/// `|∫ G e^{iF}| <= 8KM/√r` for `|F''| >= r` of one sign and `G` made of at
/// most `K` monotone pieces with `0 <= G <= M`.
pub fn check_second_derivative_bound(spec: &PhaseSpec, r: f64, k: u32) -> Result<BoundReport, OscError> {
    if !(r > 0.0) || k == 0 {
        return Err(OscError::InvalidInput(format!("need r > 0 and K >= 1, got r = {r}, K = {k}")));
    }
    let d2: Vec<f64> = spec.grid().map(|x| (spec.phase_d2)(x)).collect();
    if !(d2.iter().all(|&v| v >= r) || d2.iter().all(|&v| v <= -r)) {
        return Err(OscError::Precondition(format!("|F''| >= {r} with one sign fails on the grid")));
    }
    let g: Vec<f64> = spec.grid().map(|x| (spec.amplitude)(x)).collect();
    let pieces = monotone_pieces(&g);
    if pieces > k as usize {
        return Err(OscError::Precondition(format!("G has {pieces} monotone pieces, more than K = {k}")));
    }
    check_amplitude_range(spec, &g)?;
    let q = oscillatory_integral(spec)?;
    let lhs = q.value.norm();
    let rhs = 8.0 * k as f64 * spec.amplitude_bound / r.sqrt();
    Ok(BoundReport {
        label: spec.label.clone(),
        bound: "8KM/sqrt(r)".into(),
        lhs,
        rhs,
        quad_error: q.error,
        holds: lhs <= rhs,
    })
}

// ---------------------------------------------------------------------------
// Non-stationary phase

pub type DerivFn = Arc<dyn Fn(f64, usize) -> f64 + Send + Sync>;

/// `∫_a^b e^{iF} W` with derivative oracles for `F` and `W`.
#[derive(Clone)]
pub struct NonstationarySpec {
    pub label: String,
    pub a: f64,
    pub b: f64,
    /// `(x, k) -> F^(k)(x)`.
    pub phase: DerivFn,
    /// `(x, k) -> W^(k)(x)`.
    pub weight: DerivFn,
    /// Caller-supplied `C_W` in `|W^(k)| <= C_W (b-a)^{-k}`.
    pub weight_constant: f64,
}

impl fmt::Debug for NonstationarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NonstationarySpec")
            .field("label", &self.label)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("weight_constant", &self.weight_constant)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub label: String,
    pub order: u32,
    #[serde(serialize_with = "crate::report::sig12")]
    pub lhs: f64,
    /// `Φ = inf |F'|` on the sample grid.
    #[serde(serialize_with = "crate::report::sig12")]
    pub phi: f64,
    /// `(b-a)^{1-N} Φ^{-N}`.
    #[serde(serialize_with = "crate::report::sig12")]
    pub shape: f64,
    #[serde(serialize_with = "crate::report::sig12")]
    pub ratio: f64,
    /// Largest sampled `|F^(k)| (b-a)^{k-1} / Φ`, `1 <= k <= N+1`.
    #[serde(serialize_with = "crate::report::sig12")]
    pub phase_constant: f64,
    /// Largest sampled `|W^(k)| (b-a)^k`, `0 <= k <= N`.
    #[serde(serialize_with = "crate::report::sig12")]
    pub weight_constant: f64,
    #[serde(serialize_with = "crate::report::sig12")]
    pub quad_error: f64,
}

/// `(b-a)^{1-N} Φ^{-N}`.
pub fn nonstationary_shape(len: f64, phi: f64, n: u32) -> f64 {
    len.powi(1 - n as i32) * phi.powi(-(n as i32))
}

/// Evaluates `|∫ e^{iF} W|` against `(b-a)^{1-N} Φ^{-N}` after sampling the
/// hypotheses on `F` (constant at most [`HYPOTHESIS_CONSTANT`]) and on `W`
/// (constant at most the supplied `weight_constant`).
pub fn check_nonstationary_decay(spec: &NonstationarySpec, n: u32) -> Result<DecayReport, OscError> {
    if n == 0 || n as usize + 1 > K_MAX {
        return Err(OscError::InvalidInput(format!("N must lie in [1, {}], got {n}", K_MAX - 1)));
    }
    if spec.a >= spec.b {
        return Err(OscError::InvalidInput("empty interval".into()));
    }
    let len = spec.b - spec.a;
    let grid: Vec<f64> = (0..SAMPLE_POINTS).map(|i| spec.a + len * i as f64 / (SAMPLE_POINTS - 1) as f64).collect();
    let phi = grid.iter().map(|&x| (spec.phase)(x, 1).abs()).fold(f64::INFINITY, f64::min);
    if !(phi > 0.0) {
        return Err(OscError::Precondition("F' vanishes on the grid".into()));
    }
    let mut phase_constant = 0.0f64;
    for k in 1..=n as usize + 1 {
        let sup = grid.iter().map(|&x| (spec.phase)(x, k).abs()).fold(0.0, f64::max);
        phase_constant = phase_constant.max(sup * len.powi(k as i32 - 1) / phi);
    }
    if phase_constant > HYPOTHESIS_CONSTANT {
        return Err(OscError::Precondition(format!(
            "phase derivatives need constant {phase_constant:.3} > {HYPOTHESIS_CONSTANT}"
        )));
    }
    let mut weight_constant = 0.0f64;
    for k in 0..=n as usize {
        let sup = grid.iter().map(|&x| (spec.weight)(x, k).abs()).fold(0.0, f64::max);
        weight_constant = weight_constant.max(sup * len.powi(k as i32));
    }
    if weight_constant > spec.weight_constant {
        return Err(OscError::Precondition(format!(
            "weight derivatives need constant {weight_constant:.3} > supplied {}",
            spec.weight_constant
        )));
    }
    let f = |x: f64| Complex64::from_polar((spec.weight)(x, 0), (spec.phase)(x, 0));
    let freq = |x: f64| (spec.phase)(x, 1).abs() / TAU;
    let q = quad::integrate(&f, &[spec.a, spec.b], &freq, QuadOptions::default())?;
    let lhs = q.value.norm();
    let shape = nonstationary_shape(len, phi, n);
    Ok(DecayReport {
        label: spec.label.clone(),
        order: n,
        lhs,
        phi,
        shape,
        ratio: lhs / shape,
        phase_constant,
        weight_constant,
        quad_error: q.error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub reports: Vec<DecayReport>,
    #[serde(serialize_with = "crate::report::sig12")]
    pub fitted_constant: f64,
    /// The largest ratio over the upper half of the family (by `Φ`) does not
    /// exceed the largest over the lower half, up to the quadrature noise.
    pub bounded: bool,
}

/// Runs [`check_nonstationary_decay`] over a family and fits the implied
/// constant.
pub fn fit_nonstationary_family(specs: &[NonstationarySpec], n: u32) -> Result<DecayFit, OscError> {
    let mut reports = specs.iter().map(|s| check_nonstationary_decay(s, n)).collect::<Result<Vec<_>, _>>()?;
    reports.sort_by(|a, b| a.phi.total_cmp(&b.phi));
    let fitted_constant = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let half = reports.len() / 2;
    let lower = reports[..half.max(1)].iter().map(|r| r.ratio).fold(0.0, f64::max);
    let upper = reports[half..].iter().map(|r| r.ratio).fold(0.0, f64::max);
    let noise = reports.iter().map(|r| r.quad_error / r.shape).fold(0.0, f64::max);
    let bounded = fitted_constant.is_finite() && upper <= lower + noise;
    Ok(DecayFit { reports, fitted_constant, bounded })
}

/// `F = λx` on `[0, 1]` with `W(x) = φ(4x - 2)`, the canonical family.
pub fn linear_phase_family(lambdas: &[f64]) -> Vec<NonstationarySpec> {
    // W^(k) = 4^k φ^(k)(4x - 2); the sup over k <= 9 of |W^(k)| is finite
    let weight: DerivFn =
        Arc::new(|x, k| 4f64.powi(k as i32) * bump_eval(BumpKind::Phi, 4.0 * x - 2.0, k).unwrap_or(0.0));
    let weight_constant = (0..K_MAX)
        .map(|k| (0..=4000).map(|i| (weight)(i as f64 / 4000.0, k).abs()).fold(0.0, f64::max) * 1.05)
        .fold(0.0, f64::max);
    lambdas
        .iter()
        .map(|&lambda| NonstationarySpec {
            label: format!("linear lambda={lambda}"),
            a: 0.0,
            b: 1.0,
            phase: Arc::new(move |x, k| match k {
                0 => lambda * x,
                1 => lambda,
                _ => 0.0,
            }),
            weight: weight.clone(),
            weight_constant,
        })
        .collect()
}
