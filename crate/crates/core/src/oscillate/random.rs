//! Seeded generators of phase specs that satisfy the first- and
//! second-derivative bound hypotheses by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{bump_eval, BumpKind, PhaseSpec};

/// A monotone amplitude on `[a, b]` with values in `[0, m]`.
fn monotone_amplitude(rng: &mut ChaCha8Rng, a: f64, b: f64, m: f64) -> (String, Box<dyn Fn(f64) -> f64 + Send + Sync>) {
    let len = b - a;
    match rng.gen_range(0..4) {
        0 => {
            let gamma = rng.gen_range(0.2..3.0);
            (format!("M·u^{gamma:.3}"), Box::new(move |x| m * ((x - a) / len).clamp(0.0, 1.0).powf(gamma)))
        }
        1 => {
            let gamma = rng.gen_range(0.2..3.0);
            (format!("M·(1-u)^{gamma:.3}"), Box::new(move |x| m * (1.0 - (x - a) / len).clamp(0.0, 1.0).powf(gamma)))
        }
        2 => (
            "M·ramp(u)".into(),
            // the rising ramp of φ, mapped onto [a, b]
            Box::new(move |x| m * bump_eval(BumpKind::Phi, (x - a) / len - 2.0, 0).unwrap_or(0.0)),
        ),
        _ => ("M".into(), Box::new(move |_| m)),
    }
}

/// `count` specs with `|F'| >= m` of one sign, `F'` monotone, and a monotone
/// amplitude in `[0, M]`. Returns each spec with its `m`.
pub fn first_derivative_specs(seed: u64, count: usize) -> Vec<(PhaseSpec, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let alpha: f64 = rng.gen_range(0.5..50.0);
            let beta: f64 = rng.gen_range(0.0..5.0);
            let big_m: f64 = rng.gen_range(0.5..3.0);
            if rng.gen_bool(0.5) {
                // F = s(αx + βx³) on [a, b] ⊂ [0, ∞): |F'| increasing
                let a: f64 = rng.gen_range(0.0..2.0);
                let b = a + rng.gen_range(0.1..5.0);
                let m = alpha + 3.0 * beta * a * a;
                let (gname, g) = monotone_amplitude(&mut rng, a, b, big_m);
                let spec = PhaseSpec::new(
                    format!("fd{i}: F={sign}({alpha:.3}x+{beta:.3}x^3), G={gname}"),
                    a,
                    b,
                    move |x| sign * (alpha * x + beta * x.powi(3)),
                    move |x| sign * (alpha + 3.0 * beta * x * x),
                    move |x| sign * 6.0 * beta * x,
                    g,
                    big_m,
                );
                (spec, m)
            } else {
                // F = s(αx + β e^{κx}): |F'| = α + βκe^{κx} increasing everywhere
                let kappa: f64 = rng.gen_range(0.1..2.0);
                let a: f64 = rng.gen_range(-3.0..2.0);
                let b = a + rng.gen_range(0.1..4.0);
                let m = alpha + beta * kappa * (kappa * a).exp();
                let (gname, g) = monotone_amplitude(&mut rng, a, b, big_m);
                let spec = PhaseSpec::new(
                    format!("fd{i}: F={sign}({alpha:.3}x+{beta:.3}e^({kappa:.3}x)), G={gname}"),
                    a,
                    b,
                    move |x| sign * (alpha * x + beta * (kappa * x).exp()),
                    move |x| sign * (alpha + beta * kappa * (kappa * x).exp()),
                    move |x| sign * beta * kappa * kappa * (kappa * x).exp(),
                    g,
                    big_m,
                );
                (spec, m)
            }
        })
        .collect()
}

/// `count` specs with `|F''| >= r` of one sign and an amplitude made of at
/// most `K` monotone pieces in `[0, M]`. Returns each spec with `(r, K)`.
pub fn second_derivative_specs(seed: u64, count: usize) -> Vec<(PhaseSpec, f64, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let rho: f64 = rng.gen_range(0.5..200.0);
            let beta: f64 = rng.gen_range(-20.0..20.0);
            let gamma: f64 = rng.gen_range(0.0..1.0);
            let a: f64 = rng.gen_range(-3.0..1.0);
            let b = a + rng.gen_range(0.1..4.0);
            let len = b - a;
            let big_m: f64 = rng.gen_range(0.5..3.0);
            let (gname, g, k): (String, Box<dyn Fn(f64) -> f64 + Send + Sync>, u32) = match rng.gen_range(0..3) {
                0 => {
                    let (name, g) = monotone_amplitude(&mut rng, a, b, big_m);
                    (name, g, 1)
                }
                1 => {
                    let j: u32 = rng.gen_range(1..=3);
                    let g =
                        move |x: f64| big_m * 0.5 * (1.0 - (std::f64::consts::TAU * j as f64 * (x - a) / len).cos());
                    (format!("raised cosine j={j}"), Box::new(g), 2 * j)
                }
                _ => {
                    let g = move |x: f64| big_m * bump_eval(BumpKind::Psi, 0.5 + 2.0 * (x - a) / len, 0).unwrap_or(0.0);
                    ("M·psi".into(), Box::new(g), 2)
                }
            };
            let spec = PhaseSpec::new(
                format!("sd{i}: F={sign}({rho:.3}/2 x^2+{beta:.3}x+{gamma:.3}x^4), G={gname}"),
                a,
                b,
                move |x| sign * (0.5 * rho * x * x + beta * x + gamma * x.powi(4)),
                move |x| sign * (rho * x + beta + 4.0 * gamma * x.powi(3)),
                move |x| sign * (rho + 12.0 * gamma * x * x),
                g,
                big_m,
            );
            (spec, rho, k)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::{check_first_derivative_bound, check_second_derivative_bound};
    use super::*;

    #[test]
    fn first_derivative_family_holds() {
        let specs = first_derivative_specs(7, 100);
        for (spec, m) in &specs {
            let r = check_first_derivative_bound(spec, *m).unwrap_or_else(|e| panic!("{}: {e}", spec.label));
            assert!(r.holds, "{r:?}");
        }
    }

    #[test]
    fn second_derivative_family_holds() {
        for (spec, r, k) in &second_derivative_specs(11, 100) {
            let rep = check_second_derivative_bound(spec, *r, *k).unwrap_or_else(|e| panic!("{}: {e}", spec.label));
            assert!(rep.holds, "{rep:?}");
        }
    }

    #[test]
    fn generators_are_seeded() {
        let a: Vec<String> = first_derivative_specs(3, 10).into_iter().map(|(s, _)| s.label).collect();
        let b: Vec<String> = first_derivative_specs(3, 10).into_iter().map(|(s, _)| s.label).collect();
        assert_eq!(a, b);
    }
}
