//! Solutions of `w^k ≡ a (mod q)` over units `w`.
//!
//! Per prime power `p^α || q`:
//! * `p ∤ k`: roots mod `p` by power-residue reduction and a Tonelli–Shanks
//!   style r-th root, then Newton/Hensel lifting (the derivative `k w^(k-1)`
//!   is a unit).
//! * `p | k`: exhaustive search over `w mod p^α`, only for `p^α <= 10^6`.
//!
//! The per-prime-power sets are combined with CRT.

use super::{crt_combine, factorize, gcd_u64, mod_inverse, pow_mod_u64, ArithError};

/// Largest prime power searched exhaustively when `p | k`.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// All `w mod q` with `gcd(w, q) = 1` and `w^k ≡ a (mod q)`, sorted.
pub fn kth_residue_solutions(a: i128, k: u32, q: u64) -> Result<Vec<u64>, ArithError> {
    if q < 2 {
        return Err(ArithError::InvalidArgument(format!("modulus must be >= 2, got {q}")));
    }
    if k == 0 {
        return Err(ArithError::InvalidArgument("exponent must be >= 1".into()));
    }
    let f = factorize(q as u128);
    let mut per_prime: Vec<(Vec<u64>, u64)> = Vec::with_capacity(f.omega());
    for &(p, e) in f.iter() {
        let p = p as u64;
        let pe = p.pow(e);
        let a_pe = a.rem_euclid(pe as i128) as u64;
        if a_pe % p == 0 {
            // a unit w cannot have w^k divisible by p
            return Ok(Vec::new());
        }
        let roots = if k as u64 % p == 0 {
            if pe > EXHAUSTIVE_LIMIT {
                return Err(ArithError::Unsupported(format!(
                    "p = {p} divides k = {k} and p^α = {pe} exceeds the exhaustive limit"
                )));
            }
            exhaustive_roots(a_pe, k, p, pe)
        } else {
            let base = roots_mod_prime(a_pe % p, k, p);
            let mut lifted: Vec<u64> = base.into_iter().map(|r| hensel_lift(r, a_pe, k, p, pe)).collect();
            lifted.sort_unstable();
            lifted
        };
        if roots.is_empty() {
            return Ok(Vec::new());
        }
        per_prime.push((roots, pe));
    }

    let mut combined: Vec<u64> = vec![0];
    let mut modulus: u64 = 1;
    for (roots, pe) in per_prime {
        let mut next = Vec::with_capacity(combined.len() * roots.len());
        for &x in &combined {
            for &r in &roots {
                let (v, _) = crt_combine(&[(x as u128, modulus as u128), (r as u128, pe as u128)])?;
                next.push(v as u64);
            }
        }
        combined = next;
        modulus *= pe;
    }
    combined.sort_unstable();
    Ok(combined)
}

fn exhaustive_roots(a: u64, k: u32, p: u64, pe: u64) -> Vec<u64> {
    (1..pe).filter(|w| w % p != 0 && pow_mod_u64(*w, k as u64, pe) == a).collect()
}

/// Lifts a simple root `r` of `w^k ≡ a (mod p)` to the unique root mod `p^α`.
fn hensel_lift(r: u64, a: u64, k: u32, p: u64, pe: u64) -> u64 {
    let mut root = r;
    let mut modulus = p;
    while modulus < pe {
        modulus = modulus.saturating_mul(modulus).min(pe);
        let m = modulus as u128;
        let f = (pow_mod_u64(root, k as u64, modulus) as u128 + m - (a % modulus) as u128) % m;
        let df = (k as u128 % m) * pow_mod_u64(root, k as u64 - 1, modulus) as u128 % m;
        let inv = mod_inverse(df as i128, m).expect("derivative is a unit when p ∤ k");
        root = ((root as u128 + m - f * inv % m) % m) as u64;
    }
    root
}

#[inline]
fn mul(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Roots of `w^k ≡ a (mod p)` for prime `p`, `p ∤ a`.
fn roots_mod_prime(a: u64, k: u32, p: u64) -> Vec<u64> {
    if p == 2 {
        return vec![1];
    }
    let order = p - 1;
    let k = k as u64 % order;
    // w^0 = 1 for every unit
    if k == 0 {
        return if a == 1 { (1..p).collect() } else { Vec::new() };
    }
    let g = gcd_u64(k, order);
    // u·k ≡ g (mod p-1); the solution set of w^k = a equals that of w^g = a^u
    // because both maps have the same kernel (the g-th roots of unity).
    let u = {
        let k_red = k / g;
        let m_red = order / g;
        if m_red == 1 {
            0
        } else {
            mod_inverse(k_red as i128, m_red as u128).expect("k/g is coprime to (p-1)/g") as u64
        }
    };
    if g == 1 {
        return vec![pow_mod_u64(a, u, p)];
    }
    if pow_mod_u64(a, order / g, p) != 1 {
        return Vec::new();
    }
    let target = pow_mod_u64(a, u, p);
    let r0 = gth_root(target, g, p);
    let zeta = root_of_unity(g, p);
    let mut roots = Vec::with_capacity(g as usize);
    let mut r = r0;
    for _ in 0..g {
        roots.push(r);
        r = mul(r, zeta, p);
    }
    roots.sort_unstable();
    roots
}

/// A primitive `g`-th root of unity mod `p`, `g | p - 1`.
fn root_of_unity(g: u64, p: u64) -> u64 {
    let primes = prime_divisors(g);
    for h in 2..p {
        let z = pow_mod_u64(h, (p - 1) / g, p);
        if primes.iter().all(|&r| pow_mod_u64(z, g / r, p) != 1) {
            return z;
        }
    }
    1
}

/// One solution of `w^g ≡ c (mod p)`, where `g | p - 1` and `c` is a `g`-th
/// power residue. Peels off one prime factor of `g` at a time.
fn gth_root(c: u64, g: u64, p: u64) -> u64 {
    if g == 1 {
        return c;
    }
    let r = prime_divisors(g)[0];
    let rest = g / r;
    // need y with y^r = c and y a rest-th power residue
    let y0 = prime_root(c, r, p);
    let zeta_r = root_of_unity(r, p);
    let mut y = y0;
    for _ in 0..r {
        if rest == 1 || pow_mod_u64(y, (p - 1) / rest, p) == 1 {
            return gth_root(y, rest, p);
        }
        y = mul(y, zeta_r, p);
    }
    unreachable!("c is a g-th power residue")
}

/// One r-th root of `c` modulo `p` for a prime `r | p - 1`, given that `c`
/// is an r-th power residue.
fn prime_root(c: u64, r: u64, p: u64) -> u64 {
    // p - 1 = r^s · t with r ∤ t
    let mut t = p - 1;
    let mut s = 0u32;
    while t % r == 0 {
        t /= r;
        s += 1;
    }
    // x = c^u with r·u ≡ 1 (mod t) makes x^r / c land in the r-Sylow subgroup
    let u = if t == 1 { 0 } else { mod_inverse(r as i128, t as u128).unwrap() as u64 };
    let x = pow_mod_u64(c, u, p);
    if s == 0 {
        return x;
    }
    let c_inv = mod_inverse(c as i128, p as u128).unwrap() as u64;
    let err = mul(pow_mod_u64(x, r, p), c_inv, p);
    // generator z of the Sylow r-subgroup (order r^s)
    let z = (2..p)
        .map(|h| pow_mod_u64(h, t, p))
        .find(|&z| pow_mod_u64(z, r.pow(s - 1), p) != 1)
        .expect("non-residue exists");
    // Pohlig–Hellman: err = z^L, digits of L base r
    let zeta = pow_mod_u64(z, r.pow(s - 1), p);
    let z_inv = mod_inverse(z as i128, p as u128).unwrap() as u64;
    let mut log = 0u64;
    let mut r_pow = 1u64;
    for i in 0..s {
        let reduced = mul(err, pow_mod_u64(z_inv, log, p), p);
        let probe = pow_mod_u64(reduced, r.pow(s - 1 - i), p);
        let mut digit = 0;
        let mut acc = 1u64;
        while acc != probe {
            acc = mul(acc, zeta, p);
            digit += 1;
            debug_assert!(digit < r);
        }
        log += digit * r_pow;
        r_pow *= r;
    }
    debug_assert_eq!(log % r, 0, "err must be an r-th power");
    // y^r = err^{-1} with y = z^{-L/r}
    let y = pow_mod_u64(z_inv, log / r, p);
    mul(x, y, p)
}
