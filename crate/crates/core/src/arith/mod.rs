//! Exact integer arithmetic: modular helpers, factorization, the Möbius
//! function, square-free testing, k-th power residues and CRT.

mod factor;
mod residues;

use thiserror::Error;

pub use factor::{factorize, is_prime, small_primes, Factorization};
pub use residues::{kth_residue_solutions, EXHAUSTIVE_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{a} has no inverse modulo {m} (gcd = {gcd})")]
    NotInvertible { a: i128, m: u128, gcd: u128 },
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(u128, u128),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("arithmetic overflow")]
    Overflow,
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `a * b mod m` for `a, b < m`, without overflow for any `m < 2^127`.
#[inline]
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return a * b % m;
    }
    // Double-and-add; m < 2^127 keeps every intermediate sum below 2^128.
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc += a;
            if acc >= m {
                acc -= m;
            }
        }
        a <<= 1;
        if a >= m {
            a -= m;
        }
        b >>= 1;
    }
    acc
}

pub fn pow_mod(base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u128;
    let mut base = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    result
}

#[inline]
pub fn pow_mod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut result = 1u128;
    let mut base = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % m128;
        }
        base = base * base % m128;
        exp >>= 1;
    }
    result as u64
}

/// `⌊√n⌋`, exact.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    // f64 is only accurate to ~53 bits; correct in both directions.
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// `⌊∛n⌋`, exact.
pub fn icbrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let cube = |x: u128| x.checked_mul(x).and_then(|s| s.checked_mul(x));
    let mut x = (n as f64).cbrt() as u128;
    while cube(x).map_or(true, |c| c > n) {
        x -= 1;
    }
    while cube(x + 1).is_some_and(|c| c <= n) {
        x += 1;
    }
    x
}

pub fn is_perfect_square(n: u128) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// The Möbius function.
pub fn mobius(n: u128) -> i8 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.omega() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `true` iff no square of a prime divides `n`.
///
/// All primes up to `∛n` are stripped by trial division. The cofactor then
/// has at most two prime factors, all larger than `∛n`, so it is square-free
/// unless it is a perfect square greater than one. When `∛n` exceeds the
/// trial-division table the full factorization is used instead.
pub fn is_squarefree(n: u128) -> bool {
    assert!(n >= 1, "is_squarefree is defined for n >= 1");
    let cube_root = icbrt(n);
    let primes = small_primes();
    if cube_root > *primes.last().unwrap() as u128 {
        return factorize(n).iter().all(|&(_, e)| e == 1);
    }
    let mut rest = n;
    for &p in primes {
        let p = p as u128;
        if p > cube_root {
            break;
        }
        if rest % p == 0 {
            rest /= p;
            if rest % p == 0 {
                return false;
            }
        }
        if rest < p * p {
            // rest is 1 or a prime
            return true;
        }
    }
    !(rest > 1 && is_perfect_square(rest))
}

/// Inverse of `a` modulo `m >= 2`, in `[0, m)`.
pub fn mod_inverse(a: i128, m: u128) -> Result<u128, ArithError> {
    if m < 2 {
        return Err(ArithError::InvalidArgument(format!("modulus must be >= 2, got {m}")));
    }
    let m_signed = i128::try_from(m).map_err(|_| ArithError::Overflow)?;
    let a_red = a.rem_euclid(m_signed);
    // Extended Euclid on (a_red, m) with signed Bézout coefficients.
    let (mut old_r, mut r) = (a_red, m_signed);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(ArithError::NotInvertible { a, m, gcd: old_r as u128 });
    }
    Ok(old_s.rem_euclid(m_signed) as u128)
}

/// Solves `x ≡ r_i (mod m_i)` for pairwise coprime moduli, returning
/// `(x, ∏ m_i)` with `0 <= x < ∏ m_i`.
pub fn crt_combine(residues: &[(u128, u128)]) -> Result<(u128, u128), ArithError> {
    let mut acc = 0u128;
    let mut modulus = 1u128;
    for &(r, m) in residues {
        if m == 0 {
            return Err(ArithError::InvalidArgument("modulus 0".into()));
        }
        let g = gcd(modulus, m);
        if g != 1 {
            return Err(ArithError::NonCoprimeModuli(modulus, m));
        }
        let new_modulus = modulus.checked_mul(m).ok_or(ArithError::Overflow)?;
        if new_modulus >= 1 << 127 {
            return Err(ArithError::Overflow);
        }
        let r = r % m;
        if m == 1 {
            continue;
        }
        // acc + modulus * t ≡ r (mod m)
        let inv = mod_inverse((modulus % m) as i128, m)?;
        let diff = (r + m - acc % m) % m;
        let t = mul_mod(diff, inv, m);
        acc += mul_mod(modulus, t, new_modulus);
        acc %= new_modulus;
        modulus = new_modulus;
    }
    Ok((acc, modulus))
}
