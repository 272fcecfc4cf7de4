use std::sync::OnceLock;

use super::{gcd, isqrt, mul_mod, pow_mod};

/// Trial-division table bound. `is_squarefree` uses trial division whenever
/// `∛n` stays below it, i.e. for `n` up to about `10^19`.
const SIEVE_LIMIT: usize = 1 << 21;

/// Primes below `2^21`, computed once.
pub fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut composite = vec![false; SIEVE_LIMIT];
        let mut primes = Vec::with_capacity(160_000);
        for i in 2..SIEVE_LIMIT {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j < SIEVE_LIMIT {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Prime factorization as `(p, α)` pairs sorted by `p`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn from_pairs(mut factors: Vec<(u128, u32)>) -> Self {
        factors.sort_unstable();
        // merge repeated primes (Pollard rho may split the same prime twice)
        let mut merged: Vec<(u128, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        Factorization { factors: merged }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, (u128, u32)> {
        self.factors.iter()
    }

    pub fn pairs(&self) -> &[(u128, u32)] {
        &self.factors
    }

    /// Number of distinct primes.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn value(&self) -> u128 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn radical(&self) -> u128 {
        self.factors.iter().map(|&(p, _)| p).product()
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }
}

impl<'a> IntoIterator for &'a Factorization {
    type Item = &'a (u128, u32);
    type IntoIter = std::slice::Iter<'a, (u128, u32)>;

    fn into_iter(self) -> Self::IntoIter {
        self.factors.iter()
    }
}

/// Miller–Rabin with the first twelve prime bases: a proof of primality
/// below 3.3·10^24, and a strong probable-prime test above that.
pub fn is_prime(n: u128) -> bool {
    const BASES: [u128; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor of the odd
/// composite `n`.
fn pollard_brent(n: u128) -> u128 {
    for c in 1u128.. {
        let step = |x: u128| {
            let y = mul_mod(x, x, n) + c;
            if y >= n {
                y - n
            } else {
                y
            }
        };
        let mut y = 2u128;
        let mut r = 1u64;
        let mut q = 1u128;
        let mut g = 1u128;
        let mut x = y;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = step(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = step(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn split_into(n: u128, out: &mut Vec<(u128, u32)>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push((n, 1));
        return;
    }
    let r = isqrt(n);
    if r * r == n {
        let mut inner = Vec::new();
        split_into(r, &mut inner);
        out.extend(inner.into_iter().map(|(p, e)| (p, 2 * e)));
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Complete prime factorization of `n` (`n = 1` gives the empty product).
///
/// Trial division by primes below 2^16, then Miller–Rabin plus Pollard rho on
/// the cofactor. Requires `n < 2^127`.
pub fn factorize(n: u128) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    assert!(n < 1 << 127, "factorize requires n < 2^127");
    let mut out = Vec::new();
    let (rest, cofactor_is_prime) = match u64::try_from(n) {
        Ok(small) => {
            let (rest, done) = trial_divide(small, &mut out);
            (rest as u128, done)
        }
        Err(_) => trial_divide(n, &mut out),
    };
    if cofactor_is_prime {
        if rest > 1 {
            out.push((rest, 1));
        }
    } else {
        split_into(rest, &mut out);
    }
    Factorization::from_pairs(out)
}

/// Divides out primes below 2^16. Returns the cofactor and whether it is
/// known to be 1 or prime (every prime up to its square root was tried).
fn trial_divide<T>(mut rest: T, out: &mut Vec<(u128, u32)>) -> (T, bool)
where
    T: Copy
        + From<u32>
        + Into<u128>
        + PartialOrd
        + std::ops::Rem<Output = T>
        + std::ops::Div<Output = T>
        + std::ops::Mul<Output = T>,
{
    let zero = T::from(0);
    for &p in small_primes().iter().take_while(|&&p| p < 1 << 16) {
        let pt = T::from(p);
        if pt * pt > rest {
            return (rest, true);
        }
        if rest % pt == zero {
            let mut e = 0;
            while rest % pt == zero {
                rest = rest / pt;
                e += 1;
            }
            out.push((p as u128, e));
        }
    }
    (rest, false)
}
