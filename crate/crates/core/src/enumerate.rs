//! Ordered generation of base-`b` palindromes from their half-prefixes.
//!
//! An `N`-digit palindrome is fixed by its leading `H = ⌈N/2⌉` digits. The
//! stream walks the prefix like an odometer and keeps the mirrored value up
//! to date with one addition per step: prefix digit `i` (0 = most
//! significant) contributes `b^(N-1-i) + b^i`, or just `b^i` when it is the
//! middle digit of an odd length.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::gcd;
use crate::digits::{digit_count, Base};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("b^N overflows 128 bits (b = {base}, N = {len})")]
    Overflow { base: u32, len: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Which palindromes a stream covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Scope {
    /// Exactly `N` digits.
    FixedLength(u32),
    /// All palindromes `<= x`.
    UpTo(u128),
}

/// One digit length and a half-open interval of half-prefix values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Segment {
    len: u32,
    lo: u128,
    hi: u128,
}

impl Segment {
    fn prefix_count(&self) -> u128 {
        self.hi - self.lo
    }
}

/// Residues modulo `b³ - b` that are units, when the modulus is small enough
/// to tabulate.
#[derive(Debug, Clone)]
enum Restriction {
    None,
    Table { modulus: u64, coprime: std::sync::Arc<Vec<bool>> },
    Gcd { modulus: u128 },
}

const TABLE_LIMIT: u128 = 1 << 20;

impl Restriction {
    fn new(base: Base, restricted: bool) -> Self {
        if !restricted {
            return Restriction::None;
        }
        let m = base.cube_minus_base();
        if m <= TABLE_LIMIT {
            let m64 = m as u64;
            let coprime = (0..m64).map(|r| crate::arith::gcd_u64(r, m64) == 1).collect();
            Restriction::Table { modulus: m64, coprime: std::sync::Arc::new(coprime) }
        } else {
            Restriction::Gcd { modulus: m }
        }
    }

    #[inline]
    fn admits(&self, n: u128) -> bool {
        match self {
            Restriction::None => true,
            Restriction::Table { modulus, coprime } => coprime[(n % *modulus as u128) as usize],
            Restriction::Gcd { modulus } => gcd(n, *modulus) == 1,
        }
    }
}

/// Odometer over the half-prefix of one segment.
#[derive(Debug, Clone)]
struct Cursor {
    /// Prefix digits, most significant first.
    digits: Vec<u32>,
    weights: Vec<u128>,
    value: u128,
    remaining: u128,
}

impl Cursor {
    fn new(base: Base, seg: Segment) -> Self {
        let b = base.as_u128();
        let n = seg.len;
        let h = n.div_ceil(2);
        let weights: Vec<u128> = (0..h)
            .map(|i| {
                let hi = b.pow(n - 1 - i);
                let lo = b.pow(i);
                if n - 1 - i == i {
                    lo
                } else {
                    hi + lo
                }
            })
            .collect();
        let mut digits = vec![0u32; h as usize];
        let mut rest = seg.lo;
        for d in digits.iter_mut().rev() {
            *d = (rest % b) as u32;
            rest /= b;
        }
        let value = digits.iter().zip(&weights).map(|(&d, &w)| d as u128 * w).sum();
        Cursor { digits, weights, value, remaining: seg.prefix_count() }
    }

    fn advance(&mut self, b: u32) {
        let mut i = self.digits.len() - 1;
        while self.digits[i] == b - 1 {
            self.digits[i] = 0;
            self.value -= (b as u128 - 1) * self.weights[i];
            if i == 0 {
                // only reached after the last prefix; `remaining` is 0 then
                return;
            }
            i -= 1;
        }
        self.digits[i] += 1;
        self.value += self.weights[i];
    }
}

/// A strictly increasing stream of base-`b` palindromes.
///
/// Not shareable mid-iteration; use [`PalindromeStream::split_at_prefix`] to
/// obtain independent sub-streams for parallel consumers.
#[derive(Debug, Clone)]
pub struct PalindromeStream {
    base: Base,
    scope: Scope,
    restricted: bool,
    limit: Option<u128>,
    segments: Vec<Segment>,
    next_segment: usize,
    cursor: Option<Cursor>,
    restriction: Restriction,
}

fn half_bounds(base: Base, len: u32) -> Result<(u128, u128), EnumError> {
    if base.checked_pow(len).is_none() {
        return Err(EnumError::Overflow { base: base.get(), len });
    }
    let h = len.div_ceil(2);
    let b = base.as_u128();
    Ok((b.pow(h - 1), b.pow(h)))
}

impl PalindromeStream {
    fn from_segments(
        base: Base,
        scope: Scope,
        restricted: bool,
        limit: Option<u128>,
        segments: Vec<Segment>,
        restriction: Restriction,
    ) -> Self {
        PalindromeStream { base, scope, restricted, limit, segments, next_segment: 0, cursor: None, restriction }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn is_restricted(&self) -> bool {
        self.restricted
    }

    /// Number of half-prefixes still to visit (an upper bound on the number
    /// of remaining items).
    pub fn prefixes_remaining(&self) -> u128 {
        let current = self.cursor.as_ref().map_or(0, |c| c.remaining);
        current + self.segments[self.next_segment..].iter().map(Segment::prefix_count).sum::<u128>()
    }

    /// Splits the not-yet-started stream into at most `parts` sub-streams
    /// over consecutive half-prefix intervals. Concatenating them in order
    /// reproduces the original stream exactly.
    pub fn split_at_prefix(&self, parts: usize) -> Vec<PalindromeStream> {
        assert!(self.cursor.is_none() && self.next_segment == 0, "split a fresh stream");
        let parts = parts.max(1) as u128;
        let total: u128 = self.segments.iter().map(Segment::prefix_count).sum();
        if total == 0 {
            return vec![self.clone()];
        }
        let chunk = total.div_ceil(parts);
        let mut out = Vec::new();
        let mut current: Vec<Segment> = Vec::new();
        let mut room = chunk;
        for seg in &self.segments {
            let mut lo = seg.lo;
            while lo < seg.hi {
                let take = room.min(seg.hi - lo);
                current.push(Segment { len: seg.len, lo, hi: lo + take });
                lo += take;
                room -= take;
                if room == 0 {
                    out.push(std::mem::take(&mut current));
                    room = chunk;
                }
            }
        }
        if !current.is_empty() {
            out.push(current);
        }
        out.into_iter()
            .map(|segs| {
                PalindromeStream::from_segments(
                    self.base,
                    self.scope,
                    self.restricted,
                    self.limit,
                    segs,
                    self.restriction.clone(),
                )
            })
            .collect()
    }
}

impl Iterator for PalindromeStream {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        let b = self.base.get();
        loop {
            if self.cursor.as_ref().map_or(true, |c| c.remaining == 0) {
                let seg = *self.segments.get(self.next_segment)?;
                self.next_segment += 1;
                self.cursor = Some(Cursor::new(self.base, seg));
                continue;
            }
            let cursor = self.cursor.as_mut().expect("cursor set above");
            let n = cursor.value;
            cursor.remaining -= 1;
            if cursor.remaining > 0 {
                cursor.advance(b);
            }
            if let Some(x) = self.limit {
                if n > x {
                    // every later value is larger
                    self.next_segment = self.segments.len();
                    self.cursor = None;
                    return None;
                }
            }
            if self.restriction.admits(n) {
                return Some(n);
            }
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (0, usize::try_from(self.prefixes_remaining()).ok())
    }
}

/// Stream over `Π_b(N)`, or `Π_b*(N)` when `restricted`.
pub fn stream_fixed_length(b: Base, n: u32, restricted: bool) -> Result<PalindromeStream, EnumError> {
    if n == 0 {
        return Err(EnumError::InvalidArgument("digit length must be >= 1".into()));
    }
    let (lo, hi) = half_bounds(b, n)?;
    Ok(PalindromeStream::from_segments(
        b,
        Scope::FixedLength(n),
        restricted,
        None,
        vec![Segment { len: n, lo, hi }],
        Restriction::new(b, restricted),
    ))
}

/// Stream over all palindromes `<= x`, restricted to `gcd(n, b³-b) = 1` when
/// `restricted`.
pub fn stream_up_to(b: Base, x: u128, restricted: bool) -> Result<PalindromeStream, EnumError> {
    if x == 0 {
        return Err(EnumError::InvalidArgument("x must be >= 1".into()));
    }
    let max_len = digit_count(x, b);
    let mut segments = Vec::with_capacity(max_len as usize);
    for len in 1..=max_len {
        let (lo, mut hi) = half_bounds(b, len)?;
        if len == max_len {
            // prefixes beyond the prefix of x only give values > x
            let tail = b.checked_pow(len - len.div_ceil(2)).expect("b^len fits");
            hi = hi.min(x / tail + 1);
        }
        segments.push(Segment { len, lo, hi });
    }
    Ok(PalindromeStream::from_segments(
        b,
        Scope::UpTo(x),
        restricted,
        Some(x),
        segments,
        Restriction::new(b, restricted),
    ))
}

/// `#Π_b(N) = (b-1)·b^(⌈N/2⌉-1)`.
pub fn count_fixed_length(b: Base, n: u32) -> Result<u128, EnumError> {
    if n == 0 {
        return Err(EnumError::InvalidArgument("digit length must be >= 1".into()));
    }
    let overflow = EnumError::Overflow { base: b.get(), len: n };
    let top = b.checked_pow(n.div_ceil(2) - 1).ok_or(overflow.clone())?;
    top.checked_mul(b.as_u128() - 1).ok_or(overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::is_palindrome;

    fn b(n: u32) -> Base {
        Base::new(n).unwrap()
    }

    #[test]
    fn fixed_length_examples() {
        let one: Vec<u128> = stream_fixed_length(b(10), 1, false).unwrap().collect();
        assert_eq!(one, (1..=9).collect::<Vec<_>>());
        assert_eq!(stream_fixed_length(b(10), 3, false).unwrap().count(), 90);
        assert_eq!(stream_fixed_length(b(10), 2, true).unwrap().count(), 0);
        assert!(stream_fixed_length(b(10), 0, false).is_err());
    }

    #[test]
    fn up_to_examples() {
        let r: Vec<u128> = stream_up_to(b(10), 100, true).unwrap().collect();
        assert_eq!(r, vec![1, 7]);
        let r: Vec<u128> = stream_up_to(b(10), 9, false).unwrap().collect();
        assert_eq!(r, (1..=9).collect::<Vec<_>>());
        let r: Vec<u128> = stream_up_to(b(2), 10, false).unwrap().collect();
        assert_eq!(r, vec![1, 3, 5, 7, 9]);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_fixed_length(b(10), 3), Ok(90));
        assert_eq!(count_fixed_length(b(10), 1), Ok(9));
        assert_eq!(count_fixed_length(b(2), 4), Ok(2));
        assert_eq!(count_fixed_length(b(2), 127), Ok(1 << 63));
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(stream_fixed_length(b(2), 128, false), Err(EnumError::Overflow { .. })));
        assert!(stream_fixed_length(b(2), 127, false).is_ok());
        assert!(matches!(stream_fixed_length(b(10), 39, false), Err(EnumError::Overflow { .. })));
    }

    #[test]
    fn widest_binary_length() {
        let mut s = stream_fixed_length(b(2), 127, false).unwrap();
        assert_eq!(s.next(), Some((1 << 126) | 1));
        assert_eq!(s.next(), Some((1 << 126) | (1 << 63) | 1));
        let last = stream_fixed_length(b(2), 21, false).unwrap().last();
        assert_eq!(last, Some((1 << 21) - 1));
    }

    #[test]
    fn matches_brute_force_filter() {
        for base in 2..=16u32 {
            for n in 1..=6u32 {
                let lo = (base as u128).pow(n - 1);
                let hi = (base as u128).pow(n);
                if hi > 3_000_000 {
                    continue;
                }
                let brute: Vec<u128> = (lo..hi).filter(|&v| is_palindrome(v, b(base))).collect();
                let got: Vec<u128> = stream_fixed_length(b(base), n, false).unwrap().collect();
                assert_eq!(got, brute, "b={base} N={n}");
                assert_eq!(got.len() as u128, count_fixed_length(b(base), n).unwrap());
                let m = b(base).cube_minus_base();
                let brute_r: Vec<u128> = brute.into_iter().filter(|&v| gcd(v, m) == 1).collect();
                let got_r: Vec<u128> = stream_fixed_length(b(base), n, true).unwrap().collect();
                assert_eq!(got_r, brute_r, "restricted b={base} N={n}");
            }
        }
    }

    #[test]
    fn up_to_matches_scan() {
        for base in [2u32, 3, 7, 10, 16] {
            for x in [1u128, 2, 10, 99, 100, 101, 1000, 12345, 65535] {
                let brute: Vec<u128> = (1..=x).filter(|&v| is_palindrome(v, b(base))).collect();
                let got: Vec<u128> = stream_up_to(b(base), x, false).unwrap().collect();
                assert_eq!(got, brute, "b={base} x={x}");
            }
        }
    }

    #[test]
    fn split_reassembles() {
        let full: Vec<u128> = stream_up_to(b(10), 10_000_000, true).unwrap().collect();
        for parts in [1, 2, 3, 7, 64, 10_000] {
            let pieces = stream_up_to(b(10), 10_000_000, true).unwrap().split_at_prefix(parts);
            assert!(pieces.len() <= parts);
            let joined: Vec<u128> = pieces.into_iter().flatten().collect();
            assert_eq!(joined, full, "parts={parts}");
        }
    }

    #[test]
    fn restricted_ratio_is_bounded_away_from_zero_and_one() {
        for n in 3..=9u32 {
            let all = count_fixed_length(b(10), n).unwrap() as f64;
            let restricted = stream_fixed_length(b(10), n, true).unwrap().count() as f64;
            let ratio = restricted / all;
            // odd lengths only: even-length decimal palindromes are multiples of 11
            if n % 2 == 1 {
                assert!(ratio > 0.1 && ratio < 0.9, "N={n} ratio={ratio}");
            } else {
                assert_eq!(restricted, 0.0);
            }
        }
    }
}
