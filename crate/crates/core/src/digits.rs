//! Base-`b` digit expansions, digital reversal and the palindrome predicate.
//!
//! Digits are stored little-endian: index `i` holds the coefficient of `b^i`.
//! All values are `u128`; anything that would not fit is reported as
//! [`DigitsError::Overflow`] instead of wrapping.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigitsError {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),
    #[error("digit {digit} at position {position} is out of range for base {base}")]
    DigitOutOfRange { digit: u32, position: usize, base: u32 },
    #[error("{n} is divisible by the base {base}; its digital reverse is undefined")]
    DivisibleByBase { n: u128, base: u32 },
    #[error("value does not fit in 128 bits")]
    Overflow,
}

/// A numeral base `b >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Base(u32);

impl Base {
    pub const BINARY: Base = Base(2);
    pub const DECIMAL: Base = Base(10);

    pub fn new(b: u32) -> Result<Self, DigitsError> {
        if b < 2 {
            return Err(DigitsError::InvalidBase(b as u64));
        }
        Ok(Base(b))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_u128(self) -> u128 {
        self.0 as u128
    }

    /// `b^3 - b`, the modulus of the coprimality restriction.
    pub fn cube_minus_base(self) -> u128 {
        let b = self.as_u128();
        b * b * b - b
    }

    /// `b^e`, or `None` on overflow.
    pub fn checked_pow(self, e: u32) -> Option<u128> {
        self.as_u128().checked_pow(e)
    }
}

impl TryFrom<u32> for Base {
    type Error = DigitsError;

    fn try_from(b: u32) -> Result<Self, Self::Error> {
        Base::new(b)
    }
}

impl From<Base> for u32 {
    fn from(b: Base) -> u32 {
        b.0
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A base-`b` expansion, least significant digit first.
///
/// The most significant stored digit is nonzero unless the value is zero, in
/// which case the expansion is the single digit `[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVec {
    base: Base,
    digits: Vec<u32>,
}

impl DigitVec {
    /// Builds an expansion from little-endian digits, validating every digit
    /// and trimming leading (most significant) zeros.
    pub fn from_le(base: Base, mut digits: Vec<u32>) -> Result<Self, DigitsError> {
        if let Some((position, &digit)) = digits.iter().enumerate().find(|(_, &d)| d >= base.get()) {
            return Err(DigitsError::DigitOutOfRange { digit, position, base: base.get() });
        }
        while digits.len() > 1 && digits.last() == Some(&0) {
            digits.pop();
        }
        if digits.is_empty() {
            digits.push(0);
        }
        Ok(DigitVec { base, digits })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    /// Little-endian digits.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_zero(&self) -> bool {
        self.digits == [0]
    }

    /// Renders the expansion most significant digit first using `0-9a-zA-Z+/`
    /// for bases up to 64, and dot-separated decimal digits beyond that.
    pub fn render(&self) -> String {
        const ALPHABET: &[u8; 64] = b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ+/";
        if self.base.get() <= 64 {
            self.digits.iter().rev().map(|&d| ALPHABET[d as usize] as char).collect()
        } else {
            let parts: Vec<String> = self.digits.iter().rev().map(|d| d.to_string()).collect();
            parts.join(".")
        }
    }
}

/// Expansion of `n` in base `b`.
pub fn to_digits(n: u128, b: Base) -> DigitVec {
    let base = b.as_u128();
    if n == 0 {
        return DigitVec { base: b, digits: vec![0] };
    }
    let mut digits = Vec::with_capacity(digit_count(n, b) as usize);
    let mut rest = n;
    while rest > 0 {
        digits.push((rest % base) as u32);
        rest /= base;
    }
    DigitVec { base: b, digits }
}

/// `sum n_i b^i`, failing if a digit is out of range or the value overflows.
pub fn from_digits(d: &DigitVec) -> Result<u128, DigitsError> {
    from_le_digits(d.base, &d.digits)
}

/// Same as [`from_digits`] on a raw little-endian slice.
pub fn from_le_digits(b: Base, digits: &[u32]) -> Result<u128, DigitsError> {
    let base = b.as_u128();
    let mut value: u128 = 0;
    for (position, &digit) in digits.iter().enumerate().rev() {
        if digit >= b.get() {
            return Err(DigitsError::DigitOutOfRange { digit, position, base: b.get() });
        }
        value = value.checked_mul(base).and_then(|v| v.checked_add(digit as u128)).ok_or(DigitsError::Overflow)?;
    }
    Ok(value)
}

/// Number of base-`b` digits of `n` (`1` for `n = 0`).
pub fn digit_count(n: u128, b: Base) -> u32 {
    let base = b.as_u128();
    let mut count = 1;
    let mut rest = n / base;
    while rest > 0 {
        count += 1;
        rest /= base;
    }
    count
}

/// The digital reverse of `n`. Requires `b ∤ n`.
pub fn digital_reverse(n: u128, b: Base) -> Result<u128, DigitsError> {
    let base = b.as_u128();
    if n % base == 0 {
        return Err(DigitsError::DivisibleByBase { n, base: b.get() });
    }
    let mut rest = n;
    let mut reversed: u128 = 0;
    while rest > 0 {
        reversed = reversed.checked_mul(base).and_then(|v| v.checked_add(rest % base)).ok_or(DigitsError::Overflow)?;
        rest /= base;
    }
    Ok(reversed)
}

/// `true` iff `b ∤ n` and `n` equals its digital reverse. Zero is never a
/// palindrome.
pub fn is_palindrome(n: u128, b: Base) -> bool {
    let base = b.as_u128();
    if n % base == 0 {
        return false;
    }
    // A palindrome never overflows when reversed, so compare digit by digit
    // from both ends instead of materialising the reverse.
    let len = digit_count(n, b);
    let mut high = b.checked_pow(len - 1).expect("b^(len-1) <= n");
    let mut rest = n;
    for _ in 0..len / 2 {
        let top = rest / high;
        let bottom = rest % base;
        if top != bottom {
            return false;
        }
        rest = (rest - top * high) / base;
        high /= base * base;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u32) -> Base {
        Base::new(n).unwrap()
    }

    /// Independent oracle: repeated division with remainder into a Vec.
    fn division_oracle(mut n: u128, base: u128) -> Vec<u32> {
        let mut out = vec![];
        loop {
            out.push((n % base) as u32);
            n /= base;
            if n == 0 {
                return out;
            }
        }
    }

    #[test]
    fn to_digits_examples() {
        assert_eq!(to_digits(121, b(10)).digits(), &[1, 2, 1]);
        assert_eq!(to_digits(0, b(2)).digits(), &[0]);
        assert_eq!(to_digits(343, b(10)).digits(), division_oracle(343, 10).as_slice());
        assert_eq!(to_digits(343, b(10)).digits(), &[3, 4, 3]);
    }

    #[test]
    fn from_digits_examples() {
        let d = |ds: Vec<u32>, base| DigitVec::from_le(b(base), ds).unwrap();
        assert_eq!(from_digits(&d(vec![1, 2, 1], 10)), Ok(121));
        assert_eq!(from_digits(&d(vec![1], 2)), Ok(1));
        assert_eq!(from_digits(&d(vec![9, 9], 10)), Ok(99));
    }

    #[test]
    fn out_of_range_digit_is_rejected() {
        assert_eq!(
            DigitVec::from_le(b(10), vec![1, 10]),
            Err(DigitsError::DigitOutOfRange { digit: 10, position: 1, base: 10 })
        );
        assert!(matches!(from_le_digits(b(2), &[1, 0, 2]), Err(DigitsError::DigitOutOfRange { position: 2, .. })));
    }

    #[test]
    fn from_digits_overflow() {
        let ones = vec![1u32; 130];
        assert_eq!(from_le_digits(b(2), &ones), Err(DigitsError::Overflow));
        let max = vec![1u32; 128];
        assert_eq!(from_le_digits(b(2), &max), Ok(u128::MAX));
    }

    #[test]
    fn digit_count_matches_log() {
        assert_eq!(digit_count(0, b(10)), 1);
        assert_eq!(digit_count(9, b(10)), 1);
        assert_eq!(digit_count(10, b(10)), 2);
        assert_eq!(digit_count(u128::MAX, b(2)), 128);
        assert_eq!(digit_count(255, b(16)), 2);
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(digital_reverse(123, b(10)), Ok(321));
        assert_eq!(digital_reverse(7, b(10)), Ok(7));
        assert_eq!(digital_reverse(100, b(10)), Err(DigitsError::DivisibleByBase { n: 100, base: 10 }));
        assert!(digital_reverse(0, b(3)).is_err());
    }

    #[test]
    fn reverse_overflow_is_reported() {
        // 2^127 + 3 is 10...011 in binary; its reverse 110...01 still fits.
        let n = (1u128 << 127) | 3;
        assert_eq!(digital_reverse(n, b(2)), Ok(1 + (1 << 126) + (1 << 127)));
        let n = u128::MAX - 2; // ...11101, reverse 10111...1 fits
        assert!(digital_reverse(n, b(2)).is_ok());
        // a 39-digit value ending in 9 reverses to something above u128::MAX
        let n = 340_282_366_920_938_463_463_374_607_431_768_211_449u128;
        assert_eq!(digital_reverse(n, b(10)), Err(DigitsError::Overflow));
    }

    #[test]
    fn palindrome_examples() {
        assert!(is_palindrome(12321, b(10)));
        assert!(!is_palindrome(12, b(10)));
        // 5 is 12 in base 3
        assert_eq!(to_digits(5, b(3)).digits(), &[2, 1]);
        assert!(!is_palindrome(5, b(3)));
        assert!(!is_palindrome(0, b(10)));
        for base in 2..=64 {
            assert!(is_palindrome(1, b(base)));
        }
        assert!(is_palindrome(u128::MAX, b(2)));
    }

    #[test]
    fn palindrome_agrees_with_digit_reversal() {
        for base in 2..=16u32 {
            for n in 0..5000u128 {
                let ds = division_oracle(n, base as u128);
                let mut rev = ds.clone();
                rev.reverse();
                let expected = n % base as u128 != 0 && ds == rev;
                assert_eq!(is_palindrome(n, b(base)), expected, "n={n} b={base}");
            }
        }
    }

    #[test]
    fn render() {
        assert_eq!(to_digits(255, b(16)).render(), "ff");
        assert_eq!(to_digits(5, b(2)).render(), "101");
        assert_eq!(to_digits(100 * 100 + 5, b(100)).render(), "1.0.5");
    }

    #[test]
    fn base_rejects_small() {
        assert_eq!(Base::new(1), Err(DigitsError::InvalidBase(1)));
        assert_eq!(Base::new(0), Err(DigitsError::InvalidBase(0)));
        assert_eq!(b(10).cube_minus_base(), 990);
        assert_eq!(b(2).cube_minus_base(), 6);
    }
}
