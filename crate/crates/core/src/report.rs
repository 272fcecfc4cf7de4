//! Serialization helpers that keep reports diffable: reals carry 12
//! significant digits, counts stay exact.

use serde::Serializer;

/// Rounds to 12 significant decimal digits. Non-finite values pass through.
pub fn round_sig12(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

/// `serialize_with` adapter for `f64` fields.
pub fn sig12<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig12(*v))
}

/// `serialize_with` adapter for `Vec<f64>` fields.
pub fn sig12_vec<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&round_sig12(*x))?;
    }
    seq.end()
}

/// `serialize_with` adapter for complex values, written as `[re, im]`.
pub fn sig12_complex<S: Serializer>(v: &num_complex::Complex64, s: S) -> Result<S::Ok, S::Error> {
    sig12_vec(&[v.re, v.im], s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig12(0.957_804_256_512_345_6), 0.957_804_256_512);
        assert_eq!(round_sig12(1.0), 1.0);
        assert_eq!(round_sig12(-123_456_789.123_456_789), -123_456_789.123);
        assert_eq!(round_sig12(0.0), 0.0);
        assert!(round_sig12(f64::NAN).is_nan());
        assert_eq!(round_sig12(6.02214076e23), 6.02214076e23);
    }

    #[test]
    fn serializes_rounded() {
        #[derive(serde::Serialize)]
        struct Row {
            #[serde(serialize_with = "sig12")]
            r: f64,
            n: u128,
        }
        let json = serde_json::to_string(&Row { r: std::f64::consts::PI, n: u128::MAX }).unwrap();
        assert_eq!(json, r#"{"r":3.14159265359,"n":340282366920938463463374607431768211455}"#);
    }
}
