//! Small helpers around `num` types: construction, parsing, and the
//! 12-significant-digit decimal rendering used in reports.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// 3^n as a big integer.
pub fn pow3(n: u32) -> BigUint {
    BigUint::from(3u32).pow(n)
}

/// 2^-j as an exact rational.
pub fn pow2_neg(j: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2u32).pow(j))
}

/// Convert a possibly huge rational to f64 by shifting numerator and
/// denominator into range first. `Ratio::to_f64` overflows to NaN on
/// inputs whose parts exceed f64 range.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer();
    let den = r.denom();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let excess = (nb.max(db) - 900).max(0) as u64;
    let n = (num >> excess).to_f64().unwrap_or(f64::NAN);
    let d = (den >> excess).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Render an f64 with 12 significant digits, fixed-point when the exponent
/// is moderate and scientific otherwise.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

pub fn ratio_sig12(r: &BigRational) -> String {
    sig12(ratio_to_f64(r))
}

/// Parse "p/q", an integer, or a finite decimal into an exact rational.
/// Decimals are taken verbatim (e.g. "0.25" -> 1/4), which realizes the
/// snap-to-rational rule for CLI ingestion.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Format {
        what: format!("cannot parse rational from {s:?}"),
    };
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let mag = int.abs() * &scale + frac_num;
        let signed = if neg { -mag } else { mag };
        return Ok(BigRational::new(signed, scale));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

/// Display as "p/q" (or "p" when integral); this is the wire format for
/// rationals in JSON reports.
pub fn ratio_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_ratio("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_ratio("-2").unwrap(), rat_int(-2));
        assert_eq!(parse_ratio("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_ratio("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_ratio("x").is_err());
        assert!(parse_ratio("1/0").is_err());
    }

    #[test]
    fn sig12_forms() {
        assert_eq!(sig12(0.25), "0.250000000000");
        assert_eq!(sig12(173287.0).len(), 13);
        assert_eq!(ratio_string(&rat(3, 4)), "3/4");
        assert_eq!(ratio_string(&rat_int(5)), "5");
    }

    #[test]
    fn huge_ratio_to_f64() {
        let huge = BigRational::new(BigInt::from(3u32).pow(5000), BigInt::from(2u32).pow(7000));
        let v = ratio_to_f64(&huge);
        assert!(v.is_finite() || v == 0.0 || v.is_infinite());
        let ratio = BigRational::new(BigInt::from(9u32), BigInt::from(12u32));
        assert_eq!(ratio_to_f64(&ratio), 0.75);
    }
}
