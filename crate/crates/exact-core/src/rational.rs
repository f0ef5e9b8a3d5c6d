use crate::ExactError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive, Zero};

/// Arbitrary-precision rational, always stored in lowest terms with positive denominator.
pub type Rational = BigRational;

/// `n/d` as a [`Rational`]. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let t = s.trim();
    let bad = || ExactError::BadRational(s.to_string());
    match t.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().map_err(|_| bad())?;
            let d: BigInt = b.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            if let Ok(n) = t.parse::<BigInt>() {
                return Ok(Rational::from_integer(n));
            }
            // decimal literal such as 0.45 is read exactly
            let (ip, fp) = t.split_once('.').ok_or_else(bad)?;
            let neg = ip.starts_with('-');
            let digits = format!("{}{}", ip.trim_start_matches('-'), fp);
            let n: BigInt = digits.parse().map_err(|_| bad())?;
            let d = num_traits::pow(BigInt::from(10), fp.len());
            let r = Rational::new(n, d);
            Ok(if neg { -r } else { r })
        }
    }
}

/// Canonical string `n` or `n/d`.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest double.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact binary value of a finite double.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_f64(x)
}
