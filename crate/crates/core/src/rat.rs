//! Exact rational scalars and their canonical decimal-free text form.
//!
//! Rationals cross every external interface as `"p/q"` strings with `q > 0`
//! and `gcd(p, q) = 1`; a bare `"p"` abbreviates `p/1`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// `n/d` as an exact rational.  Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// An integer as a rational.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Canonical text form: `"p"` when the denominator is 1, else `"p/q"`.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"`.  Decimal literals are rejected: the formats are
/// exact by contract.
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::parse("empty rational literal"));
    }
    if t.contains(['.', 'e', 'E']) {
        return Err(Error::parse(format!(
            "rational literal `{t}` must be an exact p/q string"
        )));
    }
    let mut parts = t.splitn(2, '/');
    let p = parts
        .next()
        .unwrap()
        .parse::<BigInt>()
        .map_err(|_| Error::parse(format!("bad numerator in `{t}`")))?;
    let q = match parts.next() {
        None => BigInt::one(),
        Some(qs) => qs
            .parse::<BigInt>()
            .map_err(|_| Error::parse(format!("bad denominator in `{t}`")))?,
    };
    if q.is_zero() {
        return Err(Error::parse(format!("zero denominator in `{t}`")));
    }
    Ok(Rat::new(p, q))
}

/// Floor of a rational as a big integer.
pub fn floor_big(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// True when `r` is an integer multiple of `1/den`.
pub fn has_denominator_dividing(r: &Rat, den: &BigInt) -> bool {
    debug_assert!(den.is_positive());
    (r * Rat::from_integer(den.clone())).is_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_reduced_forms() {
        for s in ["0", "7", "-3", "1/5", "-22/7"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
    }

    #[test]
    fn normalizes_sign_and_gcd() {
        assert_eq!(rat_to_string(&rat_from_str("4/6").unwrap()), "2/3");
        assert_eq!(rat_to_string(&rat_from_str("3/-6").unwrap()), "-1/2");
    }

    #[test]
    fn rejects_decimals_and_zero_denominators() {
        assert!(rat_from_str("0.5").is_err());
        assert!(rat_from_str("1e3").is_err());
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("").is_err());
    }

    #[test]
    fn denominator_divisibility() {
        let d = BigInt::from(10);
        assert!(has_denominator_dividing(&rat(3, 10), &d));
        assert!(has_denominator_dividing(&rat(1, 5), &d));
        assert!(!has_denominator_dividing(&rat(1, 3), &d));
    }
}
