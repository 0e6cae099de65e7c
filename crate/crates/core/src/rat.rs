//! Exact rational scalars.
//!
//! Every coefficient in this crate is a `BigRational`: an arbitrary-precision
//! fraction kept in lowest terms with positive denominator. The text form used
//! across the CLI and JSON schemas is `"a/b"`, or just `"a"` when b = 1, which
//! is exactly what `num_rational`'s `Display` produces.

use num_bigint::BigInt;
use std::str::FromStr;

pub type Rat = num_rational::BigRational;

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Fraction n/d. Panics on d = 0.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error: {0}")]
pub struct ParseError(pub String);

/// Parses `"a/b"` or `"a"`. Rejects zero denominators instead of panicking.
pub fn parse_rat(s: &str) -> Result<Rat, ParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseError("empty rational".into()));
    }
    match s.split_once('/') {
        None => {
            let n = BigInt::from_str(s).map_err(|e| ParseError(format!("bad integer {s:?}: {e}")))?;
            Ok(Rat::from_integer(n))
        }
        Some((ns, ds)) => {
            let n = BigInt::from_str(ns.trim())
                .map_err(|e| ParseError(format!("bad numerator {ns:?}: {e}")))?;
            let d = BigInt::from_str(ds.trim())
                .map_err(|e| ParseError(format!("bad denominator {ds:?}: {e}")))?;
            if d == BigInt::from(0) {
                return Err(ParseError(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(n, d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "1", "-1", "3/2", "-7/3", "10/4"] {
            let r = parse_rat(s).unwrap();
            let back = parse_rat(&r.to_string()).unwrap();
            assert_eq!(r, back);
        }
        // canonical form: reduced, positive denominator
        assert_eq!(parse_rat("10/4").unwrap(), rat(5, 2));
        assert_eq!(parse_rat("1/-2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("-0").unwrap(), Rat::zero());
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "x", "1/0", "1/", "/2", "1.5"] {
            assert!(parse_rat(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn display_matches_wire_format() {
        assert_eq!(rat(3, 2).to_string(), "3/2");
        assert_eq!(rat_int(5).to_string(), "5");
        assert_eq!(rat(-1, 2).to_string(), "-1/2");
        assert_eq!(Rat::one().to_string(), "1");
    }
}
