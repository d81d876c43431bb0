use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// An exact nonnegative rational cost. Always kept in lowest terms with a
/// positive denominator by `num-rational`.
pub type Cost = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"p"` or `"p/q"` (optionally signed numerator). Decimal points are
/// rejected: every machine-readable cost is an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, RationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(RationalError::Empty);
    }
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), Some(q.trim())),
        None => (text, None),
    };
    let is_int = |s: &str| {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num) || den.is_some_and(|d| !d.bytes().all(|b| b.is_ascii_digit()) || d.is_empty()) {
        return Err(RationalError::Malformed(text.to_string()));
    }
    let p: BigInt = num
        .parse()
        .map_err(|_| RationalError::Malformed(text.to_string()))?;
    let q: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| RationalError::Malformed(text.to_string()))?,
        None => BigInt::from(1),
    };
    if q.is_zero() {
        return Err(RationalError::ZeroDenominator(text.to_string()));
    }
    Ok(BigRational::new(p, q))
}

/// Canonical rendering: lowest-terms `"p/q"`, or `"p"` for integers.
pub fn format_rational(value: &BigRational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn int(value: i64) -> Cost {
    BigRational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Cost {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn is_negative(value: &BigRational) -> bool {
    value.is_negative()
}

/// Extended nonnegative rational: the approximation factor of an allocation.
///
/// `Finite` sorts below `Infinite`, so `max`/`min` behave as on the extended
/// half-line.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Alpha {
    Finite(Cost),
    Infinite,
}

impl Alpha {
    pub fn zero() -> Self {
        Alpha::Finite(Cost::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Alpha::Finite(v) if v.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Alpha::Finite(_))
    }

    /// `self <= bound`, exactly.
    pub fn within(&self, bound: &Cost) -> bool {
        match self {
            Alpha::Finite(v) => v <= bound,
            Alpha::Infinite => false,
        }
    }

    pub fn parse(text: &str) -> Result<Self, RationalError> {
        match text.trim() {
            "inf" | "infinity" | "Infinity" => Ok(Alpha::Infinite),
            other => parse_rational(other).map(Alpha::Finite),
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Finite(v) => f.write_str(&format_rational(v)),
            Alpha::Infinite => f.write_str("inf"),
        }
    }
}

impl From<Cost> for Alpha {
    fn from(value: Cost) -> Self {
        Alpha::Finite(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational(" 6/8 ").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-1").unwrap(), int(-1));
        assert_eq!(parse_rational("0/5").unwrap(), int(0));
    }

    #[test]
    fn rejects_bad_literals() {
        assert_eq!(
            parse_rational("3/0"),
            Err(RationalError::ZeroDenominator("3/0".into()))
        );
        assert!(matches!(
            parse_rational("0.5"),
            Err(RationalError::Malformed(_))
        ));
        assert!(matches!(
            parse_rational("1/-2"),
            Err(RationalError::Malformed(_))
        ));
        assert!(matches!(
            parse_rational("a"),
            Err(RationalError::Malformed(_))
        ));
        assert_eq!(parse_rational(""), Err(RationalError::Empty));
    }

    #[test]
    fn canonical_rendering() {
        assert_eq!(format_rational(&ratio(10, 4)), "5/2");
        assert_eq!(format_rational(&ratio(8, 4)), "2");
        assert_eq!(format_rational(&int(0)), "0");
    }

    #[test]
    fn alpha_ordering() {
        assert!(Alpha::Finite(int(1_000_000)) < Alpha::Infinite);
        assert!(Alpha::Finite(ratio(1, 3)) < Alpha::Finite(ratio(1, 2)));
        assert!(Alpha::Finite(ratio(3, 2)).within(&int(5)));
        assert!(!Alpha::Infinite.within(&int(5)));
        assert_eq!(Alpha::parse("inf").unwrap(), Alpha::Infinite);
        assert_eq!(Alpha::Infinite.to_string(), "inf");
    }
}
