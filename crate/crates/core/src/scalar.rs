//! Exact rationals, binomials and the configurable size guards.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; `BigRational` keeps itself reduced with a
/// positive denominator.
pub type ExactScalar = BigRational;

/// Environment variable that overrides the size guards.
pub const GUARD_ENV: &str = "RESIST_CERT_GUARD";

/// Size ceilings for dense materialization and exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of entries in a dense matrix built from a sparse operator.
    pub max_dense_entries: usize,
    /// Maximum `q^N` for code search.
    pub max_search_space: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dense_entries: 1_000_000,
            max_search_space: 1_000_000,
        }
    }
}

impl Limits {
    /// Both ceilings set to the same value.
    pub fn uniform(ceiling: usize) -> Self {
        Limits {
            max_dense_entries: ceiling,
            max_search_space: ceiling,
        }
    }

    /// Defaults, raised to `RESIST_CERT_GUARD` when that variable holds a
    /// larger integer.
    pub fn from_env() -> Self {
        let base = Limits::default();
        match std::env::var(GUARD_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            Some(v) => Limits {
                max_dense_entries: base.max_dense_entries.max(v),
                max_search_space: base.max_search_space.max(v),
            },
            None => base,
        }
    }
}

pub fn rational(num: i64, den: i64) -> ExactScalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q`. Decimal and exponent forms are rejected.
pub fn parse_rational(text: &str) -> Result<ExactScalar> {
    let bad = || Error::MalformedRational(text.to_string());
    let t = text.trim();
    let parse_int = |s: &str| -> Result<BigInt> {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).map_err(|_| bad())
    };
    match t.split_once('/') {
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(parse_int(t)?)),
    }
}

/// Always `num/den`, so integers print as `n/1`.
pub fn format_rational(x: &ExactScalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn sign(x: &ExactScalar) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

const PASCAL_ROWS: usize = 65;

static PASCAL: LazyLock<Vec<Vec<BigUint>>> = LazyLock::new(|| {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(PASCAL_ROWS);
    for n in 0..PASCAL_ROWS {
        let mut row = vec![BigUint::one(); n + 1];
        for k in 1..n {
            row[k] = &rows[n - 1][k - 1] + &rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
});

/// `C(n, k)`, zero when `k > n`. Rows up to 64 are served from a table.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    if n < PASCAL_ROWS {
        return PASCAL[n][k].clone();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `C(n, k)` as a rational.
pub fn binomial_q(n: usize, k: usize) -> ExactScalar {
    BigRational::from_integer(BigInt::from(binomial(n, k)))
}

/// Serde wrapper that writes a rational as a `"num/den"` string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Q(pub ExactScalar);

impl From<ExactScalar> for Q {
    fn from(x: ExactScalar) -> Self {
        Q(x)
    }
}

impl From<&ExactScalar> for Q {
    fn from(x: &ExactScalar) -> Self {
        Q(x.clone())
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct QVisitor;
        impl Visitor<'_> for QVisitor {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"num/den\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Q, E> {
                parse_rational(v).map(Q).map_err(E::custom)
            }
        }
        d.deserialize_str(QVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), integer(3));
        assert_eq!(parse_rational("-6/4").unwrap(), rational(-3, 2));
        assert_eq!(parse_rational(" 33/112 ").unwrap(), rational(33, 112));
        assert_eq!(parse_rational("+2").unwrap(), integer(2));
    }

    #[test]
    fn rejects_floats_and_garbage() {
        for s in ["0.5", "1e3", "", "/3", "3/", "1/0", "a/b", "--1", "1/-"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn reduced_form_is_kept() {
        let x = parse_rational("10/-4").unwrap();
        assert_eq!(format_rational(&x), "-5/2");
        assert_eq!(format_rational(&integer(7)), "7/1");
    }

    #[test]
    fn binomials_match_pascal_and_formula() {
        assert_eq!(binomial(7, 3), BigUint::from(35u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(64, 32), BigUint::from(1_832_624_140_942_590_534u64));
        // above the table: C(70, 3) = 54740
        assert_eq!(binomial(70, 3), BigUint::from(54_740u32));
        assert_eq!(binomial(70, 67), BigUint::from(54_740u32));
    }

    #[test]
    fn q_serde_round_trip() {
        let q = Q(rational(-3, 7));
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "\"-3/7\"");
        let back: Q = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }
}
