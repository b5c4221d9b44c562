use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Cyclotomic, UnityExponent};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {what} from {input:?}: {reason}")]
pub struct ParseError {
    pub what: &'static str,
    pub input: String,
    pub reason: String,
}

fn err(what: &'static str, input: &str, reason: impl Into<String>) -> ParseError {
    ParseError { what, input: input.to_string(), reason: reason.into() }
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err("rational", s, "bad numerator"))?;
    let d: BigInt = d.parse().map_err(|_| err("rational", s, "bad denominator"))?;
    if d.is_zero() {
        return Err(err("rational", s, "zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for Cyclotomic {
    type Err = ParseError;

    /// Accepts sums such as `2 - 1/3*e(1/4) + e(-1/8)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("cyclotomic", s, "empty input"));
        }
        // Split at top-level signs (outside parentheses, not after '/' or '*').
        let bytes = compact.as_bytes();
        let mut pieces = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > start => {
                    let prev = bytes[i - 1];
                    if prev != b'/' && prev != b'*' {
                        pieces.push(&compact[start..i]);
                        start = i;
                    }
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(err("cyclotomic", s, "unbalanced parentheses"));
        }
        pieces.push(&compact[start..]);
        let mut items = Vec::new();
        for p in pieces {
            let (neg, body) = match p.as_bytes()[0] {
                b'-' => (true, &p[1..]),
                b'+' => (false, &p[1..]),
                _ => (false, p),
            };
            if body.is_empty() {
                return Err(err("cyclotomic", s, "dangling sign"));
            }
            let (coef, root) = if let Some(pos) = body.find("e(") {
                let c = if pos == 0 {
                    BigRational::one()
                } else {
                    let c = body[..pos]
                        .strip_suffix('*')
                        .ok_or_else(|| err("cyclotomic", s, "expected '*' before e("))?;
                    parse_rational(c)?
                };
                let inner = body[pos + 2..]
                    .strip_suffix(')')
                    .ok_or_else(|| err("cyclotomic", s, "unterminated e("))?;
                (c, UnityExponent::from_big(&parse_rational(inner)?))
            } else {
                (parse_rational(body)?, UnityExponent::ZERO)
            };
            items.push((root, if neg { -coef } else { coef }));
        }
        Ok(Cyclotomic::from_terms(items))
    }
}
