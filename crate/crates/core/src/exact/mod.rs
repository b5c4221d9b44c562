//! Exact arithmetic: roots of unity as rationals mod 1, and cyclotomic numbers.

pub mod arith;
mod cyclotomic;
mod parse;
mod unity;

pub use cyclotomic::{conductor_of_root, Cyclotomic};
pub use parse::{parse_rational, ParseError};
pub use unity::UnityExponent;

use num_rational::BigRational;

/// `e(r)` as a cyclotomic number.
pub fn cyc_from_root(r: &BigRational) -> Cyclotomic {
    Cyclotomic::root(UnityExponent::from_big(r))
}

/// `Some(r)` with `a = e(r)` when `a` is a root of unity.
pub fn cyc_is_root_of_unity(a: &Cyclotomic) -> Option<UnityExponent> {
    a.as_root_of_unity()
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
