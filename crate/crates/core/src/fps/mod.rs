//! Formal series with fractional exponents: univariate truncated series, and the
//! three-variable embedding calculus with its commuting-diagram checks.

pub mod embed;
pub mod puiseux;

pub use embed::{
    check_diagram, check_paths, compare, embed_pair, expand_along, parse_exponents, taylor_shift, Conventions, Coord,
    Diagram, Discrepancy, Expansion, PairFrame, PairSeries, PathComparison,
};
pub use puiseux::{binom_expand, binomial, fmt_exponent, Coeff, CycSeries, PuiseuxSeries, QSeries};
