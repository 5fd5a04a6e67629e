//! Named lambda terms: surface syntax, α-equivalence, capture-avoiding
//! substitution and normal-order reduction used as ground truth.

mod alpha;
mod fresh;
mod reduce;
mod syntax;
mod term;

pub use alpha::alpha_eq;
pub use fresh::{fresh_name, FreshSupply};
pub use reduce::{
    normalize, normalize_with, reduce_once_all, subst, whnf_oracle, whnf_oracle_with, Budget,
    FuelExhausted, DEFAULT_ORACLE_FUEL, DEFAULT_WORK_LIMIT,
};
pub use syntax::{is_identifier, parse_surface, print_surface, ParseError};
pub use term::{Name, NamedTerm};
