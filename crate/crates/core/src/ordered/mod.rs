//! The ordered representation: anonymous bound variables, binders annotated
//! with insertion gaps, applications annotated with the function part's count
//! of unbound occurrences.

mod print;
mod sexpr;
mod term;
mod translate;

pub use print::{print_ordered, print_value, value_names};
pub use sexpr::{read_ordered, write_ordered, SexprError};
pub use term::{KVec, OrderedTerm};
pub use translate::{parse_closed, to_ordered, ParseResult};
