//! Expression front end and order-3 Taylor-jet arithmetic.

mod expr;
mod jet;
mod parser;

pub use expr::{Expr, Func};
pub use jet::{index_of, Jet3, JET_LEN, MULTI_INDICES};
pub use parser::parse;
