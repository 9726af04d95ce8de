//! Expression evaluation, order-type ingestion, the Koch-variant search and
//! the `chiro` command line on top of `chiro-core`.

pub mod cli;
pub mod error;
pub mod eval;
pub mod expr;
pub mod ordertypes;
pub mod search;

pub use cli::run_cli;
pub use error::{Result, WorkbenchError};
pub use eval::{eval_expr, EvalContext, EvalMode, Value};
pub use expr::{parse_expr, Atom, Expr, ParseError};
