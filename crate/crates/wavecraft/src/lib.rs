//! Exact travelling-wave solutions of polynomial nonlinear evolution
//! equations through logarithmic-derivative and exp-function expansions,
//! with residual verification of every reported branch.

pub mod case_studies;
pub mod cli;
pub mod closed_form;
pub mod error;
pub mod expfn;
pub mod expr;
pub mod ffx;
pub mod parser;
pub mod poly;
pub mod problem;
pub mod radical;
pub mod reduce;
pub mod render;
pub mod report;
pub mod solve;
pub mod verify;

pub use cli::run_cli;
pub use error::{Error, Result};
pub use expr::Expr;
pub use radical::Radical;
