//! Command-line front end for `lbconn`: argument parsing, command dispatch,
//! JSON/human reports and the worked-example regression suite.

pub mod args;
pub mod report;
pub mod run;
pub mod worked;

pub use args::{Cli, Command};
pub use report::{Report, Status};
pub use run::run;
