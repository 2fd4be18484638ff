//! Loop acceleration for integer transition systems.
//!
//! The crate accelerates simple loops with a modular calculus of
//! conditional acceleration techniques, proves non-termination with its
//! restricted variant and derives concrete worst-case lower bounds. SMT
//! queries go to an external SMT-LIB2 solver process.

pub mod accel;
pub mod closedform;
pub mod error;
pub mod its;
pub mod pipeline;
pub mod smt;
pub mod terms;
pub mod workload;

pub use accel::{Acceleration, Certificate, Engine, Failure, Strategy, Technique};
pub use closedform::{closed_form, cost_sum, faulhaber, ClosedForm, Unsupported};
pub use error::{Error, InterpError, ParseError, Result, SmtError, TermError};
pub use its::{parse, Configuration, Cost, Its, Location, Transition};
pub use pipeline::{run_strategy, AnalysisReport, Mode, Options, Verdict};
pub use smt::{Phase, QueryStats, Solver, SolverConfig};
pub use terms::{Atom, Conjunction, Poly, Rel, Update, Var};
