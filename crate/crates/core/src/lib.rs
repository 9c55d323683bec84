//! Regular licenses over client actions, the permissions and obligations a run
//! implies, a temporal logic for reasoning about them, and its reduction to LTL.

pub mod action;
pub mod automata;
pub mod digitalrights;
pub mod lasso;
pub mod license;
pub mod logic;
pub mod ltl;
pub mod permissions;
pub mod run;
pub mod syntax;

pub use action::{format_trace, Action, Amount, Name, Trace};
pub use automata::{build_nfa, lasso_of, permitted_from, step_subset, Nfa, SubsetState};
pub use digitalrights::{
    compile_dr, dr_traces, parse_dr, DrError, DrLicense, Repetition, Schedule,
};
pub use license::License;
pub use logic::{ActionExpr, Formula};
pub use ltl::{check_run_validity_ltl, lic_sat, lic_valid, Ltl, SatResult, Validity};
pub use permissions::{compute_permissions, PermissionInterpretation};
pub use run::{parse_run, Run, RunError};
pub use syntax::{parse_action, parse_formula, parse_license, ParseError};
