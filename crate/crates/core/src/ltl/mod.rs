//! The LTL target logic: linear structures built from runs, the translation
//! of license formulas, the implicit restrictions, and satisfiability.

mod formula;
mod sat;
mod structure;
mod tableau;
mod translate;

pub use formula::{Ltl, Prop};
pub use sat::{check_run_validity_ltl, lic_sat, lic_valid, SatError, SatResult, Validity};
pub use structure::{build_structure, ltl_eval, ltl_eval_all, LinearStructure};
pub use tableau::{ltl_sat, SatOutcome, DEFAULT_BUDGET};
pub use translate::{implicit_restrictions, translate, Universe};
