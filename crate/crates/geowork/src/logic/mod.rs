//! Abstract syntax for single-sorted geometric logic.
//!
//! The formula language has finite conjunction and disjunction, equality,
//! relation atoms, existential quantification, and indexed disjunction
//! families ([`FormulaFamily`]) that make infinitary disjunctions finitely
//! representable: members are materialized, and a size-dependent activation
//! rule (`size_bound`) selects which ones participate when evaluating in a
//! structure of a given cardinality.  Negation is not a connective here; it
//! is only ever available through Morleyized relation symbols.

mod formula;
mod sequent;
mod signature;
mod term;
mod theory;
mod witness;

pub use formula::{
    alpha_eq, fresh_var, regular_disjuncts, FamilyDomain, FamilyMember, Formula, FormulaFamily,
    RegularSplitError, WfError,
};
pub use sequent::Sequent;
pub use signature::{Signature, SignatureError, SymbolDecl, SymbolKind};
pub use term::Term;
pub use theory::{Axiom, Theory, ValidationEntry, ValidationReport};
pub use witness::{PsiEntry, WitnessScheme};
