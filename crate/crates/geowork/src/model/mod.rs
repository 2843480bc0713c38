//! Finite structures, formula evaluation, bounded model enumeration, and
//! backtracking search for structure maps.

mod canonical;
mod enumerate;
mod eval;
mod maps;
mod structure;
mod tagged;

pub use canonical::{canonical_form, permutations, CanonicalForm, Limits, SearchError, DEFAULT_SIZE_CAP};
pub use enumerate::enumerate_models;
pub use eval::{eval, holds_sequent, satisfies_theory, EvalError, SequentVerdict};
pub use maps::{automorphisms, find_maps, MapKind, StructureMap};
pub use structure::{tuples_of, Assignment, FiniteStructure, FnTable, RelTable, StructureError};
pub use tagged::{psi_elements, TaggedTuple, TaggedTupleSet};
