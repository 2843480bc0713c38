//! geowork: a workbench for single-sorted geometric theories.
//!
//! The crate provides:
//!
//! - [`logic`]: the formula and theory language, with indexed disjunction
//!   families standing in for infinitary disjunctions;
//! - [`model`]: finite structures, Tarskian evaluation, bounded model
//!   enumeration up to isomorphism, and pinned homomorphism /
//!   automorphism search;
//! - [`check`]: executable checkers for witness-scheme certificates —
//!   inhabitedness, uniform co-ordinatisation, uniform rigidity, definable
//!   closure, the cardinality bound — plus Morleyization and the unique
//!   witness-extension construction;
//! - [`library`]: generators for the worked example theories (group
//!   torsors, finite-dimensional vector spaces over a finite field,
//!   continuous flat functors on a monic site);
//! - [`syntax`]: the `.geo` theory DSL and `.fm` structure format, with a
//!   round-tripping parser and printer;
//! - [`cli`]: the command-line front end.
//!
//! All checks here are semantic: a "pass" means no counterexample exists
//! among finite structures up to the requested size, never a proof.  The
//! guide in `book/` walks through the concepts; its code snippets run as
//! doc-tests via the [`guide`] module.

pub mod check;
pub mod cli;
pub mod guide;
pub mod library;
pub mod logic;
pub mod model;
pub mod syntax;
