//! Executable checkers for witness-scheme certificates.
//!
//! The five checkers — inhabitedness, uniform co-ordinatisation, uniform
//! rigidity, co-ordinatisation via definable closure, and the cardinality
//! bound — all quantify over finite models up to a requested size.  The
//! module also houses Morleyization, the unique witness-extension
//! construction, the implication audit relating the first two checkers, and
//! seeded mutation helpers for stress-testing certificates.
//!
//! Definable closure is decided through its Galois proxy: an element counts
//! as definably closed over the witnesses if every automorphism fixing the
//! witnesses pointwise fixes it.  For finite Morleyized structures the
//! proxy is exact; in general it can be strictly weaker than syntactic
//! definability, which the reports note by carrying the evidence kind.

mod audit;
mod checkers;
mod extend;
mod morley;
pub mod mutate;
mod report;
mod session;

pub use audit::{implication_audit, implication_audit_in};
pub use checkers::{
    check_cardinality_bound, check_cardinality_bound_in, check_coord, check_coord_in,
    check_inhabited, check_inhabited_in, check_ucoord, check_ucoord_in, check_urigid,
    check_urigid_in, DclCertificate, DclEntry, DclEvidence,
};
pub use extend::{extend_witness_map, ExtendError};
pub use morley::{morleyize, reduct, MorleyError, MorleyTarget};
pub use report::{CheckError, CheckReport, CheckStats, Finding, Verdict};
pub use session::Session;
