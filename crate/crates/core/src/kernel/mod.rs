//! Axiom schemes, the registered logics, and Hilbert-style proofs.

mod builder;
mod library;
mod logic;
mod proof;
mod scheme;
mod taut;

pub use builder::ProofBuilder;
pub use library::{cl_original, congruence_proof, declared_logic, theorem_library, Deriver, LibraryEntry};
pub use logic::{registry_dump, FrameClass, Logic, LogicError};
pub use proof::{check_proof, Justification, Proof, ProofError, ProofLine};
pub use scheme::{Principle, Scheme, UnknownScheme};
pub use taut::is_tautology;
