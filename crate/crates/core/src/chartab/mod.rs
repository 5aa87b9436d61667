//! Conjugacy classes, complex character tables (as residues mod a prime ℓ),
//! and dimensions of invariant vectors for an embedded subgroup.

mod classes;
mod dixon;
mod invariants;
pub mod modp;

pub use classes::{conjugacy_classes, conjugacy_classes_with, transpose_preserves_classes, ConjClasses};
pub use dixon::{character_table, character_table_with, choose_modulus, CharacterTable};
pub use invariants::{
    central_characters_coherent, dim_invariants, verify_pair, InvariantReport, IrrepInvariants,
    VerificationOutcome,
};
