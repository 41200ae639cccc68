//! Finite-field arithmetic: prime-power fields from a modulus table and the
//! tower F_q ⊂ F_{q^5} with its F_q-coordinates.

mod field;
mod fq;
mod table;
mod tower;

pub use field::{prime_power, FieldElement, GaloisField};
pub use fq::Fq;
pub use table::{ModulusTable, MODULI_ENV};
pub use tower::FieldTower;
