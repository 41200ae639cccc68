//! Weight distributions of F_q-linear sets of rank 5 on PG(1,q^5).

pub mod constructions;
pub mod curves;
pub mod error;
pub mod geometry;
pub mod gf;
pub mod kernel;
pub mod linalg;
pub mod linpoly;
pub mod linset;
pub mod rdcode;
pub mod weights;

pub use error::{Error, Result};
pub use gf::{FieldElement, FieldTower};
pub use linpoly::QPolynomial;
pub use linset::{classify, ClassTag, Classification, FqSubspace, ProjectivePoint};
pub use weights::WeightDistribution;
