//! Exact GF(p) constructions of composition superalgebras, triality
//! algebras, the supermagic square, triple systems and the modular Lie
//! superalgebras built from them, with checkers that return explicit
//! witnesses.
//!
//! ```
//! use supermagic::composition::symmetric_by_name;
//! use supermagic::magicsquare::magic;
//! use supermagic::structconst::{check_super_jacobi, is_simple};
//! use supermagic::superlinear::SuperDim;
//! use supermagic::Field;
//!
//! let f = Field::new(3)?;
//! let g = magic(&symmetric_by_name("S8", f)?, &symmetric_by_name("S1.2", f)?)?;
//! assert_eq!(g.algebra.superdim(), SuperDim::new(55, 50));
//! assert!(check_super_jacobi(&g.algebra).is_ok());
//! assert!(is_simple(&g.algebra).is_simple());
//! # Ok::<(), supermagic::Error>(())
//! ```

pub mod composition;
pub mod error;
pub mod ff;
pub mod jordan;
pub mod json;
pub mod magicsquare;
pub mod meataxe;
pub mod models;
pub mod structconst;
pub mod superlinear;
pub mod triality;
pub mod triples;

pub use error::{Error, Result};
pub use ff::{EchelonBuilder, Field, FieldMatrix, Fp, Rref};
