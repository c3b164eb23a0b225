//! Construction and optimality certification of multi-level supersaturated
//! designs built from polynomial column labels over finite fields.
//!
//! ```
//! use ssd_core::{constructions, criteria, bounds, gf::Field};
//!
//! let field = Field::new(3).unwrap();
//! let d = constructions::construct_thm4(&field, 2).unwrap();
//! assert_eq!(d.num_columns(), 7);
//! let a2 = criteria::a2_overall(&d).unwrap();
//! assert_eq!(a2, ssd_core::rational::int(6));
//! assert!(bounds::certify(&d).unwrap().achieved_theorem1);
//! ```

pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod criteria;
pub mod design;
pub mod error;
pub mod gf;
pub mod oracle;
pub mod poly_labels;
pub mod rational;

pub use design::{Column, Design, PairClass};
pub use error::{Error, Result};
pub use gf::Field;
pub use rational::Rational;
