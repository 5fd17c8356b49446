//! Exact diagram combinatorics for Temperley-Lieb loop models on the annulus
//! with zero, one or two boundaries: reduced-state enumeration, generator
//! actions, transfer matrices, amplitude solving and Gram determinants.

pub mod error;
pub mod poly;
pub mod report;
pub mod series;
pub mod states;
pub mod amplitudes;
pub mod algebra;
pub mod oracle;
pub mod transfer;
pub mod gram;
pub mod suite;

pub use error::{Error, Result};
pub use poly::{Monomial, Poly, Var};
