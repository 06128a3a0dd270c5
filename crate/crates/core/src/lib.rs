//! Exact algebra and numerics for generalized Cartan–Hartogs domains.

pub mod certify;
pub mod domain;
pub mod error;
pub mod geometry;
pub mod hua;
pub mod jobs;
pub mod poly;

pub use domain::{enumerate_catalog, parse_domain, parse_domain_list, DomainFamily, DomainInvariants};
pub use error::{Error, Result};
pub use hua::{EpsilonExpansion, HartogsSpec};
pub use poly::{Polynomial, Rational};
pub use geometry::{DomainPoint, HartogsGeometry, KernelValue};
pub use jobs::JobReport;
