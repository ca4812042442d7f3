//! Numerical verification of the identities and the report format.

pub mod cayley;
pub mod config;
pub mod gamma_integral;
pub mod integrability;
pub mod quadrature;
pub mod report;
pub mod stieltjes;
pub mod structure;

pub use report::{AggregateReport, ReportMeta, Value, VerificationReport};
