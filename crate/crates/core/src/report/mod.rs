//! Input documents, reports, SVG rendering, sweeps, audits and the
//! command-line front end built on them.

pub mod audit;
pub mod cli;
pub mod input;
pub mod schema;
pub mod svg;
pub mod sweep;

pub use input::{FieldInput, InputError};
pub use schema::{PortraitReport, Verification};
