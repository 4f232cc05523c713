//! Mie-series surface current of the conducting sphere and the relative
//! surface L² error measured against it.

mod check;
mod metric;
mod mie;

pub use check::{mie_diagnostics, mie_self_check, MieDiagnostics};
pub use metric::{l2_projection, relative_error};
pub use mie::{mie_surface_current, truncation_rule, MieConfig, MieSeries};

#[cfg(test)]
mod tests;
