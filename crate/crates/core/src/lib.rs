//! Exact q-series, root data and multi-parameter characters of affine
//! Lie algebra modules.

pub mod characters;
pub mod error;
pub mod identities;
pub mod lattice;
pub mod lie;
pub mod qseries;

pub use characters::{
    closed_form_level1, level1_order_for_principal, propagate_from_initial, propagation_exponent,
    recurrence_factor, CharacterTable, RecurrenceFailure, RecurrenceReport,
};
pub use error::{Error, Result};
pub use identities::IdentityReport;
pub use lattice::{enumerate_lattice, QuadraticLattice};
pub use lie::{Family, LieType, RootSystemData};
pub use qseries::{Factor, Mismatch, ProductSpec, QSeries};
