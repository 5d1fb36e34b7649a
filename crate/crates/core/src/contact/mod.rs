//! Contact form, Reeb field, structure constants and the invariants χ, κ of a
//! frame pair, plus normal-form frames.

mod frame;
mod invariants;
mod normal;
mod structure;

pub use frame::{heisenberg_frame, FrameField, DET_THRESHOLD};
pub use invariants::{chi_at, chi_at_as_printed, kappa_at, popp_density};
pub use normal::{build_normal_frame, gamma2, nominal_invariants, NormalFormSpec};
pub use structure::{ConstTable, ContactStructure, FlowCoeffs, FlowEvaluator};

/// Derives the structure of a frame.
pub fn derive(frame: FrameField) -> crate::error::Result<ContactStructure> {
    ContactStructure::derive(frame)
}
