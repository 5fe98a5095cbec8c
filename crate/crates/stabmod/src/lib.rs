//! Exact homological algebra over F2 for finite-dimensional graded connected
//! Hopf algebras and their module categories.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg2`] — packed dense linear algebra over the two-element field;
//! * [`hopf`] — Hopf algebra presentations, presets, validation, integrals;
//! * [`gmod`] — graded modules, tensor/dual/hom, submodules and quotients;
//! * [`stable`] — projective covers, loop functors, minimal resolutions and
//!   stable Ext charts;
//! * [`margolis`] — Margolis homology and its structural checkers;
//! * [`spectrum`] — support data and the segmental open covers;
//! * [`localize`] — finite certified models of segmental localizations;
//! * [`picard`] — invertible modules and their local invariants.

pub mod gmod;
pub mod hopf;
pub mod linalg2;
pub mod localize;
pub mod margolis;
pub mod picard;
pub mod spectrum;
pub mod stable;

pub use gmod::{FreeModule, GradedModule, ModuleMap};
pub use hopf::{preset, AlgebraRef, HopfAlgebra};
pub use linalg2::{BitMatrix, BitVec, Subspace};
pub use localize::{
    build_local_unit, glue, localize, localized_hom, mv_check, postnikov, restriction_datum,
    windowed_stably_iso, DescentDatum, LocalUnit, LocalizeError, LocalizedHom, PostnikovTriangle,
    Side, Window,
};
pub use margolis::{
    check_ext_comparison, check_kunneth, check_les, concentration, is_free, margolis_homology,
    CheckReport, ConcentrationProfile, MargolisError, MargolisHomology,
};
pub use picard::{
    aut_unit, detection_check, is_invertible, local_invariant, pic_inverse, pic_product,
    LocalPicInvariant, PicElement, PicError,
};
pub use spectrum::{
    a1_membership, is_cover, support_lattice_checks, support_profile, A1Support, SegmentalOpen,
    SpectrumError,
};
pub use stable::{
    eta_representative, injective_hull, is_stably_iso, is_stably_trivial, omega, omega_inv,
    projective_cover, resolve, stable_ext, stable_hom_dim, strip_free, strip_free_maps, yoneda_action, ExtClass,
    Resolution, StableError, StableExtChart,
};
