//! Contact invariants of Gorenstein toric contact manifolds.
//!
//! Given lattice data (a toric diagram or a good moment cone) the crate
//! validates it, computes the fundamental group, Conley–Zehnder indices of
//! all closed toric Reeb orbits with an exact symbolic perturbation of the
//! Reeb vector, and contact Betti numbers graded by homotopy class. The
//! [`lens`] module has closed-form versions for Gorenstein lens spaces.

pub mod czindex;
pub mod error;
pub mod exactfield;
pub mod homotopy;
pub mod lattice;
pub mod lens;
pub mod toric;

pub use czindex::{
    betti_table, check_condition_ii, enumerate_orbits, make_reeb_vector, orbit_index, BettiTable, IndexValue,
    OrbitRecord, ReebVector,
};
pub use error::{Error, Result};
pub use exactfield::{FloorLim, PerturbedScalar, Sign, StandardPart};
pub use homotopy::{pi1_order, relate_edges, Pi1Info};
pub use lattice::{IntMatrix, IntVector, SmithForm};
pub use lens::{classify_pair, lens_normal_form, GroupRingElement, LensNormalForm, Verdict};
pub use toric::{
    apply_lattice_transform, build_cosphere_diagram, build_lens_cone, check_good_cone, moment_cone,
    validate_toric_diagram, MomentCone, ToricDiagram,
};
