//! Elliptic curves over Q(t): group law, reduction, local and global heights,
//! torsion and the duplication map as an endomorphism of P^2.

pub mod curve;
pub mod duplication;
pub mod heights;
pub mod reduction;
pub mod torsion;

pub use curve::{CurvePoint, CurveSpec, WeierstrassCurve};
pub use reduction::{
    arakelov_check, bad_places, candidate_places, faltings_height, reduction_type, ArakelovCheck,
    FaltingsReport, PotentialType, ReductionData, ReductionKind, ShortModel,
};
pub use heights::{
    canonical_height_local, component_index, hindry_silverman_check, local_height, local_heights,
    HindrySilvermanReport, LocalHeight,
};
pub use duplication::{canonical_height_dyn, duplication_extension, duplication_extension_with};
pub use torsion::{torsion_points, DivisionPolynomials, TorsionPoint, TorsionReport};
