//! Exact symbolic toolkit for rational CR maps from the three-dimensional
//! sphere or Heisenberg hypersurface into higher-dimensional spheres.
//!
//! The kernel is an exact scalar ring ([`Scalar`]: Gaussian rationals with
//! real square roots adjoined), sparse polynomials in `(z, w, χ, τ)` and
//! shared-denominator rational tuples. On top of it sit the mapping-equation
//! verifier, the automorphism groups and normal form, degeneracy ranks and
//! the map families.

pub mod autgroup;
pub mod degeneracy;
pub mod error;
pub mod families;
pub mod hypersurface;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod series;

pub use autgroup::{
    check_conditions, compose, normalize, unitary_completion, Automorphism, NormalFormCertificate,
    NormalFormConditions, StabilityAut, Translation,
};
pub use degeneracy::{
    degeneracy_at, degeneracy_locus_sample, image_dimension, tangential_degeneracy, DegeneracyReport, LocusReport,
    Mode, SourcePoint, TangentialReport,
};
pub use error::{Error, Result};
pub use families::{
    catalog, check_functional_equation, family_thm_i, family_thm_ii, CaseIParams, Equation, FamilyIIParams,
    FamilyIParams, FunctionalEquation,
};
pub use hypersurface::{cayley, mapping_residual, CRMap, CayleyDirection, Model, ModelKind, Residual, Side};
pub use io::MapFile;
pub use poly::{poly, Monomial, Poly, RatTuple, Var};
pub use scalar::{rat, FloatComplex, Rational, Scalar};
