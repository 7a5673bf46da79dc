//! Zeta functions `Z_Γ(u) = Σ_k tr(T_{k,Γ}) u^k` of finite quotients: the
//! closed rational form from the cone decomposition of the position lattice,
//! the direct trace series, and the geometric side by path enumeration.

pub mod closed_form;
pub mod geodesic;

pub use crate::algebra::{MultiPoly, PolyMatrix, RationalFunction};
pub use closed_form::{det_poly_matrix, series_expand, trace_series, zeta_closed_form, ZetaClosedForm};
pub use geodesic::{
    geodesic_count_oracle, lefschetz_check, lefschetz_check_with, s_function_probe, GeodesicClass,
    GeodesicClassTable, LefschetzReport, LefschetzRow, OracleOptions, SProbeReport, SProbeRow,
};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::complex::ComplexError;
use crate::cones::ConeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
