//! Exact geometric zeta functions of building lattices.
//!
//! The crate computes translation operators on chamber complexes (quotients of
//! trees and thin Coxeter-complex tori), the closed rational form of their
//! trace generating functions, Poincaré series of affine Coxeter groups, and
//! lattice-point decompositions of simplicial cones. Every quantity is exact:
//! integers, rationals, and polynomials over ℚ.

pub mod algebra;
pub mod coxeter;
pub mod cones;
pub mod complex;
pub mod zeta;
pub mod cusp;
