//! Exact engine for plane tropical curves: dual subdivisions, stable intersections,
//! tropical modifications, inflection components and combinatorial patchworking.

pub mod curve;
pub mod error;
pub mod gen;
pub mod geom;
pub mod inflect;
pub mod intersect;
pub mod modify;
pub mod patchwork;
pub mod puiseux;
pub mod rational;
pub mod subdivision;
pub mod troppoly;

pub use curve::{build_curve, TropicalCurve};
pub use error::{Result, TropError};
pub use geom::{LatticePoint, LatticePolygon, Piece, RationalPoint};
pub use puiseux::{GaussianRational, PuiseuxNumber};
pub use rational::Rat;
pub use troppoly::{parse, EnrichedPolynomial, TropicalPolynomial};
