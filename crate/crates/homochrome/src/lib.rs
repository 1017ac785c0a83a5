//! Two-coloring and polychromatic coloring of planar point sets with respect
//! to homothets of a convex polygon, with exact rational geometry.

pub mod adversary;
pub mod coloring;
pub mod delaunay;
pub mod error;
pub mod gen;
pub mod geom;
pub mod io;
pub mod oracle;
pub mod ranges;
pub mod rational;
pub mod selfcover;
pub mod svg;
pub mod verify;

pub use error::{Error, Result};
pub use geom::{AffineMap, Containment, ConvexShape, Homothet, Point, Quadrant, ShapeKind};
pub use rational::Rational;
