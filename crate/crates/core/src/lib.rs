//! Exact combinatorics of abstract chirotopes: the join/meet/twist calculus
//! on rooted chirotopes, brute-force triangulation enumeration, the
//! polynomial recursions that count triangulations of compositions, and the
//! double-circle analytics built on them.

pub mod chirotope;
pub mod compose;
pub mod double_circle;
pub mod error;
pub mod oracle;
pub mod poly;
pub mod scalar;

pub use chirotope::format::{parse_chi, parse_pts, write_chi, write_pts};
pub use chirotope::points::{Point, PointSet};
pub use chirotope::{AxiomReport, Chirotope, Label, RootedChirotope, Segment, Sign};
pub use compose::{chi1, chi_k, convex, double_circle, double_circle_points, join, koch, meet, triangle, twist, LabelMap};
pub use error::{Error, Result};
pub use oracle::{EdgeSet, OracleConfig};
pub use poly::calc::ComposeKind;
pub use poly::{BivarPoly, Bivariate, Coeff, UnivarPoly, Univariate};
pub use scalar::{Real, Scalar};

pub type RationalPoint = Point<num_rational::BigRational>;
pub type RationalPointSet = PointSet<num_rational::BigRational>;
pub type KernelPoint = double_circle::analytics::KernelPoint<num_rational::BigRational>;
pub type KernelPointF64 = double_circle::analytics::KernelPoint<f64>;
pub type AsymptoticConstants = double_circle::analytics::AsymptoticConstants<num_rational::BigRational>;
pub type AsymptoticConstantsF64 = double_circle::analytics::AsymptoticConstants<f64>;
