//! Verification engine for Möbius structures on the circle.

// `!(a < b)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axioms;
pub mod bisect;
pub mod chart;
pub mod circle;
pub mod error;
pub mod harmonic;
pub mod hyperapprox;
pub mod qi_verify;
pub mod quasilines;
pub mod sampling;
pub mod scalar;
pub mod structure;
pub mod svg;
pub mod zigzag;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use chart::Ball;
pub use circle::{CirclePoint, PointPair, Tuple4};
pub use harmonic::{HarmonicPair, Segment};
pub use hyperapprox::{ApproxGraph, GraphConfig};
pub use quasilines::Involution;
pub use structure::{MoebiusStructure, StructureSpec};
pub use zigzag::ZZPath;

pub type Structure64 = MoebiusStructure<f64>;
pub type Structure32 = MoebiusStructure<f32>;
pub type Point64 = CirclePoint<f64>;
pub type Point32 = CirclePoint<f32>;
pub type Pair64 = PointPair<f64>;
pub type Pair32 = PointPair<f32>;
pub type Harmonic64 = HarmonicPair<f64>;
pub type Harmonic32 = HarmonicPair<f32>;
pub type Path64 = ZZPath<f64>;
pub type Path32 = ZZPath<f32>;
