//! Fenchel-Nielsen shape coordinates for landmarked triangle meshes.
//!
//! Landmarks are excised into small boundary loops, the surface is cut into
//! pairs of pants, a discrete Ricci flow finds the hyperbolic metric with
//! geodesic boundary, and lengths and twists of the cut curves are read off
//! holonomies of developed triangle strips.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod fixtures;
pub mod fncoords;
pub mod hyperbolic;
pub mod mesh;
pub mod pipeline;
pub mod ricci;
pub mod scalar;
pub mod topology;

pub use fncoords::{assemble, cuff_twist, geodesic_length, layout_strip, measure, FnError, FnPair};
pub use hyperbolic::{hyp_angle, pants_seam, triangle_area, HypError, IsometryKind};
pub use mesh::{excise_landmarks, HalfedgeMesh, LandmarkSet, MeshError, SurfaceSignature};
pub use pipeline::{compute_descriptor, shape_distance, validate, PipelineConfig, PipelineError, ShapeDescriptor};
pub use ricci::{flow_to_hyperbolic, init_metric, FlowConfig, HessianMode, RicciError};
pub use scalar::Real;
pub use topology::{pants_decompose, CutCurve, PantsDecomposition, TopoError};

pub type HolonomyTransform = hyperbolic::HolonomyTransform<f64>;
pub type HyperbolicTriangle = hyperbolic::HyperbolicTriangle<f64>;
pub type DiscreteMetric = ricci::DiscreteMetric<f64>;
pub type CurvatureState = ricci::CurvatureState<f64>;
pub type FlowOutcome = ricci::FlowOutcome<f64>;
pub type LaidOutStrip = fncoords::LaidOutStrip<f64>;
pub type FNCoordinates = fncoords::FNCoordinates<f64>;
pub type TwistMeasurement = fncoords::TwistMeasurement<f64>;
