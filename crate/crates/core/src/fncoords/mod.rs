//! Fenchel-Nielsen coordinates from a hyperbolic metric and a pants
//! decomposition: geodesic lengths from holonomy traces, twists from seam
//! feet on either side of each gluing curve.

mod develop;
mod seams;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyperbolic::HypError;
use crate::mesh::{HalfedgeMesh, SurfaceSignature};
use crate::ricci::DiscreteMetric;
use crate::scalar::Real;
use crate::topology::{CurveKind, PantsDecomposition};

pub use develop::{geodesic_length, layout_strip, layout_strip_with, HalfedgeGeometry, LaidOutStrip, PlacedTriangle, DRIFT_LIMIT};
pub use seams::{cuff_twist_with, reduce_offset, seam_checks, seam_partner, PantsGeometry, SeamCheck, SeamFoot, TwistMeasurement};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FnError {
    #[error(transparent)]
    Hyperbolic(#[from] HypError),
    #[error("layout drifted: shared edges disagree by {mismatch:e} (relative)")]
    NumericalDrift { mismatch: f64 },
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("expected {expected} {what}, got {found}")]
    CountMismatch { what: &'static str, expected: usize, found: usize },
}

/// One length-twist pair; `twist` is an angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FnPair<T> {
    pub length: T,
    pub twist: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FNCoordinates<T> {
    pub genus: usize,
    pub punctures: usize,
    /// One pair per interior curve, in decomposition order.
    pub pairs: Vec<FnPair<T>>,
    /// Always zero: boundaries stand for punctures.
    pub boundary_lengths: Vec<T>,
}

impl<T: Real> FNCoordinates<T> {
    /// `(l_1, theta_1, l_2, theta_2, ...)`
    pub fn flatten(&self) -> Vec<T> {
        self.pairs.iter().flat_map(|p| [p.length, p.twist]).collect()
    }
}

/// Per-curve measurements under the converged metric.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveMeasurement<T> {
    pub kind: CurveKind,
    pub edge_count: usize,
    pub trace: T,
    pub length: T,
    /// Sum of the metric lengths of the curve's edges.
    pub combinatorial_length: T,
    pub twist: Option<TwistMeasurement<T>>,
}

#[derive(Debug, Clone)]
pub struct Measurement<T> {
    pub curves: Vec<CurveMeasurement<T>>,
    pub seams: Vec<SeamCheck<T>>,
    pub max_edge_mismatch: T,
}

impl<T: Real> Measurement<T> {
    pub fn lengths(&self) -> Vec<T> {
        self.curves.iter().map(|c| c.length).collect()
    }

    /// Twist angles of the interior curves.
    pub fn twists(&self) -> Vec<T> {
        self.curves.iter().filter_map(|c| c.twist.map(|t| t.angle)).collect()
    }

    pub fn max_seam_error(&self) -> T {
        self.seams.iter().fold(T::zero(), |m, s| m.max((s.measured - s.predicted).abs()))
    }
}

/// Lengths of all curves, twists of the interior ones and the seam checks
/// of every pants piece.
pub fn measure<T: Real>(
    mesh: &HalfedgeMesh,
    metric: &DiscreteMetric<T>,
    decomposition: &PantsDecomposition,
) -> Result<Measurement<T>, FnError> {
    let geometry = HalfedgeGeometry::new(mesh, metric)?;
    let pants: Vec<PantsGeometry<T>> =
        decomposition.pants.iter().map(|p| PantsGeometry::new(p, &geometry)).collect::<Result<_, _>>()?;
    let mut max_edge_mismatch = pants.iter().fold(T::zero(), |m, p| m.max(p.edge_mismatch));

    let mut curves = Vec::with_capacity(decomposition.curves.len());
    for (ci, curve) in decomposition.curves.iter().enumerate() {
        let strip = layout_strip_with(mesh, &geometry, curve)?;
        max_edge_mismatch = max_edge_mismatch.max(strip.edge_mismatch);
        let chain = develop::curve_chain(mesh, curve)?;
        let lengths: Vec<T> = chain.iter().map(|&h| geometry.length[h]).collect();
        let twist = match curve.kind {
            CurveKind::Interior => Some(cuff_twist_with(mesh, &geometry, decomposition, &pants, ci, false)?),
            CurveKind::Boundary => None,
        };
        curves.push(CurveMeasurement {
            kind: curve.kind,
            edge_count: curve.edge_count(),
            trace: strip.holonomy.trace().abs(),
            length: geodesic_length(&strip)?,
            combinatorial_length: crate::scalar::pairwise_sum(&lengths),
            twist,
        });
    }
    let mut seams = Vec::new();
    for (i, g) in pants.iter().enumerate() {
        seams.extend(seam_checks(i, g)?);
    }
    Ok(Measurement { curves, seams, max_edge_mismatch })
}

/// Twist of interior curve `curve` of `decomposition` under `metric`.
pub fn cuff_twist<T: Real>(
    mesh: &HalfedgeMesh,
    metric: &DiscreteMetric<T>,
    decomposition: &PantsDecomposition,
    curve: usize,
) -> Result<TwistMeasurement<T>, FnError> {
    let geometry = HalfedgeGeometry::new(mesh, metric)?;
    let pants: Vec<PantsGeometry<T>> =
        decomposition.pants.iter().map(|p| PantsGeometry::new(p, &geometry)).collect::<Result<_, _>>()?;
    cuff_twist_with(mesh, &geometry, decomposition, &pants, curve, false)
}

/// Builds the coordinates from one length per curve (interior curves
/// first, then boundaries) and one twist angle per interior curve.
/// Boundary lengths are replaced by zeros.
pub fn assemble<T: Real>(
    decomposition: &PantsDecomposition,
    lengths: &[T],
    twists: &[T],
    signature: SurfaceSignature,
) -> Result<FNCoordinates<T>, FnError> {
    let interior = signature.interior_curve_count();
    let n = signature.boundary_count;
    let check = |what, expected, found| {
        if expected == found { Ok(()) } else { Err(FnError::CountMismatch { what, expected, found }) }
    };
    check("interior curves", interior, decomposition.interior_count())?;
    check("boundary curves", n, decomposition.boundary_curves().len())?;
    check("lengths", interior + n, lengths.len())?;
    check("twists", interior, twists.len())?;
    if let Some(i) = lengths[..interior].iter().position(|&l| !(l > T::zero() && l.is_finite())) {
        return Err(FnError::Geometry(format!("curve {i} has non-positive length {}", lengths[i])));
    }
    Ok(FNCoordinates {
        genus: signature.genus,
        punctures: n,
        pairs: lengths.iter().zip(twists).map(|(&length, &twist)| FnPair { length, twist }).collect(),
        boundary_lengths: vec![T::zero(); n],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hyperbolic::HolonomyTransform;
    use crate::mesh::{excise_landmarks, LandmarkSet};
    use crate::ricci::{flow_to_hyperbolic, init_metric, FlowConfig};
    use crate::topology::{pants_decompose, CutCurve};
    use proptest::prelude::*;

    fn converged(mesh: &HalfedgeMesh, landmarks: Vec<usize>) -> (HalfedgeMesh, PantsDecomposition, DiscreteMetric<f64>) {
        let m = excise_landmarks(mesh, &LandmarkSet::new(landmarks)).unwrap();
        let d = pants_decompose(&m).unwrap();
        let out = flow_to_hyperbolic(&m, init_metric(&m).unwrap(), &FlowConfig::default()).unwrap();
        (m, d, out.metric)
    }

    fn one_holed_torus() -> (HalfedgeMesh, PantsDecomposition, DiscreteMetric<f64>) {
        converged(&fixtures::torus(16, 8, 3.0, 1.0), vec![0])
    }

    fn rotated(c: &CutCurve, by: usize) -> CutCurve {
        let mut v = c.vertices.clone();
        v.rotate_left(by);
        CutCurve { vertices: v, kind: c.kind }
    }

    #[test]
    fn strip_reproduces_the_metric() {
        let (m, d, metric) = one_holed_torus();
        let geo = HalfedgeGeometry::new(&m, &metric).unwrap();
        for c in &d.curves {
            let strip = layout_strip_with(&m, &geo, c).unwrap();
            assert!(strip.edge_mismatch < 1e-9);
            assert!(strip.length_mismatch(&geo) < 1e-9);
            assert!(strip.placements.len() >= c.edge_count());
        }
    }

    #[test]
    fn essential_curves_have_hyperbolic_holonomy() {
        let (m, d, metric) = one_holed_torus();
        let strip = layout_strip(&m, &metric, &d.curves[0]).unwrap();
        assert!(strip.holonomy.trace().abs() > 2.0);
        let l = geodesic_length(&strip).unwrap();
        let comb: f64 = d.curves[0]
            .vertices
            .iter()
            .zip(d.curves[0].vertices.iter().cycle().skip(1))
            .map(|(&a, &b)| metric.lengths[m.find_edge(a, b).unwrap()])
            .sum();
        assert!(l > 0.0 && l <= comb);
    }

    #[test]
    fn length_ignores_basepoint_and_direction() {
        let (m, d, metric) = one_holed_torus();
        let c = &d.curves[0];
        let l0 = geodesic_length(&layout_strip(&m, &metric, c).unwrap()).unwrap();
        for by in 0..c.vertices.len() {
            let l = geodesic_length(&layout_strip(&m, &metric, &rotated(c, by)).unwrap()).unwrap();
            assert!((l - l0).abs() < 1e-10, "basepoint {by}: {l} vs {l0}");
        }
        let back = geodesic_length(&layout_strip(&m, &metric, &c.reversed()).unwrap()).unwrap();
        assert!((back - l0).abs() < 1e-10);
    }

    #[test]
    fn doubled_loop_squares_the_holonomy() {
        let (m, d, metric) = one_holed_torus();
        let geo = HalfedgeGeometry::new(&m, &metric).unwrap();
        let chain = develop::curve_chain(&m, &d.curves[0]).unwrap();
        let once = develop::develop_chain(&m, &geo, &chain).unwrap().holonomy;
        let twice = develop::develop_chain(&m, &geo, &[chain.clone(), chain].concat()).unwrap().holonomy;
        assert!(twice.distance_to(&once.compose(&once)) < 1e-9);
    }

    #[test]
    fn vertex_link_has_trivial_holonomy() {
        let (m, _, metric) = one_holed_torus();
        let v = (0..m.n_vertices()).find(|&v| !m.is_boundary_vertex(v)).unwrap();
        // Counter-clockwise link: the star of v is on the left.
        let link: Vec<usize> = m.outgoing(v).into_iter().map(|h| m.target(h)).collect();
        let strip = layout_strip(&m, &metric, &CutCurve::interior(link)).unwrap();
        assert!(strip.holonomy.distance_to(&HolonomyTransform::identity()) < 1e-9);
    }

    #[test]
    fn seams_close_the_hexagons() {
        for (mesh, n) in [(fixtures::torus(16, 8, 3.0, 1.0), 1), (fixtures::icosphere(2), 4), (fixtures::voxel_plate(2, 2), 0)] {
            let lm = fixtures::spread_landmarks(&mesh, n);
            let (m, d, metric) = converged(&mesh, lm);
            let meas = measure(&m, &metric, &d).unwrap();
            assert_eq!(meas.seams.len(), 6 * d.pants.len());
            assert!(meas.max_seam_error() < 1e-6, "{}", meas.max_seam_error());
        }
    }

    #[test]
    fn mirror_symmetric_gluing_has_zero_twist() {
        let frame = fixtures::voxel_frame(3, 3, 1, [1, 1], [1, 1], 2);
        // Centre of an outer side face: fixed by two mirror symmetries.
        let v = (0..frame.n_vertices()).find(|&v| frame.positions()[v] == [0.0, 1.5, 0.5]).unwrap();
        let (m, d, metric) = converged(&frame, vec![v]);
        let t = cuff_twist(&m, &metric, &d, 0).unwrap();
        assert!(t.angle.abs() < 1e-8, "{t:?}");
        assert!(t.closure_error < 1e-9);
    }

    #[test]
    fn reversing_the_curve_keeps_the_twist() {
        let (m, d, metric) = converged(&fixtures::torus(16, 8, 3.0, 1.0), vec![0, 4 * 16 + 4]);
        let geo = HalfedgeGeometry::new(&m, &metric).unwrap();
        let pants: Vec<_> = d.pants.iter().map(|p| PantsGeometry::new(p, &geo).unwrap()).collect();
        for c in 0..d.interior_count() {
            let a = cuff_twist_with(&m, &geo, &d, &pants, c, false).unwrap();
            let b = cuff_twist_with(&m, &geo, &d, &pants, c, true).unwrap();
            // Agreement is limited by the curvature residual of the flow.
            assert!((a.angle - b.angle).abs() < 1e-6, "{a:?} {b:?}");
        }
    }

    #[test]
    fn boundary_curves_have_no_twist() {
        let (m, d, metric) = one_holed_torus();
        assert!(matches!(cuff_twist(&m, &metric, &d, 1), Err(FnError::Geometry(_))));
    }

    #[test]
    fn assembly_counts() {
        let (m, d, metric) = one_holed_torus();
        let meas = measure(&m, &metric, &d).unwrap();
        let fnc = assemble(&d, &meas.lengths(), &meas.twists(), d.signature).unwrap();
        assert_eq!(fnc.pairs.len(), 1);
        assert_eq!(fnc.boundary_lengths, vec![0.0]);
        assert_eq!(fnc.flatten().len(), 2);
        let r = assemble(&d, &meas.lengths()[..1], &meas.twists(), d.signature);
        assert!(matches!(r, Err(FnError::CountMismatch { what: "lengths", expected: 2, found: 1 })));
        let r = assemble(&d, &meas.lengths(), &[], d.signature);
        assert!(matches!(r, Err(FnError::CountMismatch { what: "twists", .. })));
    }

    #[test]
    fn pants_have_no_pairs() {
        let ico = fixtures::icosphere(2);
        let (m, d, metric) = converged(&ico, fixtures::spread_landmarks(&ico, 3));
        let meas = measure(&m, &metric, &d).unwrap();
        let fnc = assemble(&d, &meas.lengths(), &meas.twists(), d.signature).unwrap();
        assert!(fnc.pairs.is_empty());
        assert_eq!(fnc.boundary_lengths, vec![0.0; 3]);
    }

    #[test]
    fn genus_two_has_three_pairs() {
        let (m, d, metric) = converged(&fixtures::voxel_plate(2, 2), vec![]);
        let meas = measure(&m, &metric, &d).unwrap();
        let fnc = assemble(&d, &meas.lengths(), &meas.twists(), d.signature).unwrap();
        assert_eq!(fnc.pairs.len(), 3);
        assert!(fnc.boundary_lengths.is_empty());
        assert!(fnc.pairs.iter().all(|p| p.length > 0.0));
    }

    #[test]
    fn single_precision_measures_too() {
        let (m, d, metric) = one_holed_torus();
        let metric32 = DiscreteMetric::<f32>::from_u(
            &m,
            metric.u.iter().map(|&x| x as f32).collect(),
            metric.weights.iter().map(|&x| x as f32).collect(),
        )
        .unwrap();
        let a = measure(&m, &metric, &d).unwrap();
        let b = measure(&m, &metric32, &d).unwrap();
        assert!((a.curves[0].length - b.curves[0].length as f64).abs() < 1e-3);
    }

    proptest! {
        #[test]
        fn offsets_reduce_into_a_centred_window(d in -50.0f64..50.0, l in 0.1f64..5.0) {
            let r = reduce_offset(d, l);
            prop_assert!(r > -l / 2.0 - 1e-12 && r <= l / 2.0 + 1e-12);
            let k = (d - r) / l;
            prop_assert!((k - k.round()).abs() < 1e-9);
        }
    }
}
