use std::sync::OnceLock;

use proptest::prelude::*;

use fnshape::fixtures;
use fnshape::mesh::io::{write_obj, write_off, MeshFormat};
use fnshape::pipeline::sha256_hex;
use fnshape::{compute_descriptor, shape_distance, FnPair, LandmarkSet, PipelineConfig, PipelineError, ShapeDescriptor};

fn template() -> &'static ShapeDescriptor {
    static D: OnceLock<ShapeDescriptor> = OnceLock::new();
    D.get_or_init(|| {
        let t = fixtures::torus(12, 6, 3.0, 1.0);
        let off = write_off(t.positions(), t.faces());
        compute_descriptor(off.as_bytes(), MeshFormat::Off, &LandmarkSet::new(vec![0]), &PipelineConfig::default())
            .unwrap()
            .descriptor
    })
}

fn with_pairs(pairs: &[(f64, f64)]) -> ShapeDescriptor {
    let mut d = template().clone();
    d.punctures = 3 - pairs.len().min(3);
    d.genus = 1;
    d.pairs = pairs.iter().map(|&(length, twist)| FnPair { length, twist }).collect();
    d.boundary_lengths = vec![0.0; d.punctures];
    d
}

fn pair() -> impl Strategy<Value = (f64, f64)> {
    (1e-3f64..20.0, -std::f64::consts::PI..std::f64::consts::PI)
}

proptest! {
    #[test]
    fn distance_is_a_metric(a in pair(), b in pair(), c in pair()) {
        let (a, b, c) = (with_pairs(&[a]), with_pairs(&[b]), with_pairs(&[c]));
        let ab = shape_distance(&a, &b).unwrap();
        prop_assert_eq!(shape_distance(&a, &a).unwrap(), 0.0);
        prop_assert_eq!(ab, shape_distance(&b, &a).unwrap());
        let (bc, ac) = (shape_distance(&b, &c).unwrap(), shape_distance(&a, &c).unwrap());
        prop_assert!(ac <= (ab + bc) * (1.0 + 4.0 * f64::EPSILON));
    }

    #[test]
    fn json_round_trip_is_exact(ps in proptest::collection::vec(pair(), 1..4)) {
        let d = with_pairs(&ps);
        let back = ShapeDescriptor::from_json(&d.to_json()).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(shape_distance(&d, &back).unwrap(), 0.0);
    }
}

#[test]
fn different_strata_are_not_comparable() {
    let a = with_pairs(&[(1.0, 0.0)]);
    let mut b = a.clone();
    b.genus = 0;
    assert!(matches!(shape_distance(&a, &b), Err(PipelineError::SignatureMismatch { .. })));
}

#[test]
fn file_format_does_not_change_the_coordinates() {
    let t = fixtures::torus(12, 6, 3.0, 1.0);
    let obj = write_obj(t.positions(), t.faces());
    let d = compute_descriptor(obj.as_bytes(), MeshFormat::Obj, &LandmarkSet::new(vec![0]), &PipelineConfig::default())
        .unwrap()
        .descriptor;
    let off = template();
    assert_eq!(d.pairs, off.pairs);
    assert_eq!(d.diagnostics, off.diagnostics);
    assert_eq!(d.provenance.mesh_sha256, sha256_hex(obj.as_bytes()));
    assert_ne!(d.provenance.mesh_sha256, off.provenance.mesh_sha256);
    assert_eq!(d.provenance.landmarks_sha256, off.provenance.landmarks_sha256);
}

#[test]
fn stage_errors_name_their_stage() {
    let t = fixtures::torus(12, 6, 3.0, 1.0);
    let off = write_off(t.positions(), t.faces());
    let cfg = PipelineConfig::default();
    let bad_landmark = compute_descriptor(off.as_bytes(), MeshFormat::Off, &LandmarkSet::new(vec![0, 1]), &cfg).unwrap_err();
    assert_eq!(bad_landmark.stage(), "excise");
    let garbage = compute_descriptor(b"OFF\n3 1 0\n", MeshFormat::Off, &LandmarkSet::default(), &cfg).unwrap_err();
    assert_eq!(garbage.stage(), "load");
    // A closed torus without punctures has no hyperbolic metric.
    let flat = compute_descriptor(off.as_bytes(), MeshFormat::Off, &LandmarkSet::default(), &cfg).unwrap_err();
    assert_eq!(flat.stage(), "excise");
}
