//! End-to-end descriptor computation, descriptor distance and mesh
//! validation reports.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::fncoords::{assemble, measure, FNCoordinates, FnError, FnPair};
use crate::mesh::io::{parse, MeshFormat};
use crate::mesh::{excise_landmarks, HalfedgeMesh, LandmarkSet, MeshError, SurfaceSignature};
use crate::ricci::{flow_to_hyperbolic, init_metric, FlowConfig, FlowLogRow, RicciError};
use crate::topology::{pants_decompose, CurveKind, TopoError};

/// How twists are normalised; recorded in every descriptor.
pub const TWIST_CONVENTION: &str = "seam-foot offset reduced into (-l/2, l/2], reported as 2*pi*offset/l";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("load: {0}")]
    Load(MeshError),
    #[error("excise: {0}")]
    Excise(MeshError),
    #[error("decompose: {0}")]
    Decompose(TopoError),
    #[error("flow: {0}")]
    Flow(RicciError),
    #[error("measure: {0}")]
    Measure(FnError),
    #[error("assemble: {0}")]
    Assemble(FnError),
    #[error("descriptors of genus {} with {} punctures and genus {} with {} punctures are not comparable", a.genus, a.boundary_count, b.genus, b.boundary_count)]
    SignatureMismatch { a: SurfaceSignature, b: SurfaceSignature },
}

impl PipelineError {
    pub fn stage(&self) -> &'static str {
        match self {
            Self::Load(_) => "load",
            Self::Excise(_) => "excise",
            Self::Decompose(_) => "decompose",
            Self::Flow(_) => "flow",
            Self::Measure(_) => "measure",
            Self::Assemble(_) => "assemble",
            Self::SignatureMismatch { .. } => "distance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineConfig {
    pub flow: FlowConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub kind: String,
    pub edge_count: usize,
    pub length: f64,
    pub trace: f64,
    /// Signed seam-foot offset along the geodesic, reduced; interior curves only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub twist_offset: Option<f64>,
    /// The offset before reduction, as measured along the developed strips.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub raw_twist_offset: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub residual: f64,
    pub iterations: usize,
    pub total_area: f64,
    pub curves: Vec<CurveSummary>,
    pub gauss_bonnet_error: f64,
    pub max_seam_error: f64,
    pub twist_convention: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub mesh_sha256: String,
    pub tolerance: f64,
    pub landmarks_sha256: String,
    pub max_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeDescriptor {
    pub genus: usize,
    pub punctures: usize,
    pub pairs: Vec<FnPair<f64>>,
    pub boundary_lengths: Vec<f64>,
    pub diagnostics: Diagnostics,
    pub provenance: Provenance,
}

impl ShapeDescriptor {
    pub fn signature(&self) -> SurfaceSignature {
        SurfaceSignature::new(self.genus, self.punctures)
    }

    pub fn coordinates(&self) -> FNCoordinates<f64> {
        FNCoordinates {
            genus: self.genus,
            punctures: self.punctures,
            pairs: self.pairs.clone(),
            boundary_lengths: self.boundary_lengths.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serialises") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// A descriptor together with the per-iteration flow log.
#[derive(Debug, Clone, PartialEq)]
pub struct Computation {
    pub descriptor: ShapeDescriptor,
    pub flow_log: Vec<FlowLogRow>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Relabels vertices in lexicographic order of position (ties keep input
/// order), rotates each face to start at its smallest vertex and sorts the
/// faces. Meshes differing only in labelling map to the same mesh.
pub fn canonicalize(mesh: &HalfedgeMesh, landmarks: &LandmarkSet) -> Result<(HalfedgeMesh, LandmarkSet), MeshError> {
    let pos = mesh.positions();
    let mut order: Vec<usize> = (0..pos.len()).collect();
    order.sort_by(|&a, &b| {
        pos[a].iter().zip(&pos[b]).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(a.cmp(&b))
    });
    let mut new_id = vec![0; pos.len()];
    for (new, &old) in order.iter().enumerate() {
        new_id[old] = new;
    }
    let mut faces: Vec<[usize; 3]> = mesh
        .faces()
        .iter()
        .map(|f| {
            let g = f.map(|v| new_id[v]);
            let k = (0..3).min_by_key(|&k| g[k]).unwrap();
            [g[k], g[(k + 1) % 3], g[(k + 2) % 3]]
        })
        .collect();
    faces.sort_unstable();
    let positions = order.iter().map(|&v| pos[v]).collect();
    let mut ids: Vec<usize> = landmarks.vertex_ids.iter().map(|&v| new_id.get(v).copied().unwrap_or(v)).collect();
    ids.sort_unstable();
    Ok((HalfedgeMesh::new(positions, faces)?, LandmarkSet::new(ids)))
}

/// Full pipeline on mesh bytes: load, canonicalise, excise, decompose, flow,
/// measure and assemble.
pub fn compute_descriptor(
    source: &[u8],
    format: MeshFormat,
    landmarks: &LandmarkSet,
    config: &PipelineConfig,
) -> Result<Computation, PipelineError> {
    let mesh = crate::mesh::io::load_mesh(source, format).map_err(PipelineError::Load)?;
    compute_from_mesh(&mesh, landmarks, config, sha256_hex(source))
}

/// Pipeline on an already loaded mesh; `mesh_sha256` is recorded as given.
pub fn compute_from_mesh(
    mesh: &HalfedgeMesh,
    landmarks: &LandmarkSet,
    config: &PipelineConfig,
    mesh_sha256: String,
) -> Result<Computation, PipelineError> {
    landmarks.validate(mesh).map_err(PipelineError::Excise)?;
    let (mesh, landmarks) = canonicalize(mesh, landmarks).map_err(PipelineError::Load)?;
    let landmark_text: String = landmarks.vertex_ids.iter().map(|v| format!("{v}\n")).collect();
    let punctured = excise_landmarks(&mesh, &landmarks).map_err(PipelineError::Excise)?;
    let decomposition = pants_decompose(&punctured).map_err(PipelineError::Decompose)?;
    let metric = init_metric::<f64>(&punctured).map_err(PipelineError::Flow)?;
    let flow = flow_to_hyperbolic(&punctured, metric, &config.flow).map_err(PipelineError::Flow)?;
    let m = measure(&punctured, &flow.metric, &decomposition).map_err(PipelineError::Measure)?;
    let fnc = assemble(&decomposition, &m.lengths(), &m.twists(), decomposition.signature).map_err(PipelineError::Assemble)?;

    let curves = m
        .curves
        .iter()
        .map(|c| CurveSummary {
            kind: match c.kind {
                CurveKind::Interior => "interior".into(),
                CurveKind::Boundary => "boundary".into(),
            },
            edge_count: c.edge_count,
            length: c.length,
            trace: c.trace,
            twist_offset: c.twist.map(|t| t.offset),
            raw_twist_offset: c.twist.map(|t| t.raw_offset),
        })
        .collect();
    let descriptor = ShapeDescriptor {
        genus: fnc.genus,
        punctures: fnc.punctures,
        pairs: fnc.pairs,
        boundary_lengths: fnc.boundary_lengths,
        diagnostics: Diagnostics {
            residual: flow.state.residual,
            iterations: flow.iterations,
            total_area: flow.state.total_area,
            curves,
            gauss_bonnet_error: flow.state.gauss_bonnet_error,
            max_seam_error: m.max_seam_error(),
            twist_convention: TWIST_CONVENTION.into(),
        },
        provenance: Provenance {
            mesh_sha256,
            tolerance: config.flow.tolerance,
            landmarks_sha256: sha256_hex(landmark_text.as_bytes()),
            max_iterations: config.flow.max_iters,
        },
    };
    Ok(Computation { descriptor, flow_log: flow.log })
}

/// Euclidean distance between the flattened `(l_i, theta_i)` vectors.
/// Boundary lengths are constant within a stratum and left out.
pub fn shape_distance(a: &ShapeDescriptor, b: &ShapeDescriptor) -> Result<f64, PipelineError> {
    if a.signature() != b.signature() || a.pairs.len() != b.pairs.len() {
        return Err(PipelineError::SignatureMismatch { a: a.signature(), b: b.signature() });
    }
    let (x, y) = (a.coordinates().flatten(), b.coordinates().flatten());
    Ok(x.iter().zip(&y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityEntry {
    pub landmarks: usize,
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub min_angle_from_deg: f64,
    pub min_angle_to_deg: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub vertices: usize,
    pub faces: usize,
    pub triangular: bool,
    pub manifold: bool,
    pub orientable: bool,
    pub connected: bool,
    pub genus: Option<usize>,
    pub boundary_count: Option<usize>,
    /// Whether the surface stays hyperbolic with `n` landmarks excised.
    pub admissible: Vec<AdmissibilityEntry>,
    /// Faces binned by their smallest corner angle, 10 degree bins.
    pub quality: Vec<HistogramBin>,
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

fn min_angle_deg(p: [[f64; 3]; 3]) -> f64 {
    let sub = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    (0..3)
        .map(|k| {
            let (u, v) = (sub(p[(k + 1) % 3], p[k]), sub(p[(k + 2) % 3], p[k]));
            let c = dot(u, v) / (dot(u, u) * dot(v, v)).sqrt();
            c.clamp(-1.0, 1.0).acos().to_degrees()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Structural report on a mesh file. Never fails; problems are listed.
pub fn validate(source: &[u8], format: MeshFormat) -> ValidationReport {
    let mut report = ValidationReport {
        vertices: 0,
        faces: 0,
        triangular: false,
        manifold: false,
        orientable: false,
        connected: false,
        genus: None,
        boundary_count: None,
        admissible: Vec::new(),
        quality: (0..6)
            .map(|i| HistogramBin { min_angle_from_deg: 10.0 * i as f64, min_angle_to_deg: 10.0 * (i + 1) as f64, count: 0 })
            .collect(),
        problems: Vec::new(),
    };
    let raw = match std::str::from_utf8(source).map_err(|e| e.to_string()).and_then(|t| parse(t, format).map_err(|e| e.to_string())) {
        Ok(raw) => raw,
        Err(e) => {
            report.problems.push(e);
            return report;
        }
    };
    report.vertices = raw.positions.len();
    report.faces = raw.faces.len();
    let tris = match raw.triangles() {
        Ok(t) => t,
        Err(e) => {
            report.problems.push(e.to_string());
            return report;
        }
    };
    report.triangular = true;
    for t in &tris {
        let angle = min_angle_deg(t.map(|v| raw.positions[v]));
        let bin = if angle.is_finite() { ((angle / 10.0) as usize).min(5) } else { 0 };
        report.quality[bin].count += 1;
    }
    match HalfedgeMesh::new(raw.positions, tris) {
        Ok(mesh) => {
            report.manifold = true;
            report.orientable = true;
            report.connected = true;
            match mesh.signature() {
                Ok(sig) => {
                    report.genus = Some(sig.genus);
                    report.boundary_count = Some(sig.boundary_count);
                    report.admissible = (0..=5)
                        .map(|n| AdmissibilityEntry {
                            landmarks: n,
                            admissible: SurfaceSignature::new(sig.genus, sig.boundary_count + n).is_admissible(),
                        })
                        .collect();
                }
                Err(e) => report.problems.push(e.to_string()),
            }
        }
        Err(e) => {
            match &e {
                MeshError::NonOrientable(..) => report.manifold = true,
                MeshError::Disconnected(_) => {
                    report.manifold = true;
                    report.orientable = true;
                }
                _ => {}
            }
            report.problems.push(e.to_string());
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mesh::io::write_off;

    fn off(mesh: &HalfedgeMesh) -> Vec<u8> {
        write_off(mesh.positions(), mesh.faces()).into_bytes()
    }

    fn descriptor(pairs: &[(f64, f64)], punctures: usize) -> ShapeDescriptor {
        ShapeDescriptor {
            genus: 1,
            punctures,
            pairs: pairs.iter().map(|&(length, twist)| FnPair { length, twist }).collect(),
            boundary_lengths: vec![0.0; punctures],
            diagnostics: Diagnostics {
                residual: 0.0,
                iterations: 0,
                total_area: 0.0,
                curves: vec![],
                gauss_bonnet_error: 0.0,
                max_seam_error: 0.0,
                twist_convention: TWIST_CONVENTION.into(),
            },
            provenance: Provenance { mesh_sha256: String::new(), tolerance: 1e-8, landmarks_sha256: String::new(), max_iterations: 100 },
        }
    }

    #[test]
    fn one_holed_torus_descriptor() {
        let t = fixtures::torus(16, 8, 3.0, 1.0);
        let c = compute_descriptor(&off(&t), MeshFormat::Off, &LandmarkSet::new(vec![0]), &PipelineConfig::default()).unwrap();
        let d = &c.descriptor;
        assert_eq!((d.genus, d.punctures, d.pairs.len()), (1, 1, 1));
        assert_eq!(d.boundary_lengths, vec![0.0]);
        assert!((d.diagnostics.total_area - std::f64::consts::TAU).abs() < 1e-6);
        assert!(d.diagnostics.residual <= d.provenance.tolerance);
        assert_eq!(c.flow_log.len(), d.diagnostics.iterations + 1);
    }

    #[test]
    fn three_punctured_sphere_is_a_point() {
        let ico = fixtures::icosphere(2);
        let lm = LandmarkSet::new(fixtures::spread_landmarks(&ico, 3));
        let d = compute_descriptor(&off(&ico), MeshFormat::Off, &lm, &PipelineConfig::default()).unwrap().descriptor;
        assert!(d.pairs.is_empty());
        assert_eq!(d.boundary_lengths, vec![0.0; 3]);
    }

    #[test]
    fn twice_punctured_sphere_fails_at_excision() {
        let ico = fixtures::icosphere(2);
        let lm = LandmarkSet::new(fixtures::spread_landmarks(&ico, 2));
        let e = compute_descriptor(&off(&ico), MeshFormat::Off, &lm, &PipelineConfig::default()).unwrap_err();
        assert_eq!(e.stage(), "excise");
        assert!(matches!(e, PipelineError::Excise(MeshError::Admissibility { .. })));
    }

    #[test]
    fn output_is_byte_identical_across_runs() {
        let t = fixtures::torus(12, 6, 3.0, 1.0);
        let run = || compute_descriptor(&off(&t), MeshFormat::Off, &LandmarkSet::new(vec![5]), &PipelineConfig::default()).unwrap();
        let (a, b) = (run().descriptor.to_json(), run().descriptor.to_json());
        assert_eq!(a, b);
        assert_eq!(ShapeDescriptor::from_json(&a).unwrap(), run().descriptor);
    }

    #[test]
    fn canonical_form_forgets_labels() {
        let t = fixtures::torus(10, 6, 3.0, 1.0);
        let perm: Vec<usize> = (0..t.n_vertices()).map(|v| (v * 7 + 3) % t.n_vertices()).collect();
        let (p, f) = fixtures::relabel(t.positions(), t.faces(), &perm, 1);
        let relabelled = HalfedgeMesh::new(p, f).unwrap();
        let (a, la) = canonicalize(&t, &LandmarkSet::new(vec![4])).unwrap();
        let (b, lb) = canonicalize(&relabelled, &LandmarkSet::new(vec![perm[4]])).unwrap();
        assert_eq!(a, b);
        assert_eq!(la, lb);
    }

    #[test]
    fn distance_examples() {
        let a = descriptor(&[(1.0, 0.5)], 1);
        let mut b = a.clone();
        b.pairs[0].length += 0.3;
        assert_eq!(shape_distance(&a, &a).unwrap(), 0.0);
        assert!((shape_distance(&a, &b).unwrap() - 0.3).abs() < 1e-15);
        let mut p = descriptor(&[], 3);
        p.genus = 0;
        assert_eq!(shape_distance(&p, &p.clone()).unwrap(), 0.0);
        assert!(matches!(shape_distance(&a, &p), Err(PipelineError::SignatureMismatch { .. })));
    }

    #[test]
    fn validation_reports() {
        let (p, f) = fixtures::tetrahedron();
        let r = validate(write_off(&p, &f).as_bytes(), MeshFormat::Off);
        assert!(r.is_valid() && r.manifold && r.orientable);
        assert_eq!((r.genus, r.boundary_count), (Some(0), Some(0)));
        let adm: Vec<bool> = r.admissible.iter().map(|a| a.admissible).collect();
        assert_eq!(adm, [false, false, false, true, true, true]);
        assert_eq!(r.quality.iter().map(|b| b.count).sum::<usize>(), 4);

        // Three triangles on one edge.
        let fan = "OFF\n5 3 0\n0 0 0\n1 0 0\n0 1 0\n0 -1 0\n0 0 1\n3 0 1 2\n3 1 0 3\n3 0 1 4\n";
        let r = validate(fan.as_bytes(), MeshFormat::Off);
        assert!(!r.manifold && !r.is_valid());

        let plate = fixtures::voxel_plate(2, 1);
        let r = validate(&off(&plate), MeshFormat::Off);
        assert_eq!(r.genus, Some(2));
        assert!(r.admissible[0].admissible);

        let r = validate(b"OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2 2\n", MeshFormat::Off);
        assert!(!r.triangular);
    }
}
