//! ASCII OFF / OBJ readers and the landmark file format.

use std::path::Path;

use super::{HalfedgeMesh, MeshError, Point3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    Obj,
}

impl MeshFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "off" => Some(Self::Off),
            "obj" => Some(Self::Obj),
            _ => None,
        }
    }
}

/// Vertex positions and polygon faces exactly as read from a file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawMesh {
    pub positions: Vec<Point3>,
    pub faces: Vec<Vec<usize>>,
}

impl RawMesh {
    /// Triangle faces, or `NonTriangular` for the first polygon that is not.
    pub fn triangles(&self) -> Result<Vec<[usize; 3]>, MeshError> {
        self.faces
            .iter()
            .enumerate()
            .map(|(i, f)| match f.as_slice() {
                &[a, b, c] => Ok([a, b, c]),
                _ => Err(MeshError::NonTriangular { face: i, arity: f.len() }),
            })
            .collect()
    }

    pub fn into_mesh(self) -> Result<HalfedgeMesh, MeshError> {
        let tris = self.triangles()?;
        HalfedgeMesh::new(self.positions, tris)
    }
}

pub fn parse(source: &str, format: MeshFormat) -> Result<RawMesh, MeshError> {
    match format {
        MeshFormat::Off => parse_off(source),
        MeshFormat::Obj => parse_obj(source),
    }
}

/// Parses and validates a mesh.
pub fn load_mesh(source: &[u8], format: MeshFormat) -> Result<HalfedgeMesh, MeshError> {
    let text = std::str::from_utf8(source).map_err(|e| MeshError::Parse { line: 0, message: format!("not UTF-8: {e}") })?;
    parse(text, format)?.into_mesh()
}

fn perr(line: usize, message: impl Into<String>) -> MeshError {
    MeshError::Parse { line, message: message.into() }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64, MeshError> {
    let v: f64 = tok.parse().map_err(|_| perr(line, format!("bad number `{tok}`")))?;
    if !v.is_finite() {
        return Err(perr(line, format!("non-finite coordinate `{tok}`")));
    }
    Ok(v)
}

pub fn parse_off(source: &str) -> Result<RawMesh, MeshError> {
    // (line number, token) stream with comments stripped
    let mut tokens = source.lines().enumerate().flat_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        l.split_whitespace().map(move |t| (i + 1, t))
    });
    let mut next = |what: &str| tokens.next().ok_or_else(|| perr(0, format!("unexpected end of file, expected {what}")));

    let (line, head) = next("OFF header")?;
    if head != "OFF" {
        return Err(perr(line, format!("expected `OFF` header, found `{head}`")));
    }
    let mut count = |what: &str| -> Result<usize, MeshError> {
        let (line, t) = next(what)?;
        t.parse().map_err(|_| perr(line, format!("bad {what} `{t}`")))
    };
    let nv = count("vertex count")?;
    let nf = count("face count")?;
    let _ne = count("edge count")?;

    let mut positions = Vec::with_capacity(nv);
    for _ in 0..nv {
        let mut p = [0.0; 3];
        for c in &mut p {
            let (line, t) = next("vertex coordinate")?;
            *c = parse_f64(t, line)?;
        }
        positions.push(p);
    }
    // Faces may carry trailing colour values; read the arity then the indices,
    // then skip whatever else is on the line.
    let rest: Vec<(usize, &str)> = tokens.collect();
    let mut faces = Vec::with_capacity(nf);
    let mut i = 0;
    while faces.len() < nf {
        let &(line, t) = rest.get(i).ok_or_else(|| perr(0, "unexpected end of file in face list"))?;
        let arity: usize = t.parse().map_err(|_| perr(line, format!("bad face arity `{t}`")))?;
        let mut f = Vec::with_capacity(arity);
        for k in 0..arity {
            let &(l2, t) = rest.get(i + 1 + k).ok_or_else(|| perr(line, "truncated face"))?;
            if l2 != line {
                return Err(perr(line, "face indices must be on one line"));
            }
            let v: usize = t.parse().map_err(|_| perr(line, format!("bad vertex index `{t}`")))?;
            if v >= nv {
                return Err(perr(line, format!("vertex index {v} out of range")));
            }
            f.push(v);
        }
        i += 1 + arity;
        while i < rest.len() && rest[i].0 == line {
            i += 1;
        }
        faces.push(f);
    }
    Ok(RawMesh { positions, faces })
}

pub fn parse_obj(source: &str) -> Result<RawMesh, MeshError> {
    let mut positions = Vec::new();
    let mut faces = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let l = raw.split('#').next().unwrap_or("");
        let mut toks = l.split_whitespace();
        match toks.next() {
            Some("v") => {
                let c: Vec<&str> = toks.collect();
                if c.len() < 3 {
                    return Err(perr(line, "vertex needs three coordinates"));
                }
                positions.push([parse_f64(c[0], line)?, parse_f64(c[1], line)?, parse_f64(c[2], line)?]);
            }
            Some("f") => {
                let mut f = Vec::new();
                for t in toks {
                    let idx = t.split('/').next().unwrap_or("");
                    let k: i64 = idx.parse().map_err(|_| perr(line, format!("bad face index `{t}`")))?;
                    let n = positions.len() as i64;
                    let v = match k {
                        k if k > 0 && k <= n => k - 1,
                        k if k < 0 && -k <= n => n + k,
                        _ => return Err(perr(line, format!("face index {k} out of range"))),
                    };
                    f.push(v as usize);
                }
                faces.push(f);
            }
            _ => {}
        }
    }
    Ok(RawMesh { positions, faces })
}

/// Whitespace separated 0-based vertex indices; `#` starts a comment.
pub fn parse_landmarks(source: &str) -> Result<Vec<usize>, MeshError> {
    let mut out = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        for t in raw.split('#').next().unwrap_or("").split_whitespace() {
            out.push(t.parse().map_err(|_| perr(i + 1, format!("bad landmark index `{t}`")))?);
        }
    }
    Ok(out)
}

pub fn write_off(positions: &[Point3], faces: &[[usize; 3]]) -> String {
    let mut s = format!("OFF\n{} {} 0\n", positions.len(), faces.len());
    for p in positions {
        s.push_str(&format!("{:?} {:?} {:?}\n", p[0], p[1], p[2]));
    }
    for f in faces {
        s.push_str(&format!("3 {} {} {}\n", f[0], f[1], f[2]));
    }
    s
}

pub fn write_obj(positions: &[Point3], faces: &[[usize; 3]]) -> String {
    let mut s = String::new();
    for p in positions {
        s.push_str(&format!("v {:?} {:?} {:?}\n", p[0], p[1], p[2]));
    }
    for f in faces {
        s.push_str(&format!("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const TETRA_OFF: &str = "OFF\n# regular tetrahedron\n4 4 6\n1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n3 0 1 2\n3 0 3 1\n3 0 2 3\n3 1 3 2\n";

    #[test]
    fn reads_tetrahedron_off() {
        let m = load_mesh(TETRA_OFF.as_bytes(), MeshFormat::Off).unwrap();
        assert_eq!((m.n_vertices(), m.n_edges(), m.n_faces()), (4, 6, 4));
        let s = m.signature().unwrap();
        assert_eq!((s.genus, s.boundary_count), (0, 0));
    }

    #[test]
    fn reads_cube_obj() {
        let (p, f) = crate::fixtures::cube();
        let text = write_obj(&p, &f).replace("f 1 ", "f 1/1/1 ");
        let m = load_mesh(text.as_bytes(), MeshFormat::Obj).unwrap();
        assert_eq!((m.n_vertices(), m.n_edges(), m.n_faces()), (8, 18, 12));
        assert_eq!(m.euler_characteristic(), 2);
    }

    #[test]
    fn quad_face_is_rejected() {
        let src = "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n";
        assert_eq!(load_mesh(src.as_bytes(), MeshFormat::Off), Err(MeshError::NonTriangular { face: 0, arity: 4 }));
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        for src in ["OFX\n", "OFF\n3 1 0\n0 0 0\n", "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n", "OFF\n1 0 0\n0 nan 0\n"] {
            assert!(matches!(parse_off(src), Err(MeshError::Parse { .. })), "{src:?}");
        }
        assert!(matches!(parse_obj("v 0 0 0\nf 1 2 3\n"), Err(MeshError::Parse { .. })));
    }

    #[test]
    fn obj_negative_indices() {
        let raw = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n").unwrap();
        assert_eq!(raw.faces, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn landmark_file() {
        let ids = parse_landmarks("# eyes\n3\n 17 # left\n\n42\n").unwrap();
        assert_eq!(ids, vec![3, 17, 42]);
        assert!(parse_landmarks("x\n").is_err());
        assert_eq!(parse_landmarks("1 2\t5\n").unwrap(), vec![1, 2, 5]);
    }

    #[test]
    fn off_round_trip() {
        let (p, f) = crate::fixtures::icosahedron();
        let raw = parse_off(&write_off(&p, &f)).unwrap();
        assert_eq!(raw.positions, p);
        assert_eq!(raw.triangles().unwrap(), f);
    }
}
