//! OFF and OBJ triangle meshes with `# space:` and `# truncation:` header comments.

use convexa_core::sweep::TriMesh;
use std::fmt::Write as _;
use std::path::Path;

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

/// A mesh file before it is bound to an ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshFile {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
    pub space: Option<String>,
    pub truncation: Option<f64>,
}

impl MeshFile {
    pub fn into_mesh(self, periods: [Option<f64>; 3]) -> TriMesh {
        TriMesh::new(self.vertices, self.triangles)
            .with_periods(periods)
            .with_truncation(self.truncation)
    }
}

fn header(line: &str, out: &mut MeshFile, lineno: usize) -> Result<(), String> {
    let body = line.trim_start_matches('#').trim();
    if let Some(s) = body.strip_prefix("space:") {
        out.space = Some(s.trim().to_string());
    } else if let Some(s) = body.strip_prefix("truncation:") {
        let t: f64 = s
            .trim()
            .parse()
            .map_err(|_| format!("line {lineno}: bad truncation `{}`", s.trim()))?;
        if !t.is_finite() {
            return Err(format!("line {lineno}: truncation must be finite"));
        }
        out.truncation = Some(t);
    }
    Ok(())
}

fn number<T: std::str::FromStr>(tok: Option<&str>, lineno: usize, what: &str) -> Result<T, String> {
    tok.ok_or_else(|| format!("line {lineno}: missing {what}"))?
        .parse()
        .map_err(|_| format!("line {lineno}: bad {what}"))
}

fn fan(poly: &[usize], out: &mut Vec<[usize; 3]>) {
    for k in 1..poly.len() - 1 {
        out.push([poly[0], poly[k], poly[k + 1]]);
    }
}

pub fn parse_off(text: &str) -> Result<MeshFile, String> {
    let mut out = MeshFile {
        vertices: Vec::new(),
        triangles: Vec::new(),
        space: None,
        truncation: None,
    };
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            header(line, &mut out, i + 1)?;
        } else if !line.is_empty() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                lines.push((i + 1, line));
            }
        }
    }
    let mut it = lines.into_iter();
    let (n0, first) = it.next().ok_or("empty OFF file")?;
    let counts = match first.strip_prefix("OFF") {
        Some(rest) if !rest.trim().is_empty() => (n0, rest.trim()),
        Some(_) => it.next().ok_or("OFF file has no counts line")?,
        None => return Err(format!("line {n0}: missing OFF keyword")),
    };
    let mut tok = counts.1.split_whitespace();
    let nv: usize = number(tok.next(), counts.0, "vertex count")?;
    let nf: usize = number(tok.next(), counts.0, "face count")?;
    for _ in 0..nv {
        let (ln, line) = it.next().ok_or("OFF file ends inside the vertex list")?;
        let mut tok = line.split_whitespace();
        let p: [f64; 3] = [
            number(tok.next(), ln, "coordinate")?,
            number(tok.next(), ln, "coordinate")?,
            number(tok.next(), ln, "coordinate")?,
        ];
        if p.iter().any(|x| !x.is_finite()) {
            return Err(format!("line {ln}: non-finite coordinate"));
        }
        out.vertices.push(p);
    }
    for _ in 0..nf {
        let (ln, line) = it.next().ok_or("OFF file ends inside the face list")?;
        let mut tok = line.split_whitespace();
        let k: usize = number(tok.next(), ln, "face size")?;
        if k < 3 {
            return Err(format!("line {ln}: face with {k} vertices"));
        }
        let poly = (0..k)
            .map(|_| number::<usize>(tok.next(), ln, "vertex index"))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(&bad) = poly.iter().find(|&&v| v >= nv) {
            return Err(format!("line {ln}: vertex index {bad} out of range"));
        }
        fan(&poly, &mut out.triangles);
    }
    Ok(out)
}

pub fn parse_obj(text: &str) -> Result<MeshFile, String> {
    let mut out = MeshFile {
        vertices: Vec::new(),
        triangles: Vec::new(),
        space: None,
        truncation: None,
    };
    let mut faces: Vec<(usize, Vec<i64>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.starts_with('#') {
            header(line, &mut out, ln)?;
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("v") => {
                let p: [f64; 3] = [
                    number(tok.next(), ln, "coordinate")?,
                    number(tok.next(), ln, "coordinate")?,
                    number(tok.next(), ln, "coordinate")?,
                ];
                if p.iter().any(|x| !x.is_finite()) {
                    return Err(format!("line {ln}: non-finite coordinate"));
                }
                out.vertices.push(p);
            }
            Some("f") => {
                let idx = tok
                    .map(|t| number::<i64>(t.split('/').next(), ln, "vertex index"))
                    .collect::<Result<Vec<_>, _>>()?;
                if idx.len() < 3 {
                    return Err(format!("line {ln}: face with {} vertices", idx.len()));
                }
                faces.push((ln, idx));
            }
            _ => {}
        }
    }
    let nv = out.vertices.len() as i64;
    for (ln, idx) in faces {
        let poly = idx
            .iter()
            .map(|&k| {
                let v = if k < 0 { nv + k } else { k - 1 };
                if (0..nv).contains(&v) {
                    Ok(v as usize)
                } else {
                    Err(format!("line {ln}: vertex index {k} out of range"))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        fan(&poly, &mut out.triangles);
    }
    Ok(out)
}

pub fn read_mesh(path: &Path) -> Result<MeshFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    match MeshFormat::from_path(path) {
        Some(MeshFormat::Obj) => parse_obj(&text),
        Some(MeshFormat::Off) => parse_off(&text),
        None if text.trim_start().starts_with("OFF") => parse_off(&text),
        None => parse_obj(&text),
    }
    .map_err(|e| format!("{}: {e}", path.display()))
}

fn headers(s: &mut String, space: &str, truncation: Option<f64>) {
    let _ = writeln!(s, "# space: {space}");
    if let Some(t) = truncation {
        let _ = writeln!(s, "# truncation: {t:?}");
    }
}

/// Serializes with shortest round-trip float formatting.
pub fn write_mesh(mesh: &TriMesh, space: &str, format: MeshFormat) -> String {
    let mut s = String::new();
    match format {
        MeshFormat::Off => {
            s.push_str("OFF\n");
            headers(&mut s, space, mesh.truncation);
            let _ = writeln!(s, "{} {} 0", mesh.vertices.len(), mesh.triangles.len());
            for p in &mesh.vertices {
                let _ = writeln!(s, "{:?} {:?} {:?}", p[0], p[1], p[2]);
            }
            for t in &mesh.triangles {
                let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
            }
        }
        MeshFormat::Obj => {
            headers(&mut s, space, mesh.truncation);
            for p in &mesh.vertices {
                let _ = writeln!(s, "v {:?} {:?} {:?}", p[0], p[1], p[2]);
            }
            for t in &mesh.triangles {
                let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> TriMesh {
        TriMesh::new(
            vec![
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.1],
                [0.1, 0.2, 1.0 / 3.0],
            ],
            vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]],
        )
        .with_truncation(Some(0.25))
    }

    #[test]
    fn round_trip_both_formats() {
        let m = tetra();
        for f in [MeshFormat::Off, MeshFormat::Obj] {
            let text = write_mesh(&m, "heisenberg tau=0.5", f);
            let back = match f {
                MeshFormat::Off => parse_off(&text),
                MeshFormat::Obj => parse_obj(&text),
            }
            .unwrap();
            assert_eq!(back.vertices, m.vertices);
            assert_eq!(back.triangles, m.triangles);
            assert_eq!(back.space.as_deref(), Some("heisenberg tau=0.5"));
            assert_eq!(back.truncation, Some(0.25));
        }
    }

    #[test]
    fn polygons_are_fanned_and_obj_indices_resolved() {
        let m = parse_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1/1 2/2 3/3 -1\n").unwrap();
        assert_eq!(m.triangles, vec![[0, 1, 2], [0, 2, 3]]);
        let m = parse_off("OFF 4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n").unwrap();
        assert_eq!(m.triangles.len(), 2);
    }

    #[test]
    fn malformed_input() {
        assert!(parse_off("").is_err());
        assert!(parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n").is_err());
        assert!(parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n").is_err());
        assert!(parse_off("OFF\n1 0 0\n0 nan 0\n").is_err());
        assert!(parse_obj("v 0 0 0\nf 1 2 3\n").is_err());
        assert!(parse_obj("# truncation: x\n").is_err());
    }
}
