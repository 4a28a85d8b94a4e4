//! Mesh and field file formats.
//!
//! Meshes are OFF files with triangular faces, or JSON objects
//! `{"vertex_count": n, "triangles": [[i, j, k], ...]}`. Fields are
//! whitespace-separated exact values (`2`, `-0.125`, `1/3`), one per vertex;
//! `#` starts a comment, and a `# codomain: circle` line selects the circle.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plmorse::{Codomain, LevelOrder, MorseError, ScalarField};
use crate::surface::{SurfaceError, TriSurface};
use crate::value::Value;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: not a number: {token:?}")]
    NonNumeric { line: usize, token: String },
    #[error("expected {expected} values, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Morse(#[from] MorseError),
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse { line, message: message.into() }
}

/// Mesh in the JSON exchange format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshJson {
    pub vertex_count: usize,
    pub triangles: Vec<[usize; 3]>,
}

/// Parses an OFF or JSON mesh and validates it.
pub fn parse_mesh(text: &str) -> Result<TriSurface, IoError> {
    if text.trim_start().starts_with('{') {
        let m: MeshJson = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
        return Ok(TriSurface::new(m.vertex_count, m.triangles)?);
    }
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (n, header) = lines.next().ok_or_else(|| parse_err(1, "empty mesh file"))?;
    let rest = header.strip_prefix("OFF").ok_or_else(|| parse_err(n, "missing OFF header"))?.trim();
    let (n, counts) = if rest.is_empty() {
        lines.next().ok_or_else(|| parse_err(n + 1, "missing counts line"))?
    } else {
        (n, rest)
    };
    let nums: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(n, format!("bad count {t:?}"))))
        .collect::<Result<_, _>>()?;
    let [v, f] = match nums[..] {
        [v, f] | [v, f, _] => [v, f],
        _ => return Err(parse_err(n, "expected \"V F E\"")),
    };
    for k in 0..v {
        let (line, coords) = lines.next().ok_or_else(|| parse_err(n, format!("missing vertex {k}")))?;
        for t in coords.split_whitespace() {
            t.parse::<f64>().map_err(|_| parse_err(line, format!("bad coordinate {t:?}")))?;
        }
    }
    let mut triangles = Vec::with_capacity(f);
    for k in 0..f {
        let (line, face) = lines.next().ok_or_else(|| parse_err(n, format!("missing face {k}")))?;
        let ids: Vec<usize> = face
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(line, format!("bad index {t:?}"))))
            .collect::<Result<_, _>>()?;
        match ids[..] {
            [3, a, b, c] => {
                if a.max(b).max(c) >= v {
                    return Err(parse_err(line, "vertex index out of range"));
                }
                triangles.push([a, b, c]);
            }
            _ => return Err(parse_err(line, "faces must be \"3 i j k\"")),
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "trailing data"));
    }
    Ok(TriSurface::new(v, triangles)?)
}

/// Codomain declared by a `# codomain: ...` comment, if any.
pub fn declared_codomain(text: &str) -> Option<Codomain> {
    text.lines().find_map(|l| {
        let rest = l.trim().strip_prefix('#')?.trim().strip_prefix("codomain:")?.trim();
        match rest {
            "real" => Some(Codomain::Real),
            "circle" => Some(Codomain::Circle),
            _ => None,
        }
    })
}

/// Parses field values; circle values are reduced mod 1.
pub fn parse_field(text: &str, codomain: Codomain) -> Result<ScalarField, IoError> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let data = line.split('#').next().unwrap_or("");
        for token in data.split_whitespace() {
            let v: Value =
                token.parse().map_err(|_| IoError::NonNumeric { line: i + 1, token: token.to_string() })?;
            values.push(v);
        }
    }
    Ok(ScalarField::new(codomain, values))
}

/// Parses a field for a mesh, checking the count and the circle spread.
pub fn parse_field_for(text: &str, codomain: Codomain, s: &TriSurface) -> Result<ScalarField, IoError> {
    let f = parse_field(text, codomain)?;
    if f.len() != s.vertex_count() {
        return Err(IoError::CountMismatch { expected: s.vertex_count(), found: f.len() });
    }
    if codomain == Codomain::Circle {
        LevelOrder::new(s, &f)?;
    }
    Ok(f)
}

pub fn write_off(s: &TriSurface) -> String {
    let mut out = format!("OFF\n{} {} {}\n", s.vertex_count(), s.triangle_count(), s.edge_count());
    for _ in 0..s.vertex_count() {
        out.push_str("0 0 0\n");
    }
    for [a, b, c] in s.triangles() {
        let _ = writeln!(out, "3 {a} {b} {c}");
    }
    out
}

pub fn write_mesh_json(s: &TriSurface) -> String {
    let m = MeshJson { vertex_count: s.vertex_count(), triangles: s.triangles().to_vec() };
    serde_json::to_string(&m).expect("mesh serializes")
}

pub fn write_field(f: &ScalarField) -> String {
    let mut out = String::new();
    if f.codomain() == Codomain::Circle {
        out.push_str("# codomain: circle\n");
    }
    for v in f.values() {
        let _ = writeln!(out, "{v}");
    }
    out
}
