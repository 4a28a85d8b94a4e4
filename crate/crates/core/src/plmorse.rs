//! Piecewise-linear Morse analysis on a triangulated surface.
//!
//! Vertices are ordered by simulation of simplicity: `(value, id)`
//! lexicographically. A boundary cycle carries a single value and is
//! treated as one ordered site keyed by its smallest vertex id, so the
//! whole cycle sits at one rank of the order.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::surface::{euler_characteristic, TriSurface};
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Codomain {
    Real,
    Circle,
}

/// Vertex values of a map into `R` or `R/Z`. Circle values are kept as
/// representatives in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarField {
    codomain: Codomain,
    values: Vec<Value>,
}

impl ScalarField {
    pub fn new(codomain: Codomain, values: Vec<Value>) -> Self {
        let values = match codomain {
            Codomain::Real => values,
            Codomain::Circle => values.iter().map(Value::frac).collect(),
        };
        ScalarField { codomain, values }
    }

    pub fn real(values: Vec<Value>) -> Self {
        Self::new(Codomain::Real, values)
    }

    pub fn circle(values: Vec<Value>) -> Self {
        Self::new(Codomain::Circle, values)
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self::real(values.iter().map(|&v| Value::from_int(v)).collect())
    }

    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn value(&self, v: usize) -> &Value {
        &self.values[v]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map_values(&self, f: impl Fn(&Value) -> Value) -> Self {
        Self::new(self.codomain, self.values.iter().map(f).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorseError {
    #[error("field has {found} values but the mesh has {expected} vertices")]
    CountMismatch { expected: usize, found: usize },
    #[error("vertex {0} lies on the boundary")]
    BoundaryVertexQueried(usize),
    #[error("vertex {vertex} is a saddle of multiplicity {multiplicity}")]
    DegenerateSaddle { vertex: usize, multiplicity: u32 },
    #[error("boundary vertex {vertex} is critical")]
    BoundaryCritical { vertex: usize },
    #[error("boundary cycle {cycle} is not a level set")]
    NonLevelBoundary { cycle: usize },
    #[error("c0 - c1 + c2 = {c0} - {c1} + {c2} differs from the Euler characteristic {chi}")]
    MorseEqualityViolated { c0: usize, c1: usize, c2: usize, chi: i64 },
    #[error("triangle {triangle} spans half of the circle or more")]
    CircleSpreadViolation { triangle: usize },
    #[error("triangle {triangle} lies inside a single boundary level")]
    FlatTriangle { triangle: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexType {
    Regular,
    Min,
    Max,
    Saddle(u32),
}

impl VertexType {
    pub fn index(self) -> Option<u8> {
        match self {
            VertexType::Regular => None,
            VertexType::Min => Some(0),
            VertexType::Saddle(_) => Some(1),
            VertexType::Max => Some(2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseData {
    /// `(vertex, index)` with index 0, 1 or 2, sorted by vertex.
    pub critical_points: Vec<(usize, u8)>,
    pub c0: usize,
    pub c1: usize,
    pub c2: usize,
    pub is_generic: bool,
    pub is_simple: bool,
}

impl MorseData {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.c0, self.c1, self.c2)
    }

    pub fn critical_vertices(&self) -> Vec<usize> {
        self.critical_points.iter().map(|&(v, _)| v).collect()
    }

    pub fn index_of(&self, v: usize) -> Option<u8> {
        self.critical_points
            .binary_search_by_key(&v, |&(u, _)| u)
            .ok()
            .map(|i| self.critical_points[i].1)
    }
}

pub fn morse_counts(md: &MorseData) -> (usize, usize, usize) {
    md.counts()
}

/// Total order on sites with circular wrap-around for circle-valued fields.
///
/// Ranks run over `0..site_count()`. Arcs are returned in "unrolled" rank
/// coordinates: the low end lies in `0..S` and the high end may exceed `S`
/// when the arc crosses the top of the circle.
#[derive(Debug, Clone)]
pub struct LevelOrder {
    circular: bool,
    vertex_rank: Vec<usize>,
    rank_value: Vec<Value>,
    rank_vertices: Vec<Vec<usize>>,
    rank_boundary: Vec<Option<usize>>,
}

impl LevelOrder {
    pub fn new(s: &TriSurface, f: &ScalarField) -> Result<Self, MorseError> {
        if f.len() != s.vertex_count() {
            return Err(MorseError::CountMismatch { expected: s.vertex_count(), found: f.len() });
        }
        let mut sites: Vec<(Value, usize, Vec<usize>, Option<usize>)> = Vec::new();
        for (ci, cycle) in s.boundary_cycles().iter().enumerate() {
            let value = f.value(cycle[0]);
            if cycle.iter().any(|&v| f.value(v) != value) {
                return Err(MorseError::NonLevelBoundary { cycle: ci });
            }
            let key = *cycle.iter().min().unwrap();
            sites.push((value.clone(), key, cycle.clone(), Some(ci)));
        }
        for v in 0..s.vertex_count() {
            if !s.is_boundary_vertex(v) {
                sites.push((f.value(v).clone(), v, vec![v], None));
            }
        }
        sites.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut vertex_rank = vec![0; s.vertex_count()];
        let mut rank_value = Vec::with_capacity(sites.len());
        let mut rank_vertices = Vec::with_capacity(sites.len());
        let mut rank_boundary = Vec::with_capacity(sites.len());
        for (r, (value, _, verts, cycle)) in sites.into_iter().enumerate() {
            for &v in &verts {
                vertex_rank[v] = r;
            }
            rank_value.push(value);
            rank_vertices.push(verts);
            rank_boundary.push(cycle);
        }
        let order = LevelOrder {
            circular: f.codomain() == Codomain::Circle,
            vertex_rank,
            rank_value,
            rank_vertices,
            rank_boundary,
        };
        if order.circular {
            for t in 0..s.triangle_count() {
                if !order.spread_ok(&s.triangle(t)) {
                    return Err(MorseError::CircleSpreadViolation { triangle: t });
                }
            }
        }
        Ok(order)
    }

    pub fn is_circular(&self) -> bool {
        self.circular
    }

    pub fn site_count(&self) -> usize {
        self.rank_value.len()
    }

    pub fn rank(&self, v: usize) -> usize {
        self.vertex_rank[v]
    }

    pub fn rank_value(&self, r: usize) -> &Value {
        &self.rank_value[r]
    }

    pub fn rank_vertices(&self, r: usize) -> &[usize] {
        &self.rank_vertices[r]
    }

    /// Boundary cycle id when rank `r` is a boundary site.
    pub fn rank_boundary(&self, r: usize) -> Option<usize> {
        self.rank_boundary[r]
    }

    /// True when `u` precedes `v` in the local order. Equal sites are
    /// never lower than each other.
    pub fn lower(&self, u: usize, v: usize) -> bool {
        let (ru, rv) = (self.rank(u), self.rank(v));
        if ru == rv {
            return false;
        }
        if !self.circular {
            return ru < rv;
        }
        let d = self.rank_value[rv].circle_delta(&self.rank_value[ru]);
        if d.is_zero() {
            ru < rv
        } else {
            d.is_negative()
        }
    }

    fn spread_ok(&self, tri: &[usize; 3]) -> bool {
        let half = Value::ratio(1, 2);
        tri.iter().any(|&a| {
            let fa = &self.rank_value[self.rank(a)];
            tri.iter().all(|&b| {
                let d = fa.circle_delta(&self.rank_value[self.rank(b)]);
                !d.is_negative() && d < half
            })
        })
    }

    fn lowest(&self, vs: &[usize]) -> usize {
        let mut best = vs[0];
        for &v in &vs[1..] {
            if self.lower(v, best) {
                best = v;
            }
        }
        best
    }

    /// Unrolled rank of `r` seen from an arc starting at `lo`.
    pub fn unroll(&self, lo: usize, r: usize) -> usize {
        if self.circular {
            lo + (r + self.site_count() - lo) % self.site_count()
        } else {
            r
        }
    }

    /// Unrolled `(lo, hi)` rank span of a simplex given by its vertices.
    pub fn arc(&self, vs: &[usize]) -> (usize, usize) {
        let lo = self.rank(self.lowest(vs));
        let hi = vs.iter().map(|&v| self.unroll(lo, self.rank(v))).max().unwrap();
        (lo, hi)
    }

    pub fn edge_arc(&self, s: &TriSurface, e: usize) -> (usize, usize) {
        self.arc(&s.edge(e))
    }

    pub fn triangle_arc(&self, s: &TriSurface, t: usize) -> (usize, usize) {
        self.arc(&s.triangle(t))
    }

    /// Whether the doubled position `p2` (twice an unrolled rank, possibly
    /// odd) lies in the open arc, trying both lifts.
    pub fn arc_contains2(&self, arc: (usize, usize), p2: usize) -> bool {
        let (a, b) = (2 * arc.0, 2 * arc.1);
        if a < p2 && p2 < b {
            return true;
        }
        self.circular && {
            let q = p2 + 2 * self.site_count();
            a < q && q < b
        }
    }
}

/// Lower-link classification of an interior vertex.
pub fn vertex_type(s: &TriSurface, f: &ScalarField, v: usize) -> Result<VertexType, MorseError> {
    let order = LevelOrder::new(s, f)?;
    classify_vertex(s, &order, v)
}

pub fn classify_vertex(s: &TriSurface, order: &LevelOrder, v: usize) -> Result<VertexType, MorseError> {
    if s.is_boundary_vertex(v) {
        return Err(MorseError::BoundaryVertexQueried(v));
    }
    let link = &s.link(v).vertices;
    let lower: Vec<bool> = link.iter().map(|&u| order.lower(u, v)).collect();
    let n_lower = lower.iter().filter(|&&x| x).count();
    if n_lower == 0 {
        return Ok(VertexType::Min);
    }
    if n_lower == lower.len() {
        return Ok(VertexType::Max);
    }
    let runs = (0..lower.len())
        .filter(|&i| lower[i] && !lower[(i + lower.len() - 1) % lower.len()])
        .count() as u32;
    Ok(if runs == 1 { VertexType::Regular } else { VertexType::Saddle(runs - 1) })
}

/// Classifies every vertex and checks the boundary conditions and the
/// Morse equality. `is_simple` is provisional until the Reeb graph is
/// built; `is_generic` here only means pairwise distinct critical values.
pub fn validate_morse(s: &TriSurface, f: &ScalarField) -> Result<MorseData, MorseError> {
    let order = LevelOrder::new(s, f)?;
    validate_with_order(s, &order)
}

pub fn validate_with_order(s: &TriSurface, order: &LevelOrder) -> Result<MorseData, MorseError> {
    for t in 0..s.triangle_count() {
        let [a, b, c] = s.triangle(t);
        if order.rank(a) == order.rank(b) && order.rank(b) == order.rank(c) {
            return Err(MorseError::FlatTriangle { triangle: t });
        }
    }
    for cycle in s.boundary_cycles() {
        let mut side: Option<bool> = None;
        for &v in cycle {
            for &e in s.vertex_edges(v) {
                let u = s.opposite_endpoint(e, v);
                if order.rank(u) == order.rank(v) {
                    if !s.is_boundary_edge(e) {
                        return Err(MorseError::BoundaryCritical { vertex: v });
                    }
                    continue;
                }
                let up = order.lower(v, u);
                if *side.get_or_insert(up) != up {
                    return Err(MorseError::BoundaryCritical { vertex: v });
                }
            }
        }
    }
    let mut critical_points = Vec::new();
    for v in 0..s.vertex_count() {
        if s.is_boundary_vertex(v) {
            continue;
        }
        match classify_vertex(s, order, v)? {
            VertexType::Saddle(m) if m >= 2 => {
                return Err(MorseError::DegenerateSaddle { vertex: v, multiplicity: m })
            }
            ty => {
                if let Some(i) = ty.index() {
                    critical_points.push((v, i));
                }
            }
        }
    }
    let count = |i: u8| critical_points.iter().filter(|p| p.1 == i).count();
    let (c0, c1, c2) = (count(0), count(1), count(2));
    let chi = euler_characteristic(s);
    if c0 as i64 - c1 as i64 + c2 as i64 != chi {
        return Err(MorseError::MorseEqualityViolated { c0, c1, c2, chi });
    }
    let mut seen = HashSet::new();
    let distinct = critical_points.iter().all(|&(v, _)| seen.insert(order.rank_value(order.rank(v)).clone()));
    Ok(MorseData { critical_points, c0, c1, c2, is_generic: distinct, is_simple: true })
}
