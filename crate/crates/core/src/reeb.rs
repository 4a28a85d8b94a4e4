//! Kronrod–Reeb graph of a PL Morse map.
//!
//! The construction works in rank space. Nodes are the critical sites and
//! the boundary cycles; consecutive node ranks bound open slabs. Each
//! triangle is cut at the node ranks strictly inside its span into
//! segments, and a union-find joins segments that share an edge inside a
//! slab, and segments on either side of a node level where the triangle's
//! level piece is not part of the critical component. The resulting classes
//! are the graph edges. For circle-valued maps rank space is a cycle and the
//! last slab wraps around.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::plmorse::{Codomain, LevelOrder, MorseData, MorseError, ScalarField};
use crate::surface::{NamedSurface, SurfaceClass, TriSurface};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReebError {
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error("critical vertex {vertex} shares a level component with an extremum or boundary cycle at the same value")]
    DegenerateLevel { vertex: usize },
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("no saddle, but no row of the c1 = 0 classification matches")]
    UnclassifiableNoSaddle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeKind {
    /// A boundary cycle.
    Boundary,
    /// A local minimum or maximum.
    Extremum,
    /// A critical level component containing saddles.
    Saddle,
    /// Placeholder vertex on graphs without genuine vertices.
    Anchor,
}

impl NodeKind {
    pub fn symbol(self) -> &'static str {
        match self {
            NodeKind::Boundary => "D",
            NodeKind::Extremum => "E",
            NodeKind::Saddle => "C",
            NodeKind::Anchor => "anchor",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReebNode {
    pub kind: NodeKind,
    pub level: Value,
    /// Critical vertex ids, or the boundary cycle id for boundary nodes.
    pub witnesses: Vec<usize>,
}

/// A regular level component inside an edge: a doubled unrolled rank and
/// the triangles meeting that level component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSample {
    pub position2: usize,
    pub triangles: Vec<usize>,
}

/// Edge oriented by ascent from `lower` to `upper`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReebEdge {
    pub lower: usize,
    pub upper: usize,
    /// Increase of the map along the edge (for circle maps, counted on the
    /// universal cover).
    pub length: Value,
    pub internal: bool,
    #[serde(skip)]
    pub sample: Option<LevelSample>,
}

impl ReebEdge {
    pub fn new(lower: usize, upper: usize, length: Value) -> Self {
        ReebEdge { lower, upper, length, internal: false, sample: None }
    }

    pub fn is_loop(&self) -> bool {
        self.lower == self.upper
    }

    pub fn other(&self, n: usize) -> usize {
        if self.lower == n {
            self.upper
        } else {
            self.lower
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReebGraph {
    pub codomain: Codomain,
    pub nodes: Vec<ReebNode>,
    pub edges: Vec<ReebEdge>,
    /// Number of regular level components, for graphs built around an
    /// anchor.
    pub covering_degree: Option<usize>,
}

impl ReebGraph {
    /// Assembles a graph from parts and fills the internal flags.
    pub fn from_parts(codomain: Codomain, nodes: Vec<ReebNode>, edges: Vec<ReebEdge>) -> Self {
        let mut g = ReebGraph { codomain, nodes, edges, covering_degree: None };
        classify_edges(&mut g);
        g
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, n: usize) -> usize {
        self.edges.iter().map(|e| (e.lower == n) as usize + (e.upper == n) as usize).sum()
    }

    pub fn incident(&self, n: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].lower == n || self.edges[i].upper == n).collect()
    }

    pub fn count_kind(&self, kind: NodeKind) -> usize {
        self.nodes.iter().filter(|n| n.kind == kind).count()
    }

    pub fn has_anchor(&self) -> bool {
        self.nodes.iter().any(|n| n.kind == NodeKind::Anchor)
    }

    /// Number of internal edges.
    pub fn internal_count(&self) -> usize {
        self.edges.iter().filter(|e| e.internal).count()
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.nodes.len());
        for e in &self.edges {
            uf.union(e.lower, e.upper);
        }
        (0..self.nodes.len()).filter(|&n| uf.find(n) == n).count()
    }

    /// Rank of the first homology of the graph.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.component_count() - self.nodes.len()
    }

    /// Graphviz rendering: node shape by kind, label by level, internal
    /// edges bold.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph reeb {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let shape = match n.kind {
                NodeKind::Boundary => "box",
                NodeKind::Extremum => "circle",
                NodeKind::Saddle => "diamond",
                NodeKind::Anchor => "point",
            };
            let _ = writeln!(out, "  n{i} [shape={shape}, label=\"{} {}\"];", n.kind.symbol(), n.level);
        }
        for (i, e) in self.edges.iter().enumerate() {
            let style = if e.internal { "bold" } else { "solid" };
            let _ = writeln!(out, "  n{} -> n{} [style={style}, label=\"e{i}\"];", e.lower, e.upper);
        }
        out.push_str("}\n");
        out
    }
}

/// Sets `internal` on every edge: an edge is external when one of its
/// endpoints has degree one. The anchor never counts as such an endpoint.
pub fn classify_edges(g: &mut ReebGraph) {
    let deg: Vec<usize> = (0..g.nodes.len()).map(|n| g.degree(n)).collect();
    let leaf = |n: usize| g.nodes[n].kind != NodeKind::Anchor && deg[n] == 1;
    let flags: Vec<bool> = g.edges.iter().map(|e| !leaf(e.lower) && !leaf(e.upper)).collect();
    for (e, f) in g.edges.iter_mut().zip(flags) {
        e.internal = f;
    }
}

/// True when every saddle node carries exactly one critical vertex.
pub fn is_simple(g: &ReebGraph) -> bool {
    g.nodes.iter().filter(|n| n.kind == NodeKind::Saddle).all(|n| n.witnesses.len() == 1)
}

/// Fills `is_simple` and the final `is_generic` flag from the graph.
pub fn finalize_morse(md: &MorseData, g: &ReebGraph) -> MorseData {
    let simple = is_simple(g);
    let mut levels = HashSet::new();
    let distinct = g
        .nodes
        .iter()
        .filter(|n| matches!(n.kind, NodeKind::Saddle | NodeKind::Extremum))
        .all(|n| levels.insert(n.level.clone()));
    MorseData { is_simple: simple, is_generic: simple && distinct && md.is_generic, ..md.clone() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum LevelPoint {
    Vertex(usize),
    Edge(usize),
}

struct Segments {
    lo: usize,
    hi: usize,
    breaks: Vec<usize>,
    first: usize,
    critical: Vec<bool>,
}

impl Segments {
    fn count(&self) -> usize {
        self.breaks.len() + 1
    }

    fn bounds(&self, k: usize) -> (usize, usize) {
        let p = if k == 0 { self.lo } else { self.breaks[k - 1] };
        let q = if k == self.breaks.len() { self.hi } else { self.breaks[k] };
        (p, q)
    }

    /// Segment containing the doubled position `p2` (given in this
    /// triangle's unrolled coordinates).
    fn locate2(&self, p2: usize) -> usize {
        self.breaks.partition_point(|&b| 2 * b < p2)
    }
}

/// Level points of triangle `t` at unrolled position `p` in its own
/// coordinates (an interior crossing gives two points).
fn level_points(s: &TriSurface, order: &LevelOrder, t: usize, lo: usize, p: usize) -> Vec<LevelPoint> {
    let mut pts = Vec::with_capacity(2);
    let u = |v: usize| order.unroll(lo, order.rank(v));
    for v in s.triangle(t) {
        if u(v) == p {
            pts.push(LevelPoint::Vertex(v));
        }
    }
    for e in s.triangle_edges(t) {
        let [a, b] = s.edge(e);
        let (x, y) = (u(a).min(u(b)), u(a).max(u(b)));
        if x < p && p < y {
            pts.push(LevelPoint::Edge(e));
        }
    }
    pts
}

/// Components of the level set at doubled position `p2` (strictly between
/// ranks), as sorted triangle lists.
pub fn level_components(s: &TriSurface, order: &LevelOrder, p2: usize) -> Vec<Vec<usize>> {
    let tris: Vec<usize> =
        (0..s.triangle_count()).filter(|&t| order.arc_contains2(order.triangle_arc(s, t), p2)).collect();
    let index: HashMap<usize, usize> = tris.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut uf = UnionFind::new(tris.len());
    for e in 0..s.edge_count() {
        let ts = s.edge_triangles(e);
        if ts.len() == 2 && order.arc_contains2(order.edge_arc(s, e), p2) {
            uf.union(index[&ts[0]], index[&ts[1]]);
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &t) in tris.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(t);
    }
    let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
    comps.sort();
    comps
}

pub fn build_reeb(s: &TriSurface, f: &ScalarField, md: &MorseData) -> Result<ReebGraph, ReebError> {
    let order = LevelOrder::new(s, f)?;
    build_with_order(s, &order, md)
}

pub fn build_with_order(s: &TriSurface, order: &LevelOrder, md: &MorseData) -> Result<ReebGraph, ReebError> {
    let codomain = if order.is_circular() { Codomain::Circle } else { Codomain::Real };
    let sites = order.site_count();
    let node_ranks: Vec<usize> = (0..sites)
        .filter(|&r| order.rank_boundary(r).is_some() || md.index_of(order.rank_vertices(r)[0]).is_some())
        .collect();
    let m = node_ranks.len();
    if m == 0 {
        if !order.is_circular() {
            return Err(ReebError::Inconsistent("real-valued map without critical sites".into()));
        }
        let comps = level_components(s, order, 1);
        let sample = LevelSample { position2: 1, triangles: comps[0].clone() };
        let mut g = ReebGraph {
            codomain,
            nodes: vec![ReebNode { kind: NodeKind::Anchor, level: Value::zero(), witnesses: vec![] }],
            edges: vec![ReebEdge { sample: Some(sample), ..ReebEdge::new(0, 0, Value::from_int(1)) }],
            covering_degree: Some(comps.len()),
        };
        classify_edges(&mut g);
        return Ok(g);
    }
    let mut node_of = vec![None; sites];
    for (j, &r) in node_ranks.iter().enumerate() {
        node_of[r] = Some(j);
    }
    let circular = order.is_circular();

    // cut every triangle at the node ranks inside its span
    let mut segs: Vec<Segments> = Vec::with_capacity(s.triangle_count());
    let mut element_count = 0;
    for t in 0..s.triangle_count() {
        let (lo, hi) = order.triangle_arc(s, t);
        let mut breaks: Vec<usize> = node_ranks.iter().copied().filter(|&p| lo < p && p < hi).collect();
        if circular {
            breaks.extend(node_ranks.iter().map(|&p| p + sites).filter(|&p| lo < p && p < hi));
        }
        let n = breaks.len();
        segs.push(Segments { lo, hi, breaks, first: element_count, critical: vec![false; n] });
        element_count += n + 1;
    }
    let node_at = |p: usize| node_of[p % sites];

    // level union-find at each node: which pieces belong to the critical component
    let mut records: Vec<Vec<(usize, Option<usize>)>> = vec![Vec::new(); m];
    for (t, sg) in segs.iter().enumerate() {
        for (k, &b) in sg.breaks.iter().enumerate() {
            records[node_at(b).unwrap()].push((t, Some(k)));
        }
        if let Some(j) = node_at(sg.lo) {
            records[j].push((t, None));
        }
        if let Some(j) = node_at(sg.hi) {
            records[j].push((t, None));
        }
    }
    // per node: non-critical level components, each as one (triangle, break) witness
    let mut regular_crossings: Vec<(usize, usize)> = Vec::new();
    for (j, recs) in records.iter().enumerate() {
        let rank = node_ranks[j];
        let mut ids: HashMap<LevelPoint, usize> = HashMap::new();
        let mut pieces: Vec<Vec<LevelPoint>> = Vec::with_capacity(recs.len());
        for &(t, k) in recs {
            let sg = &segs[t];
            let p = match k {
                Some(k) => sg.breaks[k],
                None if sg.lo == rank => sg.lo,
                None => sg.hi,
            };
            let pts = level_points(s, order, t, sg.lo, p);
            for &pt in &pts {
                let next = ids.len();
                ids.entry(pt).or_insert(next);
            }
            pieces.push(pts);
        }
        let mut uf = UnionFind::new(ids.len());
        for pts in &pieces {
            for w in pts.windows(2) {
                uf.union(ids[&w[0]], ids[&w[1]]);
            }
        }
        let site_vertex = LevelPoint::Vertex(order.rank_vertices(rank)[0]);
        let root = uf.find(*ids.get(&site_vertex).ok_or_else(|| {
            ReebError::Inconsistent(format!("site of rank {rank} missing from its own level"))
        })?);
        let mut seen_regular = HashSet::new();
        for (&(t, k), pts) in recs.iter().zip(&pieces) {
            let Some(k) = k else { continue };
            let r = uf.find(ids[&pts[0]]);
            if r == root {
                segs[t].critical[k] = true;
            } else if seen_regular.insert(r) {
                regular_crossings.push((t, k));
            }
        }
    }

    // slab unions across shared edges
    let mut slab = UnionFind::new(element_count);
    for e in 0..s.edge_count() {
        let ts = s.edge_triangles(e);
        if ts.len() != 2 {
            continue;
        }
        let (lo, hi) = order.edge_arc(s, e);
        if lo == hi {
            continue;
        }
        let mut cuts = vec![lo];
        cuts.extend(node_ranks.iter().copied().filter(|&p| lo < p && p < hi));
        if circular {
            cuts.extend(node_ranks.iter().map(|&p| p + sites).filter(|&p| lo < p && p < hi));
        }
        cuts.sort_unstable();
        cuts.push(hi);
        for w in cuts.windows(2) {
            let mid2 = w[0] + w[1];
            let elem = |t: usize| {
                let sg = &segs[t];
                let shift = order.unroll(sg.lo, lo) - lo;
                sg.first + sg.locate2(mid2 + 2 * shift)
            };
            slab.union(elem(ts[0]), elem(ts[1]));
        }
    }
    let mut full = slab.clone();
    for sg in &segs {
        for (k, &crit) in sg.critical.iter().enumerate() {
            if !crit {
                full.union(sg.first + k, sg.first + k + 1);
            }
        }
    }

    // end nodes of each class
    let mut class_of: HashMap<usize, usize> = HashMap::new();
    let mut lowers: Vec<HashSet<usize>> = Vec::new();
    let mut uppers: Vec<HashSet<usize>> = Vec::new();
    let mut lower_elem: Vec<Option<usize>> = Vec::new();
    for sg in &segs {
        for k in 0..sg.count() {
            let x = sg.first + k;
            let root = full.find(x);
            let next = class_of.len();
            let c = *class_of.entry(root).or_insert(next);
            if c == lowers.len() {
                lowers.push(HashSet::new());
                uppers.push(HashSet::new());
                lower_elem.push(None);
            }
            let (p, q) = sg.bounds(k);
            let low_end = if k == 0 || sg.critical[k - 1] { node_at(p) } else { None };
            let high_end = if k == sg.breaks.len() || sg.critical[k] { node_at(q) } else { None };
            if let Some(n) = low_end {
                lowers[c].insert(n);
                lower_elem[c].get_or_insert(x);
            }
            if let Some(n) = high_end {
                uppers[c].insert(n);
            }
        }
    }
    let classes = lowers.len();
    let mut crossings = vec![0usize; classes];
    for &(t, k) in &regular_crossings {
        crossings[class_of[&full.find(segs[t].first + k)]] += 1;
    }
    let gap_len = |j: usize| -> Value {
        if j + 1 < m {
            order.rank_value(node_ranks[j + 1]).sub(order.rank_value(node_ranks[j]))
        } else {
            order.rank_value(node_ranks[0]).add(&Value::from_int(1)).sub(order.rank_value(node_ranks[m - 1]))
        }
    };
    let mut slab_members: HashMap<usize, Vec<usize>> = HashMap::new();
    for x in 0..element_count {
        slab_members.entry(slab.find(x)).or_default().push(x);
    }
    let elem_owner = |x: usize| segs.partition_point(|sg| sg.first <= x) - 1;

    let mut edges = Vec::with_capacity(classes);
    for c in 0..classes {
        if lowers[c].len() != 1 || uppers[c].len() != 1 {
            return Err(ReebError::Inconsistent(format!(
                "edge class {c} has {} lower and {} upper ends",
                lowers[c].len(),
                uppers[c].len()
            )));
        }
        let lower = *lowers[c].iter().next().unwrap();
        let upper = *uppers[c].iter().next().unwrap();
        let span = crossings[c] + 1;
        let expected_upper = if circular { (lower + span) % m } else { lower + span };
        if expected_upper != upper {
            return Err(ReebError::Inconsistent(format!("edge class {c} skips node levels")));
        }
        let mut length = Value::zero();
        for g in lower..lower + span {
            length = length.add(&gap_len(g % m));
        }
        let x = lower_elem[c].unwrap();
        let p2 = 2 * node_ranks[lower] + 1;
        let mut triangles: Vec<usize> = slab_members[&slab.find(x)]
            .iter()
            .filter_map(|&y| {
                let t = elem_owner(y);
                let (p, q) = segs[t].bounds(y - segs[t].first);
                let inside = |z: usize| 2 * p < z && z < 2 * q;
                (inside(p2) || (circular && inside(p2 + 2 * sites))).then_some(t)
            })
            .collect();
        triangles.sort_unstable();
        triangles.dedup();
        edges.push(ReebEdge {
            sample: Some(LevelSample { position2: p2, triangles }),
            ..ReebEdge::new(lower, upper, length)
        });
    }

    let nodes: Vec<ReebNode> = node_ranks
        .iter()
        .map(|&r| {
            let level = order.rank_value(r).clone();
            match order.rank_boundary(r) {
                Some(cycle) => ReebNode { kind: NodeKind::Boundary, level, witnesses: vec![cycle] },
                None => {
                    let v = order.rank_vertices(r)[0];
                    let kind = if md.index_of(v) == Some(1) { NodeKind::Saddle } else { NodeKind::Extremum };
                    ReebNode { kind, level, witnesses: vec![v] }
                }
            }
        })
        .collect();
    let mut g = collapse_flat_edges(codomain, nodes, edges)?;
    classify_edges(&mut g);
    check_invariants(&g)?;
    Ok(g)
}

/// Merges saddle nodes joined by edges of zero length: these saddles lie in
/// one component of a single level set.
fn collapse_flat_edges(codomain: Codomain, nodes: Vec<ReebNode>, edges: Vec<ReebEdge>) -> Result<ReebGraph, ReebError> {
    let mut uf = UnionFind::new(nodes.len());
    let mut kept = Vec::with_capacity(edges.len());
    for e in edges {
        if e.length.is_zero() {
            for n in [e.lower, e.upper] {
                if nodes[n].kind != NodeKind::Saddle {
                    let vertex = match nodes[n].kind {
                        NodeKind::Boundary => nodes[e.other(n)].witnesses[0],
                        _ => nodes[n].witnesses[0],
                    };
                    return Err(ReebError::DegenerateLevel { vertex });
                }
            }
            uf.union(e.lower, e.upper);
        } else {
            kept.push(e);
        }
    }
    let mut remap = vec![usize::MAX; nodes.len()];
    let mut merged: Vec<ReebNode> = Vec::new();
    for n in 0..nodes.len() {
        let root = uf.find(n);
        if remap[root] == usize::MAX {
            remap[root] = merged.len();
            merged.push(ReebNode { witnesses: vec![], ..nodes[n].clone() });
        }
        remap[n] = remap[root];
        merged[remap[n]].witnesses.extend(nodes[n].witnesses.iter().copied());
    }
    for n in &mut merged {
        n.witnesses.sort_unstable();
    }
    for e in &mut kept {
        e.lower = remap[e.lower];
        e.upper = remap[e.upper];
    }
    Ok(ReebGraph { codomain, nodes: merged, edges: kept, covering_degree: None })
}

fn check_invariants(g: &ReebGraph) -> Result<(), ReebError> {
    for (i, n) in g.nodes.iter().enumerate() {
        let deg = g.degree(i);
        match n.kind {
            NodeKind::Boundary | NodeKind::Extremum if deg != 1 => {
                return Err(ReebError::Inconsistent(format!("{} node {i} has degree {deg}", n.kind.symbol())));
            }
            NodeKind::Saddle => {
                let up = g.edges.iter().any(|e| e.lower == i);
                let down = g.edges.iter().any(|e| e.upper == i);
                if !(up && down) {
                    return Err(ReebError::Inconsistent(format!("saddle node {i} is not two-sided")));
                }
            }
            _ => {}
        }
    }
    if g.codomain == Codomain::Real && g.edges.iter().any(ReebEdge::is_loop) {
        return Err(ReebError::Inconsistent("loop in a real-valued graph".into()));
    }
    Ok(())
}

/// Rows of the classification of maps without saddles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SaddleFreeType {
    A,
    B,
    C,
    D(usize),
    E(usize),
}

impl SaddleFreeType {
    pub fn letter(self) -> &'static str {
        match self {
            SaddleFreeType::A => "A",
            SaddleFreeType::B => "B",
            SaddleFreeType::C => "C",
            SaddleFreeType::D(_) => "D",
            SaddleFreeType::E(_) => "E",
        }
    }
}

/// `Ok(None)` when the map has saddles.
pub fn detect_type(
    class: &SurfaceClass,
    codomain: Codomain,
    md: &MorseData,
    g: &ReebGraph,
) -> Result<Option<SaddleFreeType>, ReebError> {
    if md.c1 >= 1 {
        return Ok(None);
    }
    let degree = g.covering_degree.unwrap_or(1);
    let t = match (class.named(), md.c0, md.c2) {
        (Some(NamedSurface::Sphere), 1, 1) => SaddleFreeType::A,
        (Some(NamedSurface::Disk), a, b) if a + b == 1 => SaddleFreeType::B,
        (Some(NamedSurface::Annulus), 0, 0) => SaddleFreeType::C,
        (Some(NamedSurface::Torus), 0, 0) if codomain == Codomain::Circle => SaddleFreeType::D(degree),
        (Some(NamedSurface::Klein), 0, 0) if codomain == Codomain::Circle => SaddleFreeType::E(degree),
        _ => return Err(ReebError::UnclassifiableNoSaddle),
    };
    Ok(Some(t))
}
