//! Combinatorial compact surfaces: validation, Euler characteristic,
//! orientability and the classification triple `(orientable, genus, b)`.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error("empty triangle list")]
    Empty,
    #[error("triangle {triangle} references vertex {vertex}, but the mesh has {vertex_count} vertices")]
    VertexOutOfRange { triangle: usize, vertex: usize, vertex_count: usize },
    #[error("triangle {triangle} repeats a vertex")]
    DegenerateTriangle { triangle: usize },
    #[error("triangle {triangle} duplicates the vertex triple of triangle {other}")]
    DuplicateTriangle { triangle: usize, other: usize },
    #[error("edge ({a}, {b}) is contained in {count} triangles")]
    NonManifoldEdge { a: usize, b: usize, count: usize },
    #[error("link of vertex {vertex} is neither a simple cycle nor a simple path")]
    BadLink { vertex: usize },
    #[error("vertex {vertex} is not used by any triangle")]
    IsolatedVertex { vertex: usize },
    #[error("triangle adjacency graph is disconnected")]
    Disconnected,
}

/// Ordered link of a vertex: a cycle for interior vertices, a path for
/// boundary vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub vertices: Vec<usize>,
    pub closed: bool,
}

/// A validated triangulated compact connected surface.
///
/// Immutable after construction. Vertex coordinates are not part of the
/// model.
#[derive(Debug, Clone)]
pub struct TriSurface {
    vertex_count: usize,
    triangles: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    edge_lookup: HashMap<(usize, usize), usize>,
    edge_triangles: Vec<Vec<usize>>,
    triangle_edges: Vec<[usize; 3]>,
    vertex_triangles: Vec<Vec<usize>>,
    vertex_edges: Vec<Vec<usize>>,
    links: Vec<Link>,
    boundary_cycles: Vec<Vec<usize>>,
    vertex_boundary: Vec<Option<usize>>,
    orientation: Option<Vec<bool>>,
}

/// Checks a triangle soup and builds the surface; the vertex count is taken
/// from the largest index used.
pub fn validate_surface(raw_triangles: &[[usize; 3]]) -> Result<TriSurface, SurfaceError> {
    let n = raw_triangles
        .iter()
        .flat_map(|t| t.iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    TriSurface::new(n, raw_triangles.to_vec())
}

impl TriSurface {
    pub fn new(vertex_count: usize, triangles: Vec<[usize; 3]>) -> Result<Self, SurfaceError> {
        if triangles.is_empty() {
            return Err(SurfaceError::Empty);
        }
        let mut seen: HashMap<[usize; 3], usize> = HashMap::new();
        for (ti, t) in triangles.iter().enumerate() {
            for &v in t {
                if v >= vertex_count {
                    return Err(SurfaceError::VertexOutOfRange { triangle: ti, vertex: v, vertex_count });
                }
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(SurfaceError::DegenerateTriangle { triangle: ti });
            }
            let mut key = *t;
            key.sort_unstable();
            if let Some(&other) = seen.get(&key) {
                return Err(SurfaceError::DuplicateTriangle { triangle: ti, other });
            }
            seen.insert(key, ti);
        }

        let mut edges: Vec<[usize; 2]> = Vec::new();
        let mut edge_lookup = HashMap::new();
        let mut edge_triangles: Vec<Vec<usize>> = Vec::new();
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        let mut vertex_triangles = vec![Vec::new(); vertex_count];
        for (ti, t) in triangles.iter().enumerate() {
            let mut te = [0usize; 3];
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let id = *edge_lookup.entry(key).or_insert_with(|| {
                    edges.push([key.0, key.1]);
                    edge_triangles.push(Vec::new());
                    edges.len() - 1
                });
                edge_triangles[id].push(ti);
                te[k] = id;
                vertex_triangles[t[k]].push(ti);
            }
            triangle_edges.push(te);
        }
        for (id, ts) in edge_triangles.iter().enumerate() {
            if ts.len() > 2 {
                return Err(SurfaceError::NonManifoldEdge { a: edges[id][0], b: edges[id][1], count: ts.len() });
            }
        }
        if let Some(v) = vertex_triangles.iter().position(|ts| ts.is_empty()) {
            return Err(SurfaceError::IsolatedVertex { vertex: v });
        }
        let mut vertex_edges = vec![Vec::new(); vertex_count];
        for (id, e) in edges.iter().enumerate() {
            vertex_edges[e[0]].push(id);
            vertex_edges[e[1]].push(id);
        }

        let links = (0..vertex_count)
            .map(|v| build_link(v, &triangles, &vertex_triangles[v]))
            .collect::<Result<Vec<_>, _>>()?;

        let mut surface = TriSurface {
            vertex_count,
            triangles,
            edges,
            edge_lookup,
            edge_triangles,
            triangle_edges,
            vertex_triangles,
            vertex_edges,
            links,
            boundary_cycles: Vec::new(),
            vertex_boundary: vec![None; vertex_count],
            orientation: None,
        };
        if !surface.triangle_graph_connected() {
            return Err(SurfaceError::Disconnected);
        }
        surface.boundary_cycles = surface.trace_boundary_cycles();
        for (ci, cycle) in surface.boundary_cycles.iter().enumerate() {
            for &v in cycle {
                surface.vertex_boundary[v] = Some(ci);
            }
        }
        surface.orientation = surface.propagate_orientation(0);
        Ok(surface)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> [usize; 3] {
        self.triangles[t]
    }

    /// Edges as sorted vertex pairs.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_lookup.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn edge_triangles(&self, e: usize) -> &[usize] {
        &self.edge_triangles[e]
    }

    /// Edge ids of triangle `t`, in the order `(t0 t1), (t1 t2), (t2 t0)`.
    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    /// Triangles in the star of `v`.
    pub fn vertex_star(&self, v: usize) -> &[usize] {
        &self.vertex_triangles[v]
    }

    pub fn vertex_edges(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    pub fn link(&self, v: usize) -> &Link {
        &self.links[v]
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_triangles[e].len() == 1
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&e| self.is_boundary_edge(e))
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        !self.links[v].closed
    }

    /// Boundary cycles as closed vertex sequences (first vertex not repeated).
    pub fn boundary_cycles(&self) -> &[Vec<usize>] {
        &self.boundary_cycles
    }

    /// Index of the boundary cycle through `v`, if any.
    pub fn boundary_cycle_of(&self, v: usize) -> Option<usize> {
        self.vertex_boundary[v]
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation.is_some()
    }

    /// The other endpoint of edge `e` seen from `v`.
    pub fn opposite_endpoint(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Vertex triple of `t` in a coherent orientation when the surface is
    /// orientable, otherwise in input order.
    pub fn oriented_triangle(&self, t: usize) -> [usize; 3] {
        let [a, b, c] = self.triangles[t];
        match &self.orientation {
            Some(flip) if flip[t] => [a, c, b],
            _ => [a, b, c],
        }
    }

    /// `+1` when the coherent boundary orientation of `t` traverses edge `e`
    /// from its smaller to its larger endpoint, `-1` otherwise.
    pub fn edge_sign_in(&self, t: usize, e: usize) -> i64 {
        let [lo, hi] = self.edges[e];
        let tri = self.oriented_triangle(t);
        for k in 0..3 {
            if tri[k] == lo && tri[(k + 1) % 3] == hi {
                return 1;
            }
            if tri[k] == hi && tri[(k + 1) % 3] == lo {
                return -1;
            }
        }
        panic!("edge {e} is not in triangle {t}");
    }

    /// Neighbouring triangle across edge `e`.
    pub fn across(&self, t: usize, e: usize) -> Option<usize> {
        self.edge_triangles[e].iter().copied().find(|&s| s != t)
    }

    fn triangle_graph_connected(&self) -> bool {
        let mut seen = vec![false; self.triangles.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(t) = queue.pop_front() {
            for &e in &self.triangle_edges[t] {
                if let Some(s) = self.across(t, e) {
                    if !seen[s] {
                        seen[s] = true;
                        count += 1;
                        queue.push_back(s);
                    }
                }
            }
        }
        count == self.triangles.len()
    }

    fn trace_boundary_cycles(&self) -> Vec<Vec<usize>> {
        let mut next: HashMap<usize, Vec<usize>> = HashMap::new();
        for e in self.boundary_edges() {
            let [a, b] = self.edges[e];
            next.entry(a).or_default().push(b);
            next.entry(b).or_default().push(a);
        }
        let mut starts: Vec<usize> = next.keys().copied().collect();
        starts.sort_unstable();
        let mut visited = HashSet::new();
        let mut cycles = Vec::new();
        for s in starts {
            if visited.contains(&s) {
                continue;
            }
            let mut cycle = vec![s];
            visited.insert(s);
            let mut prev = s;
            let mut cur = next[&s][0];
            while cur != s {
                visited.insert(cur);
                cycle.push(cur);
                let nb = &next[&cur];
                let step = if nb[0] == prev { nb[1] } else { nb[0] };
                prev = cur;
                cur = step;
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Coherent orientation by breadth-first propagation from `start`.
    /// `Some(flips)` when consistent, `None` for non-orientable surfaces.
    pub fn propagate_orientation(&self, start: usize) -> Option<Vec<bool>> {
        let n = self.triangles.len();
        let mut flip: Vec<Option<bool>> = vec![None; n];
        flip[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        let directed = |t: usize, f: bool, a: usize, b: usize| -> bool {
            let [x, y, z] = self.triangles[t];
            let tri = if f { [x, z, y] } else { [x, y, z] };
            (0..3).any(|k| tri[k] == a && tri[(k + 1) % 3] == b)
        };
        while let Some(t) = queue.pop_front() {
            let ft = flip[t].unwrap();
            for &e in &self.triangle_edges[t] {
                let Some(s) = self.across(t, e) else { continue };
                let [a, b] = self.edges[e];
                let t_ab = directed(t, ft, a, b);
                // neighbour must traverse the shared edge the other way
                let want = !t_ab;
                let s_ab_unflipped = directed(s, false, a, b);
                let fs = s_ab_unflipped != want;
                match flip[s] {
                    None => {
                        flip[s] = Some(fs);
                        queue.push_back(s);
                    }
                    Some(existing) if existing != fs => return None,
                    Some(_) => {}
                }
            }
        }
        Some(flip.into_iter().map(|f| f.unwrap()).collect())
    }
}

fn build_link(v: usize, triangles: &[[usize; 3]], star: &[usize]) -> Result<Link, SurfaceError> {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &t in star {
        let others: Vec<usize> = triangles[t].iter().copied().filter(|&x| x != v).collect();
        adj.entry(others[0]).or_default().push(others[1]);
        adj.entry(others[1]).or_default().push(others[0]);
    }
    let bad = || SurfaceError::BadLink { vertex: v };
    if adj.values().any(|n| n.len() > 2) {
        return Err(bad());
    }
    let ends: Vec<usize> = {
        let mut e: Vec<usize> = adj.iter().filter(|(_, n)| n.len() == 1).map(|(&k, _)| k).collect();
        e.sort_unstable();
        e
    };
    let closed = match ends.len() {
        0 => true,
        2 => false,
        _ => return Err(bad()),
    };
    let start = if closed { *adj.keys().min().unwrap() } else { ends[0] };
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let nb = &adj[&cur];
        let step = nb.iter().copied().find(|&x| x != prev && !(order.len() > 1 && x == order[order.len() - 2]));
        let step = match step {
            Some(s) if s != start => s,
            _ => break,
        };
        if order.contains(&step) {
            return Err(bad());
        }
        prev = cur;
        cur = step;
        order.push(cur);
    }
    if order.len() != adj.len() {
        return Err(bad());
    }
    if closed && !adj[&cur].contains(&start) {
        return Err(bad());
    }
    Ok(Link { vertices: order, closed })
}

/// `V - E + F`.
pub fn euler_characteristic(s: &TriSurface) -> i64 {
    s.vertex_count() as i64 - s.edge_count() as i64 + s.triangle_count() as i64
}

/// Classification triple. `genus` is the orientable genus, or the number of
/// crosscaps for non-orientable surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceClass {
    pub orientable: bool,
    pub genus: u32,
    pub boundary_count: u32,
    pub euler_characteristic: i64,
}

/// The named surfaces that appear in the classification tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedSurface {
    Sphere,
    Disk,
    Annulus,
    Torus,
    ProjectivePlane,
    Mobius,
    Klein,
}

impl SurfaceClass {
    pub fn new(orientable: bool, genus: u32, boundary_count: u32) -> Self {
        let euler_characteristic = if orientable {
            2 - 2 * genus as i64 - boundary_count as i64
        } else {
            2 - genus as i64 - boundary_count as i64
        };
        SurfaceClass { orientable, genus, boundary_count, euler_characteristic }
    }

    pub fn named(&self) -> Option<NamedSurface> {
        use NamedSurface::*;
        match (self.orientable, self.genus, self.boundary_count) {
            (true, 0, 0) => Some(Sphere),
            (true, 0, 1) => Some(Disk),
            (true, 0, 2) => Some(Annulus),
            (true, 1, 0) => Some(Torus),
            (false, 1, 0) => Some(ProjectivePlane),
            (false, 1, 1) => Some(Mobius),
            (false, 2, 0) => Some(Klein),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self.named() {
            Some(NamedSurface::Sphere) => "S2".into(),
            Some(NamedSurface::Disk) => "D2".into(),
            Some(NamedSurface::Annulus) => "S1xI".into(),
            Some(NamedSurface::Torus) => "T2".into(),
            Some(NamedSurface::ProjectivePlane) => "RP2".into(),
            Some(NamedSurface::Mobius) => "Mobius".into(),
            Some(NamedSurface::Klein) => "Klein".into(),
            None if self.orientable => format!("orientable(g={}, b={})", self.genus, self.boundary_count),
            None => format!("non-orientable(g={}, b={})", self.genus, self.boundary_count),
        }
    }
}

pub fn classify_surface(s: &TriSurface) -> SurfaceClass {
    let chi = euler_characteristic(s);
    let b = s.boundary_cycles().len() as i64;
    let orientable = s.is_orientable();
    let genus = if orientable { (2 - b - chi) / 2 } else { 2 - b - chi };
    SurfaceClass { orientable, genus: genus as u32, boundary_count: b as u32, euler_characteristic: chi }
}

/// Row of the rank table the surface falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiffIdType {
    /// `S²`, `D²`, `S¹×I`, `T²`, `RP²` with any number of holes.
    One,
    /// Orientable, not of type one.
    Two,
    /// Non-orientable, not of type one.
    Three,
}

impl DiffIdType {
    pub fn number(self) -> u8 {
        match self {
            DiffIdType::One => 1,
            DiffIdType::Two => 2,
            DiffIdType::Three => 3,
        }
    }
}

pub fn diffid_type(c: &SurfaceClass) -> DiffIdType {
    if c.orientable {
        match (c.genus, c.boundary_count) {
            (0, 0) | (0, 1) | (0, 2) | (1, 0) => DiffIdType::One,
            _ => DiffIdType::Two,
        }
    } else if c.genus == 1 {
        DiffIdType::One
    } else {
        DiffIdType::Three
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn tetrahedron_is_a_sphere() {
        let s = validate_surface(&corpus::tetrahedron_triangles()).unwrap();
        assert_eq!(s.boundary_edges().count(), 0);
        assert_eq!(euler_characteristic(&s), 2);
        let c = classify_surface(&s);
        assert_eq!(c, SurfaceClass::new(true, 0, 0));
        assert_eq!(c.named(), Some(NamedSurface::Sphere));
    }

    #[test]
    fn single_triangle_is_a_disk() {
        let s = validate_surface(&[[0, 1, 2]]).unwrap();
        assert_eq!(s.boundary_edges().count(), 3);
        assert_eq!(s.boundary_cycles().len(), 1);
        assert_eq!(classify_surface(&s), SurfaceClass::new(true, 0, 1));
    }

    #[test]
    fn third_triangle_on_an_edge_is_rejected() {
        let err = validate_surface(&[[0, 1, 2], [0, 1, 3], [0, 1, 4]]).unwrap_err();
        assert_eq!(err, SurfaceError::NonManifoldEdge { a: 0, b: 1, count: 3 });
    }

    #[test]
    fn other_validation_errors() {
        assert_eq!(validate_surface(&[]).unwrap_err(), SurfaceError::Empty);
        assert!(matches!(validate_surface(&[[0, 0, 1]]), Err(SurfaceError::DegenerateTriangle { .. })));
        assert!(matches!(
            validate_surface(&[[0, 1, 2], [2, 1, 0]]),
            Err(SurfaceError::DuplicateTriangle { triangle: 1, other: 0 })
        ));
        // two disks sharing only a vertex: the link of 0 is two arcs
        assert!(matches!(
            validate_surface(&[[0, 1, 2], [0, 3, 4]]),
            Err(SurfaceError::BadLink { vertex: 0 })
        ));
        assert!(matches!(
            TriSurface::new(4, vec![[0, 1, 2]]),
            Err(SurfaceError::IsolatedVertex { vertex: 3 })
        ));
        let mut two = corpus::tetrahedron_triangles();
        two.extend(corpus::tetrahedron_triangles().iter().map(|t| t.map(|v| v + 4)));
        assert_eq!(validate_surface(&two).unwrap_err(), SurfaceError::Disconnected);
    }

    #[test]
    fn mobius_band_five_vertices() {
        let s = validate_surface(&corpus::mobius5_triangles()).unwrap();
        assert_eq!((s.vertex_count(), s.edge_count(), s.triangle_count()), (5, 10, 5));
        assert_eq!(euler_characteristic(&s), 0);
        assert_eq!(s.boundary_cycles().len(), 1);
        assert_eq!(s.boundary_cycles()[0].len(), 5);
        assert_eq!(classify_surface(&s), SurfaceClass::new(false, 1, 1));
    }

    #[test]
    fn csaszar_torus() {
        let s = validate_surface(&corpus::csaszar_torus_triangles()).unwrap();
        assert_eq!((s.vertex_count(), s.edge_count(), s.triangle_count()), (7, 21, 14));
        assert_eq!(euler_characteristic(&s), 0);
        assert_eq!(classify_surface(&s), SurfaceClass::new(true, 1, 0));
    }

    #[test]
    fn orientation_is_independent_of_start() {
        for tris in [
            corpus::tetrahedron_triangles(),
            corpus::mobius5_triangles(),
            corpus::csaszar_torus_triangles(),
            corpus::rp2_triangles(),
        ] {
            let s = validate_surface(&tris).unwrap();
            let expected = s.is_orientable();
            for start in 0..s.triangle_count() {
                assert_eq!(s.propagate_orientation(start).is_some(), expected);
            }
        }
    }

    #[test]
    fn oriented_triangles_are_coherent() {
        let s = validate_surface(&corpus::csaszar_torus_triangles()).unwrap();
        for e in 0..s.edge_count() {
            let ts = s.edge_triangles(e);
            assert_eq!(s.edge_sign_in(ts[0], e), -s.edge_sign_in(ts[1], e));
        }
    }

    #[test]
    fn diffid_type_classification() {
        assert_eq!(diffid_type(&SurfaceClass::new(true, 1, 0)), DiffIdType::One);
        assert_eq!(diffid_type(&SurfaceClass::new(false, 1, 1)), DiffIdType::One);
        assert_eq!(diffid_type(&SurfaceClass::new(false, 1, 3)), DiffIdType::One);
        assert_eq!(diffid_type(&SurfaceClass::new(true, 2, 0)), DiffIdType::Two);
        assert_eq!(diffid_type(&SurfaceClass::new(true, 0, 3)), DiffIdType::Two);
        assert_eq!(diffid_type(&SurfaceClass::new(false, 2, 0)), DiffIdType::Three);
    }
}
