//! First homology of `M \ Σ` and the action of twists along level curves.
//!
//! `M \ Σ` is modelled by the full subcomplex `K'` of the barycentric
//! subdivision spanned by all vertices except the punctures; `K'` is a
//! deformation retract of `M \ Σ`. Classes are computed by a tree–cotree
//! reduction: chains are written on the non-tree edges of a spanning tree of
//! the 1-skeleton, then dual-forest triangles eliminate the cotree edges.
//!
//! A level curve is traced as a dual path through the triangles of a regular
//! level component. Intersection numbers are counted on primal edges;
//! subdivision chains are pushed to primal chains by the vertex map sending
//! each barycentre to a vertex of its carrier.
//!
//! Independence of twists uses the variation of each twist: the map
//! `x ↦ ⟨x, γ⟩ γ` from relative classes of `(M, Σ ∪ ∂M)` to `H_1(M \ Σ)`.
//! The absolute pairing alone vanishes for separating curves, so it cannot
//! see twists on genus-zero surfaces; the absolute version is still
//! available as [`absolute_twists_independent`].

use std::collections::{HashMap, HashSet, VecDeque};

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::linalg::{self, QuotientReducer, Rat};
use crate::plmorse::LevelOrder;
use crate::reeb::ReebGraph;
use crate::surface::TriSurface;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("edge {edge} is not internal")]
    NotInternal { edge: usize },
    #[error("edge {edge} carries no level sample")]
    MissingSample { edge: usize },
    #[error("level component of edge {edge} is not a simple closed curve")]
    BrokenCurve { edge: usize },
    #[error("puncture {vertex} is a boundary vertex")]
    PunctureOnBoundary { vertex: usize },
    #[error("punctured surface is disconnected")]
    Disconnected,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("integral twist independence needs an orientable surface")]
    NonOrientableUnsupported,
}

/// Edge chain on the subdivision, indexed by subdivision edge id.
pub type SdChain = Vec<i64>;

/// The subcomplex `K'` with its tree–cotree data.
#[derive(Debug, Clone)]
pub struct HomologyBasis {
    primal_vertices: usize,
    primal_edges: usize,
    edges: Vec<[usize; 2]>,
    edge_index: HashMap<(usize, usize), usize>,
    triangles: Vec<[usize; 3]>,
    tri_edges: Vec<[usize; 3]>,
    tree_parent: HashMap<usize, (usize, usize)>,
    depth: HashMap<usize, usize>,
    cotree_order: Vec<(usize, usize)>,
    generators: Vec<usize>,
    relations: Vec<Vec<i64>>,
    rank: usize,
    reducer: QuotientReducer,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b { (a, b) } else { (b, a) }
}

/// Builds `K'` for the surface punctured at `punctures` (interior vertices).
pub fn h1_basis(s: &TriSurface, punctures: &[usize]) -> Result<HomologyBasis, HomologyError> {
    let (nv, ne) = (s.vertex_count(), s.edge_count());
    let puncture: HashSet<usize> = punctures.iter().copied().collect();
    if let Some(&v) = punctures.iter().find(|&&v| s.is_boundary_vertex(v)) {
        return Err(HomologyError::PunctureOnBoundary { vertex: v });
    }
    let mid = |e: usize| nv + e;
    let centre = |t: usize| nv + ne + t;

    let mut edges = Vec::new();
    let mut edge_index = HashMap::new();
    let mut add_edge = |a: usize, b: usize, edges: &mut Vec<[usize; 2]>| {
        let k = key(a, b);
        *edge_index.entry(k).or_insert_with(|| {
            edges.push([k.0, k.1]);
            edges.len() - 1
        })
    };
    let mut triangles = Vec::new();
    let mut tri_edges = Vec::new();
    for t in 0..s.triangle_count() {
        for e in s.triangle_edges(t) {
            let (m, c) = (mid(e), centre(t));
            add_edge(m, c, &mut edges);
            for a in s.edge(e) {
                if puncture.contains(&a) {
                    continue;
                }
                let ids = [add_edge(a, m, &mut edges), add_edge(m, c, &mut edges), add_edge(a, c, &mut edges)];
                triangles.push([a, m, c]);
                tri_edges.push(ids);
            }
        }
    }
    let vertex_count = nv + ne + s.triangle_count();
    let alive = |w: usize| w >= nv || !puncture.contains(&w);

    // spanning tree of the 1-skeleton
    let mut adjacency: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (id, &[a, b]) in edges.iter().enumerate() {
        adjacency.entry(a).or_default().push((b, id));
        adjacency.entry(b).or_default().push((a, id));
    }
    let root = (0..vertex_count).find(|&w| alive(w)).ok_or(HomologyError::Disconnected)?;
    let mut tree_parent = HashMap::new();
    let mut depth = HashMap::from([(root, 0usize)]);
    let mut in_tree = vec![false; edges.len()];
    let mut queue = VecDeque::from([root]);
    while let Some(w) = queue.pop_front() {
        for &(x, id) in adjacency.get(&w).map_or(&[][..], Vec::as_slice) {
            if !depth.contains_key(&x) {
                depth.insert(x, depth[&w] + 1);
                tree_parent.insert(x, (w, id));
                in_tree[id] = true;
                queue.push_back(x);
            }
        }
    }
    if (0..vertex_count).filter(|&w| alive(w)).count() != depth.len() {
        return Err(HomologyError::Disconnected);
    }

    // dual forest through non-tree edges
    let mut edge_tris: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    for (t, ids) in tri_edges.iter().enumerate() {
        for &id in ids {
            edge_tris[id].push(t);
        }
    }
    let mut seen = vec![false; triangles.len()];
    let mut cotree = vec![false; edges.len()];
    let mut cotree_order = Vec::new();
    let mut roots = Vec::new();
    for start in 0..triangles.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        roots.push(start);
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for &id in &tri_edges[t] {
                if in_tree[id] || edge_tris[id].len() != 2 {
                    continue;
                }
                let u = edge_tris[id][0] + edge_tris[id][1] - t;
                if !seen[u] {
                    seen[u] = true;
                    cotree[id] = true;
                    cotree_order.push((u, id));
                    queue.push_back(u);
                }
            }
        }
    }
    let generators: Vec<usize> = (0..edges.len()).filter(|&id| !in_tree[id] && !cotree[id]).collect();

    let mut basis = HomologyBasis {
        primal_vertices: nv,
        primal_edges: ne,
        edges,
        edge_index,
        triangles,
        tri_edges,
        tree_parent,
        depth,
        cotree_order,
        generators,
        relations: Vec::new(),
        rank: 0,
        reducer: QuotientReducer::new(0, &[]),
    };
    let relations: Vec<Vec<i64>> = roots
        .iter()
        .map(|&t| basis.coordinates(&basis.triangle_boundary(t)))
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    basis.rank = basis.generators.len() - linalg::rank(&relations);
    basis.reducer = QuotientReducer::new(basis.generators.len(), &relations);
    basis.relations = relations;
    Ok(basis)
}

impl HomologyBasis {
    /// Free rank of `H_1(M \ Σ)`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of coordinates (generators before relations).
    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    pub fn sd_edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn sd_edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn sd_triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn sd_vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.depth.keys().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn sd_edge(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&key(a, b)).copied()
    }

    pub fn midpoint(&self, e: usize) -> usize {
        self.primal_vertices + e
    }

    pub fn centre(&self, t: usize) -> usize {
        self.primal_vertices + self.primal_edges + t
    }

    /// Adds `coef` times the oriented segment `a → b`.
    pub fn add_segment(&self, chain: &mut SdChain, a: usize, b: usize, coef: i64) {
        let id = self.sd_edge(a, b).expect("segment is not in the punctured complex");
        chain[id] += if a < b { coef } else { -coef };
    }

    pub fn zero_chain(&self) -> SdChain {
        vec![0; self.edges.len()]
    }

    fn triangle_boundary(&self, t: usize) -> SdChain {
        let mut z = self.zero_chain();
        let [a, b, c] = self.triangles[t];
        self.add_segment(&mut z, a, b, 1);
        self.add_segment(&mut z, b, c, 1);
        self.add_segment(&mut z, c, a, 1);
        z
    }

    /// Sign of local edge `k` in `∂t` for `t = [v, m, c]` with edges
    /// `[vm, mc, vc]`; ids increase along `v < m < c`.
    fn local_sign(k: usize) -> i64 {
        if k == 2 { -1 } else { 1 }
    }

    /// Coordinates of a 1-cycle on the generators.
    pub fn coordinates(&self, chain: &SdChain) -> Vec<i64> {
        let mut z = chain.clone();
        for &(t, parent) in &self.cotree_order {
            let a = z[parent];
            if a != 0 {
                let ids = self.tri_edges[t];
                let sign = Self::local_sign(ids.iter().position(|&id| id == parent).unwrap());
                for (k, &id) in ids.iter().enumerate() {
                    z[id] -= a * sign * Self::local_sign(k);
                }
            }
        }
        self.generators.iter().map(|&id| z[id]).collect()
    }

    /// Boundary of a chain, as a map from vertices to coefficients.
    pub fn boundary(&self, chain: &SdChain) -> HashMap<usize, i64> {
        let mut d: HashMap<usize, i64> = HashMap::new();
        for (id, &c) in chain.iter().enumerate() {
            if c != 0 {
                let [a, b] = self.edges[id];
                *d.entry(b).or_default() += c;
                *d.entry(a).or_default() -= c;
            }
        }
        d.retain(|_, c| *c != 0);
        d
    }

    pub fn is_cycle(&self, chain: &SdChain) -> bool {
        self.boundary(chain).is_empty()
    }

    /// Tree path from `a` to `b` added to `chain`.
    fn add_tree_path(&self, chain: &mut SdChain, mut a: usize, mut b: usize) {
        let mut tail = Vec::new();
        while a != b {
            if self.depth[&a] >= self.depth[&b] {
                let (p, id) = self.tree_parent[&a];
                chain[id] += if a < p { 1 } else { -1 };
                a = p;
            } else {
                let (p, id) = self.tree_parent[&b];
                tail.push((p, b, id));
                b = p;
            }
        }
        for (p, x, id) in tail {
            chain[id] += if p < x { 1 } else { -1 };
        }
    }

    /// Fundamental cycle of generator `j`.
    pub fn generator_cycle(&self, j: usize) -> SdChain {
        let id = self.generators[j];
        let [a, b] = self.edges[id];
        let mut z = self.zero_chain();
        z[id] += 1;
        self.add_tree_path(&mut z, b, a);
        z
    }

    /// Canonical rational coordinates of the class of `coords`.
    pub fn class_of(&self, coords: &[i64]) -> Vec<Rat> {
        self.reducer.reduce(coords)
    }

    pub fn is_null(&self, coords: &[i64]) -> bool {
        self.reducer.is_zero(coords)
    }

    pub fn same_class(&self, a: &[i64], b: &[i64]) -> bool {
        let d: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.is_null(&d)
    }

    /// Primal image of a subdivision chain.
    pub fn to_primal(&self, s: &TriSurface, chain: &SdChain) -> Vec<i64> {
        let image = |w: usize| -> usize {
            if w < self.primal_vertices {
                w
            } else if w < self.primal_vertices + self.primal_edges {
                s.edge(w - self.primal_vertices)[0]
            } else {
                *s.triangle(w - self.primal_vertices - self.primal_edges).iter().min().unwrap()
            }
        };
        let mut z = vec![0; s.edge_count()];
        for (id, &c) in chain.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let [a, b] = self.edges[id];
            let (x, y) = (image(a), image(b));
            if x != y {
                let e = s.edge_id(x, y).expect("carrier vertices are adjacent");
                z[e] += if x < y { c } else { -c };
            }
        }
        z
    }

    /// Subdivision image of a primal edge path (a cycle avoiding punctures).
    pub fn from_primal(&self, s: &TriSurface, chain: &[i64]) -> SdChain {
        let mut z = self.zero_chain();
        for (e, &c) in chain.iter().enumerate() {
            if c != 0 {
                let [a, b] = s.edge(e);
                let m = self.midpoint(e);
                self.add_segment(&mut z, a, m, c);
                self.add_segment(&mut z, m, b, c);
            }
        }
        z
    }
}

/// One crossing of a level curve with a primal edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub edge: usize,
    pub from: usize,
    pub to: usize,
}

/// A regular level component traced as a closed dual path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCurve {
    pub reeb_edge: usize,
    pub crossings: Vec<Crossing>,
    /// Whether the curve disconnects the surface.
    pub separating: bool,
}

impl LevelCurve {
    pub fn reversed(&self) -> LevelCurve {
        let crossings =
            self.crossings.iter().rev().map(|c| Crossing { edge: c.edge, from: c.to, to: c.from }).collect();
        LevelCurve { reeb_edge: self.reeb_edge, crossings, separating: self.separating }
    }

    /// Intersection number with a primal 1-chain (edge orientation from the
    /// smaller endpoint).
    pub fn pairing(&self, s: &TriSurface, chain: &[i64]) -> i64 {
        self.crossings.iter().map(|c| chain[c.edge] * s.edge_sign_in(c.from, c.edge)).sum()
    }

    /// The curve as a subdivision cycle `m_e → c_t → m_e' → …`.
    pub fn sd_chain(&self, basis: &HomologyBasis) -> SdChain {
        let mut z = basis.zero_chain();
        let n = self.crossings.len();
        for k in 0..n {
            let (c, next) = (self.crossings[k], self.crossings[(k + 1) % n]);
            let centre = basis.centre(c.to);
            basis.add_segment(&mut z, basis.midpoint(c.edge), centre, 1);
            basis.add_segment(&mut z, centre, basis.midpoint(next.edge), 1);
        }
        z
    }

    /// Subdivision loop starting and ending at the midpoint of the `k`-th
    /// crossed edge.
    pub fn sd_loop_from(&self, basis: &HomologyBasis, k: usize, coef: i64) -> SdChain {
        let n = self.crossings.len();
        let mut z = basis.zero_chain();
        for i in 0..n {
            let (c, next) = (self.crossings[(k + i) % n], self.crossings[(k + i + 1) % n]);
            let centre = basis.centre(c.to);
            basis.add_segment(&mut z, basis.midpoint(c.edge), centre, coef);
            basis.add_segment(&mut z, centre, basis.midpoint(next.edge), coef);
        }
        z
    }
}

/// Traces the level sample carried by a Reeb edge.
pub fn trace_level_curve(
    s: &TriSurface,
    order: &LevelOrder,
    g: &ReebGraph,
    edge: usize,
) -> Result<LevelCurve, HomologyError> {
    let sample = g.edges[edge].sample.as_ref().ok_or(HomologyError::MissingSample { edge })?;
    let broken = HomologyError::BrokenCurve { edge };
    let p2 = sample.position2;
    let members: HashSet<usize> = sample.triangles.iter().copied().collect();
    let crossed = |t: usize| -> Vec<usize> {
        s.triangle_edges(t).into_iter().filter(|&e| order.arc_contains2(order.edge_arc(s, e), p2)).collect()
    };
    let start = *sample.triangles.iter().min().ok_or(broken.clone())?;
    let first = crossed(start);
    if first.len() != 2 {
        return Err(broken);
    }
    let mut crossings = Vec::new();
    let (mut t, mut e) = (start, first[0].min(first[1]));
    loop {
        let next = s.across(t, e).filter(|u| members.contains(u)).ok_or(broken.clone())?;
        crossings.push(Crossing { edge: e, from: t, to: next });
        if crossings.len() > members.len() {
            return Err(broken);
        }
        let out = crossed(next);
        if out.len() != 2 || !out.contains(&e) {
            return Err(broken);
        }
        let exit = out[0] + out[1] - e;
        t = next;
        e = exit;
        if t == start {
            break;
        }
    }
    if crossings.len() != members.len() {
        return Err(broken);
    }
    let separating = separates(s, &crossings);
    Ok(LevelCurve { reeb_edge: edge, crossings, separating })
}

/// Cuts the surface along the curve and counts pieces.
fn separates(s: &TriSurface, crossings: &[Crossing]) -> bool {
    // crossed triangle -> (entry edge, exit edge)
    let mut cut: HashMap<usize, (usize, usize)> = HashMap::new();
    let n = crossings.len();
    for k in 0..n {
        cut.insert(crossings[k].to, (crossings[k].edge, crossings[(k + 1) % n].edge));
    }
    let mut slot = HashMap::new();
    let mut count = 0;
    for t in 0..s.triangle_count() {
        slot.insert(t, count);
        count += if cut.contains_key(&t) { 2 } else { 1 };
    }
    // piece of triangle `t` containing its corner `v`
    let piece = |t: usize, v: usize| -> usize {
        match cut.get(&t) {
            Some(&(a, b)) => {
                let [x, y] = s.edge(a);
                let corner = if s.edge(b).contains(&x) { x } else { y };
                slot[&t] + usize::from(v != corner)
            }
            None => slot[&t],
        }
    };
    let mut uf = UnionFind::new(count);
    for e in 0..s.edge_count() {
        let ts = s.edge_triangles(e);
        if ts.len() != 2 {
            continue;
        }
        for v in s.edge(e) {
            uf.union(piece(ts[0], v), piece(ts[1], v));
        }
    }
    (0..count).any(|i| uf.find(i) != uf.find(0))
}

/// Relative 1-cycles of `(M, Σ ∪ ∂M)`: fundamental cycles of the edge graph
/// with all of `Σ ∪ ∂M` identified to one point.
pub fn relative_cycles(s: &TriSurface, punctures: &[usize]) -> Vec<Vec<i64>> {
    let special: HashSet<usize> =
        punctures.iter().copied().chain((0..s.vertex_count()).filter(|&v| s.is_boundary_vertex(v))).collect();
    let node = |v: usize| if special.contains(&v) { usize::MAX } else { v };
    let mut adjacency: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for e in 0..s.edge_count() {
        let [a, b] = s.edge(e);
        adjacency.entry(node(a)).or_default().push((e, node(b)));
        adjacency.entry(node(b)).or_default().push((e, node(a)));
    }
    let root = node(0);
    let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut depth = HashMap::from([(root, 0usize)]);
    let mut tree = vec![false; s.edge_count()];
    let mut queue = VecDeque::from([root]);
    while let Some(w) = queue.pop_front() {
        for &(e, x) in &adjacency[&w] {
            if !depth.contains_key(&x) {
                depth.insert(x, depth[&w] + 1);
                parent.insert(x, (w, e));
                tree[e] = true;
                queue.push_back(x);
            }
        }
    }
    // +1 when walking `e` from quotient node `from` agrees with `lo → hi`
    let step = |e: usize, from: usize| if node(s.edge(e)[0]) == from { 1 } else { -1 };
    let mut cycles = Vec::new();
    for e in 0..s.edge_count() {
        if tree[e] {
            continue;
        }
        let mut z = vec![0; s.edge_count()];
        z[e] = 1;
        let [a, b] = s.edge(e);
        let (mut x, mut y) = (node(b), node(a));
        let mut tail = Vec::new();
        while x != y {
            if depth[&x] >= depth[&y] {
                let (p, te) = parent[&x];
                z[te] += step(te, x);
                x = p;
            } else {
                let (p, te) = parent[&y];
                tail.push((te, p));
                y = p;
            }
        }
        for (te, p) in tail {
            z[te] += step(te, p);
        }
        cycles.push(z);
    }
    cycles
}

/// Level curves of the internal edges with their classes and pairings.
#[derive(Debug, Clone)]
pub struct TwistSystem {
    pub orientable: bool,
    pub curves: Vec<LevelCurve>,
    /// Coordinates of each curve on the homology generators.
    pub classes: Vec<Vec<i64>>,
    /// `pairing[i][j] = ⟨g_j, γ_i⟩` for the generator cycles `g_j`.
    pub pairing: Vec<Vec<i64>>,
    /// `relative_pairing[i][k] = ⟨z_k, γ_i⟩` for the relative cycles `z_k`.
    pub relative_pairing: Vec<Vec<i64>>,
    /// `intersection[i][j] = ⟨γ_i, γ_j⟩`.
    pub intersection: Vec<Vec<i64>>,
    pub relations: Vec<Vec<i64>>,
}

impl TwistSystem {
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.pairing.first().map_or(0, Vec::len)
    }

    /// Keeps only the listed curves, in that order (repeats allowed).
    pub fn select(&self, indices: &[usize]) -> TwistSystem {
        let pick = |v: &Vec<Vec<i64>>| indices.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
        TwistSystem {
            orientable: self.orientable,
            curves: indices.iter().map(|&i| self.curves[i].clone()).collect(),
            classes: pick(&self.classes),
            pairing: pick(&self.pairing),
            relative_pairing: pick(&self.relative_pairing),
            intersection: indices.iter().map(|&i| indices.iter().map(|&j| self.intersection[i][j]).collect()).collect(),
            relations: self.relations.clone(),
        }
    }
}

/// Class of the level curve of an internal edge.
pub fn level_cycle(
    s: &TriSurface,
    order: &LevelOrder,
    g: &ReebGraph,
    edge: usize,
    basis: &HomologyBasis,
) -> Result<(LevelCurve, Vec<i64>), HomologyError> {
    if !g.edges[edge].internal {
        return Err(HomologyError::NotInternal { edge });
    }
    let curve = trace_level_curve(s, order, g, edge)?;
    let coords = basis.coordinates(&curve.sd_chain(basis));
    Ok((curve, coords))
}

pub fn twist_system(
    s: &TriSurface,
    order: &LevelOrder,
    g: &ReebGraph,
    punctures: &[usize],
) -> Result<TwistSystem, HomologyError> {
    let basis = h1_basis(s, punctures)?;
    let generators: Vec<Vec<i64>> =
        (0..basis.dimension()).map(|j| basis.to_primal(s, &basis.generator_cycle(j))).collect();
    let relative = relative_cycles(s, punctures);
    let mut curves = Vec::new();
    let mut classes = Vec::new();
    for e in (0..g.edge_count()).filter(|&e| g.edges[e].internal) {
        let (curve, coords) = level_cycle(s, order, g, e, &basis)?;
        curves.push(curve);
        classes.push(coords);
    }
    let pairing = curves.iter().map(|c| generators.iter().map(|z| c.pairing(s, z)).collect()).collect();
    let relative_pairing = curves.iter().map(|c| relative.iter().map(|z| c.pairing(s, z)).collect()).collect();
    let primal: Vec<Vec<i64>> = curves.iter().map(|c| basis.to_primal(s, &c.sd_chain(&basis))).collect();
    let intersection = primal.iter().map(|z| curves.iter().map(|c| c.pairing(s, z)).collect()).collect();
    Ok(TwistSystem {
        orientable: s.is_orientable(),
        curves,
        classes,
        pairing,
        relative_pairing,
        intersection,
        relations: basis.relations().to_vec(),
    })
}

/// Image of a class under `∏ τ_i^{m_i}`: `x + Σ m_i ⟨x, γ_i⟩ γ_i`.
pub fn twist_action(t: &TwistSystem, m: &[i64], x: &[i64]) -> Result<Vec<i64>, HomologyError> {
    if m.len() != t.len() {
        return Err(HomologyError::DimensionMismatch { expected: t.len(), found: m.len() });
    }
    if x.len() != t.dimension() {
        return Err(HomologyError::DimensionMismatch { expected: t.dimension(), found: x.len() });
    }
    let mut y = x.to_vec();
    for i in 0..t.len() {
        let p: i64 = t.pairing[i].iter().zip(x).map(|(a, b)| a * b).sum();
        for (yj, cj) in y.iter_mut().zip(&t.classes[i]) {
            *yj += m[i] * p * cj;
        }
    }
    Ok(y)
}

/// Rank of `{φ_i ⊗ c_i}` over `Q`, where `c_i` lives modulo `relations`.
fn tensor_rank(phi: &[Vec<i64>], classes: &[Vec<i64>], relations: &[Vec<i64>]) -> usize {
    let l = phi.len();
    if l == 0 {
        return 0;
    }
    let pivots = |rows: Vec<Vec<Rat>>| linalg::rref(rows).1;
    let phi_r = linalg::to_rational(phi);
    let phi_piv = pivots(phi_r.clone());
    let reducer = QuotientReducer::new(classes[0].len(), relations);
    let c_r: Vec<Vec<Rat>> = classes.iter().map(|c| reducer.reduce(c)).collect();
    let c_piv = if c_r[0].is_empty() { vec![] } else { pivots(c_r.clone()) };
    let columns: Vec<Vec<Rat>> = (0..l)
        .map(|i| {
            let mut v = Vec::with_capacity(phi_piv.len() * c_piv.len());
            for &a in &phi_piv {
                for &b in &c_piv {
                    v.push(&phi_r[i][a] * &c_r[i][b]);
                }
            }
            v
        })
        .collect();
    if columns[0].is_empty() {
        return 0;
    }
    linalg::rank_rational(columns)
}

/// Whether `m ↦ ∏ τ_i^{m_i}` is injective, tested on the variation
/// `x ↦ Σ m_i ⟨x, γ_i⟩ γ_i` over relative classes `x`.
pub fn twists_independent(t: &TwistSystem) -> Result<bool, HomologyError> {
    if !t.orientable {
        return Err(HomologyError::NonOrientableUnsupported);
    }
    Ok(tensor_rank(&t.relative_pairing, &t.classes, &t.relations) == t.len())
}

/// The same test with the absolute pairing only; blind to separating curves.
pub fn absolute_twists_independent(t: &TwistSystem) -> Result<bool, HomologyError> {
    if !t.orientable {
        return Err(HomologyError::NonOrientableUnsupported);
    }
    Ok(tensor_rank(&t.pairing, &t.classes, &t.relations) == t.len())
}

/// Whether the curve classes are linearly independent in `H_1(M \ Σ; Q)`.
pub fn curves_independent(t: &TwistSystem) -> bool {
    if t.is_empty() {
        return true;
    }
    let reducer = QuotientReducer::new(t.classes[0].len(), &t.relations);
    let rows: Vec<Vec<Rat>> = t.classes.iter().map(|c| reducer.reduce(c)).collect();
    !rows[0].is_empty() && linalg::rank_rational(rows) == t.len()
}

/// Variation test over `GF(2)`; meaningful for non-orientable surfaces.
pub fn twists_independent_mod2(t: &TwistSystem) -> bool {
    let l = t.len();
    if l == 0 {
        return true;
    }
    let phi_piv = pivots_mod2(&t.relative_pairing);
    let c: Vec<Vec<i64>> = t.classes.iter().map(|c| linalg::reduce_mod2(c, &t.relations)).collect();
    let c_piv = pivots_mod2(&c);
    let rows: Vec<Vec<i64>> = (0..l)
        .map(|i| {
            let mut v = Vec::new();
            for &a in &phi_piv {
                for &b in &c_piv {
                    v.push((t.relative_pairing[i][a].rem_euclid(2)) * c[i][b]);
                }
            }
            v
        })
        .collect();
    !rows[0].is_empty() && linalg::rank_mod2(&rows) == l
}

/// Columns at which a `GF(2)` rank increases, scanning left to right.
fn pivots_mod2(rows: &[Vec<i64>]) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut current = 0;
    for c in 0..cols {
        let prefix: Vec<Vec<i64>> = rows.iter().map(|r| r[..=c].to_vec()).collect();
        let r = linalg::rank_mod2(&prefix);
        if r > current {
            out.push(c);
            current = r;
        }
        if current == rows.len() {
            break;
        }
    }
    out
}

/// Applies the twist along `curve` explicitly to a primal cycle: at every
/// crossing, the cycle detours once around the curve.
pub fn explicit_twist(s: &TriSurface, basis: &HomologyBasis, curve: &LevelCurve, chain: &[i64], sense: i64) -> SdChain {
    let mut z = basis.from_primal(s, chain);
    for (k, c) in curve.crossings.iter().enumerate() {
        let a = chain[c.edge];
        if a != 0 {
            let sign = s.edge_sign_in(c.from, c.edge);
            let detour = curve.sd_loop_from(basis, k, sense * a * sign);
            for (x, y) in z.iter_mut().zip(detour) {
                *x += y;
            }
        }
    }
    z
}

/// Oracle: free rank and torsion of `H_1(K')` from the Smith normal forms of
/// the boundary matrices.
pub fn smith_oracle(basis: &HomologyBasis) -> (usize, Vec<i128>) {
    let vertices = basis.sd_vertices();
    let row: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let ne = basis.sd_edge_count();
    let mut d1 = vec![vec![0i64; ne]; vertices.len()];
    for (id, &[a, b]) in basis.sd_edges().iter().enumerate() {
        d1[row[&a]][id] -= 1;
        d1[row[&b]][id] += 1;
    }
    let nt = basis.sd_triangles().len();
    let mut d2 = vec![vec![0i64; nt]; ne];
    for t in 0..nt {
        let z = basis.triangle_boundary(t);
        for (id, &c) in z.iter().enumerate() {
            d2[id][t] = c;
        }
    }
    linalg::homology_from_boundaries(&d1, &d2, ne)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::plmorse::{validate_morse, ScalarField};
    use crate::reeb::{build_reeb, finalize_morse};
    use crate::surface::validate_surface;

    fn system(s: &TriSurface, f: &ScalarField) -> (ReebGraph, TwistSystem) {
        let md = validate_morse(s, f).unwrap();
        let g = build_reeb(s, f, &md).unwrap();
        let md = finalize_morse(&md, &g);
        let order = LevelOrder::new(s, f).unwrap();
        let t = twist_system(s, &order, &g, &md.critical_vertices()).unwrap();
        (g, t)
    }

    #[test]
    fn ranks_match_smith_oracle() {
        let sphere = validate_surface(&corpus::octahedron_triangles()).unwrap();
        let b = h1_basis(&sphere, &[0, 1]).unwrap();
        assert_eq!(b.rank(), 1);
        assert_eq!(smith_oracle(&b), (1, vec![]));

        let torus = validate_surface(&corpus::csaszar_torus_triangles()).unwrap();
        let b = h1_basis(&torus, &[]).unwrap();
        assert_eq!(b.rank(), 2);
        assert_eq!(smith_oracle(&b), (2, vec![]));
        let b = h1_basis(&torus, &[0, 2, 4, 6]).unwrap();
        assert_eq!(b.rank(), 5);
        assert_eq!(smith_oracle(&b).0, 5);

        let rp2 = validate_surface(&corpus::rp2_triangles()).unwrap();
        let b = h1_basis(&rp2, &[]).unwrap();
        assert_eq!(b.rank(), 0);
        assert_eq!(smith_oracle(&b), (0, vec![2]));
    }

    #[test]
    fn generator_cycles_are_cycles_with_unit_coordinates() {
        let torus = validate_surface(&corpus::csaszar_torus_triangles()).unwrap();
        let b = h1_basis(&torus, &[3]).unwrap();
        for j in 0..b.dimension() {
            let z = b.generator_cycle(j);
            assert!(b.is_cycle(&z));
            let c = b.coordinates(&z);
            let unit: Vec<i64> = (0..b.dimension()).map(|k| i64::from(k == j)).collect();
            assert_eq!(c, unit);
        }
    }

    #[test]
    fn torus_height_twists_are_independent() {
        let (s, f) = corpus::torus_height(8, 8);
        let (g, t) = system(&s, &f);
        assert_eq!(g.internal_count(), 2);
        assert_eq!(t.len(), 2);
        for c in &t.curves {
            assert!(!c.separating);
        }
        assert!(curves_independent(&t));
        assert!(twists_independent(&t).unwrap());
        assert!(!twists_independent(&t.select(&[0, 0])).unwrap());
        for row in &t.intersection {
            assert!(row.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn no_internal_edges_is_trivially_independent() {
        let s = validate_surface(&corpus::tetrahedron_triangles()).unwrap();
        let (_, t) = system(&s, &ScalarField::from_ints(&[0, 1, 2, 3]));
        assert!(t.is_empty());
        assert!(twists_independent(&t).unwrap());
    }

    #[test]
    fn separating_curves_need_the_variation() {
        let s = validate_surface(&corpus::bipyramid_triangles(10)).unwrap();
        let (_, f, _) = corpus::search_field(&s, 0, 500, |md| md.c1 >= 2 && md.is_simple).unwrap();
        let (g, t) = system(&s, &f);
        assert!(g.internal_count() >= 1);
        assert!(t.curves.iter().all(|c| c.separating));
        assert!(curves_independent(&t));
        assert!(twists_independent(&t).unwrap());
        assert!(!absolute_twists_independent(&t).unwrap());
        let (s, f) = corpus::torus_height(8, 8);
        let (_, t) = system(&s, &f);
        assert!(absolute_twists_independent(&t).unwrap());
    }

    #[test]
    fn curve_orientation_does_not_affect_independence() {
        let s = corpus::genus2_surface(4);
        let (_, f, _) = corpus::search_field(&s, 0, 500, |md| md.c1 >= 4 && md.is_generic).unwrap();
        let (_, t) = system(&s, &f);
        let expected = twists_independent(&t).unwrap();
        for mask in 0..(1u32 << t.len().min(6)) {
            let mut flipped = t.clone();
            for i in (0..t.len().min(6)).filter(|i| mask >> i & 1 == 1) {
                flipped.curves[i] = t.curves[i].reversed();
                for row in [&mut flipped.classes[i], &mut flipped.pairing[i], &mut flipped.relative_pairing[i]] {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
            }
            assert_eq!(twists_independent(&flipped).unwrap(), expected);
            assert_eq!(twists_independent_mod2(&flipped), twists_independent_mod2(&t));
        }
    }

    #[test]
    fn dimension_mismatch() {
        let (s, f) = corpus::torus_height(8, 8);
        let (_, t) = system(&s, &f);
        assert!(matches!(twist_action(&t, &[1], &vec![0; t.dimension()]), Err(HomologyError::DimensionMismatch { .. })));
        assert!(matches!(twist_action(&t, &[1, 1], &[0]), Err(HomologyError::DimensionMismatch { .. })));
    }

    #[test]
    fn circle_fibres_pair_antisymmetrically() {
        let (s, fx) = corpus::torus_circle_field(6, 5, 1);
        let grid = corpus::torus_grid(6, 5);
        let fy = ScalarField::circle(
            (0..grid.vertex_count()).map(|v| crate::value::Value::ratio(grid.coords(v).1 as i64, 5)).collect(),
        );
        let curve = |f: &ScalarField| {
            let md = validate_morse(&s, f).unwrap();
            let g = build_reeb(&s, f, &md).unwrap();
            let order = LevelOrder::new(&s, f).unwrap();
            trace_level_curve(&s, &order, &g, 0).unwrap()
        };
        let (a, b) = (curve(&fx), curve(&fy));
        let basis = h1_basis(&s, &[]).unwrap();
        let za = basis.to_primal(&s, &a.sd_chain(&basis));
        let zb = basis.to_primal(&s, &b.sd_chain(&basis));
        let ab = b.pairing(&s, &za);
        let ba = a.pairing(&s, &zb);
        assert_eq!(ab.abs(), 1);
        assert_eq!(ab, -ba);
        assert_eq!(a.reversed().pairing(&s, &zb), -ba);
        assert!(!a.separating);
    }

    #[test]
    fn explicit_twist_matches_formula() {
        let (s, f) = corpus::torus_height(8, 8);
        let (g, t) = system(&s, &f);
        let md = finalize_morse(&validate_morse(&s, &f).unwrap(), &g);
        let basis = h1_basis(&s, &md.critical_vertices()).unwrap();
        let punct: HashSet<usize> = md.critical_vertices().into_iter().collect();
        // primal test cycles avoiding punctures: rows and columns of the grid
        let grid = corpus::torus_grid(8, 8);
        let mut tests = Vec::new();
        for j in 0..8 {
            let ring: Vec<usize> = (0..8).map(|i| grid.id(i, j)).collect();
            if ring.iter().any(|v| punct.contains(v)) {
                continue;
            }
            let mut z = vec![0; s.edge_count()];
            for i in 0..8 {
                let (a, b) = (ring[i], ring[(i + 1) % 8]);
                let e = s.edge_id(a, b).unwrap();
                z[e] += if a < b { 1 } else { -1 };
            }
            tests.push(z);
        }
        assert!(!tests.is_empty());
        let mut sense = None;
        for (i, curve) in t.curves.iter().enumerate() {
            for z in &tests {
                let x = basis.coordinates(&basis.from_primal(&s, z));
                let mut m = vec![0; t.len()];
                m[i] = 1;
                let formula = twist_action(&t, &m, &x).unwrap();
                let candidates: Vec<i64> = [1, -1]
                    .into_iter()
                    .filter(|&e| {
                        let explicit = explicit_twist(&s, &basis, curve, z, e);
                        basis.same_class(&basis.coordinates(&explicit), &formula)
                    })
                    .collect();
                assert!(!candidates.is_empty());
                if curve.pairing(&s, z) != 0 {
                    assert_eq!(candidates.len(), 1);
                    assert!(sense.is_none_or(|e| e == candidates[0]));
                    sense = Some(candidates[0]);
                }
            }
        }
        assert!(sense.is_some());
    }
}
