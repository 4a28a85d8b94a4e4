//! Level- and kind-preserving automorphisms of a Reeb graph, the
//! H₁-subgraph, and the subgroup acting trivially on H₁ and fixing boundary
//! nodes.

use std::collections::{BTreeMap, HashMap, VecDeque};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::reeb::{NodeKind, ReebGraph};
use crate::value::Value;

/// Node and edge permutations: `nodes[i]` is the image of node `i`.
/// Edges keep their ascending orientation, so no sign data is needed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphAutomorphism {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

impl GraphAutomorphism {
    pub fn identity(g: &ReebGraph) -> Self {
        GraphAutomorphism { nodes: (0..g.node_count()).collect(), edges: (0..g.edge_count()).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.nodes.iter().enumerate().all(|(i, &j)| i == j) && self.edges.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GraphAutomorphism) -> GraphAutomorphism {
        GraphAutomorphism {
            nodes: other.nodes.iter().map(|&n| self.nodes[n]).collect(),
            edges: other.edges.iter().map(|&e| self.edges[e]).collect(),
        }
    }

    pub fn inverse(&self) -> GraphAutomorphism {
        let mut nodes = vec![0; self.nodes.len()];
        let mut edges = vec![0; self.edges.len()];
        for (i, &j) in self.nodes.iter().enumerate() {
            nodes[j] = i;
        }
        for (i, &j) in self.edges.iter().enumerate() {
            edges[j] = i;
        }
        GraphAutomorphism { nodes, edges }
    }

    /// Image of an edge chain: `(θz)[θ(e)] = z[e]`.
    pub fn push_chain(&self, z: &[i64]) -> Vec<i64> {
        let mut out = vec![0; z.len()];
        for (e, &c) in z.iter().enumerate() {
            out[self.edges[e]] = c;
        }
        out
    }
}

/// Verifies that a map is a graph automorphism preserving kinds, levels,
/// incidences and edge lengths.
pub fn is_automorphism(g: &ReebGraph, theta: &GraphAutomorphism) -> bool {
    if theta.nodes.len() != g.node_count() || theta.edges.len() != g.edge_count() {
        return false;
    }
    if !theta.nodes.iter().copied().sorted().eq(0..g.node_count())
        || !theta.edges.iter().copied().sorted().eq(0..g.edge_count())
    {
        return false;
    }
    let nodes_ok = (0..g.node_count()).all(|n| {
        let (a, b) = (&g.nodes[n], &g.nodes[theta.nodes[n]]);
        a.kind == b.kind && a.level == b.level
    });
    let edges_ok = g.edges.iter().enumerate().all(|(i, e)| {
        let img = &g.edges[theta.edges[i]];
        img.lower == theta.nodes[e.lower] && img.upper == theta.nodes[e.upper] && img.length == e.length
    });
    nodes_ok && edges_ok
}

type EdgeKey = (usize, usize, Value);

fn node_signature(g: &ReebGraph, n: usize) -> (NodeKind, Value, usize, usize, usize) {
    let out = g.edges.iter().filter(|e| e.lower == n && e.upper != n).count();
    let inc = g.edges.iter().filter(|e| e.upper == n && e.lower != n).count();
    let loops = g.edges.iter().filter(|e| e.lower == n && e.upper == n).count();
    (g.nodes[n].kind, g.nodes[n].level.clone(), out, inc, loops)
}

/// All automorphisms, identity first. Graphs with an anchor node only
/// report the identity.
pub fn automorphism_group(g: &ReebGraph) -> Vec<GraphAutomorphism> {
    enumerate_automorphisms(g, usize::MAX)
}

/// Enumeration stopping after `limit` elements.
pub fn enumerate_automorphisms(g: &ReebGraph, limit: usize) -> Vec<GraphAutomorphism> {
    if g.has_anchor() || g.node_count() == 0 {
        return vec![GraphAutomorphism::identity(g)];
    }
    let n = g.node_count();
    let sig: Vec<_> = (0..n).map(|v| node_signature(g, v)).collect();
    let mut multiplicity: HashMap<(usize, usize), BTreeMap<Value, usize>> = HashMap::new();
    let mut groups: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        *multiplicity.entry((e.lower, e.upper)).or_default().entry(e.length.clone()).or_default() += 1;
        groups.entry((e.lower, e.upper, e.length.clone())).or_default().push(i);
    }
    let empty = BTreeMap::new();
    let mult = |a: usize, b: usize| multiplicity.get(&(a, b)).unwrap_or(&empty);

    // most constrained nodes first
    let candidates: Vec<Vec<usize>> = (0..n).map(|v| (0..n).filter(|&w| sig[w] == sig[v]).collect()).collect();
    let order: Vec<usize> = (0..n).sorted_by_key(|&v| (candidates[v].len(), v)).collect();

    let mut node_maps = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn search(
        depth: usize,
        order: &[usize],
        candidates: &[Vec<usize>],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        consistent: &dyn Fn(&[usize], usize) -> bool,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if depth == order.len() {
            out.push(image.clone());
            return;
        }
        let v = order[depth];
        for &w in &candidates[v] {
            if used[w] {
                continue;
            }
            image[v] = w;
            if consistent(image, v) {
                used[w] = true;
                search(depth + 1, order, candidates, image, used, consistent, out, limit);
                used[w] = false;
            }
            image[v] = usize::MAX;
        }
    }
    let consistent = |image: &[usize], v: usize| -> bool {
        (0..n).filter(|&u| image[u] != usize::MAX).all(|u| {
            mult(v, u) == mult(image[v], image[u]) && mult(u, v) == mult(image[u], image[v])
        })
    };
    search(0, &order, &candidates, &mut image, &mut used, &consistent, &mut node_maps, limit);

    let mut result = Vec::new();
    for nodes in node_maps {
        // every parallel class maps onto its image class in all possible ways
        let choices: Vec<(Vec<usize>, Vec<Vec<usize>>)> = groups
            .iter()
            .map(|((a, b, len), members)| {
                let target = &groups[&(nodes[*a], nodes[*b], len.clone())];
                let perms = target.iter().copied().permutations(target.len()).collect();
                (members.clone(), perms)
            })
            .collect();
        if choices.is_empty() {
            result.push(GraphAutomorphism { nodes, edges: vec![] });
            continue;
        }
        for pick in choices.iter().map(|(_, p)| p.iter()).multi_cartesian_product() {
            let mut edges = vec![0; g.edge_count()];
            for ((members, _), targets) in choices.iter().zip(&pick) {
                for (&src, &dst) in members.iter().zip(targets.iter()) {
                    edges[src] = dst;
                }
            }
            result.push(GraphAutomorphism { nodes: nodes.clone(), edges });
            if result.len() >= limit {
                return sort_identity_first(result);
            }
        }
    }
    sort_identity_first(result)
}

fn sort_identity_first(mut auts: Vec<GraphAutomorphism>) -> Vec<GraphAutomorphism> {
    if let Some(i) = auts.iter().position(GraphAutomorphism::is_identity) {
        auts.swap(0, i);
    }
    auts
}

/// Fundamental cycles of a breadth-first spanning forest, as integer
/// vectors over the edges; each edge is oriented from `lower` to `upper`.
pub fn cycle_basis(g: &ReebGraph) -> Vec<Vec<i64>> {
    let n = g.node_count();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut tree_edge = vec![false; g.edge_count()];
    let mut depth = vec![0usize; n];
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.incident(v)).collect();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &e in &adj[v] {
                let w = g.edges[e].other(v);
                if !seen[w] {
                    seen[w] = true;
                    tree_edge[e] = true;
                    parent[w] = Some((v, e));
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    // chain of the tree path from `v` up to the root, oriented towards the root
    let walk = |mut v: usize, z: &mut Vec<i64>, sign: i64, stop: usize| {
        while depth[v] > depth[stop] {
            let (p, e) = parent[v].unwrap();
            let toward_parent = if g.edges[e].lower == v { 1 } else { -1 };
            z[e] += sign * toward_parent;
            v = p;
        }
    };
    let lca = |mut a: usize, mut b: usize| {
        while depth[a] > depth[b] {
            a = parent[a].unwrap().0;
        }
        while depth[b] > depth[a] {
            b = parent[b].unwrap().0;
        }
        while a != b {
            a = parent[a].unwrap().0;
            b = parent[b].unwrap().0;
        }
        a
    };
    let mut basis = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        if tree_edge[i] {
            continue;
        }
        let mut z = vec![0i64; g.edge_count()];
        z[i] = 1;
        if !e.is_loop() {
            // lower -> upper along e, then upper -> lca -> lower through the tree
            let top = lca(e.lower, e.upper);
            walk(e.upper, &mut z, 1, top);
            walk(e.lower, &mut z, -1, top);
        }
        basis.push(z);
    }
    basis
}

/// True when `θ` fixes every cycle of the graph.
pub fn acts_trivially_on_h1(g: &ReebGraph, theta: &GraphAutomorphism) -> bool {
    cycle_basis(g).iter().all(|z| theta.push_chain(z) == *z)
}

pub fn fixes_boundary_nodes(g: &ReebGraph, theta: &GraphAutomorphism) -> bool {
    (0..g.node_count()).filter(|&n| g.nodes[n].kind == NodeKind::Boundary).all(|n| theta.nodes[n] == n)
}

/// Elements of `auts` fixing every boundary node and acting trivially on
/// the first homology of the graph.
pub fn aut_h1_boundary(g: &ReebGraph, auts: &[GraphAutomorphism]) -> Vec<GraphAutomorphism> {
    let basis = cycle_basis(g);
    auts.iter()
        .filter(|t| fixes_boundary_nodes(g, t) && basis.iter().all(|z| t.push_chain(z) == *z))
        .cloned()
        .collect()
}

/// Minimal connected subgraph holding every cycle and every boundary node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Subgraph {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Iterated removal of non-boundary leaves. When everything would be
/// removed (a tree without boundary nodes) the result is the single node of
/// smallest index in the centre of the tree.
pub fn h1_subgraph(g: &ReebGraph) -> H1Subgraph {
    prune_in_order(g, |cands| cands[0])
}

/// Pruning with a caller-chosen leaf at each step; used to check that the
/// fixpoint does not depend on the order.
pub fn prune_in_order(g: &ReebGraph, mut pick: impl FnMut(&[usize]) -> usize) -> H1Subgraph {
    let n = g.node_count();
    let mut alive_node = vec![true; n];
    let mut alive_edge = vec![true; g.edge_count()];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let removable = |v: usize, deg: &[usize], alive: &[bool]| {
        alive[v] && deg[v] <= 1 && g.nodes[v].kind != NodeKind::Boundary
    };
    loop {
        let cands: Vec<usize> = (0..n).filter(|&v| removable(v, &deg, &alive_node)).collect();
        if cands.is_empty() {
            break;
        }
        let v = pick(&cands);
        alive_node[v] = false;
        for e in g.incident(v) {
            if alive_edge[e] {
                alive_edge[e] = false;
                let w = g.edges[e].other(v);
                deg[w] -= 1;
                deg[v] -= 1;
            }
        }
    }
    let nodes: Vec<usize> = (0..n).filter(|&v| alive_node[v]).collect();
    if nodes.is_empty() && n > 0 {
        return H1Subgraph { nodes: vec![tree_centre(g)], edges: vec![] };
    }
    H1Subgraph { nodes, edges: (0..g.edge_count()).filter(|&e| alive_edge[e]).collect() }
}

/// Smallest-index node among the last leaves removed when peeling a tree
/// layer by layer.
fn tree_centre(g: &ReebGraph) -> usize {
    let n = g.node_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut remaining = n;
    loop {
        let layer: Vec<usize> = (0..n).filter(|&v| alive[v] && deg[v] <= 1).collect();
        if layer.len() == remaining {
            return layer[0];
        }
        for &v in &layer {
            alive[v] = false;
            remaining -= 1;
            for e in g.incident(v) {
                let w = g.edges[e].other(v);
                if alive[w] {
                    deg[w] -= 1;
                }
            }
        }
    }
}

pub fn fixes_h1_subgraph_pointwise(theta: &GraphAutomorphism, hat: &H1Subgraph) -> bool {
    hat.nodes.iter().all(|&n| theta.nodes[n] == n) && hat.edges.iter().all(|&e| theta.edges[e] == e)
}

/// Edges lying on some cycle.
pub fn cycle_edges(g: &ReebGraph) -> Vec<usize> {
    (0..g.edge_count())
        .filter(|&skip| {
            let e = &g.edges[skip];
            if e.is_loop() {
                return true;
            }
            // still connected without this edge?
            let mut seen = vec![false; g.node_count()];
            let mut queue = VecDeque::from([e.lower]);
            seen[e.lower] = true;
            while let Some(v) = queue.pop_front() {
                for f in g.incident(v) {
                    if f == skip {
                        continue;
                    }
                    let w = g.edges[f].other(v);
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            seen[e.upper]
        })
        .collect()
}

/// Which of the sufficient conditions for pointwise fixing hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixingClauses {
    pub tree: bool,
    pub has_boundary: bool,
    pub cycle_components: usize,
    pub cycle_rank: usize,
}

impl FixingClauses {
    pub fn any(&self) -> bool {
        self.tree || self.has_boundary || self.cycle_components >= 2 || self.cycle_rank >= 2
    }
}

pub fn fixing_clauses(g: &ReebGraph) -> FixingClauses {
    let on_cycle = cycle_edges(g);
    let mut uf = petgraph::unionfind::UnionFind::new(g.node_count());
    for &e in &on_cycle {
        uf.union(g.edges[e].lower, g.edges[e].upper);
    }
    let cycle_components = on_cycle.iter().map(|&e| uf.find(g.edges[e].lower)).sorted().dedup().count();
    let rank = g.cycle_rank();
    FixingClauses {
        tree: rank == 0,
        has_boundary: g.count_kind(NodeKind::Boundary) > 0,
        cycle_components,
        cycle_rank: rank,
    }
}
