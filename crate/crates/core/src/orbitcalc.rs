//! Minimal graphs, the rank `k`, and homotopy types of stabilizers and orbits.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphaut::{aut_h1_boundary, fixes_h1_subgraph_pointwise, h1_subgraph, GraphAutomorphism};
use crate::homotopy::HomotopyType;
use crate::plmorse::MorseData;
use crate::reeb::{is_simple, NodeKind, ReebEdge, ReebGraph, ReebNode, SaddleFreeType};
use crate::surface::{diffid_type, NamedSurface, SurfaceClass, DiffIdType};
use crate::value::Value;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("contraction needs a simple Morse map")]
    NotSimple,
    #[error("the rank k is defined only when there is a saddle")]
    RequiresSaddle,
    #[error("inconsistent contraction counts: {0}")]
    Inconsistent(String),
}

/// Working copy of a graph for contractions; ids are stable across steps.
#[derive(Debug, Clone)]
struct Contracting {
    kinds: BTreeMap<usize, (NodeKind, Value)>,
    edges: BTreeMap<usize, (usize, usize, Value)>,
    next_edge: usize,
}

impl Contracting {
    fn new(g: &ReebGraph) -> Self {
        Contracting {
            kinds: g.nodes.iter().enumerate().map(|(i, n)| (i, (n.kind, n.level.clone()))).collect(),
            edges: g.edges.iter().enumerate().map(|(i, e)| (i, (e.lower, e.upper, e.length.clone()))).collect(),
            next_edge: g.edge_count(),
        }
    }

    /// Incident edge slots; a loop appears twice.
    fn slots(&self, n: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (&id, &(a, b, _)) in &self.edges {
            if a == n {
                out.push(id);
            }
            if b == n {
                out.push(id);
            }
        }
        out
    }

    fn degree(&self, n: usize) -> usize {
        self.slots(n).len()
    }

    fn is_internal(&self, e: usize) -> bool {
        let (a, b, _) = self.edges[&e];
        self.degree(a) != 1 && self.degree(b) != 1
    }

    /// `(E-vertex, C-vertex, e1, e2)` when `e` is contractible.
    fn contraction_at(&self, e: usize) -> Option<(usize, usize, usize, usize)> {
        let (a, b, _) = self.edges[&e];
        if a == b {
            return None;
        }
        let kind = |n: usize| self.kinds[&n].0;
        let (x, y) = match (kind(a), kind(b)) {
            (NodeKind::Extremum, NodeKind::Saddle) => (a, b),
            (NodeKind::Saddle, NodeKind::Extremum) => (b, a),
            _ => return None,
        };
        let mut slots = self.slots(y);
        if slots.len() != 3 {
            return None;
        }
        let at = slots.iter().position(|&s| s == e)?;
        slots.remove(at);
        let (e1, e2) = (slots[0], slots[1]);
        (e1 != e2 && (self.is_internal(e1) || self.is_internal(e2))).then_some((x, y, e1, e2))
    }

    fn candidates(&self) -> Vec<usize> {
        self.edges.keys().copied().filter(|&e| self.contraction_at(e).is_some()).collect()
    }

    /// Level of the extremum endpoint, for the deterministic order.
    fn extremum_level(&self, e: usize) -> Value {
        let (x, ..) = self.contraction_at(e).expect("contractible");
        self.kinds[&x].1.clone()
    }

    fn contract(&mut self, e: usize) {
        let (x, y, e1, e2) = self.contraction_at(e).expect("contractible");
        let u = self.far_end(e1, y);
        let w = self.far_end(e2, y);
        let length = self.edges[&e1].2.add(&self.edges[&e2].2);
        for id in [e, e1, e2] {
            self.edges.remove(&id);
        }
        self.kinds.remove(&x);
        self.kinds.remove(&y);
        let (lo, hi) = if self.kinds[&u].1 <= self.kinds[&w].1 { (u, w) } else { (w, u) };
        self.edges.insert(self.next_edge, (lo, hi, length));
        self.next_edge += 1;
    }

    fn far_end(&self, e: usize, n: usize) -> usize {
        let (a, b, _) = self.edges[&e];
        if a == n { b } else { a }
    }

    fn count(&self, kind: NodeKind) -> usize {
        self.kinds.values().filter(|(k, _)| *k == kind).count()
    }

    fn state_key(&self) -> (Vec<usize>, Vec<(usize, usize)>) {
        let mut edges: Vec<(usize, usize)> = self.edges.values().map(|&(a, b, _)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        (self.kinds.keys().copied().collect(), edges)
    }

    fn to_graph(&self, codomain: crate::plmorse::Codomain) -> ReebGraph {
        let index: BTreeMap<usize, usize> = self.kinds.keys().enumerate().map(|(i, &n)| (n, i)).collect();
        let nodes = self
            .kinds
            .values()
            .map(|(kind, level)| ReebNode { kind: *kind, level: level.clone(), witnesses: vec![] })
            .collect();
        let edges =
            self.edges.values().map(|(a, b, len)| ReebEdge::new(index[a], index[b], len.clone())).collect();
        ReebGraph::from_parts(codomain, nodes, edges)
    }
}

/// An edge joining an extremum to a degree-3 saddle whose other two edges
/// are distinct with at least one internal.
pub fn is_contractible_edge(g: &ReebGraph, e: usize) -> bool {
    Contracting::new(g).contraction_at(e).is_some()
}

#[derive(Debug, Clone)]
pub struct MinimalGraphSummary {
    pub graph: ReebGraph,
    pub r_c: usize,
    pub r_e: usize,
    /// Contracted edges, in the stable numbering (merged edges get fresh ids).
    pub trace: Vec<usize>,
}

impl MinimalGraphSummary {
    pub fn contractions(&self) -> usize {
        self.trace.len()
    }
}

/// Contracts with the smallest `(extremum level, edge id)` first.
pub fn minimal_graph(g: &ReebGraph) -> Result<MinimalGraphSummary, OrbitError> {
    if !is_simple(g) {
        return Err(OrbitError::NotSimple);
    }
    Ok(contract_in_order(g, |c, cands| {
        let mut best = cands[0];
        for &e in &cands[1..] {
            if c.extremum_level(e) < c.extremum_level(best) {
                best = e;
            }
        }
        best
    }))
}

fn contract_in_order(g: &ReebGraph, mut pick: impl FnMut(&Contracting, &[usize]) -> usize) -> MinimalGraphSummary {
    let mut c = Contracting::new(g);
    let mut trace = Vec::new();
    loop {
        let cands = c.candidates();
        if cands.is_empty() {
            break;
        }
        let e = pick(&c, &cands);
        c.contract(e);
        trace.push(e);
    }
    MinimalGraphSummary {
        graph: c.to_graph(g.codomain),
        r_c: c.count(NodeKind::Saddle),
        r_e: c.count(NodeKind::Extremum),
        trace,
    }
}

/// Contraction with a caller-chosen order (index into the sorted candidates).
pub fn minimal_graph_with(g: &ReebGraph, mut choose: impl FnMut(usize) -> usize) -> MinimalGraphSummary {
    contract_in_order(g, |_, cands| cands[choose(cands.len()) % cands.len()])
}

/// All `(r'_C, r'_E)` reachable by maximal contraction sequences.
pub fn contraction_outcomes(g: &ReebGraph) -> BTreeSet<(usize, usize)> {
    let mut seen = HashSet::new();
    let mut out = BTreeSet::new();
    let mut stack = vec![Contracting::new(g)];
    while let Some(c) = stack.pop() {
        if !seen.insert(c.state_key()) {
            continue;
        }
        let cands = c.candidates();
        if cands.is_empty() {
            out.insert((c.count(NodeKind::Saddle), c.count(NodeKind::Extremum)));
        }
        for e in cands {
            let mut next = c.clone();
            next.contract(e);
            stack.push(next);
        }
    }
    out
}

/// Point value of `k`, or the range `[0, high]` when only a bound is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KRank {
    Exact(usize),
    Interval([usize; 2]),
}

impl KRank {
    pub fn upper(self) -> usize {
        match self {
            KRank::Exact(k) => k,
            KRank::Interval([_, hi]) => hi,
        }
    }

    pub fn exact(self) -> Option<usize> {
        match self {
            KRank::Exact(k) => Some(k),
            KRank::Interval(_) => None,
        }
    }
}

impl fmt::Display for KRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KRank::Exact(k) => write!(f, "{k}"),
            KRank::Interval([lo, hi]) => write!(f, "[{lo}, {hi}]"),
        }
    }
}

/// Upper bound `k̄` by surface type.
pub fn k_bar(class: &SurfaceClass, md: &MorseData) -> usize {
    match diffid_type(class) {
        DiffIdType::One => md.c1.saturating_sub(1),
        DiffIdType::Two | DiffIdType::Three => md.c0 + md.c2,
    }
}

pub fn rank_k(
    class: &SurfaceClass,
    md: &MorseData,
    summary: Option<&MinimalGraphSummary>,
) -> Result<KRank, OrbitError> {
    if md.c1 == 0 {
        return Err(OrbitError::RequiresSaddle);
    }
    if !md.is_simple {
        return Ok(KRank::Interval([0, k_bar(class, md)]));
    }
    if diffid_type(class) == DiffIdType::One {
        return Ok(KRank::Exact(md.c1 - 1));
    }
    let s = summary.ok_or(OrbitError::NotSimple)?;
    let from_saddles = md.c1.checked_sub(s.r_c);
    let from_extrema = (md.c0 + md.c2).checked_sub(s.r_e);
    match (from_saddles, from_extrema) {
        (Some(a), Some(b)) if a == b => Ok(KRank::Exact(a)),
        _ => Err(OrbitError::Inconsistent(format!(
            "c1={} rC={} c0+c2={} rE={}",
            md.c1,
            s.r_c,
            md.c0 + md.c2,
            s.r_e
        ))),
    }
}

/// Homotopy type of the identity component of the stabilizer.
pub fn stabilizer_homotopy(class: &SurfaceClass, md: &MorseData) -> HomotopyType {
    if md.c1 >= 1 || !class.orientable { HomotopyType::POINT } else { HomotopyType::S1 }
}

/// Homotopy type of the identity component of the diffeomorphism group.
pub fn diffid_homotopy(class: &SurfaceClass) -> HomotopyType {
    match class.named() {
        Some(NamedSurface::Sphere | NamedSurface::ProjectivePlane) => HomotopyType::SO3,
        Some(NamedSurface::Disk | NamedSurface::Annulus | NamedSurface::Mobius | NamedSurface::Klein) => {
            HomotopyType::S1
        }
        Some(NamedSurface::Torus) => HomotopyType::T2,
        None => HomotopyType::POINT,
    }
}

/// Orbit homotopy type for generic maps with a saddle, by surface row.
pub fn generic_orbit_type(class: &SurfaceClass, c1: usize, k: usize) -> HomotopyType {
    let n = |x: usize| HomotopyType::torus(x as u32);
    match class.named() {
        Some(NamedSurface::Sphere | NamedSurface::ProjectivePlane) => HomotopyType::SO3 * n(c1 - 1),
        Some(NamedSurface::Disk | NamedSurface::Annulus | NamedSurface::Mobius) => n(c1),
        Some(NamedSurface::Torus) => n(c1 + 1),
        Some(NamedSurface::Klein) => n(k + 1),
        None => n(k),
    }
}

/// Whether the surface row agrees with `Diff_id(M) × (S1)^k`.
pub fn generic_orbit_consistency(class: &SurfaceClass, k: usize, md: &MorseData) -> bool {
    md.c1 >= 1 && generic_orbit_type(class, md.c1, k) == diffid_homotopy(class) * HomotopyType::torus(k as u32)
}

/// `(O, O_f)` for maps without saddles.
pub fn saddle_free_orbits(t: SaddleFreeType) -> (HomotopyType, HomotopyType) {
    match t {
        SaddleFreeType::A => (HomotopyType::S2, HomotopyType::POINT),
        SaddleFreeType::B | SaddleFreeType::C => (HomotopyType::POINT, HomotopyType::POINT),
        SaddleFreeType::D(_) | SaddleFreeType::E(_) => (HomotopyType::S1, HomotopyType::S1),
    }
}

/// Codimensions of the orbit and of the critical-set-preserving orbit.
pub fn codims(md: &MorseData, boundary_count: usize, m: usize) -> (usize, usize) {
    let c = md.c0 + md.c1 + md.c2;
    (c + boundary_count, c * m + c + boundary_count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GLevel {
    /// Generic map: the finite group is trivial.
    ExactTrivial,
    /// Simple map whose automorphisms fix the cycle subgraph pointwise.
    Exact,
    /// Only the bound by automorphisms acting trivially on homology.
    Bounded,
}

impl fmt::Display for GLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GLevel::ExactTrivial => "exact-trivial",
            GLevel::Exact => "exact",
            GLevel::Bounded => "bounded",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GReport {
    pub level: GLevel,
    pub order_bound: usize,
}

/// Leaf-preserving mapping classes: `Z^l`, or `Z2` for the Klein fibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pi0Leaf {
    Free(usize),
    Z2,
}

impl fmt::Display for Pi0Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pi0Leaf::Z2 => f.write_str("Z2"),
            Pi0Leaf::Free(0) => f.write_str("0"),
            Pi0Leaf::Free(1) => f.write_str("Z"),
            Pi0Leaf::Free(l) => write!(f, "Z^{l}"),
        }
    }
}

pub fn pi0_leaf(g: &ReebGraph, t: Option<SaddleFreeType>) -> Pi0Leaf {
    match t {
        Some(SaddleFreeType::E(_)) => Pi0Leaf::Z2,
        _ => Pi0Leaf::Free(g.internal_count()),
    }
}

/// Orbit type: a homotopy type when known, otherwise the extension shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitType {
    Known(HomotopyType),
    /// `π₁` is an extension of the finite group `G` by `π₁ Diff_id(M) ⊕ Z^k`.
    Extension { base: HomotopyType, k: KRank },
}

impl fmt::Display for OrbitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitType::Known(h) => write!(f, "{h}"),
            OrbitType::Extension { base, k: KRank::Exact(k) } => {
                write!(f, "ext(G; {})", *base * HomotopyType::torus(*k as u32))
            }
            OrbitType::Extension { base, k: KRank::Interval([_, hi]) } => {
                let circles = if base.is_point() { "(S1)^k".to_string() } else { format!("{base} x (S1)^k") };
                write!(f, "ext(G; {circles}), k<={hi}")
            }
        }
    }
}

pub const HIGHER_PI_RULE: &str = "pi_i O(f) = pi_i M for i >= 3, pi_2 O(f) = 0";
pub const SADDLE_FREE_RULE: &str = "from the orbit type";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub stabilizer_id: HomotopyType,
    pub orbit: OrbitType,
    pub orbit_f: HomotopyType,
    pub k: Option<KRank>,
    pub diff_id: HomotopyType,
    pub g: Option<GReport>,
    pub higher_pi_rule: &'static str,
    pub codim_orbit: usize,
    pub codim_orbit_cr: usize,
    pub l: usize,
    pub pi0_leaf: Pi0Leaf,
    pub saddle_free: Option<SaddleFreeType>,
    pub flags: Vec<String>,
}

/// Finite-group report from the automorphisms acting trivially on `H_1`.
pub fn g_report(g: &ReebGraph, md: &MorseData, auts: &[GraphAutomorphism]) -> GReport {
    let trivial_h1 = aut_h1_boundary(g, auts);
    let order_bound = trivial_h1.len();
    let level = if md.is_generic {
        GLevel::ExactTrivial
    } else if md.is_simple {
        let hat = h1_subgraph(g);
        if trivial_h1.iter().all(|t| fixes_h1_subgraph_pointwise(t, &hat)) { GLevel::Exact } else { GLevel::Bounded }
    } else {
        GLevel::Bounded
    };
    GReport { level, order_bound }
}

pub fn orbit_report(
    class: &SurfaceClass,
    md: &MorseData,
    g: &ReebGraph,
    summary: Option<&MinimalGraphSummary>,
    auts: &[GraphAutomorphism],
    saddle_free: Option<SaddleFreeType>,
) -> Result<OrbitReport, OrbitError> {
    let (codim_orbit, codim_orbit_cr) = codims(md, class.boundary_count as usize, 2);
    let diff_id = diffid_homotopy(class);
    let mut flags = Vec::new();
    let stabilizer_id = stabilizer_homotopy(class, md);
    let pi0 = pi0_leaf(g, saddle_free);

    if md.c1 == 0 {
        let t = saddle_free.ok_or(OrbitError::RequiresSaddle)?;
        let (orbit, orbit_f) = saddle_free_orbits(t);
        return Ok(OrbitReport {
            stabilizer_id,
            orbit: OrbitType::Known(orbit),
            orbit_f,
            k: None,
            diff_id,
            g: None,
            higher_pi_rule: SADDLE_FREE_RULE,
            codim_orbit,
            codim_orbit_cr,
            l: g.internal_count(),
            pi0_leaf: pi0,
            saddle_free: Some(t),
            flags,
        });
    }

    let k = rank_k(class, md, summary)?;
    let g_rep = g_report(g, md, auts);
    let orbit = match k {
        KRank::Exact(k) if md.is_generic => {
            if !generic_orbit_consistency(class, k, md) {
                flags.push("generic-orbit-mismatch".to_string());
            }
            OrbitType::Known(generic_orbit_type(class, md.c1, k))
        }
        k => OrbitType::Extension { base: diff_id, k },
    };
    if class.named() == Some(NamedSurface::Klein) {
        flags.push("klein: the Diff_id summand may fail to split".to_string());
    }
    if !class.orientable && class.genus == 1 && class.boundary_count >= 2 {
        flags.push("projective plane with several holes read as type 1".to_string());
    }
    if diffid_type(class) == DiffIdType::Three && !md.is_simple {
        flags.push("type 3 bound taken as c0+c2".to_string());
    }
    Ok(OrbitReport {
        stabilizer_id,
        orbit,
        orbit_f: HomotopyType::POINT,
        k: Some(k),
        diff_id,
        g: Some(g_rep),
        higher_pi_rule: HIGHER_PI_RULE,
        codim_orbit,
        codim_orbit_cr,
        l: g.internal_count(),
        pi0_leaf: pi0,
        saddle_free: None,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graphaut::automorphism_group;
    use crate::plmorse::{validate_morse, Codomain, ScalarField};
    use crate::reeb::{build_reeb, detect_type, finalize_morse};
    use crate::surface::{classify_surface, validate_surface, TriSurface};

    fn analyse(s: &TriSurface, f: &ScalarField) -> (SurfaceClass, MorseData, ReebGraph) {
        let md = validate_morse(s, f).unwrap();
        let g = build_reeb(s, f, &md).unwrap();
        (classify_surface(s), finalize_morse(&md, &g), g)
    }

    fn graph(kinds: &[(NodeKind, i64)], edges: &[(usize, usize)]) -> ReebGraph {
        let nodes =
            kinds.iter().map(|&(kind, l)| ReebNode { kind, level: Value::from_int(l), witnesses: vec![0] }).collect();
        let edges = edges.iter().map(|&(a, b)| ReebEdge::new(a, b, Value::from_int(1))).collect();
        ReebGraph::from_parts(Codomain::Real, nodes, edges)
    }

    #[test]
    fn torus_height_contracts_once() {
        let (s, f) = corpus::torus_height(8, 8);
        let (class, md, g) = analyse(&s, &f);
        let lower_min = (0..g.edge_count())
            .find(|&e| g.nodes[g.edges[e].lower].kind == NodeKind::Extremum)
            .unwrap();
        assert!(is_contractible_edge(&g, lower_min));
        let m = minimal_graph(&g).unwrap();
        assert_eq!((m.contractions(), m.r_c, m.r_e), (1, 1, 1));
        assert_eq!(m.graph.edge_count(), 2);
        assert!(m.graph.edges.iter().any(ReebEdge::is_loop));
        assert!((0..m.graph.edge_count()).all(|e| !is_contractible_edge(&m.graph, e)));
        assert_eq!(rank_k(&class, &md, Some(&m)).unwrap(), KRank::Exact(1));
        assert_eq!(md.c1 - m.r_c, 1);
    }

    #[test]
    fn loop_after_contraction_blocks() {
        // saddle with a loop and one extremum edge
        let g = graph(&[(NodeKind::Extremum, 0), (NodeKind::Saddle, 1)], &[(0, 1), (1, 1)]);
        assert!(!is_contractible_edge(&g, 0));
    }

    #[test]
    fn sphere_tree_with_external_neighbours_is_minimal() {
        // min, min below one saddle, max above
        let g = graph(
            &[(NodeKind::Extremum, 0), (NodeKind::Extremum, 1), (NodeKind::Saddle, 2), (NodeKind::Extremum, 3)],
            &[(0, 2), (1, 2), (2, 3)],
        );
        assert!((0..3).all(|e| !is_contractible_edge(&g, e)));
        let m = minimal_graph(&g).unwrap();
        assert_eq!((m.contractions(), m.r_c, m.r_e), (0, 1, 3));
    }

    #[test]
    fn sphere_height_has_nothing_to_contract() {
        let s = validate_surface(&corpus::tetrahedron_triangles()).unwrap();
        let (_, _, g) = analyse(&s, &ScalarField::from_ints(&[0, 1, 2, 3]));
        let m = minimal_graph(&g).unwrap();
        assert_eq!((m.contractions(), m.r_c, m.r_e), (0, 0, 2));
    }

    #[test]
    fn non_simple_rank_is_an_interval() {
        let (s, f) = corpus::egg_crate(8);
        let (class, md, g) = analyse(&s, &f);
        assert!(!md.is_simple);
        assert_eq!(minimal_graph(&g).unwrap_err(), OrbitError::NotSimple);
        assert_eq!(rank_k(&class, &md, None).unwrap(), KRank::Interval([0, md.c1 - 1]));
    }

    #[test]
    fn requires_saddle() {
        let s = validate_surface(&corpus::tetrahedron_triangles()).unwrap();
        let (class, md, _) = analyse(&s, &ScalarField::from_ints(&[0, 1, 2, 3]));
        assert_eq!(rank_k(&class, &md, None), Err(OrbitError::RequiresSaddle));
    }

    #[test]
    fn surface_lookups() {
        let sphere = SurfaceClass::new(true, 0, 0);
        let klein = SurfaceClass::new(false, 2, 0);
        let genus2 = SurfaceClass::new(true, 2, 0);
        assert_eq!(diffid_homotopy(&sphere).to_string(), "SO(3)");
        assert_eq!(diffid_homotopy(&klein).to_string(), "S1");
        assert_eq!(diffid_homotopy(&genus2).to_string(), "point");
        assert_eq!(diffid_homotopy(&SurfaceClass::new(true, 1, 0)).to_string(), "(S1)^2");
        let md = |c0, c1, c2| MorseData {
            critical_points: vec![],
            c0,
            c1,
            c2,
            is_generic: true,
            is_simple: true,
        };
        assert!(generic_orbit_consistency(&SurfaceClass::new(true, 1, 0), 1, &md(1, 2, 1)));
        assert!(generic_orbit_consistency(&klein, 3, &md(1, 2, 1)));
        assert!(generic_orbit_consistency(&SurfaceClass::new(true, 0, 1), 2, &md(1, 3, 1)));
        assert_eq!(stabilizer_homotopy(&sphere, &md(1, 0, 1)), HomotopyType::S1);
        assert_eq!(stabilizer_homotopy(&klein, &md(0, 0, 0)), HomotopyType::POINT);
        assert_eq!(codims(&md(1, 0, 1), 0, 2), (2, 6));
    }

    #[test]
    fn tetrahedron_report() {
        let s = validate_surface(&corpus::tetrahedron_triangles()).unwrap();
        let (class, md, g) = analyse(&s, &ScalarField::from_ints(&[0, 1, 2, 3]));
        let t = detect_type(&class, Codomain::Real, &md, &g).unwrap();
        let r = orbit_report(&class, &md, &g, None, &automorphism_group(&g), t).unwrap();
        assert_eq!(r.orbit.to_string(), "S2");
        assert_eq!(r.orbit_f.to_string(), "point");
        assert_eq!(r.stabilizer_id.to_string(), "S1");
        assert_eq!((r.codim_orbit, r.codim_orbit_cr), (2, 6));
    }

    #[test]
    fn torus_report() {
        let (s, f) = corpus::torus_height(8, 8);
        let (class, md, g) = analyse(&s, &f);
        let m = minimal_graph(&g).unwrap();
        let r = orbit_report(&class, &md, &g, Some(&m), &automorphism_group(&g), None).unwrap();
        assert_eq!(r.orbit.to_string(), "(S1)^3");
        assert_eq!(r.pi0_leaf, Pi0Leaf::Free(2));
        assert_eq!(r.pi0_leaf.to_string(), "Z^2");
        assert_eq!((r.codim_orbit, r.codim_orbit_cr), (4, 12));
        assert_eq!(r.g, Some(GReport { level: GLevel::ExactTrivial, order_bound: 1 }));
        assert!(r.flags.is_empty());
    }

    #[test]
    fn genus_two_simple_removes_every_extremum() {
        let s = corpus::genus2_surface(4);
        let class = classify_surface(&s);
        let (_, f, _) = corpus::search_field(&s, 0, 2000, |md| md.c1 >= 1 && md.is_generic).unwrap();
        let (_, md, g) = analyse(&s, &f);
        let m = minimal_graph(&g).unwrap();
        assert_eq!(m.r_e, 0);
        assert_eq!(rank_k(&class, &md, Some(&m)).unwrap(), KRank::Exact(md.c0 + md.c2));
    }

    #[test]
    fn outcomes_are_confluent_on_torus() {
        let (s, f) = corpus::torus_height(8, 8);
        let (_, _, g) = analyse(&s, &f);
        assert_eq!(contraction_outcomes(&g), BTreeSet::from([(1, 1)]));
    }
}
