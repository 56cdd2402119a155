//! Trivalent graphs with labeled leaves.
//!
//! Internal vertices are numbered `0..n_vertices`; each has three slots
//! (0-based internally, 1-based in every external format). A slot is attached
//! either to an internal edge (possibly a loop back to the same vertex) or to a
//! labeled leaf.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfEdge {
    pub vertex: usize,
    /// 0-based slot.
    pub slot: usize,
}

impl HalfEdge {
    pub const fn new(vertex: usize, slot: usize) -> Self {
        HalfEdge { vertex, slot }
    }
}

/// What a slot is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Attachment {
    /// Internal edge index and which end (0 = first half-edge, 1 = second).
    Edge(usize, usize),
    /// 0-based leaf index (label − 1).
    Leaf(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivalentGraph {
    n_vertices: usize,
    edges: Vec<(HalfEdge, HalfEdge)>,
    leaves: Vec<HalfEdge>,
    slots: Vec<[Attachment; 3]>,
}

impl TrivalentGraph {
    /// Validates and builds a graph. Every slot of every vertex must be used by
    /// exactly one edge end or leaf, and the graph must be connected.
    pub fn new(
        n_vertices: usize,
        edges: Vec<(HalfEdge, HalfEdge)>,
        leaves: Vec<HalfEdge>,
    ) -> Result<Self, GraphError> {
        if n_vertices == 0 {
            return Err(GraphError::Empty);
        }
        let mut slots: Vec<[Option<Attachment>; 3]> = vec![[None; 3]; n_vertices];
        let mut place = |h: HalfEdge, att: Attachment| -> Result<(), GraphError> {
            if h.vertex >= n_vertices {
                return Err(GraphError::UnknownVertex(h.vertex as u64));
            }
            if h.slot >= 3 {
                return Err(GraphError::SlotOutOfRange { vertex: h.vertex as u64, slot: h.slot as u64 + 1 });
            }
            let cell = &mut slots[h.vertex][h.slot];
            if cell.is_some() {
                return Err(GraphError::HalfEdgeReused { vertex: h.vertex as u64, slot: h.slot as u64 + 1 });
            }
            *cell = Some(att);
            Ok(())
        };
        for (i, (h0, h1)) in edges.iter().enumerate() {
            place(*h0, Attachment::Edge(i, 0))?;
            place(*h1, Attachment::Edge(i, 1))?;
        }
        for (i, h) in leaves.iter().enumerate() {
            place(*h, Attachment::Leaf(i))?;
        }
        let mut full = Vec::with_capacity(n_vertices);
        for (v, s) in slots.iter().enumerate() {
            let degree = s.iter().filter(|a| a.is_some()).count();
            if degree != 3 {
                return Err(GraphError::DegreeViolation { vertex: v as u64, degree });
            }
            full.push(s.map(|a| a.unwrap()));
        }
        let g = TrivalentGraph { n_vertices, edges, leaves, slots: full };
        if let Some(v) = g.first_unreachable() {
            return Err(GraphError::Disconnected(v as u64));
        }
        Ok(g)
    }

    fn first_unreachable(&self) -> Option<usize> {
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_leaves(&self) -> usize {
        self.leaves.len()
    }

    pub fn edges(&self) -> &[(HalfEdge, HalfEdge)] {
        &self.edges
    }

    pub fn leaves(&self) -> &[HalfEdge] {
        &self.leaves
    }

    pub fn attachment(&self, h: HalfEdge) -> Attachment {
        self.slots[h.vertex][h.slot]
    }

    /// The half-edge at the other end of an internal edge, or `None` at a leaf.
    pub fn opposite(&self, h: HalfEdge) -> Option<HalfEdge> {
        match self.attachment(h) {
            Attachment::Edge(e, 0) => Some(self.edges[e].1),
            Attachment::Edge(e, _) => Some(self.edges[e].0),
            Attachment::Leaf(_) => None,
        }
    }

    /// Internal neighbours of `v`, with multiplicity, including `v` itself for loops.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..3).filter_map(move |s| self.opposite(HalfEdge::new(v, s)).map(|h| h.vertex))
    }

    /// First Betti number.
    pub fn genus(&self) -> usize {
        self.edges.len() + 1 - self.n_vertices
    }

    pub fn is_tree(&self) -> bool {
        self.genus() == 0
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            internal: (0..self.n_vertices as u64).collect(),
            edges: self
                .edges
                .iter()
                .map(|(a, b)| [[a.vertex as u64, a.slot as u64 + 1], [b.vertex as u64, b.slot as u64 + 1]])
                .collect(),
            leaves: self
                .leaves
                .iter()
                .enumerate()
                .map(|(i, h)| ((i + 1).to_string(), [h.vertex as u64, h.slot as u64 + 1]))
                .collect(),
        }
    }
}

pub fn genus(g: &TrivalentGraph) -> usize {
    g.genus()
}

/// JSON graph description:
/// `{"internal":[ids],"edges":[[[v,slot],[w,slot]],...],"leaves":{"1":[v,slot],...}}`
/// with 1-based slots. Vertex ids are renumbered in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub internal: Vec<u64>,
    pub edges: Vec<[[u64; 2]; 2]>,
    #[serde(default)]
    pub leaves: BTreeMap<String, [u64; 2]>,
}

impl GraphSpec {
    pub fn build(&self) -> Result<TrivalentGraph, GraphError> {
        let ids: BTreeSet<u64> = self.internal.iter().copied().collect();
        if ids.len() != self.internal.len() {
            return Err(GraphError::Malformed("duplicate vertex id in `internal`".into()));
        }
        let index: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        let half = |[v, slot]: [u64; 2]| -> Result<HalfEdge, GraphError> {
            let vertex = *index.get(&v).ok_or(GraphError::UnknownVertex(v))?;
            if !(1..=3).contains(&slot) {
                return Err(GraphError::SlotOutOfRange { vertex: v, slot });
            }
            Ok(HalfEdge::new(vertex, slot as usize - 1))
        };
        let edges = self
            .edges
            .iter()
            .map(|[a, b]| Ok((half(*a)?, half(*b)?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        let n = self.leaves.len();
        let mut leaves = vec![None; n];
        for (label, h) in &self.leaves {
            let idx = label
                .parse::<usize>()
                .ok()
                .filter(|l| (1..=n).contains(l))
                .ok_or_else(|| GraphError::LeafLabel { expected: n, found: label.clone() })?;
            if leaves[idx - 1].is_some() {
                return Err(GraphError::LeafLabel { expected: n, found: label.clone() });
            }
            leaves[idx - 1] = Some(half(*h)?);
        }
        // n distinct labels in 1..=n: every entry is set
        let leaves = leaves.into_iter().map(|h| h.unwrap()).collect();
        TrivalentGraph::new(ids.len(), edges, leaves)
    }
}

/// Caterpillar tree with `n ≥ 3` leaves: a path of `n − 2` vertices.
pub fn caterpillar(n: usize) -> Result<TrivalentGraph, GraphError> {
    if n < 3 {
        return Err(GraphError::Malformed(format!("caterpillar needs at least 3 leaves, got {n}")));
    }
    let spine = n - 2;
    let mut edges = Vec::new();
    let mut leaves = vec![HalfEdge::new(0, 0), HalfEdge::new(0, 1)];
    for v in 0..spine - 1 {
        edges.push((HalfEdge::new(v, 2), HalfEdge::new(v + 1, 0)));
        if v + 1 < spine - 1 {
            leaves.push(HalfEdge::new(v + 1, 1));
        }
    }
    if spine == 1 {
        leaves.push(HalfEdge::new(0, 2));
    } else {
        leaves.push(HalfEdge::new(spine - 1, 1));
        leaves.push(HalfEdge::new(spine - 1, 2));
    }
    TrivalentGraph::new(spine, edges, leaves)
}

/// `Γ(g, n)`: a caterpillar with `g + n` ends whose first `g` ends are capped by
/// a vertex carrying a loop (slots 1 and 2), followed by `n` leaves.
/// `gamma(1, 1)` is a single looped vertex with one leaf; `gamma(2, 0)` is the
/// dumbbell.
pub fn gamma(g: usize, n: usize) -> Result<TrivalentGraph, GraphError> {
    let ends = g + n;
    if ends < 2 || (g == 0 && n < 3) {
        return Err(GraphError::Malformed(format!(
            "no trivalent graph gamma:{g},{n} (need g+n ≥ 2, and n ≥ 3 when g = 0)"
        )));
    }
    if g == 0 {
        return caterpillar(n);
    }
    let mut edges = Vec::new();
    let mut leaves = Vec::new();
    let spine = ends - 2;
    if spine == 0 {
        // gamma:1,1 and gamma:2,0: vertex 0 carries a loop, its third slot is
        // the leaf or the bridge to a second looped vertex
        edges.push((HalfEdge::new(0, 0), HalfEdge::new(0, 1)));
        if g == 2 {
            edges.push((HalfEdge::new(1, 0), HalfEdge::new(1, 1)));
            edges.push((HalfEdge::new(0, 2), HalfEdge::new(1, 2)));
            return TrivalentGraph::new(2, edges, leaves);
        }
        leaves.push(HalfEdge::new(0, 2));
        return TrivalentGraph::new(1, edges, leaves);
    }
    let mut end_slots = vec![HalfEdge::new(0, 0), HalfEdge::new(0, 1)];
    for v in 0..spine - 1 {
        edges.push((HalfEdge::new(v, 2), HalfEdge::new(v + 1, 0)));
        if v + 1 < spine - 1 {
            end_slots.push(HalfEdge::new(v + 1, 1));
        }
    }
    if spine == 1 {
        end_slots.push(HalfEdge::new(0, 2));
    } else {
        end_slots.push(HalfEdge::new(spine - 1, 1));
        end_slots.push(HalfEdge::new(spine - 1, 2));
    }
    let mut next_vertex = spine;
    for (i, h) in end_slots.into_iter().enumerate() {
        if i < g {
            let v = next_vertex;
            next_vertex += 1;
            edges.push((HalfEdge::new(v, 0), HalfEdge::new(v, 1)));
            edges.push((h, HalfEdge::new(v, 2)));
        } else {
            leaves.push(h);
        }
    }
    TrivalentGraph::new(next_vertex, edges, leaves)
}

/// Two looped vertices joined by an edge (genus 2, no leaves).
pub fn dumbbell() -> TrivalentGraph {
    gamma(2, 0).expect("dumbbell is valid")
}

/// Two vertices joined by three parallel edges (genus 2, no leaves).
pub fn theta() -> TrivalentGraph {
    let edges = (0..3).map(|s| (HalfEdge::new(0, s), HalfEdge::new(1, s))).collect();
    TrivalentGraph::new(2, edges, Vec::new()).expect("theta is valid")
}

/// Parses builder shorthand (`caterpillar:n`, `gamma:g,n`, `dumbbell`, `theta`)
/// or an inline JSON object.
pub fn parse_graph(spec: &str) -> Result<TrivalentGraph, GraphError> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        let parsed: GraphSpec =
            serde_json::from_str(spec).map_err(|e| GraphError::Malformed(e.to_string()))?;
        return parsed.build();
    }
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| GraphError::Malformed(format!("`{s}` is not a non-negative integer in `{spec}`")))
    };
    match spec.split_once(':') {
        Some(("caterpillar", n)) => caterpillar(num(n)?),
        Some(("gamma", rest)) => {
            let (g, n) = rest
                .split_once(',')
                .ok_or_else(|| GraphError::Malformed(format!("expected gamma:g,n, got `{spec}`")))?;
            gamma(num(g)?, num(n)?)
        }
        None if spec == "dumbbell" => Ok(dumbbell()),
        None if spec == "theta" => Ok(theta()),
        _ => Err(GraphError::UnknownBuilder(spec.to_string())),
    }
}

/// One trinode per internal vertex, with the pairs of slots identified by
/// internal edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrinodeForest {
    pub trinodes: usize,
    pub matched: Vec<(HalfEdge, HalfEdge)>,
    /// Slot carrying each leaf, in label order.
    pub leaf_slots: Vec<HalfEdge>,
}

pub fn split_to_trinodes(g: &TrivalentGraph) -> TrinodeForest {
    TrinodeForest { trinodes: g.n_vertices, matched: g.edges.clone(), leaf_slots: g.leaves.clone() }
}

/// A proper forest: vertex-disjoint subtrees, each spanned by ≥ 2 leaves of
/// the tree, with all of its own leaves among the tree's leaves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProperForest {
    /// Leaf sets (0-based leaf indices) of the components.
    pub components: Vec<Vec<usize>>,
}

impl ProperForest {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }
}

/// Minimal subtree connecting a set of leaves: its vertices and used slots.
pub(crate) fn spanning_subtree(t: &TrivalentGraph, leaf_set: &[usize]) -> BTreeMap<usize, Vec<usize>> {
    // A slot is used iff its side of the tree contains a chosen leaf and the
    // other side does too. Compute, per half-edge, the leaves behind it.
    let mut used: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let total = leaf_set.len();
    for v in 0..t.n_vertices {
        for s in 0..3 {
            let behind = leaves_behind(t, HalfEdge::new(v, s), leaf_set);
            if behind > 0 && behind < total {
                used.entry(v).or_default().push(s);
            }
        }
    }
    used
}

/// Number of chosen leaves reachable by leaving `v` through slot `s`.
fn leaves_behind(t: &TrivalentGraph, h: HalfEdge, leaf_set: &[usize]) -> usize {
    match t.attachment(h) {
        Attachment::Leaf(l) => usize::from(leaf_set.contains(&l)),
        Attachment::Edge(..) => {
            let far = t.opposite(h).unwrap();
            (0..3)
                .filter(|&s| s != far.slot)
                .map(|s| leaves_behind(t, HalfEdge::new(far.vertex, s), leaf_set))
                .sum()
        }
    }
}

/// All proper forests of a tree, in a deterministic order.
pub fn proper_forests(t: &TrivalentGraph) -> Result<Vec<ProperForest>, GraphError> {
    if !t.is_tree() {
        return Err(GraphError::NotATree(t.genus()));
    }
    let n = t.n_leaves();
    let mut candidates: Vec<(Vec<usize>, BTreeSet<usize>)> = Vec::new();
    for mask in 1u64..(1u64 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let leaf_set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let vertices = spanning_subtree(t, &leaf_set).into_keys().collect();
        candidates.push((leaf_set, vertices));
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    collect_forests(&candidates, 0, &mut chosen, &mut BTreeSet::new(), &mut out);
    Ok(out)
}

fn collect_forests(
    candidates: &[(Vec<usize>, BTreeSet<usize>)],
    start: usize,
    chosen: &mut Vec<usize>,
    occupied: &mut BTreeSet<usize>,
    out: &mut Vec<ProperForest>,
) {
    for i in start..candidates.len() {
        let (_, verts) = &candidates[i];
        if !verts.is_disjoint(occupied) {
            continue;
        }
        chosen.push(i);
        occupied.extend(verts.iter().copied());
        out.push(ProperForest {
            components: chosen.iter().map(|&c| candidates[c].0.clone()).collect(),
        });
        collect_forests(candidates, i + 1, chosen, occupied, out);
        for v in verts {
            occupied.remove(v);
        }
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_and_genus() {
        let c4 = parse_graph("caterpillar:4").unwrap();
        assert_eq!((c4.n_vertices(), c4.edges().len(), c4.genus(), c4.n_leaves()), (2, 1, 0, 4));
        let g11 = parse_graph("gamma:1,1").unwrap();
        assert_eq!((g11.n_vertices(), g11.edges().len(), g11.genus(), g11.n_leaves()), (1, 1, 1, 1));
        assert_eq!(g11.edges()[0], (HalfEdge::new(0, 0), HalfEdge::new(0, 1)));
        assert_eq!(dumbbell().genus(), 2);
        assert_eq!(dumbbell().n_vertices(), 2);
        assert_eq!(theta().genus(), 2);
        for n in 3..8 {
            assert_eq!(caterpillar(n).unwrap().genus(), 0);
            assert_eq!(caterpillar(n).unwrap().n_leaves(), n);
        }
        for g in 1..4 {
            for n in 1..5 {
                let gr = gamma(g, n).unwrap();
                assert_eq!(gr.genus(), g, "gamma:{g},{n}");
                assert_eq!(gr.n_leaves(), n);
            }
        }
        assert_eq!(gamma(3, 0).unwrap().genus(), 3);
        assert!(gamma(1, 0).is_err());
        assert!(parse_graph("caterpillar:2").is_err());
        assert!(matches!(parse_graph("hexagon"), Err(GraphError::UnknownBuilder(_))));
    }

    #[test]
    fn json_round_trip() {
        for g in [caterpillar(5).unwrap(), gamma(1, 2).unwrap(), theta()] {
            let json = serde_json::to_string(&g.to_spec()).unwrap();
            assert_eq!(parse_graph(&json).unwrap(), g);
        }
    }

    #[test]
    fn json_errors() {
        // vertex 7 has a degree-2 slot pattern
        let bad = r#"{"internal":[7],"edges":[[[7,1],[7,2]]],"leaves":{}}"#;
        assert_eq!(parse_graph(bad), Err(GraphError::DegreeViolation { vertex: 0, degree: 2 }));
        let bad = r#"{"internal":[1],"edges":[[[1,1],[1,4]]],"leaves":{"1":[1,3]}}"#;
        assert_eq!(parse_graph(bad), Err(GraphError::SlotOutOfRange { vertex: 1, slot: 4 }));
        let bad = r#"{"internal":[1],"edges":[[[1,1],[1,1]]],"leaves":{"1":[1,3]}}"#;
        assert!(matches!(parse_graph(bad), Err(GraphError::HalfEdgeReused { .. })));
        let bad = r#"{"internal":[1,2],"edges":[[[1,1],[1,2]],[[2,1],[2,2]]],"leaves":{"1":[1,3],"2":[2,3]}}"#;
        assert_eq!(parse_graph(bad), Err(GraphError::Disconnected(1)));
        let bad = r#"{"internal":[1],"edges":[[[1,1],[1,2]]],"leaves":{"2":[1,3]}}"#;
        assert!(matches!(parse_graph(bad), Err(GraphError::LeafLabel { .. })));
        assert!(matches!(parse_graph("{\"internal\":"), Err(GraphError::Malformed(_))));
        let bad = r#"{"internal":[1],"edges":[[[1,1],[1,2]]],"leaves":{"1":[5,3]}}"#;
        assert_eq!(parse_graph(bad), Err(GraphError::UnknownVertex(5)));
    }

    #[test]
    fn splitting() {
        let f = split_to_trinodes(&caterpillar(3).unwrap());
        assert_eq!((f.trinodes, f.matched.len()), (1, 0));
        let f = split_to_trinodes(&caterpillar(4).unwrap());
        assert_eq!((f.trinodes, f.matched.len()), (2, 1));
        let f = split_to_trinodes(&gamma(1, 1).unwrap());
        assert_eq!(f.matched, vec![(HalfEdge::new(0, 0), HalfEdge::new(0, 1))]);
        assert_eq!(f.leaf_slots, vec![HalfEdge::new(0, 2)]);
    }

    #[test]
    fn tripod_forests() {
        let f = proper_forests(&caterpillar(3).unwrap()).unwrap();
        let comps: Vec<_> = f.iter().map(|p| p.components.clone()).collect();
        assert_eq!(comps, vec![vec![vec![0, 1]], vec![vec![0, 2]], vec![vec![1, 2]], vec![vec![0, 1, 2]]]);
        assert!(f.iter().all(|p| p.n_components() == 1));
    }

    #[test]
    fn caterpillar4_forests() {
        let f = proper_forests(&caterpillar(4).unwrap()).unwrap();
        // every leaf subset of size ≥ 2 spans a subtree, plus {12}+{34}
        assert_eq!(f.len(), 11 + 1);
        assert!(f.iter().any(|p| p.components == vec![vec![0, 1, 2, 3]]));
        assert!(f.iter().any(|p| p.components == vec![vec![0, 1], vec![2, 3]]));
        assert!(proper_forests(&gamma(1, 1).unwrap()).is_err());
    }
}
