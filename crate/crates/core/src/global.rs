//! Lattice points of the glued semigroup over a trivalent graph.
//!
//! A global point assigns a CB local point to every internal vertex, all at one
//! shared level, such that across every internal edge the two boundary values
//! are dual. Leaf `i` carries the boundary value at its slot, unstarred.
//!
//! Dimensions are computed by a sum-product over internal-edge weights: an edge
//! carrying `μ` shows `μ` at its first half-edge and `μ*` at its second. Only
//! weights with `a + b ≤ L` are summed; larger ones have empty local fibers.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GlobalError, GraphError};
use crate::graphs::{proper_forests, spanning_subtree, Attachment, HalfEdge, TrivalentGraph};
use crate::local::{self, Boundary, Generator, LocalPoint, Rep};
use crate::weights::{fusion_dim, Weight};

/// One CB local point per internal vertex, at a shared level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GlobalPoint {
    points: Vec<LocalPoint>,
    level: u32,
}

impl GlobalPoint {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn points(&self) -> &[LocalPoint] {
        &self.points
    }

    pub fn leaf_weights(&self, g: &TrivalentGraph) -> Vec<Weight> {
        g.leaves().iter().map(|h| self.points[h.vertex].boundary()[h.slot]).collect()
    }

    /// Concatenated class coordinates of the local points; injective on points.
    pub fn lattice_coords(&self) -> Vec<i32> {
        self.points.iter().flat_map(|p| p.cb_lattice_coords()).collect()
    }

    /// Vertexwise sum. Duality across edges and the shared level are preserved.
    pub fn add(&self, other: &GlobalPoint) -> GlobalPoint {
        let points = self
            .points
            .iter()
            .zip(&other.points)
            .map(|(p, q)| p.add(q).expect("global points use the CB presentation"))
            .collect();
        GlobalPoint { points, level: self.level + other.level }
    }

    pub fn zero(n_vertices: usize) -> GlobalPoint {
        GlobalPoint { points: vec![LocalPoint::zero(Rep::Cb); n_vertices], level: 0 }
    }
}

impl fmt::Display for GlobalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L={} [", self.level)?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

fn half_name(h: HalfEdge) -> String {
    format!("v{}.{}", h.vertex, h.slot + 1)
}

/// Validates a vertex assignment as a point of the glued semigroup.
pub fn assemble(g: &TrivalentGraph, parts: Vec<LocalPoint>, level: u32) -> Result<GlobalPoint, GlobalError> {
    if parts.len() != g.n_vertices() {
        return Err(GlobalError::VertexCount { expected: g.n_vertices(), found: parts.len() });
    }
    for (v, p) in parts.iter().enumerate() {
        if p.rep() != Rep::Cb {
            return Err(GlobalError::WrongRepresentation(v));
        }
        if p.level() != level {
            return Err(GlobalError::LevelMismatch { vertex: v, expected: level, found: p.level() });
        }
    }
    for (e, (h0, h1)) in g.edges().iter().enumerate() {
        let lw = parts[h0.vertex].boundary()[h0.slot];
        let rw = parts[h1.vertex].boundary()[h1.slot];
        if lw != rw.dual() {
            return Err(GlobalError::NotDual {
                edge: e,
                left: half_name(*h0),
                right: half_name(*h1),
                lw: lw.to_string(),
                rw: rw.to_string(),
            });
        }
    }
    Ok(GlobalPoint { points: parts, level })
}

fn check_arity(g: &TrivalentGraph, leaves: &[Weight]) -> Result<(), GlobalError> {
    if leaves.len() != g.n_leaves() {
        return Err(GlobalError::Arity { expected: g.n_leaves(), found: leaves.len() });
    }
    Ok(())
}

/// A sparse factor over weight-valued variables (values are indices into the
/// level's weight list).
#[derive(Clone, Debug)]
struct Factor {
    vars: Vec<usize>,
    table: HashMap<Vec<u16>, u64>,
}

impl Factor {
    fn product(&self, other: &Factor) -> Factor {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(*v);
            }
        }
        let shared: Vec<(usize, usize)> = other
            .vars
            .iter()
            .enumerate()
            .filter_map(|(j, v)| self.vars.iter().position(|w| w == v).map(|i| (i, j)))
            .collect();
        let extra: Vec<usize> = (0..other.vars.len())
            .filter(|j| !self.vars.contains(&other.vars[*j]))
            .collect();
        let mut table = HashMap::new();
        for (ka, va) in &self.table {
            for (kb, vb) in &other.table {
                if shared.iter().all(|&(i, j)| ka[i] == kb[j]) {
                    let mut key = ka.clone();
                    key.extend(extra.iter().map(|&j| kb[j]));
                    *table.entry(key).or_insert(0) += va * vb;
                }
            }
        }
        Factor { vars, table }
    }

    fn sum_out(&self, var: usize) -> Factor {
        let pos = self.vars.iter().position(|v| *v == var).unwrap();
        let mut vars = self.vars.clone();
        vars.remove(pos);
        let mut table = HashMap::new();
        for (k, v) in &self.table {
            let mut key = k.clone();
            key.remove(pos);
            *table.entry(key).or_insert(0) += v;
        }
        Factor { vars, table }
    }
}

/// What a vertex slot reads: a variable (edge end or free leaf) or a fixed weight.
#[derive(Clone, Copy, Debug)]
enum SlotValue {
    Var { var: usize, dual: bool },
    Fixed(Weight),
}

fn slot_values(g: &TrivalentGraph, leaves: Option<&[Weight]>) -> Vec<[SlotValue; 3]> {
    let n_edges = g.edges().len();
    (0..g.n_vertices())
        .map(|v| {
            std::array::from_fn(|s| match g.attachment(HalfEdge::new(v, s)) {
                Attachment::Edge(e, end) => SlotValue::Var { var: e, dual: end == 1 },
                Attachment::Leaf(l) => match leaves {
                    Some(ws) => SlotValue::Fixed(ws[l]),
                    None => SlotValue::Var { var: n_edges + l, dual: false },
                },
            })
        })
        .collect()
}

/// Sum over all assignments of the free weights (internal edges, and leaves when
/// `leaves` is `None`) of the product of `local` over vertices.
fn sum_product<F>(g: &TrivalentGraph, leaves: Option<&[Weight]>, level: u32, local: F) -> u64
where
    F: Fn(&Boundary, u32) -> u64,
{
    let domain = Weight::up_to_level(level);
    let slots = slot_values(g, leaves);
    let mut factors: Vec<Factor> = slots
        .iter()
        .map(|sv| {
            let mut vars: Vec<usize> = Vec::new();
            for s in sv {
                if let SlotValue::Var { var, .. } = s {
                    if !vars.contains(var) {
                        vars.push(*var);
                    }
                }
            }
            let mut table = HashMap::new();
            let mut idx = vec![0u16; vars.len()];
            loop {
                let abc: Boundary = std::array::from_fn(|i| match sv[i] {
                    SlotValue::Fixed(w) => w,
                    SlotValue::Var { var, dual } => {
                        let w = domain[idx[vars.iter().position(|v| *v == var).unwrap()] as usize];
                        if dual { w.dual() } else { w }
                    }
                });
                let c = local(&abc, level);
                if c > 0 {
                    table.insert(idx.clone(), c);
                }
                // odometer over the vertex's variables
                let mut k = 0;
                while k < idx.len() {
                    idx[k] += 1;
                    if (idx[k] as usize) < domain.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
            Factor { vars, table }
        })
        .collect();

    // eliminate variables greedily by smallest joined scope
    loop {
        let mut all_vars: Vec<usize> = factors.iter().flat_map(|f| f.vars.iter().copied()).collect();
        all_vars.sort_unstable();
        all_vars.dedup();
        if all_vars.is_empty() {
            break;
        }
        let scope = |var: usize| {
            let mut s: Vec<usize> = factors
                .iter()
                .filter(|f| f.vars.contains(&var))
                .flat_map(|f| f.vars.iter().copied())
                .collect();
            s.sort_unstable();
            s.dedup();
            s.len()
        };
        let var = *all_vars.iter().min_by_key(|v| (scope(**v), **v)).unwrap();
        let (with, without): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.vars.contains(&var));
        let joined = with[1..].iter().fold(with[0].clone(), |acc, f| acc.product(f));
        factors = without;
        factors.push(joined.sum_out(var));
    }
    factors
        .iter()
        .map(|f| f.table.get(&Vec::new()).copied().unwrap_or(0))
        .product()
}

/// The same sum as [`sum_product`] by brute force over all edge-weight tuples
/// (leaves fixed).
fn sum_product_naive<F>(g: &TrivalentGraph, leaves: &[Weight], level: u32, local: F) -> u64
where
    F: Fn(&Boundary, u32) -> u64,
{
    let domain = Weight::up_to_level(level);
    let slots = slot_values(g, Some(leaves));
    let n_edges = g.edges().len();
    let mut idx = vec![0usize; n_edges];
    let mut total = 0;
    loop {
        let mut prod = 1;
        for sv in &slots {
            let abc: Boundary = std::array::from_fn(|i| match sv[i] {
                SlotValue::Fixed(w) => w,
                SlotValue::Var { var, dual } => {
                    let w = domain[idx[var]];
                    if dual { w.dual() } else { w }
                }
            });
            prod *= local(&abc, level);
            if prod == 0 {
                break;
            }
        }
        total += prod;
        let mut k = 0;
        while k < n_edges {
            idx[k] += 1;
            if idx[k] < domain.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n_edges {
            break;
        }
    }
    total
}

/// Number of lattice points of the glued semigroup over `leaves` at `level`.
pub fn global_dim(g: &TrivalentGraph, leaves: &[Weight], level: u32) -> Result<u64, GlobalError> {
    check_arity(g, leaves)?;
    Ok(sum_product(g, Some(leaves), level, local::fused_count))
}

/// The same sum-product with the Kac–Walton fusion coefficients in place of
/// the local lattice-point counts.
pub fn global_dim_fusion_oracle(g: &TrivalentGraph, leaves: &[Weight], level: u32) -> Result<u64, GlobalError> {
    check_arity(g, leaves)?;
    Ok(sum_product(g, Some(leaves), level, |abc, l| fusion_dim(abc[0], abc[1], abc[2], l)))
}

/// Brute-force edge-tuple sum (no variable elimination).
pub fn global_dim_naive(g: &TrivalentGraph, leaves: &[Weight], level: u32) -> Result<u64, GlobalError> {
    check_arity(g, leaves)?;
    Ok(sum_product_naive(g, leaves, level, local::fused_count))
}

/// `h(L)` for `L = 0..=max_level`, summing over all leaf weights.
pub fn hilbert_function(g: &TrivalentGraph, max_level: u32) -> Vec<u64> {
    (0..=max_level).map(|l| sum_product(g, None, l, local::fused_count)).collect()
}

/// Every leaf-weight tuple with entries in `Weight::up_to_level(max_weight_level)`,
/// in lexicographic order.
pub fn leaf_weight_tuples(n: usize, max_weight_level: u32) -> Vec<Vec<Weight>> {
    let ws = Weight::up_to_level(max_weight_level);
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                ws.iter().map(move |w| {
                    let mut t = t.clone();
                    t.push(*w);
                    t
                })
            })
            .collect();
    }
    out
}

/// Multigraded table `λ⃗ → dim` at `level` over leaf weights with `a + b ≤ max_weight_level`.
pub fn multigraded_table(g: &TrivalentGraph, max_weight_level: u32, level: u32) -> BTreeMap<Vec<Weight>, u64> {
    leaf_weight_tuples(g.n_leaves(), max_weight_level)
        .into_par_iter()
        .map(|t| {
            let d = sum_product(g, Some(&t), level, local::fused_count);
            (t, d)
        })
        .collect()
}

pub const DEFAULT_ENUMERATION_CAP: u64 = 2_000_000;

/// All global points at `level`, over the given leaf weights or over all leaf
/// weights when `leaves` is `None`. Sorted.
pub fn enumerate_level(
    g: &TrivalentGraph,
    leaves: Option<&[Weight]>,
    level: u32,
    cap: u64,
) -> Result<Vec<GlobalPoint>, GlobalError> {
    if let Some(ws) = leaves {
        check_arity(g, ws)?;
    }
    let estimate = sum_product(g, leaves, level, local::fused_count);
    if estimate > cap {
        return Err(GlobalError::CapExceeded { estimate, cap });
    }
    let pool = local::all_points(level, Rep::Cb);
    let bounds: Vec<Boundary> = pool.iter().map(|p| p.boundary()).collect();
    let mut by_slot: HashMap<(usize, Weight), Vec<u32>> = HashMap::new();
    for (i, b) in bounds.iter().enumerate() {
        for (s, w) in b.iter().enumerate() {
            by_slot.entry((s, *w)).or_default().push(i as u32);
        }
    }
    let mut out = Vec::with_capacity(estimate as usize);
    let mut chosen: Vec<Option<u32>> = vec![None; g.n_vertices()];
    let order = vertex_order(g);
    let ctx = SearchCtx { g, leaves, pool: &pool, bounds: &bounds, by_slot: &by_slot, order: &order, level };
    ctx.search(0, &mut chosen, &mut out);
    out.sort();
    debug_assert_eq!(out.len() as u64, estimate);
    Ok(out)
}

fn vertex_order(g: &TrivalentGraph) -> Vec<usize> {
    let mut seen = vec![false; g.n_vertices()];
    let mut order = vec![0];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
        i += 1;
    }
    order
}

struct SearchCtx<'a> {
    g: &'a TrivalentGraph,
    leaves: Option<&'a [Weight]>,
    pool: &'a [LocalPoint],
    bounds: &'a [Boundary],
    by_slot: &'a HashMap<(usize, Weight), Vec<u32>>,
    order: &'a [usize],
    level: u32,
}

impl SearchCtx<'_> {
    fn search(&self, depth: usize, chosen: &mut Vec<Option<u32>>, out: &mut Vec<GlobalPoint>) {
        if depth == self.order.len() {
            let points = chosen.iter().map(|c| self.pool[c.unwrap() as usize]).collect();
            out.push(GlobalPoint { points, level: self.level });
            return;
        }
        let v = self.order[depth];
        // required boundary per slot, and loop pairs to check afterwards
        let mut required: [Option<Weight>; 3] = [None; 3];
        let mut loops: Vec<(usize, usize)> = Vec::new();
        for (s, req) in required.iter_mut().enumerate() {
            let h = HalfEdge::new(v, s);
            match self.g.attachment(h) {
                Attachment::Leaf(l) => *req = self.leaves.map(|ws| ws[l]),
                Attachment::Edge(..) => {
                    let far = self.g.opposite(h).unwrap();
                    if far.vertex == v {
                        if s < far.slot {
                            loops.push((s, far.slot));
                        }
                    } else if let Some(c) = chosen[far.vertex] {
                        *req = Some(self.bounds[c as usize][far.slot].dual());
                    }
                }
            }
        }
        let constrained: Vec<(usize, Weight)> =
            required.iter().enumerate().filter_map(|(s, w)| w.map(|w| (s, w))).collect();
        let fits = |i: u32| {
            let b = &self.bounds[i as usize];
            constrained.iter().all(|(s, w)| b[*s] == *w) && loops.iter().all(|(s, t)| b[*s] == b[*t].dual())
        };
        let candidates: Box<dyn Iterator<Item = u32>> = match constrained.first() {
            Some(key) => match self.by_slot.get(key) {
                Some(list) => Box::new(list.iter().copied()),
                None => Box::new(std::iter::empty()),
            },
            None => Box::new(0..self.pool.len() as u32),
        };
        for i in candidates {
            if fits(i) {
                chosen[v] = Some(i);
                self.search(depth + 1, chosen, out);
            }
        }
        chosen[v] = None;
    }
}

/// Lattice points over fixed leaf weights, capped.
pub fn enumerate_global(
    g: &TrivalentGraph,
    leaves: &[Weight],
    level: u32,
    cap: u64,
) -> Result<Vec<GlobalPoint>, GlobalError> {
    enumerate_level(g, Some(leaves), level, cap)
}

/// Level-one points of a tree from its proper forests: the all-`X` point, and for
/// each proper forest and each of the two complete weightings of every component,
/// the corresponding assignment of generators.
pub fn degree_one_elements(t: &TrivalentGraph) -> Result<Vec<GlobalPoint>, GraphError> {
    let forests = proper_forests(t)?;
    let mut out = vec![GlobalPoint {
        points: vec![LocalPoint::generator(Generator::X, Rep::Cb); t.n_vertices()],
        level: 1,
    }];
    for forest in &forests {
        let comps: Vec<BTreeMap<usize, Vec<usize>>> =
            forest.components.iter().map(|c| spanning_subtree(t, c)).collect();
        let c = comps.len();
        for orientation in 0u32..(1 << c) {
            let mut slot_weights = vec![[Weight::ZERO; 3]; t.n_vertices()];
            for (ci, (comp, leaf_set)) in comps.iter().zip(&forest.components).enumerate() {
                let start = Weight::new(1, 0);
                let start = if orientation >> ci & 1 == 1 { start.dual() } else { start };
                weight_component(t, comp, t.leaves()[leaf_set[0]], start, &mut slot_weights);
            }
            let points = slot_weights
                .iter()
                .map(|b| {
                    let g = Generator::ALL
                        .into_iter()
                        .find(|g| g.boundary() == *b)
                        .expect("complete weighting matches a generator");
                    LocalPoint::generator(g, Rep::Cb)
                })
                .collect();
            out.push(GlobalPoint { points, level: 1 });
        }
    }
    out.sort();
    Ok(out)
}

/// Propagates a complete weighting from the leaf half-edge `start_at` through
/// one component: three used slots carry equal values, two used slots carry
/// dual values, and the two ends of an edge carry dual values.
fn weight_component(
    t: &TrivalentGraph,
    comp: &BTreeMap<usize, Vec<usize>>,
    start_at: HalfEdge,
    start: Weight,
    slot_weights: &mut [[Weight; 3]],
) {
    let mut stack = vec![(start_at, start)];
    while let Some((h, w)) = stack.pop() {
        let used = &comp[&h.vertex];
        slot_weights[h.vertex][h.slot] = w;
        let rest = if used.len() == 3 { w } else { w.dual() };
        for &s in used {
            if s == h.slot {
                continue;
            }
            slot_weights[h.vertex][s] = rest;
            if let Some(far) = t.opposite(HalfEdge::new(h.vertex, s)) {
                stack.push((far, rest.dual()));
            }
        }
    }
}
