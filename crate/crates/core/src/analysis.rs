//! Structural checks on the glued semigroup: indecomposables, normality,
//! relation degrees, the Gorenstein property and the h-vector.
//!
//! Points are handled through their lattice coordinates, which embed the
//! semigroup additively, so `p = q + r` is tested as membership of `p − q` in
//! the hashed point set of the complementary level.

pub mod cone;

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{AnalysisError, GraphError};
use crate::global::{self, enumerate_level, GlobalPoint, DEFAULT_ENUMERATION_CAP};
use crate::graphs::TrivalentGraph;
use crate::local::{self, LocalPoint, Rep};
use crate::weights::Weight;

type Coords = Vec<i64>;

/// Points of a graded semigroup by level, as coordinate vectors. Level 0 is
/// the zero point alone.
#[derive(Clone, Debug)]
pub struct Graded {
    levels: Vec<Vec<Coords>>,
    sets: Vec<HashSet<Coords>>,
}

impl Graded {
    pub fn new(levels: Vec<Vec<Coords>>) -> Self {
        let sets = levels.iter().map(|l| l.iter().cloned().collect()).collect();
        Graded { levels, sets }
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, l: usize) -> &[Coords] {
        &self.levels[l]
    }

    pub fn contains(&self, level: usize, v: &[i64]) -> bool {
        level < self.sets.len() && self.sets[level].contains(v)
    }

    fn sub(p: &[i64], q: &[i64]) -> Coords {
        p.iter().zip(q).map(|(a, b)| a - b).collect()
    }

    /// Whether `p` (of level `level`) splits as a sum of two points of positive level.
    pub fn decomposes(&self, level: usize, p: &[i64]) -> bool {
        (1..=level / 2).any(|l| self.levels[l].iter().any(|q| self.contains(level - l, &Self::sub(p, q))))
    }

    /// `(level, index)` of every indecomposable point of positive level.
    pub fn indecomposables(&self) -> Vec<(usize, usize)> {
        (1..self.levels.len())
            .flat_map(|l| (0..self.levels[l].len()).map(move |i| (l, i)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .filter(|&(l, i)| !self.decomposes(l, &self.levels[l][i]))
            .collect()
    }

    /// Whether every point of level `l ≥ 2` is a level-one point plus a point of level `l − 1`.
    pub fn is_generated_in_degree_one(&self) -> bool {
        (2..self.levels.len()).all(|l| {
            self.levels[l]
                .par_iter()
                .all(|p| self.levels[1].iter().any(|q| self.contains(l - 1, &Self::sub(p, q))))
        })
    }

    /// All multisets (sorted index lists) of level-one points summing to `p`.
    pub fn factorizations(&self, level: usize, p: &[i64]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.factor_rec(level, p.to_vec(), 0, &mut stack, &mut out);
        out
    }

    fn factor_rec(&self, level: usize, rem: Coords, min: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if level == 0 {
            out.push(stack.clone());
            return;
        }
        for (j, q) in self.levels[1].iter().enumerate().skip(min) {
            let r = Self::sub(&rem, q);
            if self.contains(level - 1, &r) {
                stack.push(j);
                self.factor_rec(level - 1, r, j, stack, out);
                stack.pop();
            }
        }
    }
}

fn to_coords(p: &GlobalPoint) -> Coords {
    p.lattice_coords().into_iter().map(i64::from).collect()
}

/// Enumerates every level `0..=d` over all leaf weights.
pub fn enumerate_graded(g: &TrivalentGraph, d: u32, cap: u64) -> Result<(Vec<Vec<GlobalPoint>>, Graded), AnalysisError> {
    let pts: Vec<Vec<GlobalPoint>> =
        (0..=d).map(|l| enumerate_level(g, None, l, cap)).collect::<Result<_, _>>()?;
    let coords = pts.iter().map(|l| l.iter().map(to_coords).collect()).collect();
    Ok((pts, Graded::new(coords)))
}

#[derive(Clone, Debug, Serialize)]
pub struct IndecomposableReport {
    pub points: Vec<GlobalPoint>,
    pub max_level: u32,
    pub search_bound: u32,
    /// number of indecomposables at each level `0..=search_bound`
    pub counts_by_level: Vec<usize>,
}

pub fn indecomposables_up_to(g: &TrivalentGraph, d: u32) -> Result<IndecomposableReport, AnalysisError> {
    let (pts, graded) = enumerate_graded(g, d, DEFAULT_ENUMERATION_CAP)?;
    let found = graded.indecomposables();
    let mut counts_by_level = vec![0; d as usize + 1];
    for (l, _) in &found {
        counts_by_level[*l] += 1;
    }
    let max_level = found.iter().map(|(l, _)| *l as u32).max().unwrap_or(0);
    let points = found.into_iter().map(|(l, i)| pts[l][i].clone()).collect();
    Ok(IndecomposableReport { points, max_level, search_bound: d, counts_by_level })
}

fn require_tree(t: &TrivalentGraph) -> Result<(), AnalysisError> {
    if t.is_tree() {
        Ok(())
    } else {
        Err(GraphError::NotATree(t.genus()).into())
    }
}

/// Every point of level `≤ d` is a sum of level-one points.
pub fn check_normal(t: &TrivalentGraph, d: u32) -> Result<bool, AnalysisError> {
    require_tree(t)?;
    let (_, graded) = enumerate_graded(t, d, DEFAULT_ENUMERATION_CAP)?;
    Ok(graded.is_generated_in_degree_one())
}

/// Size of the multiset difference `a \ b` of two sorted lists.
fn multiset_diff(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() {
        if j == b.len() || a[i] < b[j] {
            n += 1;
            i += 1;
        } else if a[i] > b[j] {
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    n
}

fn connected(facts: &[Vec<usize>], move_degree: usize) -> bool {
    let mut parent: Vec<usize> = (0..facts.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let mut comps = facts.len();
    for a in 0..facts.len() {
        for b in a + 1..facts.len() {
            if multiset_diff(&facts[a], &facts[b]) <= move_degree {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                    comps -= 1;
                }
            }
        }
    }
    comps <= 1
}

/// For every point of level `≤ d`, the factorizations into level-one points are
/// connected by moves exchanging at most `move_degree` factors.
pub fn relation_connectivity(t: &TrivalentGraph, move_degree: usize, d: u32) -> Result<bool, AnalysisError> {
    require_tree(t)?;
    let (_, graded) = enumerate_graded(t, d, DEFAULT_ENUMERATION_CAP)?;
    Ok(graded_relation_connectivity(&graded, move_degree))
}

pub fn graded_relation_connectivity(graded: &Graded, move_degree: usize) -> bool {
    (2..=graded.max_level()).all(|l| {
        graded.level(l).par_iter().all(|p| connected(&graded.factorizations(l, p), move_degree))
    })
}

fn omega_local(rep: Rep) -> LocalPoint {
    LocalPoint::canonicalize([1, 1, 1, 1, 1, 1, 0, 0, 0], rep)
}

/// `X·S·T·P12·P23·P31` at every vertex: level 6, every boundary value (2,2).
pub fn gorenstein_omega(g: &TrivalentGraph) -> GlobalPoint {
    global::assemble(g, vec![omega_local(Rep::Cb); g.n_vertices()], 6)
        .expect("(2,2) is self-dual, so the omega assignment glues on any graph")
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisibilityOutcome {
    pub rank: usize,
    pub facet_count: usize,
    pub omega_interior: bool,
    pub interior_points: usize,
    pub verified_up_to: u32,
    /// counterexamples as (level, description)
    pub failures: Vec<String>,
}

impl DivisibilityOutcome {
    pub fn passed(&self) -> bool {
        self.omega_interior && self.failures.is_empty()
    }
}

pub const RANK_GUARD: usize = 24;
pub const RAY_GUARD: usize = 200_000;

/// Checks `interior ∩ S = ω + S` on levels `≤ graded.max_level()`. The cone is
/// generated by the indecomposables found up to `ray_bound`.
pub fn divisibility(graded: &Graded, ray_bound: usize, omega: &[i64], omega_level: usize) -> Result<DivisibilityOutcome, AnalysisError> {
    let widen = |v: &[i64]| v.iter().map(|x| *x as i128).collect::<Vec<i128>>();
    let rays: Vec<Vec<i128>> = graded
        .indecomposables()
        .into_iter()
        .filter(|(l, _)| *l <= ray_bound)
        .map(|(l, i)| widen(&graded.level(l)[i]))
        .collect();
    let pivots = cone::pivot_columns(&rays);
    let rank = pivots.len();
    if rank > RANK_GUARD {
        return Err(AnalysisError::RankGuard { rank, guard: RANK_GUARD });
    }
    let project = |v: &[i128]| pivots.iter().map(|&c| v[c]).collect::<Vec<i128>>();
    let projected: Vec<Vec<i128>> = rays.iter().map(|r| project(r)).collect();
    let facets = cone::facets(&projected, RAY_GUARD).map_err(|_| AnalysisError::RankGuard { rank, guard: RANK_GUARD })?;
    let interior = |v: &[i64]| {
        let p = project(&widen(v));
        facets.iter().all(|f| f.iter().zip(&p).map(|(a, b)| a * b).sum::<i128>() > 0)
    };
    let omega_interior = interior(omega);
    let mut failures = Vec::new();
    let mut interior_points = 0;
    for l in 0..=graded.max_level() {
        for p in graded.level(l) {
            let inside = interior(p);
            interior_points += inside as usize;
            let divisible = l >= omega_level && graded.contains(l - omega_level, &Graded::sub(p, omega));
            if inside != divisible && failures.len() < 10 {
                let kind = if inside { "interior but not divisible by omega" } else { "omega-divisible but on the boundary" };
                failures.push(format!("level {l}: {p:?} is {kind}"));
            }
        }
    }
    Ok(DivisibilityOutcome {
        rank,
        facet_count: facets.len(),
        omega_interior,
        interior_points,
        verified_up_to: graded.max_level() as u32,
        failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GorensteinReport {
    pub omega: GlobalPoint,
    pub omega_leaf_weights: Vec<Weight>,
    pub facet_count: usize,
    pub rank: usize,
    pub verified_up_to: u32,
    pub omega_interior: bool,
    pub interior_points: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Indecomposables beyond this level are not used as cone generators; the
/// genus-one generators stop at level 3.
pub const RAY_BOUND: u32 = 4;

pub fn check_gorenstein_divisibility(g: &TrivalentGraph, d: u32) -> Result<GorensteinReport, AnalysisError> {
    let (_, graded) = enumerate_graded(g, d.max(RAY_BOUND), DEFAULT_ENUMERATION_CAP)?;
    let omega = gorenstein_omega(g);
    let outcome = divisibility(&graded, RAY_BOUND as usize, &to_coords(&omega), 6)?;
    Ok(GorensteinReport {
        omega_leaf_weights: omega.leaf_weights(g),
        omega,
        facet_count: outcome.facet_count,
        rank: outcome.rank,
        verified_up_to: outcome.verified_up_to,
        omega_interior: outcome.omega_interior,
        interior_points: outcome.interior_points,
        passed: outcome.passed(),
        failures: outcome.failures,
    })
}

fn bz_coords(p: &LocalPoint) -> Coords {
    let t = local::to_triangle(p);
    t.corners
        .iter()
        .chain(&t.hexagon)
        .map(|x| *x as i64)
        .chain([p.exponent(local::Generator::X) as i64])
        .collect()
}

fn local_coords(p: &LocalPoint) -> Coords {
    match p.rep() {
        Rep::Cb => p.cb_lattice_coords().iter().map(|x| *x as i64).collect(),
        Rep::Bz => bz_coords(p),
    }
}

/// The divisibility check on a single trinode in either presentation, with
/// `ω = X·S·T·P12·P23·P31` canonicalized in that presentation.
pub fn local_divisibility(rep: Rep, d: u32) -> Result<DivisibilityOutcome, AnalysisError> {
    local_divisibility_with(rep, d, &omega_local(rep))
}

pub fn local_divisibility_with(rep: Rep, d: u32, omega: &LocalPoint) -> Result<DivisibilityOutcome, AnalysisError> {
    let levels = (0..=d.max(RAY_BOUND)).map(|l| local::all_points(l, rep).iter().map(local_coords).collect()).collect();
    divisibility(&Graded::new(levels), RAY_BOUND as usize, &local_coords(omega), omega.level() as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HVector {
    pub h: Vec<i64>,
    pub palindromic: bool,
    /// lattice rank of the cone
    pub d: usize,
    /// degree of the h-polynomial
    pub s: usize,
    pub d_minus_s: i64,
}

/// Rank of the lattice spanned by the points of level `≤ 3`.
pub fn cone_rank(g: &TrivalentGraph) -> Result<usize, AnalysisError> {
    let (_, graded) = enumerate_graded(g, 3, DEFAULT_ENUMERATION_CAP)?;
    let rows: Vec<Vec<i128>> =
        (1..=3).flat_map(|l| graded.level(l).iter().map(|v| v.iter().map(|x| *x as i128).collect())).collect();
    Ok(cone::rank(&rows))
}

/// Numerator of the Hilbert series after clearing `(1 − t)^d`.
pub fn h_vector_from_hilbert(hilbert: &[u64], d: usize) -> Result<HVector, AnalysisError> {
    let bound = hilbert.len().saturating_sub(1) as u32;
    if (bound as usize) < d {
        return Err(AnalysisError::BoundTooSmall { bound, needed: d as u32 });
    }
    let binom = |n: usize, k: usize| (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64);
    let coeffs: Vec<i64> = (0..hilbert.len())
        .map(|k| {
            (0..=k.min(d))
                .map(|j| {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * binom(d, j) * hilbert[k - j] as i64
                })
                .sum()
        })
        .collect();
    let s = coeffs.iter().rposition(|c| *c != 0).unwrap_or(0);
    if s + 1 >= coeffs.len() {
        return Err(AnalysisError::NoTermination { rank: d, bound });
    }
    let h = coeffs[..=s].to_vec();
    let palindromic = h.iter().eq(h.iter().rev());
    Ok(HVector { h, palindromic, d, s, d_minus_s: d as i64 - s as i64 })
}

pub fn h_vector(g: &TrivalentGraph, d: u32) -> Result<HVector, AnalysisError> {
    let rank = cone_rank(g)?;
    h_vector_from_hilbert(&global::hilbert_function(g, d), rank)
}

/// Dimensions over the ray `N·λ⃗` at level `N·L` for `N = 0..=n_max`.
pub fn ray_points(g: &TrivalentGraph, leaves: &[Weight], level: u32, n_max: u32) -> Result<Vec<u64>, AnalysisError> {
    (0..=n_max)
        .map(|n| {
            let scaled: Vec<Weight> = leaves.iter().map(|w| w.scale(n)).collect();
            Ok(global::global_dim(g, &scaled, n * level)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::global::{enumerate_global, hilbert_function};
    use crate::graphs::{caterpillar, gamma};

    #[test]
    fn omega_examples() {
        for g in [caterpillar(3).unwrap(), gamma(1, 1).unwrap(), caterpillar(4).unwrap()] {
            let w = gorenstein_omega(&g);
            assert_eq!(w.level(), 6);
            assert!(w.leaf_weights(&g).iter().all(|x| *x == Weight::new(2, 2)));
        }
    }

    #[test]
    fn indecomposables_small() {
        let r = indecomposables_up_to(&caterpillar(3).unwrap(), 3).unwrap();
        assert_eq!(r.max_level, 1);
        assert_eq!(r.counts_by_level, vec![0, 9, 0, 0]);
        let r = indecomposables_up_to(&gamma(1, 1).unwrap(), 4).unwrap();
        assert_eq!(r.max_level, 3);
    }

    #[test]
    fn indecomposables_regenerate() {
        let g = gamma(1, 1).unwrap();
        let (_, graded) = enumerate_graded(&g, 5, DEFAULT_ENUMERATION_CAP).unwrap();
        let gens: Vec<(usize, Coords)> =
            graded.indecomposables().into_iter().map(|(l, i)| (l, graded.level(l)[i].clone())).collect();
        // closure under sums, level by level
        let mut built: Vec<HashSet<Coords>> = vec![HashSet::from([graded.level(0)[0].clone()])];
        for l in 1..=5 {
            let mut set = HashSet::new();
            for (gl, gv) in &gens {
                if *gl <= l {
                    for p in &built[l - gl] {
                        set.insert(p.iter().zip(gv).map(|(a, b)| a + b).collect::<Coords>());
                    }
                }
            }
            let expected: HashSet<Coords> = graded.level(l).iter().cloned().collect();
            assert_eq!(set, expected, "level {l}");
            built.push(set);
        }
    }

    #[test]
    fn normality_and_relations() {
        let c3 = caterpillar(3).unwrap();
        assert!(check_normal(&c3, 4).unwrap());
        assert!(check_normal(&c3, 0).unwrap());
        assert!(relation_connectivity(&c3, 3, 4).unwrap());
        assert!(relation_connectivity(&c3, 1, 2).unwrap());
        assert!(!relation_connectivity(&c3, 1, 3).unwrap());
        assert!(!relation_connectivity(&c3, 2, 3).unwrap());
        assert!(matches!(
            check_normal(&gamma(1, 1).unwrap(), 2),
            Err(AnalysisError::Graph(GraphError::NotATree(1)))
        ));
    }

    #[test]
    fn multiset_difference() {
        assert_eq!(multiset_diff(&[0, 0, 1], &[0, 1, 1]), 1);
        assert_eq!(multiset_diff(&[0, 1, 2], &[3, 4, 5]), 3);
        assert_eq!(multiset_diff(&[2, 2], &[2, 2]), 0);
    }

    #[test]
    fn h_vector_examples() {
        let c3 = caterpillar(3).unwrap();
        assert_eq!(cone_rank(&c3).unwrap(), 8);
        let hv = h_vector(&c3, 12).unwrap();
        assert_eq!(hv.h, vec![1, 1, 1]);
        assert!(hv.palindromic);
        assert_eq!((hv.d, hv.s, hv.d_minus_s), (8, 2, 6));
        assert!(matches!(
            h_vector_from_hilbert(&hilbert_function(&c3, 5), 8),
            Err(AnalysisError::BoundTooSmall { bound: 5, needed: 8 })
        ));
        assert_eq!(
            h_vector_from_hilbert(&hilbert_function(&c3, 12), 3),
            Err(AnalysisError::NoTermination { rank: 3, bound: 12 })
        );
    }

    #[test]
    fn ray_points_examples() {
        let c3 = caterpillar(3).unwrap();
        let one = Weight::new(1, 1);
        let counts = ray_points(&c3, &[one; 3], 3, 2).unwrap();
        assert_eq!(counts[1], 2);
        assert_eq!(counts[0], 1);
        let pts = enumerate_global(&c3, &[Weight::new(2, 2); 3], 6, 100).unwrap();
        assert_eq!(pts.len() as u64, counts[2]);
        assert!(pts.contains(&gorenstein_omega(&c3)));
        let t = caterpillar(4).unwrap();
        assert_eq!(ray_points(&t, &[Weight::ZERO; 4], 1, 4).unwrap(), vec![1; 5]);
        // loops carry weights of their own, so the vacuum ray grows in genus one
        assert_eq!(ray_points(&gamma(1, 1).unwrap(), &[Weight::ZERO], 1, 1).unwrap(), vec![1, 3]);
    }

    #[test]
    fn local_realizations() {
        let cb = local_divisibility(Rep::Cb, 9).unwrap();
        assert!(cb.passed(), "{cb:?}");
        assert_eq!(cb.rank, 8);
        // in the triangle presentation X·S·T·P12·P23·P31 = (X·S·T)^2 sits on a
        // face; the all-ones triangle X·S·T·P21·P32·P13 is the interior witness
        let bz = local_divisibility(Rep::Bz, 9).unwrap();
        assert!(!bz.omega_interior);
        let alt = LocalPoint::canonicalize([1, 1, 1, 0, 0, 0, 1, 1, 1], Rep::Bz);
        let bz_alt = local_divisibility_with(Rep::Bz, 9, &alt).unwrap();
        assert!(bz_alt.passed(), "{bz_alt:?}");
    }
}
