//! The trinode semigroups.
//!
//! A local point is a monomial in the nine generators
//! `X, S, T, P12, P23, P31, P21, P32, P13`, taken modulo one cubic binomial
//! relation. Two presentations are supported:
//!
//! * [`Rep::Cb`]: `P12·P23·P31 = P21·P32·P13`, canonical when `min(p21, p32, p13) = 0`;
//! * [`Rep::Bz`]: `X·S·T = P12·P23·P31`, canonical when `min(p12, p23, p31) = 0`.
//!
//! Both relations are homogeneous, so the level (total degree) is well defined.
//! The boundary map reads off a triple of dominant weights, one per slot of the
//! trinode. Without `X`, the `Bz` presentation is realized by BZ triangles
//! ([`Triangle`]), where `S·T` and `P12·P23·P31` become the same triangle.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::LocalError;
use crate::weights::Weight;

/// Boundary triple: one weight per trinode slot.
pub type Boundary = [Weight; 3];

/// The nine trinode generators, in exponent-vector order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    X,
    S,
    T,
    P12,
    P23,
    P31,
    P21,
    P32,
    P13,
}

impl Generator {
    pub const ALL: [Generator; 9] = [
        Generator::X,
        Generator::S,
        Generator::T,
        Generator::P12,
        Generator::P23,
        Generator::P31,
        Generator::P21,
        Generator::P32,
        Generator::P13,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    /// Row of the boundary table.
    pub const fn boundary(self) -> Boundary {
        const O: Weight = Weight::new(0, 0);
        const A: Weight = Weight::new(1, 0);
        const B: Weight = Weight::new(0, 1);
        match self {
            Generator::X => [O, O, O],
            Generator::S => [A, A, A],
            Generator::T => [B, B, B],
            Generator::P12 => [A, B, O],
            Generator::P23 => [O, A, B],
            Generator::P31 => [B, O, A],
            Generator::P21 => [B, A, O],
            Generator::P32 => [O, B, A],
            Generator::P13 => [A, O, B],
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

const X: usize = 0;
const S: usize = 1;
const T: usize = 2;
const CYCLIC: [usize; 3] = [3, 4, 5];
const ANTICYCLIC: [usize; 3] = [6, 7, 8];

/// Which binomial relation the point is taken modulo.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rep {
    Cb,
    Bz,
}

/// A canonical monomial class in one of the two presentations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalPoint {
    exps: [u32; 9],
    rep: Rep,
}

impl LocalPoint {
    pub fn zero(rep: Rep) -> Self {
        LocalPoint { exps: [0; 9], rep }
    }

    pub fn generator(g: Generator, rep: Rep) -> Self {
        let mut exps = [0; 9];
        exps[g.index()] = 1;
        LocalPoint { exps, rep }
    }

    /// Rewrites `raw` toward the canonical side of the relation of `rep`.
    pub fn canonicalize(mut raw: [u32; 9], rep: Rep) -> Self {
        match rep {
            Rep::Cb => {
                let m = ANTICYCLIC.iter().map(|&i| raw[i]).min().unwrap();
                for i in ANTICYCLIC {
                    raw[i] -= m;
                }
                for i in CYCLIC {
                    raw[i] += m;
                }
            }
            Rep::Bz => {
                let m = CYCLIC.iter().map(|&i| raw[i]).min().unwrap();
                for i in CYCLIC {
                    raw[i] -= m;
                }
                for i in [X, S, T] {
                    raw[i] += m;
                }
            }
        }
        LocalPoint { exps: raw, rep }
    }

    pub fn exponents(&self) -> [u32; 9] {
        self.exps
    }

    pub fn exponent(&self, g: Generator) -> u32 {
        self.exps[g.index()]
    }

    pub fn rep(&self) -> Rep {
        self.rep
    }

    pub fn level(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn boundary(&self) -> Boundary {
        let mut out = [Weight::ZERO; 3];
        for g in Generator::ALL {
            let e = self.exps[g.index()];
            if e == 0 {
                continue;
            }
            for (slot, w) in g.boundary().iter().enumerate() {
                out[slot].a += e * w.a;
                out[slot].b += e * w.b;
            }
        }
        out
    }

    /// Sum of the non-`X` exponents of the canonical representative.
    pub fn v_theta(&self) -> u32 {
        self.level() - self.exps[X]
    }

    pub fn add(&self, other: &LocalPoint) -> Result<LocalPoint, LocalError> {
        if self.rep != other.rep {
            return Err(LocalError::RepresentationMismatch(self.rep, other.rep));
        }
        let mut raw = self.exps;
        for (r, o) in raw.iter_mut().zip(other.exps) {
            *r += o;
        }
        Ok(LocalPoint::canonicalize(raw, self.rep))
    }

    /// Sets the `X` exponent so that the level becomes `level`.
    ///
    /// Panics if `level < v_theta()`.
    pub fn pad_to_level(&self, level: u32) -> LocalPoint {
        let v = self.v_theta();
        assert!(level >= v, "cannot pad a point with v_theta {v} to level {level}");
        let mut exps = self.exps;
        exps[X] = level - v;
        LocalPoint { exps, rep: self.rep }
    }

    /// Linear coordinates that separate classes: the kernel of this map on
    /// exponent vectors is exactly the relation vector of the CB presentation.
    pub fn cb_lattice_coords(&self) -> [i32; 8] {
        debug_assert_eq!(self.rep, Rep::Cb);
        let e = self.exps.map(|v| v as i32);
        [
            e[X],
            e[S],
            e[T],
            e[3] + e[8],
            e[4] + e[8],
            e[5] + e[8],
            e[6] - e[8],
            e[7] - e[8],
        ]
    }
}

impl fmt::Display for LocalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for g in Generator::ALL {
            let e = self.exps[g.index()];
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("·")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

pub fn boundary(p: &LocalPoint) -> Boundary {
    p.boundary()
}

pub fn v_theta(p: &LocalPoint) -> u32 {
    p.v_theta()
}

pub fn canonicalize(raw: [u32; 9], rep: Rep) -> LocalPoint {
    LocalPoint::canonicalize(raw, rep)
}

pub fn add(p: &LocalPoint, q: &LocalPoint) -> Result<LocalPoint, LocalError> {
    p.add(q)
}

/// Every canonical point of level `level` in `rep`, in lexicographic exponent order.
pub fn all_points(level: u32, rep: Rep) -> Vec<LocalPoint> {
    let mut out = Vec::new();
    let mut exps = [0u32; 9];
    fill_all(&mut exps, 0, level, rep, &mut out);
    out
}

fn fill_all(exps: &mut [u32; 9], idx: usize, remaining: u32, rep: Rep, out: &mut Vec<LocalPoint>) {
    if idx == 8 {
        exps[8] = remaining;
        let p = LocalPoint { exps: *exps, rep };
        if LocalPoint::canonicalize(*exps, rep) == p {
            out.push(p);
        }
        return;
    }
    for e in 0..=remaining {
        exps[idx] = e;
        fill_all(exps, idx + 1, remaining - e, rep, out);
    }
    exps[idx] = 0;
}

/// All canonical points with the given boundary and level, by bounded exhaustive
/// search. Output is sorted by exponent vector.
pub fn enumerate_fiber(abc: &Boundary, level: u32, rep: Rep) -> Vec<LocalPoint> {
    let mut out = Vec::new();
    let mut exps = [0u32; 9];
    let mut partial = [Weight::ZERO; 3];
    search_fiber(abc, rep, 1, level, &mut exps, &mut partial, &mut out);
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn search_fiber(
    target: &Boundary,
    rep: Rep,
    idx: usize,
    remaining: u32,
    exps: &mut [u32; 9],
    partial: &mut Boundary,
    out: &mut Vec<LocalPoint>,
) {
    if idx == 9 {
        if partial == target {
            exps[X] = remaining;
            let p = LocalPoint { exps: *exps, rep };
            if LocalPoint::canonicalize(*exps, rep) == p {
                out.push(p);
            }
            exps[X] = 0;
        }
        return;
    }
    let row = Generator::ALL[idx].boundary();
    let saved = *partial;
    for e in 0..=remaining {
        let mut ok = true;
        for slot in 0..3 {
            let w = Weight::new(saved[slot].a + e * row[slot].a, saved[slot].b + e * row[slot].b);
            if w.a > target[slot].a || w.b > target[slot].b {
                ok = false;
            }
            partial[slot] = w;
        }
        if !ok {
            break;
        }
        exps[idx] = e;
        search_fiber(target, rep, idx + 1, remaining - e, exps, partial, out);
    }
    exps[idx] = 0;
    *partial = saved;
}

/// A BZ triangle: three corners and six hexagon entries.
///
/// Side `i` reads (corner, hex, hex, corner): side₁ = (κ1, h1, h2, κ2),
/// side₂ = (κ2, h3, h4, κ3), side₃ = (κ3, h5, h6, κ1); the weight on a side is
/// (first + second, third + fourth).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triangle {
    pub corners: [u32; 3],
    pub hexagon: [u32; 6],
}

impl Triangle {
    pub fn satisfies_hexagon(&self) -> bool {
        let h = self.hexagon;
        h[0] + h[1] == h[3] + h[4] && h[2] + h[3] == h[5] + h[0] && h[4] + h[5] == h[1] + h[2]
    }

    pub fn boundary(&self) -> Boundary {
        let [k1, k2, k3] = self.corners;
        let h = self.hexagon;
        [
            Weight::new(k1 + h[0], h[1] + k2),
            Weight::new(k2 + h[2], h[3] + k3),
            Weight::new(k3 + h[4], h[5] + k1),
        ]
    }

    pub fn corners_all_one() -> Self {
        Triangle { corners: [1; 3], hexagon: [0; 6] }
    }

    pub fn hexagon_all_one() -> Self {
        Triangle { corners: [0; 3], hexagon: [1; 6] }
    }
}

/// Triangle image of one generator; `X` maps to the zero triangle.
fn generator_triangle(g: Generator) -> Triangle {
    let mut t = Triangle { corners: [0; 3], hexagon: [0; 6] };
    match g {
        Generator::X => {}
        Generator::S => t.hexagon = [1, 0, 1, 0, 1, 0],
        Generator::T => t.hexagon = [0, 1, 0, 1, 0, 1],
        Generator::P12 => {
            t.hexagon[0] = 1;
            t.hexagon[3] = 1;
        }
        Generator::P23 => {
            t.hexagon[2] = 1;
            t.hexagon[5] = 1;
        }
        Generator::P31 => {
            t.hexagon[4] = 1;
            t.hexagon[1] = 1;
        }
        Generator::P21 => t.corners[1] = 1,
        Generator::P32 => t.corners[2] = 1,
        Generator::P13 => t.corners[0] = 1,
    }
    t
}

/// Linear extension of the generator-to-triangle table.
pub fn to_triangle(p: &LocalPoint) -> Triangle {
    let mut out = Triangle { corners: [0; 3], hexagon: [0; 6] };
    for g in Generator::ALL {
        let e = p.exponent(g);
        let t = generator_triangle(g);
        for i in 0..3 {
            out.corners[i] += e * t.corners[i];
        }
        for i in 0..6 {
            out.hexagon[i] += e * t.hexagon[i];
        }
    }
    out
}

/// Factors a triangle as `S^s T^t ∏ P_ij^p_ij` with `min(p12, p23, p31) = 0`
/// (the factorization that prefers `S·T`). The result has no `X`.
pub fn from_triangle(t: &Triangle) -> Result<LocalPoint, LocalError> {
    if !t.satisfies_hexagon() {
        return Err(LocalError::HexagonViolated(*t));
    }
    let h = t.hexagon;
    let s = h[0].min(h[2]).min(h[4]);
    let (p12, p23, p31) = (h[0] - s, h[2] - s, h[4] - s);
    // the hexagon equations make these three agree and be non-negative
    let tt = h[3] - p12;
    debug_assert_eq!(tt, h[5] - p23);
    debug_assert_eq!(tt, h[1] - p31);
    let [k1, k2, k3] = t.corners;
    Ok(LocalPoint { exps: [0, s, tt, p12, p23, p31, k2, k3, k1], rep: Rep::Bz })
}

/// All BZ triangles with the given boundary, by enumerating corner triples and
/// solving the side equations for the hexagon.
pub fn enumerate_triangles(abc: &Boundary) -> Vec<Triangle> {
    let [w1, w2, w3] = *abc;
    let mut out = Vec::new();
    for k1 in 0..=w1.a.min(w3.b) {
        for k2 in 0..=w2.a.min(w1.b) {
            for k3 in 0..=w3.a.min(w2.b) {
                let t = Triangle {
                    corners: [k1, k2, k3],
                    hexagon: [w1.a - k1, w1.b - k2, w2.a - k2, w2.b - k3, w3.a - k3, w3.b - k1],
                };
                if t.satisfies_hexagon() {
                    out.push(t);
                }
            }
        }
    }
    out.sort();
    out
}

/// Generator of the kernel of the boundary map on triangles, as
/// (positive part, negative part) = (corners all one, hexagon all one).
pub fn markov_element() -> (Triangle, Triangle) {
    (Triangle::corners_all_one(), Triangle::hexagon_all_one())
}

/// Factorization of the minimal triangle of a boundary fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QminFactorization {
    pub s_min: u32,
    pub t_min: u32,
    /// `(p12, p23, p31, p21, p32, p13)`
    pub p_min: [u32; 6],
    pub v_min: u32,
    pub k: u32,
    pub triangle: Triangle,
}

impl QminFactorization {
    /// The monomial `S^s T^t ∏ P_ij^p_ij` with no `X`, in the BZ presentation.
    pub fn monomial(&self) -> LocalPoint {
        let p = self.p_min;
        LocalPoint {
            exps: [0, self.s_min, self.t_min, p[0], p[1], p[2], p[3], p[4], p[5]],
            rep: Rep::Bz,
        }
    }
}

/// The unique triangle of the fiber with a zero corner, factored. `None` when the
/// fiber is empty.
pub fn q_min(abc: &Boundary) -> Option<QminFactorization> {
    let [w1, w2, w3] = abc.map(|w| (w.a as i64, w.b as i64));
    // κ3 = (c − e1)/3, κ1 = (c − e2)/3, κ2 = (c − e3)/3 with c = κ1 + κ2 + κ3
    let e1 = w1.0 + w1.1 - w3.0 - w2.1;
    let e2 = w2.0 + w2.1 - w1.0 - w3.1;
    let e3 = w3.0 + w3.1 - w2.0 - w1.1;
    let c = e1.max(e2).max(e3);
    if (c - e1) % 3 != 0 || (c - e2) % 3 != 0 || (c - e3) % 3 != 0 {
        return None;
    }
    let (k1, k2, k3) = ((c - e2) / 3, (c - e3) / 3, (c - e1) / 3);
    let hex = [w1.0 - k1, w1.1 - k2, w2.0 - k2, w2.1 - k3, w3.0 - k3, w3.1 - k1];
    if hex.iter().any(|&h| h < 0) {
        return None;
    }
    let triangle = Triangle {
        corners: [k1 as u32, k2 as u32, k3 as u32],
        hexagon: hex.map(|h| h as u32),
    };
    let m = from_triangle(&triangle).expect("side equations imply the hexagon equations");
    let e = m.exps;
    Some(QminFactorization {
        s_min: e[S],
        t_min: e[T],
        p_min: [e[3], e[4], e[5], e[6], e[7], e[8]],
        v_min: m.v_theta(),
        k: e[S].min(e[T]),
        triangle,
    })
}

/// `dim (V(α) ⊗ V(β) ⊗ V(γ))^{sl3}` as `k + 1`.
pub fn classical_count(abc: &Boundary) -> u64 {
    q_min(abc).map_or(0, |q| q.k as u64 + 1)
}

/// Number of fiber points at level `level`: the rungs `v_min, …, v_min + k` of
/// the ladder that fit under the level.
pub fn fused_count(abc: &Boundary, level: u32) -> u64 {
    match q_min(abc) {
        Some(q) if level >= q.v_min => ((level - q.v_min) as u64 + 1).min(q.k as u64 + 1),
        _ => 0,
    }
}

/// The monomials `M_ℓ = (ST)^{-ℓ} (P12 P23 P31)^ℓ M_min` with `v_θ(M_ℓ) ≤ level`,
/// padded with `X` to the level, in the CB presentation.
pub fn block_basis(abc: &Boundary, level: u32) -> Vec<LocalPoint> {
    let Some(q) = q_min(abc) else { return Vec::new() };
    if level < q.v_min {
        return Vec::new();
    }
    let rungs = (level - q.v_min).min(q.k);
    let base = q.monomial().exps;
    (0..=rungs)
        .map(|l| {
            let mut e = base;
            e[S] -= l;
            e[T] -= l;
            for i in CYCLIC {
                e[i] += l;
            }
            LocalPoint::canonicalize(e, Rep::Cb).pad_to_level(level)
        })
        .collect()
}
