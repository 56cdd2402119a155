//! Symbolic check of the cubic relation among the invariants of triple tensor
//! products of the two fundamental representations.
//!
//! Indeterminates are the entries of two 3×3 matrices `X = (x[row][col])` and
//! `Y = (y[row][col])`; column `i` of each matrix is the vector sitting in
//! tensor factor `i`. `S = det X`, `T = det Y`, and `P_ij` pairs column `i` of
//! `X` with column `j` of `Y`. Reduction is modulo the three incidence forms
//! `P_ii`, whose leading monomials are pairwise coprime, so they form a
//! Gröbner basis and normal forms are canonical.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

/// Exponents of `x[r][c]` at index `3r + c`, then `y[r][c]` at `9 + 3r + c`.
type Monomial = [u8; 18];

/// Sparse polynomial in the 18 matrix entries with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly18 {
    terms: BTreeMap<Monomial, i64>,
}

pub fn x_var(row: usize, col: usize) -> usize {
    3 * row + col
}

pub fn y_var(row: usize, col: usize) -> usize {
    9 + 3 * row + col
}

impl Poly18 {
    pub fn zero() -> Self {
        Poly18::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = Poly18::zero();
        p.add_term([0; 18], c);
        p
    }

    pub fn var(index: usize) -> Self {
        let mut m = [0; 18];
        m[index] = 1;
        let mut p = Poly18::zero();
        p.add_term(m, 1);
        p
    }

    fn add_term(&mut self, m: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn eval(&self, values: &[i64; 18]) -> i64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .zip(values)
                    .fold(*c, |acc, (&e, &v)| acc * v.pow(e as u32))
            })
            .sum()
    }
}

impl Add for &Poly18 {
    type Output = Poly18;
    fn add(self, rhs: &Poly18) -> Poly18 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, *c);
        }
        out
    }
}

impl Neg for &Poly18 {
    type Output = Poly18;
    fn neg(self) -> Poly18 {
        Poly18 { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Sub for &Poly18 {
    type Output = Poly18;
    fn sub(self, rhs: &Poly18) -> Poly18 {
        self + &(-rhs)
    }
}

impl Mul for &Poly18 {
    type Output = Poly18;
    fn mul(self, rhs: &Poly18) -> Poly18 {
        let mut out = Poly18::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let mut m = *m1;
                for (e, f) in m.iter_mut().zip(m2) {
                    *e += f;
                }
                out.add_term(m, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Poly18 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if i > 0 { "+" } else { "" };
            write!(f, "{sign}")?;
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            for (v, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (name, r, col) = if v < 9 { ('x', v / 3, v % 3) } else { ('y', (v - 9) / 3, (v - 9) % 3) };
                write!(f, "{name}{}{}", r + 1, col + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// How `P_ij` pairs the two matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Pairing {
    /// `P_ij = Σ_k x[k][i]·y[k][j]`: column `i` of `X` with column `j` of `Y`.
    Columns,
    /// `P_ij = Σ_k x[i][k]·y[j][k]`: the transpose reading.
    Rows,
}

/// Sign normalization of the anticyclic invariants `P21, P32, P13`. Each
/// invariant is only determined up to a scalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AnticyclicSign {
    Plain,
    Negated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Convention {
    pub pairing: Pairing,
    pub anticyclic: AnticyclicSign,
}

impl Convention {
    pub const SEARCH_ORDER: [Convention; 4] = [
        Convention { pairing: Pairing::Columns, anticyclic: AnticyclicSign::Plain },
        Convention { pairing: Pairing::Rows, anticyclic: AnticyclicSign::Plain },
        Convention { pairing: Pairing::Columns, anticyclic: AnticyclicSign::Negated },
        Convention { pairing: Pairing::Rows, anticyclic: AnticyclicSign::Negated },
    ];
}

/// `S`, `T` and the nine pairings `P_ij` (indices 1-based in the names).
#[derive(Clone, Debug)]
pub struct InvariantGenerators {
    pub s: Poly18,
    pub t: Poly18,
    /// `p[i][j]` is `P_{i+1, j+1}`.
    pub p: [[Poly18; 3]; 3],
}

impl InvariantGenerators {
    pub fn named(&self) -> BTreeMap<String, Poly18> {
        let mut out = BTreeMap::new();
        out.insert("S".to_string(), self.s.clone());
        out.insert("T".to_string(), self.t.clone());
        for i in 0..3 {
            for j in 0..3 {
                out.insert(format!("P{}{}", i + 1, j + 1), self.p[i][j].clone());
            }
        }
        out
    }
}

fn det3(entry: impl Fn(usize, usize) -> Poly18) -> Poly18 {
    let mut out = Poly18::zero();
    for (perm, sign) in [
        ([0, 1, 2], 1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([0, 2, 1], -1),
        ([2, 1, 0], -1),
        ([1, 0, 2], -1),
    ] {
        let term = &(&entry(0, perm[0]) * &entry(1, perm[1])) * &entry(2, perm[2]);
        out = &out + &(&term * &Poly18::constant(sign));
    }
    out
}

pub fn invariant_generators_with(conv: Convention) -> InvariantGenerators {
    let s = det3(|r, c| Poly18::var(x_var(r, c)));
    let t = det3(|r, c| Poly18::var(y_var(r, c)));
    let p = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = Poly18::zero();
            for k in 0..3 {
                let (xv, yv) = match conv.pairing {
                    Pairing::Columns => (x_var(k, i), y_var(k, j)),
                    Pairing::Rows => (x_var(i, k), y_var(j, k)),
                };
                acc = &acc + &(&Poly18::var(xv) * &Poly18::var(yv));
            }
            let anticyclic = matches!((i, j), (1, 0) | (2, 1) | (0, 2));
            if anticyclic && conv.anticyclic == AnticyclicSign::Negated {
                -&acc
            } else {
                acc
            }
        })
    });
    InvariantGenerators { s, t, p }
}

/// Generators under the plain column pairing.
pub fn invariant_generators() -> InvariantGenerators {
    invariant_generators_with(Convention::SEARCH_ORDER[0])
}

/// Which entry of each incidence form is eliminated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EliminationOrder {
    /// Rewrite `x[0][i]·y[0][i]` (first row) in terms of the other two rows.
    FirstRow,
    /// Rewrite `x[2][i]·y[2][i]` (last row).
    LastRow,
}

/// (lead x-var, lead y-var, tail pairs) of one incidence form.
type IncidenceForm = (usize, usize, Vec<(usize, usize)>);

/// Normal form modulo the incidence forms `Σ_k x[k][i]·y[k][i]`, `i = 1, 2, 3`
/// (column pairing) or their row analogues.
pub fn reduce_mod_incidence_with(p: &Poly18, pairing: Pairing, order: EliminationOrder) -> Poly18 {
    let pivot = match order {
        EliminationOrder::FirstRow => 0,
        EliminationOrder::LastRow => 2,
    };
    let others: Vec<usize> = (0..3).filter(|&k| k != pivot).collect();
    let forms: Vec<IncidenceForm> = (0..3)
        .map(|i| {
            let v = |k: usize| match pairing {
                Pairing::Columns => (x_var(k, i), y_var(k, i)),
                Pairing::Rows => (x_var(i, k), y_var(i, k)),
            };
            let (lx, ly) = v(pivot);
            (lx, ly, others.iter().map(|&k| v(k)).collect())
        })
        .collect();

    let mut work: BTreeMap<Monomial, i64> = p.terms.clone();
    let mut out = Poly18::zero();
    while let Some((m, c)) = work.pop_last() {
        let hit = forms.iter().find(|(lx, ly, _)| m[*lx] > 0 && m[*ly] > 0);
        match hit {
            None => out.add_term(m, c),
            Some((lx, ly, tail)) => {
                // lx·ly ≡ −Σ tail
                for &(tx, ty) in tail {
                    let mut n = m;
                    n[*lx] -= 1;
                    n[*ly] -= 1;
                    n[tx] += 1;
                    n[ty] += 1;
                    let e = work.entry(n).or_insert(0);
                    *e -= c;
                    if *e == 0 {
                        work.remove(&n);
                    }
                }
            }
        }
    }
    out
}

pub fn reduce_mod_incidence(p: &Poly18) -> Poly18 {
    reduce_mod_incidence_with(p, Pairing::Columns, EliminationOrder::FirstRow)
}

/// Signs of the relation `ε_st·S·T + ε_cyc·P12·P23·P31 + ε_anti·P21·P32·P13`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RelationSigns {
    pub st: i64,
    pub cyclic: i64,
    pub anticyclic: i64,
}

impl RelationSigns {
    /// `S·T − P12·P23·P31 + P21·P32·P13`.
    pub const PRESENTATION: RelationSigns = RelationSigns { st: 1, cyclic: -1, anticyclic: 1 };
}

pub fn relation_poly(gens: &InvariantGenerators, signs: RelationSigns) -> Poly18 {
    let p = &gens.p;
    let st = &gens.s * &gens.t;
    let cyc = &(&p[0][1] * &p[1][2]) * &p[2][0];
    let anti = &(&p[1][0] * &p[2][1]) * &p[0][2];
    let scaled = |q: &Poly18, c: i64| q * &Poly18::constant(c);
    &(&scaled(&st, signs.st) + &scaled(&cyc, signs.cyclic)) + &scaled(&anti, signs.anticyclic)
}

/// Whether the relation with `signs` vanishes modulo the incidence ideal under
/// `conv`, checked under both elimination orders (which must agree).
pub fn relation_holds(conv: Convention, signs: RelationSigns) -> bool {
    let gens = invariant_generators_with(conv);
    let rel = relation_poly(&gens, signs);
    let a = reduce_mod_incidence_with(&rel, conv.pairing, EliminationOrder::FirstRow).is_zero();
    let b = reduce_mod_incidence_with(&rel, conv.pairing, EliminationOrder::LastRow).is_zero();
    assert_eq!(a, b, "normal forms disagree between elimination orders");
    a
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationCheck {
    pub holds: bool,
    /// First convention (in [`Convention::SEARCH_ORDER`]) under which it holds.
    pub convention: Option<Convention>,
    /// Outcome for every convention tried, in search order.
    pub tried: Vec<(Convention, bool)>,
}

/// Checks `S·T − P12·P23·P31 + P21·P32·P13 ≡ 0` modulo the incidence ideal,
/// searching the normalization conventions in a fixed order.
///
/// With plain pairings the determinant of the pairing matrix expands to
/// `S·T ≡ P12·P23·P31 + P21·P32·P13` (both 3-cycles are even permutations),
/// so the relation in this sign form needs the anticyclic invariants negated.
pub fn verify_presentation_relation() -> PresentationCheck {
    verify_relation(RelationSigns::PRESENTATION)
}

pub fn verify_relation(signs: RelationSigns) -> PresentationCheck {
    let tried: Vec<(Convention, bool)> = Convention::SEARCH_ORDER
        .iter()
        .map(|&c| (c, relation_holds(c, signs)))
        .collect();
    let convention = tried.iter().find(|(_, ok)| *ok).map(|(c, _)| *c);
    PresentationCheck { holds: convention.is_some(), convention, tried }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn columns_plain() -> Convention {
        Convention::SEARCH_ORDER[0]
    }

    #[test]
    fn generator_shapes() {
        let g = invariant_generators();
        assert_eq!(g.s.num_terms(), 6);
        assert!(g.s.terms().all(|(_, c)| c.abs() == 1));
        let expected = &(&(&Poly18::var(x_var(0, 0)) * &Poly18::var(y_var(0, 0)))
            + &(&Poly18::var(x_var(1, 0)) * &Poly18::var(y_var(1, 0))))
            + &(&Poly18::var(x_var(2, 0)) * &Poly18::var(y_var(2, 0)));
        assert_eq!(g.p[0][0], expected);
        let mut id = [0i64; 18];
        for i in 0..3 {
            id[x_var(i, i)] = 1;
            id[y_var(i, i)] = 1;
        }
        assert_eq!(g.t.eval(&id), 1);
        assert_eq!(g.named().len(), 11);
    }

    #[test]
    fn reduction_basics() {
        let g = invariant_generators();
        for i in 0..3 {
            assert!(reduce_mod_incidence(&g.p[i][i]).is_zero());
        }
        assert_eq!(reduce_mod_incidence(&g.s), g.s);
        assert_eq!(reduce_mod_incidence(&g.t), g.t);
    }

    #[test]
    fn cauchy_binet() {
        for pairing in [Pairing::Columns, Pairing::Rows] {
            let g = invariant_generators_with(Convention { pairing, anticyclic: AnticyclicSign::Plain });
            let det = det3(|r, c| g.p[r][c].clone());
            assert_eq!(det, &g.s * &g.t);
        }
    }

    #[test]
    fn determinant_reduces_to_two_cycles() {
        // under the negated normalization the reduced determinant is cyc − anti
        let conv = Convention { pairing: Pairing::Columns, anticyclic: AnticyclicSign::Negated };
        let g = invariant_generators_with(conv);
        let plain = invariant_generators();
        let det = det3(|r, c| plain.p[r][c].clone());
        let cyc = &(&g.p[0][1] * &g.p[1][2]) * &g.p[2][0];
        let anti = &(&g.p[1][0] * &g.p[2][1]) * &g.p[0][2];
        let lhs = reduce_mod_incidence(&det);
        let rhs = reduce_mod_incidence(&(&cyc - &anti));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn presentation_relation() {
        let check = verify_presentation_relation();
        assert!(check.holds);
        assert_eq!(
            check.convention,
            Some(Convention { pairing: Pairing::Columns, anticyclic: AnticyclicSign::Negated })
        );
        // neither plain reading works for this sign pattern
        assert!(!check.tried[0].1 && !check.tried[1].1);
        // the plain normalization satisfies the all-plus form instead
        assert!(relation_holds(columns_plain(), RelationSigns { st: 1, cyclic: -1, anticyclic: -1 }));
    }

    #[test]
    fn perturbed_signs_fail() {
        let perturbed = RelationSigns { st: 1, cyclic: 1, anticyclic: 1 };
        assert!(!verify_relation(perturbed).holds);
        let perturbed = RelationSigns { st: -1, cyclic: -1, anticyclic: 1 };
        assert!(!verify_relation(perturbed).holds);
    }

    #[test]
    fn numeric_evaluation_on_incidence_variety() {
        // columns of Y chosen orthogonal to the matching columns of X via cross products
        let cross = |u: [i64; 3], v: [i64; 3]| {
            [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
        };
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 7) as i64 - 3
        };
        let conv = Convention { pairing: Pairing::Columns, anticyclic: AnticyclicSign::Negated };
        let g = invariant_generators_with(conv);
        for _ in 0..20 {
            let mut vals = [0i64; 18];
            for col in 0..3 {
                let xc = [next(), next(), next()];
                let r = [next(), next(), next()];
                let yc = cross(xc, r);
                for row in 0..3 {
                    vals[x_var(row, col)] = xc[row];
                    vals[y_var(row, col)] = yc[row];
                }
            }
            for i in 0..3 {
                assert_eq!(g.p[i][i].eval(&vals), 0);
            }
            let st = g.s.eval(&vals) * g.t.eval(&vals);
            let cyc = g.p[0][1].eval(&vals) * g.p[1][2].eval(&vals) * g.p[2][0].eval(&vals);
            let anti = g.p[1][0].eval(&vals) * g.p[2][1].eval(&vals) * g.p[0][2].eval(&vals);
            assert_eq!(st, cyc - anti);
        }
    }
}
