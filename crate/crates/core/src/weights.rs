//! Dominant sl3 weights and the representation-theoretic oracles.
//!
//! Weights are written in the basis of fundamental weights, `(a, b) = a·ω₁ + b·ω₂`.
//! Everything here is exact integer arithmetic: weight multiplicities come from
//! Freudenthal's recursion, tensor products from the Brauer–Klimyk rule, and
//! level-truncated fusion coefficients from Kac–Walton folding into the
//! level-`L` alcove.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ParseWeightError;

/// A dominant weight `a·ω₁ + b·ω₂` of sl3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Weight {
    pub a: u32,
    pub b: u32,
}

impl Weight {
    pub const ZERO: Weight = Weight { a: 0, b: 0 };

    pub const fn new(a: u32, b: u32) -> Self {
        Weight { a, b }
    }

    /// The highest weight of the dual representation.
    pub const fn dual(self) -> Self {
        Weight { a: self.b, b: self.a }
    }

    /// Pairing with the highest root `θ = α₁ + α₂`.
    pub const fn theta_level(self) -> u32 {
        self.a + self.b
    }

    /// Dimension of the irreducible representation, by the Weyl dimension formula.
    pub fn weyl_dim(self) -> u64 {
        let (a, b) = (self.a as u64, self.b as u64);
        (a + 1) * (b + 1) * (a + b + 2) / 2
    }

    pub fn scale(self, n: u32) -> Self {
        Weight { a: self.a * n, b: self.b * n }
    }

    /// All dominant weights with `a + b ≤ level`, in lexicographic order.
    pub fn up_to_level(level: u32) -> Vec<Weight> {
        let mut out = Vec::new();
        for a in 0..=level {
            for b in 0..=level - a {
                out.push(Weight { a, b });
            }
        }
        out
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

impl FromStr for Weight {
    type Err = ParseWeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| ParseWeightError(s.to_string()))?;
        let parse = |t: &str| {
            if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
                return Err(ParseWeightError(s.to_string()));
            }
            t.parse::<u32>().map_err(|_| ParseWeightError(s.to_string()))
        };
        Ok(Weight { a: parse(a)?, b: parse(b)? })
    }
}

pub fn dual(w: Weight) -> Weight {
    w.dual()
}

pub fn weyl_dim(w: Weight) -> u64 {
    w.weyl_dim()
}

/// Multiplicities of irreducible constituents. Absent keys have multiplicity 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MultiplicityMap {
    entries: BTreeMap<Weight, u64>,
}

impl MultiplicityMap {
    pub fn get(&self, w: Weight) -> u64 {
        self.entries.get(&w).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Weight, u64)> + '_ {
        self.entries.iter().map(|(w, m)| (*w, *m))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ mult · weyl_dim`.
    pub fn total_dim(&self) -> u64 {
        self.iter().map(|(w, m)| m * w.weyl_dim()).sum()
    }

    fn from_signed(signed: BTreeMap<Weight, i64>) -> Self {
        let entries = signed
            .into_iter()
            .filter(|(_, m)| *m != 0)
            .map(|(w, m)| {
                assert!(m > 0, "negative multiplicity {m} for {w}");
                (w, m as u64)
            })
            .collect();
        MultiplicityMap { entries }
    }
}

/// An integral weight in fundamental-weight coordinates (not necessarily dominant).
type RawWeight = (i64, i64);

/// Three times the normalized inner product, `(θ|θ) = 2`.
fn form3(u: RawWeight, v: RawWeight) -> i64 {
    2 * u.0 * v.0 + u.0 * v.1 + u.1 * v.0 + 2 * u.1 * v.1
}

const ALPHA1: RawWeight = (2, -1);
const ALPHA2: RawWeight = (-1, 2);
const THETA: RawWeight = (1, 1);
const POSITIVE_ROOTS: [RawWeight; 3] = [ALPHA1, ALPHA2, THETA];

fn s1(w: RawWeight) -> RawWeight {
    (-w.0, w.0 + w.1)
}

fn s2(w: RawWeight) -> RawWeight {
    (w.0 + w.1, -w.1)
}

fn dominant_conjugate(mut w: RawWeight) -> RawWeight {
    loop {
        if w.0 < 0 {
            w = s1(w);
        } else if w.1 < 0 {
            w = s2(w);
        } else {
            return w;
        }
    }
}

/// Reflect a ρ-shifted weight into the open dominant chamber, tracking the sign
/// of the Weyl group element. Weights on a wall give `None`.
fn fold_finite(mut w: RawWeight) -> Option<(RawWeight, i64)> {
    let mut sign = 1;
    loop {
        if w.0 == 0 || w.1 == 0 {
            return None;
        }
        if w.0 < 0 {
            w = s1(w);
        } else if w.1 < 0 {
            w = s2(w);
        } else {
            return Some((w, sign));
        }
        sign = -sign;
    }
}

/// Reflect a ρ-shifted weight into the open fundamental alcove at shifted level
/// `k` under the affine Weyl group. Weights on an alcove wall give `None`.
fn fold_affine(mut w: RawWeight, k: i64) -> Option<(RawWeight, i64)> {
    let mut sign = 1;
    loop {
        if w.0 == 0 || w.1 == 0 || w.0 + w.1 == k {
            return None;
        }
        if w.0 < 0 {
            w = s1(w);
        } else if w.1 < 0 {
            w = s2(w);
        } else if w.0 + w.1 > k {
            w = (k - w.1, k - w.0);
        } else {
            return Some((w, sign));
        }
        sign = -sign;
    }
}

/// Weight multiplicities of an irreducible representation, by Freudenthal's
/// recursion on dominant weights extended by Weyl symmetry.
pub struct WeightSystem {
    highest: RawWeight,
    memo: HashMap<RawWeight, u64>,
}

impl WeightSystem {
    pub fn new(highest: Weight) -> Self {
        let highest = (highest.a as i64, highest.b as i64);
        let mut memo = HashMap::new();
        memo.insert(highest, 1);
        WeightSystem { highest, memo }
    }

    /// Multiplicity of the (arbitrary integral) weight `(m1, m2)`.
    pub fn multiplicity(&mut self, m1: i64, m2: i64) -> u64 {
        let d = dominant_conjugate((m1, m2));
        if !self.below_highest(d) {
            return 0;
        }
        self.dominant_multiplicity(d)
    }

    fn below_highest(&self, d: RawWeight) -> bool {
        // highest − d = n1·α1 + n2·α2 with n1, n2 ≥ 0 integers
        let (x, y) = (self.highest.0 - d.0, self.highest.1 - d.1);
        let (n1, n2) = (2 * x + y, x + 2 * y);
        n1 >= 0 && n2 >= 0 && n1 % 3 == 0 && n2 % 3 == 0
    }

    fn dominant_multiplicity(&mut self, d: RawWeight) -> u64 {
        if let Some(&m) = self.memo.get(&d) {
            return m;
        }
        let rho = (1, 1);
        let shift = |w: RawWeight| (w.0 + rho.0, w.1 + rho.1);
        let denom = form3(shift(self.highest), shift(self.highest)) - form3(shift(d), shift(d));
        let mut numer: i64 = 0;
        for alpha in POSITIVE_ROOTS {
            let mut k = 1;
            loop {
                let up = (d.0 + k * alpha.0, d.1 + k * alpha.1);
                let m = self.multiplicity(up.0, up.1);
                if m == 0 {
                    break;
                }
                numer += 2 * form3(up, alpha) * m as i64;
                k += 1;
            }
        }
        assert!(denom > 0 && numer % denom == 0, "Freudenthal recursion broke at {d:?}");
        let m = (numer / denom) as u64;
        self.memo.insert(d, m);
        m
    }

    /// Every weight with nonzero multiplicity, sorted.
    pub fn weights(&mut self) -> Vec<(RawWeight, u64)> {
        let depth = self.highest.0 + self.highest.1;
        let mut out = Vec::new();
        for n1 in 0..=depth {
            for n2 in 0..=depth {
                let w = (
                    self.highest.0 - n1 * ALPHA1.0 - n2 * ALPHA2.0,
                    self.highest.1 - n1 * ALPHA1.1 - n2 * ALPHA2.1,
                );
                let m = self.multiplicity(w.0, w.1);
                if m > 0 {
                    out.push((w, m));
                }
            }
        }
        out.sort();
        out
    }
}

/// Decomposition of `V(x) ⊗ V(y)` into irreducibles (Brauer–Klimyk).
pub fn tensor_decompose(x: Weight, y: Weight) -> MultiplicityMap {
    // iterate over the weights of the smaller factor
    let (small, large) = if x.weyl_dim() <= y.weyl_dim() { (x, y) } else { (y, x) };
    let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
    for (nu, m) in WeightSystem::new(small).weights() {
        let shifted = (large.a as i64 + nu.0 + 1, large.b as i64 + nu.1 + 1);
        if let Some((w, sign)) = fold_finite(shifted) {
            let target = Weight::new((w.0 - 1) as u32, (w.1 - 1) as u32);
            *acc.entry(target).or_default() += sign * m as i64;
        }
    }
    MultiplicityMap::from_signed(acc)
}

/// `dim (V(x) ⊗ V(y) ⊗ V(z))^{sl3}`.
pub fn triple_invariant_dim(x: Weight, y: Weight, z: Weight) -> u64 {
    tensor_decompose(x, y).get(z.dual())
}

/// Level-`L` fusion coefficient `dim V_{0,3}(x, y, z, L)`, by Kac–Walton folding of
/// the classical decomposition of `V(x) ⊗ V(y)` at shifted level `L + 3`.
pub fn fusion_dim(x: Weight, y: Weight, z: Weight, level: u32) -> u64 {
    if [x, y, z].iter().any(|w| w.theta_level() > level) {
        return 0;
    }
    let k = level as i64 + 3;
    let target = z.dual();
    let mut total: i64 = 0;
    for (nu, m) in tensor_decompose(x, y).iter() {
        if let Some((w, sign)) = fold_affine((nu.a as i64 + 1, nu.b as i64 + 1), k) {
            if w == (target.a as i64 + 1, target.b as i64 + 1) {
                total += sign * m as i64;
            }
        }
    }
    assert!(total >= 0, "negative fusion coefficient for {x} {y} {z} at level {level}");
    total as u64
}
