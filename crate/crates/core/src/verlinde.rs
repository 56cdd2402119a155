//! The Verlinde formula for sl3, evaluated numerically, and an exact fusion-ring
//! count to calibrate and check it against.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::VerlindeError;
use crate::weights::{fusion_dim, Weight};

pub const DUAL_COXETER: u32 = 3;
pub const TOLERANCE: f64 = 1e-6;
pub const TORUS_CANDIDATES: [u64; 3] = [1, 3, 9];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerlindeParams {
    pub genus: u32,
    pub weights: Vec<Weight>,
    pub level: u32,
    pub torus_order: u64,
}

impl VerlindeParams {
    /// Parameters with the torus order calibrated for `level`.
    pub fn new(genus: u32, weights: Vec<Weight>, level: u32) -> Result<Self, VerlindeError> {
        let torus_order = calibrate_torus_order(level)?;
        Ok(VerlindeParams { genus, weights, level, torus_order })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerlindeValue {
    pub dim: u64,
    pub value: f64,
    pub residual: f64,
}

/// `(u|v)` with `(θ|θ) = 2`, both in the fundamental-weight basis.
fn pairing(u: (i64, i64), v: (f64, f64)) -> f64 {
    (2.0 * u.0 as f64 * v.0 + u.0 as f64 * v.1 + u.1 as f64 * v.0 + 2.0 * u.1 as f64 * v.1) / 3.0
}

/// The six Weyl group images of `w` with their signs.
fn weyl_orbit(w: (i64, i64)) -> [((i64, i64), f64); 6] {
    let s1 = |(a, b): (i64, i64)| (-a, a + b);
    let s2 = |(a, b): (i64, i64)| (a + b, -b);
    [
        (w, 1.0),
        (s1(w), -1.0),
        (s2(w), -1.0),
        (s1(s2(w)), 1.0),
        (s2(s1(w)), 1.0),
        (s1(s2(s1(w))), -1.0),
    ]
}

fn alternating_sum(w: (i64, i64), x: (f64, f64)) -> Complex64 {
    weyl_orbit(w)
        .iter()
        .map(|(v, sign)| Complex64::from_polar(*sign, 2.0 * std::f64::consts::PI * pairing(*v, x)))
        .sum()
}

/// Weyl character of `λ` at `exp(2πi x)`.
pub fn character(lambda: Weight, x: (f64, f64)) -> Complex64 {
    let lr = (lambda.a as i64 + 1, lambda.b as i64 + 1);
    alternating_sum(lr, x) / alternating_sum((1, 1), x)
}

/// Nearest integer to the Verlinde sum. Weights beyond the level give 0 (the
/// formula itself is only meaningful on the alcove).
pub fn verlinde_dim(p: &VerlindeParams) -> Result<VerlindeValue, VerlindeError> {
    if p.weights.iter().any(|w| w.theta_level() > p.level) {
        return Ok(VerlindeValue { dim: 0, value: 0.0, residual: 0.0 });
    }
    let k = (p.level + DUAL_COXETER) as f64;
    let pi = std::f64::consts::PI;
    let mut total = Complex64::new(0.0, 0.0);
    for mu in Weight::up_to_level(p.level) {
        let m = ((mu.a + 1) as f64, (mu.b + 1) as f64);
        let x = (m.0 / k, m.1 / k);
        let chars: Complex64 = p.weights.iter().map(|l| character(*l, x)).product();
        // positive roots paired with μ+ρ: m1, m2, m1+m2
        let sines: f64 = [m.0, m.1, m.0 + m.1].iter().map(|a| (2.0 * (pi * a / k).sin()).abs()).product();
        total += chars * sines.powi(2 - 2 * p.genus as i32);
    }
    let value = total * (p.torus_order as f64).powi(p.genus as i32 - 1);
    let rounded = value.re.round();
    let residual = (value.re - rounded).abs().max(value.im.abs());
    if residual > TOLERANCE || rounded < 0.0 {
        return Err(VerlindeError::Residual { value: value.re, residual });
    }
    Ok(VerlindeValue { dim: rounded as u64, value: value.re, residual })
}

type Matrix = Vec<Vec<u64>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect()
}

/// Exact genus-`g` conformal block dimension from the level-`L` fusion ring:
/// `(N_{λ1} ⋯ N_{λn} H^g)_{00}` with `(N_a)_{bc} = N_{ab}^c` and
/// `H = Σ_μ N_μ N_{μ*}`.
pub fn fusion_ring_dim(genus: u32, weights: &[Weight], level: u32) -> u64 {
    let basis = Weight::up_to_level(level);
    let n = basis.len();
    let fusion_matrix = |a: Weight| -> Matrix {
        basis.iter().map(|b| basis.iter().map(|c| fusion_dim(a, *b, c.dual(), level)).collect()).collect()
    };
    if weights.iter().any(|w| w.theta_level() > level) {
        return 0;
    }
    let mats: Vec<Matrix> = basis.iter().map(|w| fusion_matrix(*w)).collect();
    let index = |w: Weight| basis.iter().position(|b| *b == w).unwrap();
    let mut handle = vec![vec![0; n]; n];
    for (i, mu) in basis.iter().enumerate() {
        let prod = mat_mul(&mats[i], &mats[index(mu.dual())]);
        for r in 0..n {
            for c in 0..n {
                handle[r][c] += prod[r][c];
            }
        }
    }
    let mut acc = identity(n);
    for w in weights {
        acc = mat_mul(&acc, &mats[index(*w)]);
    }
    for _ in 0..genus {
        acc = mat_mul(&acc, &handle);
    }
    acc[0][0]
}

/// `(genus, weights)` pairs used to fix the torus order at a level.
fn calibration_battery(level: u32) -> Vec<(u32, Vec<Weight>)> {
    let mut out = Vec::new();
    for g in 1..=2 {
        out.push((g, vec![]));
        for w in Weight::up_to_level(level.min(2)) {
            out.push((g, vec![w]));
        }
        out.push((g, vec![Weight::new(1, 0), Weight::new(0, 1)]));
    }
    out
}

/// The unique `c·(L+3)²`, `c ∈ {1, 3, 9}`, for which the Verlinde sum reproduces
/// the fusion-ring counts on the calibration battery.
pub fn calibrate_torus_order(level: u32) -> Result<u64, VerlindeError> {
    let k = (level + DUAL_COXETER) as u64;
    let battery = calibration_battery(level);
    let expected: Vec<u64> = battery.iter().map(|(g, ws)| fusion_ring_dim(*g, ws, level)).collect();
    let mut matches = Vec::new();
    let mut table = String::new();
    for c in TORUS_CANDIDATES {
        let torus_order = c * k * k;
        let mut ok = true;
        let mut worst = 0.0f64;
        for ((g, ws), want) in battery.iter().zip(&expected) {
            let p = VerlindeParams { genus: *g, weights: ws.clone(), level, torus_order };
            match verlinde_dim(&p) {
                Ok(v) if v.dim == *want => worst = worst.max(v.residual),
                Ok(v) => {
                    ok = false;
                    worst = worst.max((v.value - *want as f64).abs());
                }
                Err(VerlindeError::Residual { value, .. }) => {
                    ok = false;
                    worst = worst.max((value - *want as f64).abs());
                }
                Err(e) => return Err(e),
            }
        }
        let _ = writeln!(table, "  c={c} |T|={torus_order}: max deviation {worst:.3e}");
        if ok {
            matches.push(torus_order);
        }
    }
    match matches.as_slice() {
        [t] => Ok(*t),
        _ => Err(VerlindeError::Calibration { level, table }),
    }
}

/// Verlinde dimension with a calibrated torus order.
pub fn verlinde(genus: u32, weights: &[Weight], level: u32) -> Result<VerlindeValue, VerlindeError> {
    verlinde_dim(&VerlindeParams::new(genus, weights.to_vec(), level)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: u32, b: u32) -> Weight {
        Weight::new(a, b)
    }

    #[test]
    fn characters_at_identity_are_dimensions() {
        // near the identity the character tends to the Weyl dimension
        let eps = (1e-4, 1.7e-4);
        for l in Weight::up_to_level(4) {
            let c = character(l, eps);
            let d = l.weyl_dim() as f64;
            assert!((c - d).norm() < 1e-2 * d, "{l}: {c}");
        }
    }

    #[test]
    fn calibration_picks_three() {
        for level in 0..=4 {
            let k = (level + 3) as u64;
            assert_eq!(calibrate_torus_order(level).unwrap(), 3 * k * k);
        }
    }

    #[test]
    fn miscalibration_is_reported() {
        let p = VerlindeParams { genus: 2, weights: vec![], level: 1, torus_order: 17 };
        assert!(matches!(verlinde_dim(&p), Err(VerlindeError::Residual { .. })));
    }

    #[test]
    fn examples() {
        assert_eq!(verlinde(0, &[w(1, 0); 3], 1).unwrap().dim, 1);
        assert_eq!(verlinde(1, &[w(0, 0)], 1).unwrap().dim, 3);
        assert_eq!(verlinde(2, &[], 1).unwrap().dim, 9);
        assert_eq!(verlinde(1, &[], 2).unwrap().dim, 6);
    }

    #[test]
    fn genus_growth_at_level_one() {
        for g in 1..=2 {
            let a = verlinde(g, &[], 1).unwrap().dim;
            let b = verlinde(g + 1, &[], 1).unwrap().dim;
            assert_eq!(b, 3 * a);
        }
    }

    #[test]
    fn agrees_with_fusion_ring() {
        for level in 0..=3 {
            for g in 0..=2 {
                for ws in [vec![], vec![w(1, 1)], vec![w(1, 0), w(0, 1)], vec![w(1, 0); 3], vec![w(2, 0), w(0, 1), w(1, 1)]] {
                    if g == 0 && ws.len() < 2 {
                        continue;
                    }
                    let exact = fusion_ring_dim(g, &ws, level);
                    let v = verlinde(g, &ws, level).unwrap();
                    assert_eq!(v.dim, exact, "g={g} {ws:?} L={level}");
                    assert!(v.residual < TOLERANCE);
                }
            }
        }
    }
}
