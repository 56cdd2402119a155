//! Exact integer linear algebra and facet enumeration for small rational cones.
//!
//! All arithmetic is on `i128` with gcd normalization after every row
//! operation; entries stay small at the ranks used here.

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn normalize(v: &mut [i128]) {
    let g = v.iter().fold(0, |g, x| gcd(g, *x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

fn dot(u: &[i128], v: &[i128]) -> i128 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Fully reduced integer echelon form: every pivot column is zero outside its
/// pivot row. Returns the nonzero rows and their pivot columns.
pub fn reduced_echelon(rows: &[Vec<i128>]) -> (Vec<Vec<i128>>, Vec<usize>) {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x = a * *x - b * y;
                }
                normalize(&mut m[i]);
            }
        }
        if m[r][c] < 0 {
            m[r].iter_mut().for_each(|x| *x = -*x);
        }
        normalize(&mut m[r]);
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<i128>]) -> usize {
    reduced_echelon(rows).1.len()
}

/// Integer basis of the right nullspace.
pub fn nullspace(rows: &[Vec<i128>], ncols: usize) -> Vec<Vec<i128>> {
    let (m, pivots) = reduced_echelon(rows);
    let lcm = m.iter().zip(&pivots).fold(1i128, |l, (row, &c)| l / gcd(l, row[c]) * row[c]);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0i128; ncols];
            v[f] = lcm;
            for (row, &c) in m.iter().zip(&pivots) {
                v[c] = -row[f] * (lcm / row[c]);
            }
            normalize(&mut v);
            v
        })
        .collect()
}

/// Coordinates on which the projection of the row span is injective.
pub fn pivot_columns(rows: &[Vec<i128>]) -> Vec<usize> {
    reduced_echelon(rows).1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FacetError {
    NotFullDimensional { rank: usize, dim: usize },
    TooManyRays(usize),
}

/// Inward facet normals of the cone generated by `generators` in `Z^d`, which
/// must span `Q^d`. Double description on the dual cone
/// `{y : g·y ≥ 0 for all generators}`, whose extreme rays are the facet
/// normals; adjacency is tested combinatorially. Output is primitive and sorted.
pub fn facets(generators: &[Vec<i128>], ray_guard: usize) -> Result<Vec<Vec<i128>>, FacetError> {
    let d = generators.first().map_or(0, |g| g.len());
    let r = rank(generators);
    if r != d || d == 0 {
        return Err(FacetError::NotFullDimensional { rank: r, dim: d });
    }
    // pick d independent generators greedily
    let mut basis: Vec<usize> = Vec::new();
    let mut chosen: Vec<Vec<i128>> = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        chosen.push(g.clone());
        if rank(&chosen) == chosen.len() {
            basis.push(i);
        } else {
            chosen.pop();
        }
        if basis.len() == d {
            break;
        }
    }
    let n = generators.len();
    let words = n.div_ceil(64);
    let zero_set = |y: &[i128], processed: &[usize]| {
        let mut z = vec![0u64; words];
        for &k in processed {
            if dot(&generators[k], y) == 0 {
                z[k / 64] |= 1 << (k % 64);
            }
        }
        z
    };
    let mut processed: Vec<usize> = basis.clone();
    let mut rays: Vec<(Vec<i128>, Vec<u64>)> = basis
        .iter()
        .map(|&i| {
            let others: Vec<Vec<i128>> =
                basis.iter().filter(|&&j| j != i).map(|&j| generators[j].clone()).collect();
            let mut y = if others.is_empty() { vec![1] } else { nullspace(&others, d).remove(0) };
            if dot(&generators[i], &y) < 0 {
                y.iter_mut().for_each(|x| *x = -*x);
            }
            let z = zero_set(&y, &processed);
            (y, z)
        })
        .collect();

    for k in 0..n {
        if basis.contains(&k) {
            continue;
        }
        let g = &generators[k];
        let vals: Vec<i128> = rays.iter().map(|(y, _)| dot(g, y)).collect();
        let mut next: Vec<(Vec<i128>, Vec<u64>)> = Vec::new();
        for (i, (y, z)) in rays.iter().enumerate() {
            if vals[i] >= 0 {
                let mut z = z.clone();
                if vals[i] == 0 {
                    z[k / 64] |= 1 << (k % 64);
                }
                next.push((y.clone(), z));
            }
        }
        for p in (0..rays.len()).filter(|&i| vals[i] > 0) {
            for q in (0..rays.len()).filter(|&i| vals[i] < 0) {
                let common: Vec<u64> = rays[p].1.iter().zip(&rays[q].1).map(|(a, b)| a & b).collect();
                let size: u32 = common.iter().map(|w| w.count_ones()).sum();
                if (size as usize) + 2 < d {
                    continue;
                }
                let adjacent = !(0..rays.len()).any(|r| {
                    r != p && r != q && rays[r].1.iter().zip(&common).all(|(zr, c)| zr & c == *c)
                });
                if adjacent {
                    let mut y: Vec<i128> = rays[q]
                        .0
                        .iter()
                        .zip(&rays[p].0)
                        .map(|(yq, yp)| vals[p] * yq - vals[q] * yp)
                        .collect();
                    normalize(&mut y);
                    let mut z = common;
                    z[k / 64] |= 1 << (k % 64);
                    next.push((y, z));
                }
            }
        }
        processed.push(k);
        rays = next;
        if rays.len() > ray_guard {
            return Err(FacetError::TooManyRays(rays.len()));
        }
    }
    let mut out: Vec<Vec<i128>> = rays.into_iter().map(|(y, _)| y).collect();
    out.sort();
    out.dedup();
    Ok(out)
}
