//! The E8 lattice in exact doubled coordinates.
//!
//! A vector `x` is stored as `2x`, so every coordinate is an integer.
//! Membership: all doubled coordinates even or all odd, and their sum
//! divisible by 4 (coordinate sum even).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DIM: usize = 8;

/// Largest `max_norm2` accepted by [`enumerate_shells`] by default.
pub const DEFAULT_NORM2_CAP: i64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector {
    half_coords: [i64; DIM],
}

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector {
        half_coords: [0; DIM],
    };

    /// Build from doubled coordinates, rejecting non-members.
    pub fn from_half_coords(half_coords: [i64; DIM]) -> Result<Self> {
        if !is_member_half(&half_coords) {
            return Err(Error::InvalidArgument(format!(
                "{half_coords:?} (doubled) is not in E8"
            )));
        }
        Ok(LatticeVector { half_coords })
    }

    pub fn half_coords(&self) -> [i64; DIM] {
        self.half_coords
    }

    pub fn coords(&self) -> [f64; DIM] {
        self.half_coords.map(|h| h as f64 / 2.0)
    }

    /// Exact squared norm; always an even integer.
    pub fn norm2(&self) -> i64 {
        self.half_coords.iter().map(|h| h * h).sum::<i64>() / 4
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut h = self.half_coords;
        for (a, b) in h.iter_mut().zip(other.half_coords) {
            *a += b;
        }
        LatticeVector { half_coords: h }
    }

    pub fn neg(&self) -> Self {
        LatticeVector {
            half_coords: self.half_coords.map(|h| -h),
        }
    }
}

/// Membership test on doubled coordinates.
pub fn is_member_half(h: &[i64; DIM]) -> bool {
    let parity = h[0].rem_euclid(2);
    h.iter().all(|x| x.rem_euclid(2) == parity) && h.iter().sum::<i64>().rem_euclid(4) == 0
}

/// Membership test on real coordinates; anything that is not an exact
/// multiple of one half is rejected.
pub fn e8_membership(v: &[f64; DIM]) -> bool {
    let mut h = [0i64; DIM];
    for (out, &x) in h.iter_mut().zip(v) {
        let d = 2.0 * x;
        if !d.is_finite() || d != d.round() || d.abs() > 1e15 {
            return false;
        }
        *out = d as i64;
    }
    is_member_half(&h)
}

/// Vectors of one squared norm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shell {
    pub norm2: i64,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<LatticeVector>>,
}

/// Eight basis rows in doubled coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasis {
    rows: [[i64; DIM]; DIM],
}

impl LatticeBasis {
    pub fn from_half_rows(rows: [[i64; DIM]; DIM]) -> Self {
        LatticeBasis { rows }
    }

    pub fn half_rows(&self) -> &[[i64; DIM]; DIM] {
        &self.rows
    }

    pub fn rows(&self) -> [[f64; DIM]; DIM] {
        self.rows.map(|r| r.map(|h| h as f64 / 2.0))
    }

    /// Exact determinant as a fraction `num / 256` reduced to `(num, den)`.
    pub fn determinant(&self) -> (i128, i128) {
        let doubled = bareiss_det(&self.rows);
        let g = gcd(doubled.abs(), 256);
        (doubled / g, 256 / g)
    }

    /// Gram matrix `B B^T` in doubled-squared units (entries are `4 <b_i, b_j>`).
    pub fn gram_times_four(&self) -> [[i64; DIM]; DIM] {
        let mut g = [[0i64; DIM]; DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                g[i][j] = (0..DIM).map(|k| self.rows[i][k] * self.rows[j][k]).sum();
            }
        }
        g
    }

    /// Gram matrix with exact entries, when they are integers.
    pub fn gram(&self) -> Option<[[i64; DIM]; DIM]> {
        let g4 = self.gram_times_four();
        if g4.iter().flatten().any(|x| x % 4 != 0) {
            return None;
        }
        Some(g4.map(|r| r.map(|x| x / 4)))
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        self.rows.swap(i, j);
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Fraction-free Gaussian elimination.
fn bareiss_det(rows: &[[i64; DIM]; DIM]) -> i128 {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..DIM {
        if m[k][k] == 0 {
            match (k + 1..DIM).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..DIM {
            for j in k + 1..DIM {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[DIM - 1][DIM - 1]
}

/// `2e_1`, `e_2 - e_1`, ..., `e_7 - e_6` and `(1/2, ..., 1/2)`.
pub fn e8_basis() -> LatticeBasis {
    let mut rows = [[0i64; DIM]; DIM];
    rows[0][0] = 4;
    for i in 1..7 {
        rows[i][i - 1] = -2;
        rows[i][i] = 2;
    }
    rows[7] = [1; DIM];
    LatticeBasis { rows }
}

/// All nonzero lattice vectors with `norm2 <= max_norm2`, grouped by norm.
pub fn enumerate_shells(max_norm2: i64, with_vectors: bool) -> Result<Vec<Shell>> {
    enumerate_shells_capped(max_norm2, with_vectors, DEFAULT_NORM2_CAP)
}

pub fn enumerate_shells_capped(max_norm2: i64, with_vectors: bool, cap: i64) -> Result<Vec<Shell>> {
    if max_norm2 < 0 {
        return Err(Error::InvalidArgument("max_norm2 must be >= 0".into()));
    }
    if max_norm2 > cap {
        return Err(Error::ResourceLimit {
            requested: max_norm2,
            cap,
        });
    }
    let budget = 4 * max_norm2;
    let mut counts = vec![0u64; max_norm2 as usize + 1];
    let mut vectors: Vec<Vec<LatticeVector>> = vec![Vec::new(); max_norm2 as usize + 1];
    for parity in [0i64, 1] {
        let mut h = [0i64; DIM];
        search(0, parity, budget, 0, 0, &mut h, &mut |v, n4| {
            let n = (n4 / 4) as usize;
            counts[n] += 1;
            if with_vectors {
                vectors[n].push(LatticeVector { half_coords: *v });
            }
        });
    }
    let mut shells = Vec::new();
    for (n, count) in counts.into_iter().enumerate().skip(1) {
        if count == 0 {
            continue;
        }
        let vs = with_vectors.then(|| std::mem::take(&mut vectors[n]));
        shells.push(Shell {
            norm2: n as i64,
            count,
            vectors: vs,
        });
    }
    Ok(shells)
}

/// Depth-first box search over doubled coordinates of one parity, pruned by
/// the remaining norm budget.
fn search(
    depth: usize,
    parity: i64,
    budget: i64,
    used: i64,
    sum: i64,
    h: &mut [i64; DIM],
    visit: &mut impl FnMut(&[i64; DIM], i64),
) {
    if depth == DIM {
        if used > 0 && sum.rem_euclid(4) == 0 {
            visit(h, used);
        }
        return;
    }
    let left = budget - used;
    let bound = isqrt(left);
    let mut x = -bound;
    if (x - parity).rem_euclid(2) != 0 {
        x += 1;
    }
    while x <= bound {
        h[depth] = x;
        search(depth + 1, parity, budget, used + x * x, sum + x, h, visit);
        x += 2;
    }
    h[depth] = 0;
}

fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Length of the shortest nonzero vector.
pub fn min_norm() -> f64 {
    let shells = enumerate_shells(2, false).expect("within cap");
    (shells[0].norm2 as f64).sqrt()
}

/// `r(n)`: number of vectors with squared norm `2n`, for `n = 0..=max_n`.
pub fn theta_coefficients(max_n: i64) -> Result<Vec<u64>> {
    let shells = enumerate_shells(2 * max_n, false)?;
    let mut out = vec![0u64; max_n as usize + 1];
    out[0] = 1;
    for s in shells {
        out[(s.norm2 / 2) as usize] = s.count;
    }
    Ok(out)
}

/// Closest point of `D8` (integer vectors with even sum), returned doubled.
fn decode_d8(y: &[f64; DIM]) -> [i64; DIM] {
    let mut r = [0i64; DIM];
    let mut worst = 0;
    let mut worst_err = -1.0;
    for i in 0..DIM {
        let rounded = y[i].round();
        r[i] = rounded as i64;
        let err = (y[i] - rounded).abs();
        if err > worst_err {
            worst_err = err;
            worst = i;
        }
    }
    if r.iter().sum::<i64>().rem_euclid(2) != 0 {
        // move the worst coordinate to its other neighbouring integer
        r[worst] += if y[worst] > r[worst] as f64 { 1 } else { -1 };
    }
    r.map(|x| 2 * x)
}

fn dist2(y: &[f64; DIM], h: &[i64; DIM]) -> f64 {
    y.iter()
        .zip(h)
        .map(|(a, &b)| {
            let d = a - b as f64 / 2.0;
            d * d
        })
        .sum()
}

/// Nearest lattice point to `y` and its distance, via `D8 ∪ (D8 + g)`.
pub fn nearest_point(y: &[f64; DIM]) -> (LatticeVector, f64) {
    let (h, d2) = nearest_point_dist2(y);
    (LatticeVector { half_coords: h }, d2.sqrt())
}

/// Same as [`nearest_point`], returning the squared distance.
pub fn nearest_point_dist2(y: &[f64; DIM]) -> ([i64; DIM], f64) {
    let a = decode_d8(y);
    let shifted = y.map(|x| x - 0.5);
    let b = decode_d8(&shifted).map(|x| x + 1);
    let da = dist2(y, &a);
    let db = dist2(y, &b);
    if da <= db {
        (a, da)
    } else {
        (b, db)
    }
}

/// Volume of a fundamental domain, `|det e8_basis()|`.
pub fn covolume() -> f64 {
    let (num, den) = e8_basis().determinant();
    (num as f64 / den as f64).abs()
}
