//! Periodic packings, ball volumes and a Monte Carlo finite-density estimator.

use std::f64::consts::PI;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, DIM};

/// Volume of the `d`-ball of radius `r`, `pi^{d/2} r^d / Gamma(d/2 + 1)`.
pub fn ball_volume(d: u32, r: f64) -> f64 {
    assert!(d >= 1, "dimension must be positive");
    PI.powf(d as f64 / 2.0) * r.powi(d as i32) / gamma_half_plus_one(d)
}

/// `Gamma(d/2 + 1)` for a positive integer `d`.
fn gamma_half_plus_one(d: u32) -> f64 {
    let (mut x, mut g) = if d.is_multiple_of(2) { (1.0, 1.0) } else { (1.5, PI.sqrt() / 2.0) };
    let target = d as f64 / 2.0 + 1.0;
    while x < target - 0.25 {
        g *= x;
        x += 1.0;
    }
    g
}

/// The lattice whose translates carry the centers; selects the decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    E8,
    Integer,
}

impl LatticeKind {
    /// Squared distance from `y` to the nearest lattice point.
    fn dist2(self, y: &[f64; DIM]) -> f64 {
        match self {
            LatticeKind::E8 => lattice::nearest_point_dist2(y).1,
            LatticeKind::Integer => y.iter().map(|x| (x - x.round()).powi(2)).sum(),
        }
    }

    fn min_norm(self) -> f64 {
        match self {
            LatticeKind::E8 => 2f64.sqrt(),
            LatticeKind::Integer => 1.0,
        }
    }

    fn contains(self, v: &[f64; DIM]) -> bool {
        match self {
            LatticeKind::E8 => lattice::e8_membership(v),
            LatticeKind::Integer => v.iter().all(|x| *x == x.round()),
        }
    }
}

/// Centers `offsets + lattice`, balls of radius `separation / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPackingSpec {
    lattice: LatticeKind,
    basis: [[f64; DIM]; DIM],
    offsets: Vec<[f64; DIM]>,
    separation: f64,
}

impl PeriodicPackingSpec {
    /// Validates the basis rows, the separation and the pairwise distances
    /// between all centers.
    pub fn new(
        lattice: LatticeKind,
        basis: [[f64; DIM]; DIM],
        offsets: Vec<[f64; DIM]>,
        separation: f64,
    ) -> Result<Self> {
        if !(separation > 0.0) || !separation.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "separation must be positive, got {separation}"
            )));
        }
        if let Some(row) = basis.iter().find(|r| !lattice.contains(r)) {
            return Err(Error::InvalidArgument(format!(
                "basis row {row:?} is not in the {lattice:?} lattice"
            )));
        }
        let spec = PeriodicPackingSpec {
            lattice,
            basis,
            offsets,
            separation,
        };
        let det = spec.covolume()?;
        // the rows generate a sublattice of index det / covol(lattice)
        let reference = match lattice {
            LatticeKind::E8 => lattice::covolume(),
            LatticeKind::Integer => 1.0,
        };
        if (det - reference).abs() > 1e-9 * reference {
            return Err(Error::InvalidArgument(format!(
                "basis has covolume {det}, expected {reference}"
            )));
        }
        let min = spec.min_center_distance();
        if min < separation - 1e-12 {
            return Err(Error::SeparationViolated {
                distance: min,
                separation,
            });
        }
        Ok(spec)
    }

    /// The E8 packing: one center per lattice point, separation `sqrt 2`.
    pub fn e8() -> Self {
        PeriodicPackingSpec::new(
            LatticeKind::E8,
            lattice::e8_basis().rows(),
            vec![[0.0; DIM]],
            2f64.sqrt(),
        )
        .expect("E8 packing is valid")
    }

    /// The integer lattice with one center per point.
    pub fn integer(separation: f64) -> Result<Self> {
        let mut basis = [[0.0; DIM]; DIM];
        for (i, row) in basis.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        PeriodicPackingSpec::new(LatticeKind::Integer, basis, vec![[0.0; DIM]], separation)
    }

    pub fn lattice(&self) -> LatticeKind {
        self.lattice
    }

    pub fn basis(&self) -> &[[f64; DIM]; DIM] {
        &self.basis
    }

    pub fn offsets(&self) -> &[[f64; DIM]] {
        &self.offsets
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// Same packing with every offset moved by `shift`.
    pub fn translated(&self, shift: &[f64; DIM]) -> Self {
        let offsets = self
            .offsets
            .iter()
            .map(|o| std::array::from_fn(|i| o[i] + shift[i]))
            .collect();
        PeriodicPackingSpec {
            offsets,
            ..self.clone()
        }
    }

    /// Same packing described by the basis `u * basis` for an integer matrix `u`.
    pub fn with_basis(&self, basis: [[f64; DIM]; DIM]) -> Result<Self> {
        PeriodicPackingSpec::new(self.lattice, basis, self.offsets.clone(), self.separation)
    }

    /// `|det basis|`.
    pub fn covolume(&self) -> Result<f64> {
        let d = determinant(&self.basis).abs();
        if !(d > 1e-12) {
            return Err(Error::DegenerateBasis);
        }
        Ok(d)
    }

    /// Smallest distance between two distinct centers.
    fn min_center_distance(&self) -> f64 {
        let mut min = if self.offsets.is_empty() {
            f64::INFINITY
        } else {
            self.lattice.min_norm()
        };
        for (i, a) in self.offsets.iter().enumerate() {
            for b in &self.offsets[i + 1..] {
                let d: [f64; DIM] = std::array::from_fn(|k| a[k] - b[k]);
                min = min.min(self.lattice.dist2(&d).sqrt());
            }
        }
        min
    }

    /// True if `y` lies in an open ball of radius `separation / 2` around a center.
    pub fn covers(&self, y: &[f64; DIM]) -> bool {
        let r2 = 0.25 * self.separation * self.separation;
        self.offsets.iter().any(|o| {
            let d: [f64; DIM] = std::array::from_fn(|k| y[k] - o[k]);
            self.lattice.dist2(&d) < r2
        })
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
fn determinant(m: &[[f64; DIM]; DIM]) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for k in 0..DIM {
        let p = (k..DIM)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..DIM {
            let f = a[i][k] / a[k][k];
            for j in k..DIM {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    det
}

/// `m Vol(B_8(sep / 2)) / covolume` for `m` centers per fundamental domain.
pub fn periodic_density(spec: &PeriodicPackingSpec) -> Result<f64> {
    let covol = spec.covolume()?;
    Ok(spec.offsets.len() as f64 * ball_volume(DIM as u32, spec.separation / 2.0) / covol)
}

/// True if all pairwise distances are at least `separation` (up to 1e-12).
pub fn check_separation(centers: &[[f64; DIM]], separation: f64) -> bool {
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
            if d2.sqrt() < separation - 1e-12 {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub radius: f64,
}

/// Random words consumed per sample: eight normals (four Box–Muller pairs)
/// and one radius draw.
const U64_PER_SAMPLE: u128 = 9;

/// Samples per work unit; hit counts are summed per unit, so the result does
/// not depend on how units are scheduled.
const CHUNK: u64 = 1 << 15;

/// Uniform in `(0, 1]` from the top 53 bits.
fn unit(x: u64) -> f64 {
    ((x >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Point `index` of the stream: uniform in the ball of radius `radius`.
fn sample_point(rng: &mut ChaCha8Rng, index: u64, radius: f64) -> [f64; DIM] {
    rng.set_word_pos(index as u128 * U64_PER_SAMPLE * 2);
    let mut g = [0.0; DIM];
    for pair in g.chunks_mut(2) {
        let u1 = unit(rng.next_u64());
        let u2 = unit(rng.next_u64());
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        pair[0] = r * c;
        pair[1] = r * s;
    }
    let u = unit(rng.next_u64());
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = radius * u.powf(1.0 / DIM as f64) / norm;
    g.map(|x| x * scale)
}

fn count_hits(spec: &PeriodicPackingSpec, seed: u64, radius: f64, lo: u64, hi: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (lo..hi)
        .filter(|&i| spec.covers(&sample_point(&mut rng, i, radius)))
        .count() as u64
}

/// Fraction of `B(0, radius)` covered by the packing's balls, estimated from
/// `samples` uniform points. Sample `i` is drawn from a fixed position of
/// the ChaCha8 stream keyed by `seed`, so the estimate does not depend on
/// the number of worker threads.
pub fn finite_density_mc(
    spec: &PeriodicPackingSpec,
    radius: f64,
    samples: u64,
    seed: u64,
) -> Result<DensityEstimate> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "radius must be positive, got {radius}"
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let chunks: Vec<(u64, u64)> = (0..samples.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(samples)))
        .collect();
    let hits: u64 = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            chunks
                .par_iter()
                .map(|&(lo, hi)| count_hits(spec, seed, radius, lo, hi))
                .sum()
        }
        #[cfg(not(feature = "parallel"))]
        {
            chunks
                .iter()
                .map(|&(lo, hi)| count_hits(spec, seed, radius, lo, hi))
                .sum()
        }
    };
    let value = hits as f64 / samples as f64;
    Ok(DensityEstimate {
        value,
        stderr: (value * (1.0 - value) / samples as f64).sqrt(),
        samples,
        seed,
        radius,
    })
}
