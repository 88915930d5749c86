//! Browser bindings: the radial profile of the magic function, E8 shell
//! counts and a Monte Carlo density estimate.
//!
//! Each export is a thin wrapper over a plain function of the same name in
//! [`demo`], which the native tests exercise.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use wasm_bindgen::prelude::*;

pub mod demo {
    use spherepack::cohn_elkies::E8_DENSITY;
    use spherepack::lattice;
    use spherepack::magic::Magic;
    use spherepack::packing::{self, PeriodicPackingSpec};
    use spherepack::Result;

    /// Largest squared norm the page may ask for.
    pub const MAX_NORM2: i64 = 30;
    /// Largest sample count the page may ask for.
    pub const MAX_SAMPLES: u64 = 5_000_000;
    /// Largest number of radii in one profile.
    pub const MAX_POINTS: usize = 2_000;

    /// `[r, g(r), g_hat(r)]` triples at `n` evenly spaced radii on `[0, r_max]`.
    pub fn magic_profile(r_max: f64, n: usize) -> Result<Vec<f64>> {
        if !(r_max > 0.0) || !r_max.is_finite() || !(2..=MAX_POINTS).contains(&n) {
            return Err(spherepack::Error::InvalidArgument(format!(
                "need r_max > 0 and 2 <= n <= {MAX_POINTS}"
            )));
        }
        let magic = Magic::standard()?;
        let mut out = Vec::with_capacity(3 * n);
        for i in 0..n {
            let r = r_max * i as f64 / (n - 1) as f64;
            let (g, g_hat) = magic.eval_pair(r)?;
            out.extend([r, g, g_hat]);
        }
        Ok(out)
    }

    /// Number of lattice vectors of each squared norm `0..=max_norm2`.
    pub fn shell_counts(max_norm2: i64) -> Result<Vec<f64>> {
        let shells = lattice::enumerate_shells_capped(max_norm2, false, MAX_NORM2)?;
        let mut counts = vec![0.0; max_norm2 as usize + 1];
        counts[0] = 1.0;
        for s in shells {
            counts[s.norm2 as usize] = s.count as f64;
        }
        Ok(counts)
    }

    /// `[estimate, stderr, pi^4 / 384]` for the E8 packing inside `B(0, radius)`.
    pub fn mc_density(radius: f64, samples: u64, seed: u64) -> Result<Vec<f64>> {
        if samples > MAX_SAMPLES {
            return Err(spherepack::Error::ResourceLimit {
                requested: samples as i64,
                cap: MAX_SAMPLES as i64,
            });
        }
        let est = packing::finite_density_mc(&PeriodicPackingSpec::e8(), radius, samples, seed)?;
        Ok(vec![est.value, est.stderr, E8_DENSITY])
    }
}

fn js(e: spherepack::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Flat `[r, g, g_hat, ...]` for `n` radii on `[0, r_max]`.
#[wasm_bindgen(js_name = magicProfile)]
pub fn magic_profile(r_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    demo::magic_profile(r_max, n).map_err(js)
}

/// Shell counts indexed by squared norm.
#[wasm_bindgen(js_name = shellCounts)]
pub fn shell_counts(max_norm2: i32) -> Result<Vec<f64>, JsError> {
    demo::shell_counts(max_norm2 as i64).map_err(js)
}

/// `[estimate, stderr, target]`.
#[wasm_bindgen(js_name = mcDensity)]
pub fn mc_density(radius: f64, samples: u32, seed: u32) -> Result<Vec<f64>, JsError> {
    demo::mc_density(radius, samples as u64, seed as u64).map_err(js)
}
