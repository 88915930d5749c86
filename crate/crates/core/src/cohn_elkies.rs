//! The linear-programming bound: the sign conditions on `g` and `g_hat`, the
//! bound they imply, and a Poisson-summation check on E8.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice;
use crate::packing::ball_volume;

/// `pi^4 / 384`, the density of the E8 packing.
pub const E8_DENSITY: f64 = PI * PI * PI * PI / 384.0;

/// `f(0) / f_hat(0) * Vol(B_d(0, 1/2))`.
pub fn ce_bound(f0: f64, fhat0: f64, d: u32) -> Result<f64> {
    if !(fhat0 > 0.0) {
        return Err(Error::NonpositiveFhat0(fhat0));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    Ok(f0 / fhat0 * ball_volume(d, 0.5))
}

/// The bound for `f(x) = g(scale x)`, whose transform at the origin is
/// `scale^{-d} g_hat(0)`.
pub fn rescaled_bound(g0: f64, ghat0: f64, scale: f64, d: u32) -> Result<f64> {
    if !(scale > 0.0) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {scale}")));
    }
    ce_bound(g0, ghat0 * scale.powi(-(d as i32)), d)
}

/// Radii at which the sign conditions are checked: step 0.05 up to 6, plus
/// step 0.005 on `[sqrt 2, 1.6]`.
pub fn default_ce_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=120).map(|i| i as f64 * 0.05).collect();
    let fine = ((1.6 - SQRT_2) / 0.005).floor() as usize;
    grid.extend((0..=fine).map(|i| SQRT_2 + i as f64 * 0.005));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CeReport {
    pub grid: Vec<f64>,
    pub g0: f64,
    pub ghat0: f64,
    /// `g(0) > 0` and `g_hat(0) > 0`: the function is not identically zero.
    pub ce1_pass: bool,
    /// Largest `g(r)` over grid radii `r > sqrt 2 (1 + 1e-6)`.
    pub ce2_max_violation: f64,
    pub ce2_argmax: f64,
    /// Smallest `g_hat(r)` over the grid.
    pub ce3_min_value: f64,
    pub ce3_argmin: f64,
    pub bound: f64,
    pub target: f64,
    pub tol: f64,
    pub tol_bound: f64,
    pub pass: bool,
}

/// Checks the sign conditions for `f(x) = g(sqrt 2 x)` on `grid`.
///
/// `g` and `g_hat` are evaluated at each radius; `tol` bounds the allowed
/// sign violations and `tol_bound` the distance of the bound from `pi^4 / 384`.
pub fn verify_ce<G, H>(g: G, g_hat: H, grid: &[f64], tol: f64, tol_bound: f64) -> Result<CeReport>
where
    G: Fn(f64) -> Result<f64> + Sync,
    H: Fn(f64) -> Result<f64> + Sync,
{
    let cut = SQRT_2 * (1.0 + 1e-6);
    if grid.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
        return Err(Error::InvalidArgument("grid radii must be finite and nonnegative".into()));
    }
    if !grid.iter().any(|&r| r > cut) {
        return Err(Error::InsufficientGrid);
    }
    let max = grid.iter().copied().fold(0.0, f64::max);
    if max < 6.0 {
        return Err(Error::InvalidArgument(format!("grid must reach r = 6, stops at {max}")));
    }
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let g0 = g(0.0)?;
    let ghat0 = g_hat(0.0)?;
    let eval = |r: f64| -> Result<(f64, f64)> { Ok((g(r)?, g_hat(r)?)) };
    #[cfg(feature = "parallel")]
    let values: Vec<(f64, f64)> = {
        use rayon::prelude::*;
        grid.par_iter().map(|&r| eval(r)).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let values: Vec<(f64, f64)> = grid.iter().map(|&r| eval(r)).collect::<Result<_>>()?;

    let (mut ce2, mut ce2_at) = (f64::NEG_INFINITY, f64::NAN);
    let (mut ce3, mut ce3_at) = (f64::INFINITY, f64::NAN);
    for (&r, &(gv, hv)) in grid.iter().zip(&values) {
        if r > cut && gv > ce2 {
            ce2 = gv;
            ce2_at = r;
        }
        if hv < ce3 {
            ce3 = hv;
            ce3_at = r;
        }
    }
    let ce1_pass = g0 > 0.0 && ghat0 > 0.0;
    let bound = rescaled_bound(g0, ghat0, SQRT_2, 8)?;
    let pass = ce1_pass && ce2 <= tol && ce3 >= -tol && (bound - E8_DENSITY).abs() <= tol_bound;
    Ok(CeReport {
        grid,
        g0,
        ghat0,
        ce1_pass,
        ce2_max_violation: ce2,
        ce2_argmax: ce2_at,
        ce3_min_value: ce3,
        ce3_argmin: ce3_at,
        bound,
        target: E8_DENSITY,
        tol,
        tol_bound,
        pass,
    })
}

/// Both sides of Poisson summation for the Gaussian `e^{-pi sigma |x|^2}` on E8.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonCheck {
    pub sigma: f64,
    pub max_shell_norm2: i64,
    /// `sum_v e^{-pi sigma |v|^2}`.
    pub lhs: f64,
    /// `sigma^{-4} sum_v e^{-pi |v|^2 / sigma}`.
    pub rhs: f64,
    /// Bound on the neglected shells of either side.
    pub tail_bound: f64,
    /// `|lhs - rhs| / lhs`.
    pub residual: f64,
}

/// Relative size allowed for the neglected shells.
const POISSON_TAIL_TOL: f64 = 1e-13;

pub fn poisson_check(sigma: f64, max_shell_norm2: i64) -> Result<PoissonCheck> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
    }
    let shells = lattice::enumerate_shells(max_shell_norm2, false)?;
    let side = |s: f64| -> (f64, f64) {
        // shells summed from the outside in
        let mut sum = 0.0;
        for sh in shells.iter().rev() {
            sum += sh.count as f64 * (-PI * s * sh.norm2 as f64).exp();
        }
        (1.0 + sum, theta_tail_bound(s, max_shell_norm2))
    };
    let (lhs, tail_l) = side(sigma);
    let (rhs_sum, tail_r) = side(1.0 / sigma);
    let rhs = rhs_sum / sigma.powi(4);
    let tail_bound = tail_l.max(tail_r / sigma.powi(4));
    if tail_bound > POISSON_TAIL_TOL * lhs.min(rhs) {
        return Err(Error::TailBoundViolated {
            truncation: max_shell_norm2 as f64,
            bound: tail_bound,
            tol: POISSON_TAIL_TOL * lhs.min(rhs),
        });
    }
    Ok(PoissonCheck {
        sigma,
        max_shell_norm2,
        lhs,
        rhs,
        tail_bound,
        residual: (lhs - rhs).abs() / lhs,
    })
}

/// `sum_{2n > N} 240 sigma_3(n) e^{-2 pi s n}` bounded with
/// `sigma_3(n) <= zeta(3) n^3 < 1.21 n^3`.
fn theta_tail_bound(s: f64, max_norm2: i64) -> f64 {
    let x = (-2.0 * PI * s).exp();
    let mut n = max_norm2 / 2 + 1;
    let mut total = 0.0;
    loop {
        let nf = n as f64;
        let term = 240.0 * 1.21 * nf.powi(3) * x.powf(nf);
        total += term;
        // the ratio of successive terms is below x (1 + 1/n)^3
        let ratio = x * (1.0 + 1.0 / nf).powi(3);
        if ratio < 0.5 && term < 1e-30 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        if ratio < 1.0 && term * ratio / (1.0 - ratio) < 1e-3 * total {
            total += term * ratio / (1.0 - ratio);
            break;
        }
        n += 1;
        if n > 1_000_000 {
            return f64::INFINITY;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_examples() {
        let v8 = PI.powi(4) / 6144.0;
        assert!((ce_bound(1.0, 1.0, 8).unwrap() - v8).abs() < 1e-16);
        assert!((ce_bound(2.0, 1.0, 1).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(ce_bound(1.0, 0.0, 8), Err(Error::NonpositiveFhat0(_))));
        assert!(matches!(ce_bound(1.0, -1.0, 8), Err(Error::NonpositiveFhat0(_))));
    }

    #[test]
    fn rescaled_bound_examples() {
        let b = rescaled_bound(1.0, 1.0, SQRT_2, 8).unwrap();
        assert!((b - E8_DENSITY).abs() < 1e-15);
        assert!((E8_DENSITY - 0.253_669_507_901_048_1).abs() < 1e-15);
        assert_eq!(rescaled_bound(3.0, 2.0, 1.0, 8).unwrap(), ce_bound(3.0, 2.0, 8).unwrap());
        let b = rescaled_bound(1.0 + 1e-6, 1.0, SQRT_2, 8).unwrap();
        assert!((b - E8_DENSITY - 1e-6 * E8_DENSITY).abs() < 1e-15);
        assert!(rescaled_bound(1.0, 1.0, 0.0, 8).is_err());
    }

    #[test]
    fn bound_is_linear() {
        let base = ce_bound(1.0, 1.0, 8).unwrap();
        assert!((ce_bound(3.0, 1.0, 8).unwrap() - 3.0 * base).abs() < 1e-15);
        assert!((ce_bound(1.0, 4.0, 8).unwrap() - base / 4.0).abs() < 1e-15);
    }

    #[test]
    fn closing_identity_with_e8_density() {
        let spec = crate::packing::PeriodicPackingSpec::e8();
        let d = crate::packing::periodic_density(&spec).unwrap();
        assert!((rescaled_bound(1.0, 1.0, SQRT_2, 8).unwrap() - d).abs() < 1e-12);
    }

    #[test]
    fn magic_function_certifies_the_bound() {
        let m = crate::magic::Magic::standard().unwrap();
        let tol = 1e-7 * m.g0().abs();
        let r = verify_ce(|x| m.eval_g(x), |x| m.eval_g_hat(x), &default_ce_grid(), tol, 1e-6)
            .unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.bound - E8_DENSITY).abs() < 1e-6);
    }

    #[test]
    fn gaussian_fails_the_sign_condition() {
        let f = |r: f64| Ok((-PI * r * r).exp());
        let r = verify_ce(f, f, &default_ce_grid(), 1e-7, 1e-6).unwrap();
        assert!(r.ce1_pass);
        assert!(r.ce2_max_violation > 0.0);
        assert!(r.ce3_min_value > 0.0);
        assert!(!r.pass);
    }

    #[test]
    fn grid_preconditions() {
        let f = |r: f64| Ok((-PI * r * r).exp());
        let low: Vec<f64> = (0..=20).map(|i| i as f64 * 0.07).collect();
        assert!(matches!(verify_ce(f, f, &low, 1e-7, 1e-6), Err(Error::InsufficientGrid)));
        let short: Vec<f64> = (0..=40).map(|i| i as f64 * 0.1).collect();
        assert!(verify_ce(f, f, &short, 1e-7, 1e-6).is_err());
    }

    #[test]
    fn default_grid_shape() {
        let g = default_ce_grid();
        assert_eq!(g[0], 0.0);
        assert!((g[g.len() - 1] - 6.0).abs() < 1e-12);
        assert!(g.contains(&SQRT_2));
        assert!(g.iter().any(|&r| r > SQRT_2 && r < SQRT_2 + 0.006));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn poisson_residuals() {
        for sigma in [0.7, 1.0, 1.5, 2.0] {
            let p = poisson_check(sigma, 40).unwrap();
            assert!(p.residual < 1e-10, "sigma = {sigma}: {p:?}");
        }
    }

    #[test]
    fn poisson_substitution_symmetry() {
        let two = poisson_check(2.0, 40).unwrap();
        let half = poisson_check(0.5, 40).unwrap();
        assert!((two.lhs * 16.0 - half.lhs).abs() < 1e-10 * half.lhs);
        assert!((two.rhs * 16.0 - half.rhs).abs() < 1e-10 * half.rhs);
    }

    #[test]
    fn poisson_needs_enough_shells() {
        assert!(matches!(poisson_check(0.1, 4), Err(Error::TailBoundViolated { .. })));
        assert!(poisson_check(0.0, 40).is_err());
    }
}
