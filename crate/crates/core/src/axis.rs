//! Restrictions of forms to the imaginary axis and the sign checks on
//! `phi0 +- (36 / pi^2) psi_S` along it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{FormId, Forms, HalfPlanePoint};

/// The constant `36 / pi^2` pairing `phi0` with `psi_S`.
pub const PSI_WEIGHT: f64 = 36.0 / (PI * PI);

/// `F(i t)` for `t > 0` and exactly `0` otherwise.
///
/// For `t < 1` the value comes from the transformation law at `i / t`.
pub fn res_to_imag_axis(form: FormId, t: f64, forms: &Forms) -> Result<Complex64> {
    if !(t > 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if !t.is_finite() {
        return Err(Error::Domain(format!("axis parameter must be finite, got {t}")));
    }
    if t >= 1.0 {
        return forms.eval(form, HalfPlanePoint::on_axis(t)?);
    }
    let s = HalfPlanePoint::on_axis(1.0 / t)?;
    // E_k(i t) = (i / t)^k E_k(i / t), theta(i t) = t^{-1/2} theta'(i / t)
    let v = match form {
        FormId::E2 => -forms.eval(FormId::E2, s)? / (t * t) + 6.0 / (PI * t),
        FormId::E4 => forms.eval(FormId::E4, s)? / t.powi(4),
        FormId::E6 => -forms.eval(FormId::E6, s)? / t.powi(6),
        FormId::Delta => forms.eval(FormId::Delta, s)? / t.powi(12),
        FormId::Theta00 => forms.eval(FormId::Theta00, s)? / t.sqrt(),
        FormId::Theta01 => forms.eval(FormId::Theta10, s)? / t.sqrt(),
        FormId::Theta10 => forms.eval(FormId::Theta01, s)? / t.sqrt(),
        FormId::Phi0 => {
            forms.eval_phi0(s)? - 12.0 * t / PI * forms.eval_phi_m2(s)?
                + 36.0 * t * t / (PI * PI) * forms.eval_phi_m4(s)?
        }
        // psi_I(i / t) = -t^{-2} psi_S(i t)
        FormId::PsiS => -t * t * forms.eval_psi_i(s)?,
    };
    Ok(v)
}

/// Largest `|Im F(i t)| / |F(i t)|` over `grid`.
pub fn check_realness(form: FormId, grid: &[f64], forms: &Forms) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in grid {
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(format!("grid points must be positive, got {t}")));
        }
        let v = res_to_imag_axis(form, t, forms)?;
        if v.norm() > 0.0 {
            worst = worst.max(v.im.abs() / v.norm());
        }
    }
    Ok(worst)
}

/// Which pair of functions of `t` the inequalities are read on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelConvention {
    /// `phi0(i t)` and `psi_S(i t)`.
    Direct,
    /// `t^2 phi0(i / t)` and `t^2 psi_S(i / t)`, the kernels inside the
    /// Laplace-transform form of `a` and `b`.
    #[serde(rename = "sweighted")]
    SWeighted,
}

impl KernelConvention {
    pub fn name(self) -> &'static str {
        match self {
            KernelConvention::Direct => "direct",
            KernelConvention::SWeighted => "sweighted",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [KernelConvention::Direct, KernelConvention::SWeighted]
            .into_iter()
            .find(|c| c.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSample {
    pub t: f64,
    pub phi0: f64,
    pub psi_s: f64,
    /// `phi0 + (36 / pi^2) psi_S`.
    pub combo_plus: f64,
    /// `phi0 - (36 / pi^2) psi_S`.
    pub combo_minus: f64,
}

impl AxisSample {
    /// Combinations formed from the two values.
    pub fn new(t: f64, phi0: f64, psi_s: f64) -> Self {
        AxisSample {
            t,
            phi0,
            psi_s,
            combo_plus: phi0 + PSI_WEIGHT * psi_s,
            combo_minus: phi0 - PSI_WEIGHT * psi_s,
        }
    }
}

/// The pair `(phi0, psi_S)` at `t` under `convention`.
pub fn axis_pair(t: f64, convention: KernelConvention, forms: &Forms) -> Result<(f64, f64)> {
    match convention {
        KernelConvention::Direct => Ok((forms.eval_phi0_axis(t)?, forms.eval_psi_s_axis(t)?)),
        KernelConvention::SWeighted => {
            Ok((forms.phi0_s_weighted(t)?, forms.psi_s_s_weighted(t)?))
        }
    }
}

pub fn eq2_samples(
    grid: &[f64],
    convention: KernelConvention,
    forms: &Forms,
) -> Result<Vec<AxisSample>> {
    let sample = |t: f64| -> Result<AxisSample> {
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(format!("grid points must be positive, got {t}")));
        }
        let (phi0, psi_s) = axis_pair(t, convention, forms)?;
        let mut s = AxisSample::new(t, phi0, psi_s);
        if convention == KernelConvention::SWeighted && t > 1.0 {
            s.combo_plus = forms.s_weighted_combo(t, 1.0)?;
            s.combo_minus = forms.s_weighted_combo(t, -1.0)?;
        }
        Ok(s)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        grid.par_iter().map(|&t| sample(t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        grid.iter().map(|&t| sample(t)).collect()
    }
}

/// `n` points spaced evenly in `log t` on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi > lo) || n < 2 {
        return Err(Error::InvalidArgument(format!(
            "a logarithmic grid needs 0 < lo < hi and n >= 2 (got {lo}, {hi}, {n})"
        )));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| (a + step * i as f64).exp()).collect();
    grid[0] = lo;
    grid[n - 1] = hi;
    Ok(grid)
}

/// The default grid: 400 logarithmic points on `[0.05, 20]`.
pub fn default_axis_grid() -> Vec<f64> {
    log_grid(0.05, 20.0, 400).expect("valid default grid")
}

/// Where a minimum was attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub value: f64,
    pub t: f64,
    /// Not at either end of the grid.
    pub interior: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub convention: KernelConvention,
    pub points: usize,
    pub min_combo_plus: Extremum,
    pub min_combo_minus: Extremum,
    /// Largest value of `combo_plus`. Under the weighted convention
    /// `g_hat >= 0` beyond `sqrt 2` is implied by `combo_plus <= 0`.
    pub max_combo_plus: Extremum,
    /// `combo_minus > 0` and `combo_plus < 0` on the whole grid: the pointwise
    /// integrand signs that give `g <= 0` and `g_hat >= 0` beyond `sqrt 2`.
    pub kernel_signs_pass: bool,
    /// Both combinations strictly positive on the whole grid.
    pub pass: bool,
}

/// Checks `0 < phi0 +- (36 / pi^2) psi_S` on `grid`, refining around any
/// near-zero minimum.
pub fn verify_inequalities(
    grid: &[f64],
    convention: KernelConvention,
    forms: &Forms,
) -> Result<InequalityReport> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty axis grid".into()));
    }
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut samples = eq2_samples(&grid, convention, forms)?;
    let refine: Vec<f64> = [
        argmin(&samples, |s| s.combo_plus),
        argmin(&samples, |s| s.combo_minus),
    ]
    .into_iter()
    .filter(|&i| {
        let s = &samples[i];
        s.combo_plus.min(s.combo_minus) < 1e-3 * s.phi0.abs()
    })
    .flat_map(|i| {
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[(i + 1).min(grid.len() - 1)];
        (1..8)
            .map(move |k| lo + (hi - lo) * k as f64 / 8.0)
            .filter(|t| !grid.contains(t))
            .collect::<Vec<_>>()
    })
    .collect();
    if !refine.is_empty() {
        samples.extend(eq2_samples(&refine, convention, forms)?);
        samples.sort_by(|a, b| a.t.total_cmp(&b.t));
        samples.dedup_by(|a, b| a.t == b.t);
    }
    let (first, last) = (samples[0].t, samples[samples.len() - 1].t);
    let extremum = |i: usize, value: f64| Extremum {
        value,
        t: samples[i].t,
        interior: samples[i].t != first && samples[i].t != last,
    };
    let ip = argmin(&samples, |s| s.combo_plus);
    let im = argmin(&samples, |s| s.combo_minus);
    let ix = argmin(&samples, |s| -s.combo_plus);
    let min_combo_plus = extremum(ip, samples[ip].combo_plus);
    let min_combo_minus = extremum(im, samples[im].combo_minus);
    let max_combo_plus = extremum(ix, samples[ix].combo_plus);
    Ok(InequalityReport {
        convention,
        points: samples.len(),
        min_combo_plus,
        min_combo_minus,
        max_combo_plus,
        kernel_signs_pass: min_combo_minus.value > 0.0 && max_combo_plus.value < 0.0,
        pass: min_combo_plus.value > 0.0 && min_combo_minus.value > 0.0,
    })
}

fn argmin(samples: &[AxisSample], key: impl Fn(&AxisSample) -> f64) -> usize {
    let mut best = 0;
    for (i, s) in samples.iter().enumerate() {
        if key(s) < key(&samples[best]) {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forms() -> &'static Forms {
        Forms::standard()
    }

    #[test]
    fn zero_off_the_positive_axis() {
        for form in FormId::ALL {
            for t in [-1.0, 0.0, -0.0, f64::NEG_INFINITY] {
                assert_eq!(res_to_imag_axis(form, t, forms()).unwrap(), Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn e4_at_i() {
        // E_4(i) = 3 Gamma(1/4)^8 / (2 pi)^6
        let v = res_to_imag_axis(FormId::E4, 1.0, forms()).unwrap();
        assert!((v.re - 1.455_762_892_268_709_3).abs() < 1e-12);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn transformation_branch_is_continuous() {
        for form in FormId::ALL {
            let below = res_to_imag_axis(form, 1.0 - 1e-9, forms()).unwrap();
            let above = res_to_imag_axis(form, 1.0, forms()).unwrap();
            assert!((below - above).norm() < 1e-7 * above.norm().max(1.0), "{form:?}");
        }
    }

    #[test]
    fn small_t_matches_direct_series_where_both_converge() {
        for form in FormId::ALL {
            let t: f64 = 0.8;
            let direct = forms().eval(form, HalfPlanePoint::on_axis(t).unwrap()).unwrap();
            let via = res_to_imag_axis(form, t, forms()).unwrap();
            assert!((direct - via).norm() < 1e-9 * direct.norm().max(1.0), "{form:?}");
        }
    }

    #[test]
    fn realness_on_log_grid() {
        let grid = log_grid(0.1, 10.0, 60).unwrap();
        assert!(check_realness(FormId::Phi0, &grid, forms()).unwrap() < 1e-9);
        assert!(check_realness(FormId::PsiS, &grid, forms()).unwrap() < 1e-9);
        assert!(check_realness(FormId::E2, &[1.0], forms()).unwrap() < 1e-12);
    }

    #[test]
    fn combo_algebra() {
        let grid = log_grid(0.05, 20.0, 40).unwrap();
        for s in eq2_samples(&grid, KernelConvention::Direct, forms()).unwrap() {
            let two = 2.0 * s.phi0;
            assert!((s.combo_plus + s.combo_minus - two).abs() <= 1e-14 * two.abs().max(1.0));
        }
        // the weighted combinations are summed separately beyond t = 1, so
        // the identity holds to the kernels' own accuracy
        for s in eq2_samples(&grid, KernelConvention::SWeighted, forms()).unwrap() {
            let two = 2.0 * s.phi0;
            let scale = s.phi0.abs() + PSI_WEIGHT * s.psi_s.abs();
            assert!((s.combo_plus + s.combo_minus - two).abs() <= 1e-12 * scale, "t = {}", s.t);
        }
    }

    #[test]
    fn weighted_plus_combination_is_free_of_cancellation() {
        // leading behaviour (36 / pi^2) 360 - 8640 t / pi + O(t^2 e^{-2 pi t})
        for t in [8.0, 14.0, 20.0] {
            let v = forms().s_weighted_combo(t, 1.0).unwrap();
            let lead = PSI_WEIGHT * 360.0 - 8640.0 * t / PI;
            assert!((v - lead).abs() < 1e-6 * lead.abs(), "t = {t}: {v} vs {lead}");
        }
    }

    #[test]
    fn phi0_positive_on_the_axis() {
        let grid = log_grid(0.05, 20.0, 100).unwrap();
        for s in eq2_samples(&grid, KernelConvention::Direct, forms()).unwrap() {
            assert!(s.phi0 > 0.0, "t = {}", s.t);
        }
        let s = eq2_samples(&[1.0], KernelConvention::Direct, forms()).unwrap();
        assert!(s[0].phi0 > 0.0);
    }

    #[test]
    fn weighted_kernels_match_their_definitions() {
        // t^2 phi0(i / t) and t^2 psi_S(i / t) through the axis evaluators
        for t in [0.3, 0.9, 1.7, 4.0] {
            let (k_a, k_b) = axis_pair(t, KernelConvention::SWeighted, forms()).unwrap();
            let a = t * t * forms().eval_phi0_axis(1.0 / t).unwrap();
            let b = t * t * forms().eval_psi_s_axis(1.0 / t).unwrap();
            assert!((k_a - a).abs() < 1e-8 * a.abs(), "t = {t}");
            assert!((k_b - b).abs() < 1e-8 * b.abs(), "t = {t}");
        }
    }

    #[test]
    fn weighted_kernels_have_the_signs_behind_g() {
        let r = verify_inequalities(&default_axis_grid(), KernelConvention::SWeighted, forms())
            .unwrap();
        assert!(r.kernel_signs_pass, "{r:?}");
        assert!(r.min_combo_minus.value > 0.0);
        assert!(r.max_combo_plus.value < 0.0);
        // so the plus combination cannot also be positive
        assert!(!r.pass);
    }

    #[test]
    fn log_grid_shape() {
        let g = log_grid(0.05, 20.0, 400).unwrap();
        assert_eq!(g.len(), 400);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[399], 20.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(log_grid(0.0, 1.0, 10).is_err());
        assert!(log_grid(1.0, 1.0, 10).is_err());
    }

    #[test]
    fn conventions_by_name() {
        assert_eq!(KernelConvention::from_name("direct"), Some(KernelConvention::Direct));
        assert_eq!(KernelConvention::from_name("sweighted"), Some(KernelConvention::SWeighted));
        assert_eq!(KernelConvention::from_name("other"), None);
    }
}
