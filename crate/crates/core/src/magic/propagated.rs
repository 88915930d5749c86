//! Single-integral form of `a` and `b` for `r >= sqrt 2`.
//!
//! `f(r) = 4 i sin^2(pi r^2 / 2) int_0^oo K(t) exp(-pi r^2 t) dt` with
//! `K(t) = t^2 F(i / t)`. On `(0, 1]` the kernel is evaluated at `i / t`
//! directly. On `[1, oo)` it is a finite sum of `t^p S(i t)`; the terms of
//! each `S` with nonpositive exponent grow or stay flat and are integrated
//! in closed form, the rest by quadrature.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::{sin_pi, Eigen, QuadratureConfig};
use crate::error::{Error, Result};
use crate::forms::{AxisPiece, Forms};
use crate::quadrature::GaussLegendre;

/// Decay margin, in units of the slowest exponential, for the quadrature
/// part on `[1, T]`: the neglected remainder is below `e^{-40}` relative.
const DECAY_SPAN: f64 = 40.0;

pub(super) fn eval(
    eigen: Eigen,
    r: f64,
    quad: &QuadratureConfig,
    gl: &GaussLegendre,
    forms: &Forms,
) -> Result<Complex64> {
    if !(r >= SQRT_2 * (1.0 - 1e-12)) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "the single-integral form needs r >= sqrt 2, got {r}"
        )));
    }
    let r2 = r * r;
    let s = sin_pi(r2 / 2.0);
    if r2 <= 2.0 || s == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let kernel_small = |t: f64| -> Result<f64> {
        match eigen {
            Eigen::A => forms.phi0_s_weighted(t),
            Eigen::B => forms.psi_s_s_weighted(t),
        }
    };
    let damping = PI * r2;

    let mut integral = 0.0;
    for (t, w) in gl.composite(0.0, 1.0, quad.panels_per_segment) {
        integral += w * kernel_small(t)? * (-damping * t).exp();
    }

    let pieces: Vec<AxisPiece<'_>> = match eigen {
        Eigen::A => forms.phi0_s_weighted_pieces().to_vec(),
        Eigen::B => forms.psi_s_s_weighted_pieces().to_vec(),
    };
    let mut slowest = f64::INFINITY;
    for p in &pieces {
        let rate = p.series.nome().axis_rate();
        for (k, ck) in p.series.terms_up_to(0) {
            if ck != 0.0 {
                let alpha = rate * k as f64 + damping;
                integral += p.factor * ck * laplace_tail(p.power, alpha)?;
            }
        }
        if let Some((k, _)) = p.series.terms().find(|&(k, c)| k > 0 && c != 0.0) {
            slowest = slowest.min(rate * k as f64);
        }
    }
    if slowest.is_finite() {
        let end = 1.0 + DECAY_SPAN / (slowest + damping);
        for (t, w) in gl.composite(1.0, end, quad.panels_per_segment) {
            let mut k = 0.0;
            for p in &pieces {
                k += p.factor * t.powi(p.power) * p.series.eval_axis_above(t, 0);
            }
            integral += w * k * (-damping * t).exp();
        }
    }
    Ok(Complex64::new(0.0, 4.0 * s * s * integral))
}

/// `int_1^oo t^p exp(-alpha t) dt` for `p >= 0`, `alpha > 0`.
fn laplace_tail(p: i32, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!(
            "divergent Laplace integral (rate {alpha})"
        )));
    }
    // e^{-alpha} sum_j p! / (p - j)! / alpha^{j+1}
    let mut sum = 0.0;
    let mut falling = 1.0;
    for j in 0..=p {
        sum += falling / alpha.powi(j + 1);
        falling *= (p - j) as f64;
    }
    Ok((-alpha).exp() * sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplace_tail_closed_forms() {
        let a: f64 = 1.7;
        assert!((laplace_tail(0, a).unwrap() - (-a).exp() / a).abs() < 1e-16);
        let exact = (-a).exp() * (1.0 / a + 1.0 / (a * a));
        assert!((laplace_tail(1, a).unwrap() - exact).abs() < 1e-16);
        let gl = GaussLegendre::new(40).unwrap();
        let num = gl.integrate(1.0, 40.0, 16, |t| t * t * (-a * t).exp());
        assert!((laplace_tail(2, a).unwrap() - num).abs() < 1e-14);
        assert!(laplace_tail(0, 0.0).is_err());
    }
}
