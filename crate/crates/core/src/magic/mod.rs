//! The eigenfunctions `a`, `b` and the magic function `g`.
//!
//! `a` and `b` are sums of six contour integrals of `phi0` and `psi_S`
//! against `exp(pi i r^2 z)`. The rectangular contours run through
//! `-1, -1 + i, i, 1, 1 + i, 0` and up the imaginary axis. For `r >= sqrt 2`
//! both also have a single-integral form over the imaginary axis, computed
//! independently in [`propagated`].
//!
//! Both functions are purely imaginary for real `r`, so
//! `g = (pi i / 8640) a - (i / 240 pi) b` and
//! `g_hat = (pi i / 8640) a + (i / 240 pi) b` are real.

mod hankel;
mod propagated;

pub use hankel::{bessel_j, hankel8, tabulate_radial, RadialTable, TableKind};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{Forms, HalfPlanePoint};
use crate::quadrature::GaussLegendre;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub gauss_order: usize,
    pub panels_per_segment: usize,
    /// Upper end `T` of the truncated ray `i -> i T`.
    pub ray_truncation: f64,
    /// Absolute bound on the discarded ray tail.
    pub tail_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            gauss_order: 32,
            panels_per_segment: 8,
            ray_truncation: 12.0,
            tail_tol: 1e-12,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gauss_order < 2 {
            return Err(Error::InvalidArgument("gauss_order must be >= 2".into()));
        }
        if self.panels_per_segment < 1 {
            return Err(Error::InvalidArgument("panels_per_segment must be >= 1".into()));
        }
        if !(self.ray_truncation >= 2.0) {
            return Err(Error::InvalidArgument("ray_truncation must be >= 2".into()));
        }
        if !(self.tail_tol > 0.0) {
            return Err(Error::InvalidArgument("tail_tol must be positive".into()));
        }
        Ok(())
    }

    /// Twice the order and twice the panels.
    pub fn refined(&self) -> Self {
        QuadratureConfig {
            gauss_order: 2 * self.gauss_order,
            panels_per_segment: 2 * self.panels_per_segment,
            ..*self
        }
    }
}

/// Which eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Eigen {
    /// Built from `phi0`; Fourier eigenvalue `+1`.
    A,
    /// Built from `psi_S`; Fourier eigenvalue `-1`.
    B,
}

/// The kernel `F(w(z)) m(z)` of a segment, before the factor `exp(pi i r^2 z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Integrand {
    /// `phi0(-1/(z+1)) (z+1)^2`
    Phi0ShiftPlus,
    /// `phi0(-1/(z-1)) (z-1)^2`
    Phi0ShiftMinus,
    /// `phi0(-1/z) z^2`
    Phi0Inverted,
    /// `phi0(z)`
    Phi0Direct,
    PsiSShiftPlus,
    PsiSShiftMinus,
    PsiSInverted,
    PsiSDirect,
}

impl Integrand {
    fn eigen(self) -> Eigen {
        match self {
            Integrand::Phi0ShiftPlus
            | Integrand::Phi0ShiftMinus
            | Integrand::Phi0Inverted
            | Integrand::Phi0Direct => Eigen::A,
            _ => Eigen::B,
        }
    }

    /// Argument fed to the form and the multiplier, or `None` at a point
    /// where the argument runs off to the cusp (the kernel vanishes there).
    fn argument(self, z: Complex64) -> Option<(Complex64, Complex64)> {
        let shift = match self {
            Integrand::Phi0ShiftPlus | Integrand::PsiSShiftPlus => 1.0,
            Integrand::Phi0ShiftMinus | Integrand::PsiSShiftMinus => -1.0,
            Integrand::Phi0Inverted | Integrand::PsiSInverted => 0.0,
            Integrand::Phi0Direct | Integrand::PsiSDirect => return Some((z, Complex64::new(1.0, 0.0))),
        };
        let u = z + shift;
        if u.norm() == 0.0 {
            return None;
        }
        let w = -u.inv();
        if !w.im.is_finite() {
            return None;
        }
        Some((w, u * u))
    }

    /// `F(w(z)) m(z)`; zero where the contour meets the real axis.
    pub fn kernel(self, z: Complex64, forms: &Forms) -> Result<Complex64> {
        let Some((w, m)) = self.argument(z) else {
            return Ok(Complex64::new(0.0, 0.0));
        };
        let tau = HalfPlanePoint::from_complex(w)?;
        let f = match self.eigen() {
            Eigen::A => forms.eval_phi0(tau)?,
            Eigen::B => forms.eval_psi_s_series(tau)?,
        };
        Ok(f * m)
    }
}

/// One piece of a contour: a straight segment or the vertical ray to `i oo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSegment {
    pub start: Complex64,
    /// For a ray, `start + i oo`.
    pub end: Complex64,
    pub integrand: Integrand,
    pub coefficient: Complex64,
    pub is_ray: bool,
}

impl ContourSegment {
    fn line(start: Complex64, end: Complex64, integrand: Integrand, coefficient: f64) -> Self {
        ContourSegment {
            start,
            end,
            integrand,
            coefficient: Complex64::new(coefficient, 0.0),
            is_ray: false,
        }
    }

    fn ray(start: Complex64, integrand: Integrand, coefficient: f64) -> Self {
        ContourSegment {
            start,
            end: Complex64::new(start.re, f64::INFINITY),
            integrand,
            coefficient: Complex64::new(coefficient, 0.0),
            is_ray: true,
        }
    }

    /// The same path traversed backwards (segments only).
    pub fn reversed(&self) -> Self {
        assert!(!self.is_ray, "a ray cannot be reversed");
        ContourSegment {
            start: self.end,
            end: self.start,
            ..*self
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn segments(eigen: Eigen) -> [ContourSegment; 6] {
    let (plus, minus, inverted, direct, ray_coefficient) = match eigen {
        Eigen::A => (
            Integrand::Phi0ShiftPlus,
            Integrand::Phi0ShiftMinus,
            Integrand::Phi0Inverted,
            Integrand::Phi0Direct,
            2.0,
        ),
        Eigen::B => (
            Integrand::PsiSShiftPlus,
            Integrand::PsiSShiftMinus,
            Integrand::PsiSInverted,
            Integrand::PsiSDirect,
            -2.0,
        ),
    };
    [
        ContourSegment::line(c(-1.0, 0.0), c(-1.0, 1.0), plus, 1.0),
        ContourSegment::line(c(-1.0, 1.0), c(0.0, 1.0), plus, 1.0),
        ContourSegment::line(c(1.0, 0.0), c(1.0, 1.0), minus, 1.0),
        ContourSegment::line(c(1.0, 1.0), c(0.0, 1.0), minus, 1.0),
        // traversed i -> 0, so +2 here is -2 times the integral from 0 to i
        ContourSegment::line(c(0.0, 1.0), c(0.0, 0.0), inverted, 2.0),
        ContourSegment::ray(c(0.0, 1.0), direct, ray_coefficient),
    ]
}

/// The six pieces of `a`. They do not depend on `r`.
pub fn contour_segments_a() -> [ContourSegment; 6] {
    segments(Eigen::A)
}

/// The six pieces of `b`; the ray carries `-2`.
pub fn contour_segments_b() -> [ContourSegment; 6] {
    segments(Eigen::B)
}

/// Leading-coefficient tail bound `|F(i t)| <= C exp(-rate t)` on the ray.
fn ray_bound(eigen: Eigen) -> (f64, f64) {
    match eigen {
        Eigen::A => (2.0 * 518_400.0, 2.0 * PI),
        Eigen::B => (2.0 * 10_240.0, PI),
    }
}

/// Where to stop the ray: the smaller of `T` and the point past which the
/// certified tail drops below half the tolerance.
fn ray_end(eigen: Eigen, coefficient: f64, start: f64, r2: f64, quad: &QuadratureConfig) -> Result<f64> {
    let (cst, rate) = ray_bound(eigen);
    let lambda = rate + PI * r2;
    let scale = coefficient.abs() * cst / lambda;
    let tail = |t: f64| scale * (-lambda * t).exp();
    let wanted = (scale / (0.5 * quad.tail_tol)).ln() / lambda;
    let end = wanted.clamp(start + 0.5, quad.ray_truncation);
    let bound = tail(end);
    if bound > quad.tail_tol {
        return Err(Error::TailBoundViolated {
            truncation: quad.ray_truncation,
            bound,
            tol: quad.tail_tol,
        });
    }
    Ok(end)
}

/// `coefficient * integral over seg of kernel(z) exp(pi i r2 z) dz`.
pub fn segment_integral(seg: &ContourSegment, r2: f64, quad: &QuadratureConfig, forms: &Forms) -> Result<Complex64> {
    quad.validate()?;
    let gl = GaussLegendre::new(quad.gauss_order)?;
    segment_integral_with(seg, r2, quad, &gl, forms)
}

fn segment_integral_with(
    seg: &ContourSegment,
    r2: f64,
    quad: &QuadratureConfig,
    gl: &GaussLegendre,
    forms: &Forms,
) -> Result<Complex64> {
    let phase = Complex64::new(0.0, PI * r2);
    let mut total = Complex64::new(0.0, 0.0);
    if seg.is_ray {
        let start = seg.start.im;
        let end = ray_end(seg.integrand.eigen(), seg.coefficient.norm(), start, r2, quad)?;
        for (t, w) in gl.composite(start, end, quad.panels_per_segment) {
            let z = c(seg.start.re, t);
            total += seg.integrand.kernel(z, forms)? * (phase * z).exp() * w;
        }
        total *= Complex64::i();
    } else {
        let dz = seg.end - seg.start;
        if dz.norm() == 0.0 {
            return Ok(total);
        }
        for (s, w) in gl.composite(0.0, 1.0, quad.panels_per_segment) {
            let z = seg.start + dz * s;
            total += seg.integrand.kernel(z, forms)? * (phase * z).exp() * w;
        }
        total *= dz;
    }
    Ok(total * seg.coefficient)
}

/// One eigenfunction with its `r`-independent kernel values cached at the
/// quadrature nodes of the five finite segments.
#[derive(Debug, Clone)]
pub struct MagicFunction<'f> {
    eigen: Eigen,
    quad: QuadratureConfig,
    forms: &'f Forms,
    gl: GaussLegendre,
    ray: ContourSegment,
    /// `(z, coefficient * dz * weight * kernel(z))`
    nodes: Vec<(Complex64, Complex64)>,
}

impl<'f> MagicFunction<'f> {
    pub fn new(eigen: Eigen, quad: QuadratureConfig, forms: &'f Forms) -> Result<Self> {
        quad.validate()?;
        let gl = GaussLegendre::new(quad.gauss_order)?;
        let segs = segments(eigen);
        let mut nodes = Vec::new();
        for seg in segs.iter().filter(|s| !s.is_ray) {
            let dz = seg.end - seg.start;
            for (s, w) in gl.composite(0.0, 1.0, quad.panels_per_segment) {
                let z = seg.start + dz * s;
                let k = seg.integrand.kernel(z, forms)?;
                nodes.push((z, seg.coefficient * dz * w * k));
            }
        }
        Ok(MagicFunction {
            eigen,
            quad,
            forms,
            gl,
            ray: segs[5],
            nodes,
        })
    }

    pub fn eigen(&self) -> Eigen {
        self.eigen
    }

    pub fn quad(&self) -> &QuadratureConfig {
        &self.quad
    }

    pub fn forms(&self) -> &'f Forms {
        self.forms
    }

    /// Value at radius `r` from the six-segment contour sum.
    pub fn eval(&self, r: f64) -> Result<Complex64> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("radius must be >= 0, got {r}")));
        }
        let r2 = r * r;
        let phase = Complex64::new(0.0, PI * r2);
        let finite: Complex64 = self.nodes.iter().map(|&(z, wk)| wk * (phase * z).exp()).sum();
        let ray = segment_integral_with(&self.ray, r2, &self.quad, &self.gl, self.forms)?;
        Ok(finite + ray)
    }

    /// Value at `r >= sqrt 2` from the single Laplace-type integral
    /// `4 i sin^2(pi r^2 / 2) int_0^oo t^2 F(i/t) exp(-pi r^2 t) dt`.
    pub fn eval_propagated(&self, r: f64) -> Result<Complex64> {
        propagated::eval(self.eigen, r, &self.quad, &self.gl, self.forms)
    }
}

/// `a(r)` by the contour sum, with the shared default forms.
pub fn eval_a(r: f64, quad: &QuadratureConfig) -> Result<Complex64> {
    MagicFunction::new(Eigen::A, *quad, Forms::standard())?.eval(r)
}

/// `b(r)` by the contour sum, with the shared default forms.
pub fn eval_b(r: f64, quad: &QuadratureConfig) -> Result<Complex64> {
    MagicFunction::new(Eigen::B, *quad, Forms::standard())?.eval(r)
}

pub fn eval_a_propagated(r: f64, quad: &QuadratureConfig) -> Result<Complex64> {
    MagicFunction::new(Eigen::A, *quad, Forms::standard())?.eval_propagated(r)
}

pub fn eval_b_propagated(r: f64, quad: &QuadratureConfig) -> Result<Complex64> {
    MagicFunction::new(Eigen::B, *quad, Forms::standard())?.eval_propagated(r)
}

/// Weight of `a` in `g` and `g_hat`.
pub const A_WEIGHT: Complex64 = Complex64::new(0.0, PI / 8640.0);
/// Weight of `b` in `g_hat`; `g` carries its negative.
pub const B_WEIGHT: Complex64 = Complex64::new(0.0, 1.0 / (240.0 * PI));

/// `a` and `b` together, with `g(0)` cached as the realness scale.
#[derive(Debug, Clone)]
pub struct Magic<'f> {
    a: MagicFunction<'f>,
    b: MagicFunction<'f>,
    g0: f64,
}

impl<'f> Magic<'f> {
    pub fn new(quad: QuadratureConfig, forms: &'f Forms) -> Result<Self> {
        let a = MagicFunction::new(Eigen::A, quad, forms)?;
        let b = MagicFunction::new(Eigen::B, quad, forms)?;
        let g0 = (A_WEIGHT * a.eval(0.0)? - B_WEIGHT * b.eval(0.0)?).re;
        Ok(Magic { a, b, g0 })
    }

    /// Default quadrature and forms.
    pub fn standard() -> Result<Magic<'static>> {
        Magic::new(QuadratureConfig::default(), Forms::standard())
    }

    pub fn a(&self) -> &MagicFunction<'f> {
        &self.a
    }

    pub fn b(&self) -> &MagicFunction<'f> {
        &self.b
    }

    pub fn g0(&self) -> f64 {
        self.g0
    }

    fn real(&self, v: Complex64) -> Result<f64> {
        if v.im.abs() >= 1e-7 * (v.norm() + self.g0.abs()) {
            return Err(Error::NonRealValue { re: v.re, im: v.im });
        }
        Ok(v.re)
    }

    /// `g(r) = (pi i / 8640) a(r) - (i / 240 pi) b(r)`.
    pub fn eval_g(&self, r: f64) -> Result<f64> {
        self.real(A_WEIGHT * self.a.eval(r)? - B_WEIGHT * self.b.eval(r)?)
    }

    /// `g_hat(r) = (pi i / 8640) a(r) + (i / 240 pi) b(r)`.
    pub fn eval_g_hat(&self, r: f64) -> Result<f64> {
        self.real(A_WEIGHT * self.a.eval(r)? + B_WEIGHT * self.b.eval(r)?)
    }

    /// Both at once, sharing the evaluations of `a` and `b`.
    pub fn eval_pair(&self, r: f64) -> Result<(f64, f64)> {
        let a = A_WEIGHT * self.a.eval(r)?;
        let b = B_WEIGHT * self.b.eval(r)?;
        Ok((self.real(a - b)?, self.real(a + b)?))
    }
}

/// `g(r)` with the default configuration.
pub fn eval_g(r: f64, quad: &QuadratureConfig) -> Result<f64> {
    Magic::new(*quad, Forms::standard())?.eval_g(r)
}

/// `g_hat(r)` with the default configuration.
pub fn eval_g_hat(r: f64, quad: &QuadratureConfig) -> Result<f64> {
    Magic::new(*quad, Forms::standard())?.eval_g_hat(r)
}

/// `sin(pi x)` with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let s = (PI * (x - n)).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}
