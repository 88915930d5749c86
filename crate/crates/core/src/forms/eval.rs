//! Floating-point evaluation of the exact expansions.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    eisenstein_qseries, phi0_qseries, phi_m2_qseries, phi_m4_qseries, psi_i_qseries,
    psi_s_qseries, theta_qseries, FormId, HalfPlanePoint, ThetaKind,
};
use crate::error::{Error, Result};
use crate::series::{Nome, QSeries};

/// A truncated series with float coefficients, ready for evaluation.
#[derive(Debug, Clone)]
pub struct NumSeries {
    nome: Nome,
    lowest: i64,
    coeffs: Vec<f64>,
    tail_coeff: f64,
}

impl NumSeries {
    pub fn from_qseries(s: &QSeries) -> Self {
        let coeffs = s.to_f64_coeffs();
        // Lacunary series (thetas) have zero coefficients at the very end,
        // so the tail scale is taken over the upper half of the range.
        let tail_coeff = coeffs[coeffs.len() / 2..]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
        NumSeries {
            nome: s.nome(),
            lowest: s.lowest(),
            coeffs,
            tail_coeff,
        }
    }

    pub fn nome(&self) -> Nome {
        self.nome
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    pub fn order(&self) -> i64 {
        self.lowest + self.coeffs.len() as i64 - 1
    }

    /// `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.lowest + i as i64, c))
    }

    /// Geometric tail estimate `|c_N| |x|^N / (1 - |x|)` for `|x| = modulus`.
    pub fn tail_estimate(&self, modulus: f64) -> f64 {
        if modulus >= 1.0 {
            return f64::INFINITY;
        }
        self.tail_coeff * modulus.powf(self.order() as f64) / (1.0 - modulus)
    }

    /// Horner evaluation at `tau`, without any domain or tail checks.
    pub fn eval_unchecked(&self, tau: Complex64) -> Complex64 {
        let x = self.nome.value(tau);
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        if self.lowest != 0 {
            acc *= x.powi(self.lowest as i32);
        }
        acc
    }

    /// Horner evaluation of the terms with exponent above `exponent`.
    pub fn eval_above_unchecked(&self, tau: Complex64, exponent: i64) -> Complex64 {
        let start = (exponent + 1).max(self.lowest);
        if start > self.order() {
            return Complex64::new(0.0, 0.0);
        }
        let x = self.nome.value(tau);
        let skip = (start - self.lowest) as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs[skip..].iter().rev() {
            acc = acc * x + c;
        }
        acc * x.powi(start as i32)
    }

    /// Value at `tau = i t`, which is real since all coefficients are real.
    pub fn eval_axis_unchecked(&self, t: f64) -> f64 {
        let x = (-self.nome.axis_rate() * t).exp();
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc * x.powi(self.lowest as i32)
    }

    /// `sum_{k > exponent} c_k exp(-lambda k t)`: the series on the axis with
    /// its terms up to `exponent` removed.
    pub fn eval_axis_above(&self, t: f64, exponent: i64) -> f64 {
        let rate = self.nome.axis_rate();
        let start = (exponent + 1).max(self.lowest);
        if start > self.order() {
            return 0.0;
        }
        let x = (-rate * t).exp();
        let skip = (start - self.lowest) as usize;
        let mut acc = 0.0;
        for &c in self.coeffs[skip..].iter().rev() {
            acc = acc * x + c;
        }
        acc * (-rate * t * start as f64).exp()
    }

    /// Terms with exponent at most `exponent`.
    pub fn terms_up_to(&self, exponent: i64) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.terms().take_while(move |&(k, _)| k <= exponent)
    }
}

/// Evaluate an exact series at `tau`, refusing points below `eta_min` and
/// truncations whose tail estimate exceeds `tol`.
pub fn eval_series(s: &QSeries, tau: HalfPlanePoint, eta_min: f64, tol: f64) -> Result<Complex64> {
    let n = NumSeries::from_qseries(s);
    check_point(&n, tau, eta_min, tol, 1.0)?;
    Ok(n.eval_unchecked(tau.to_complex()))
}

fn check_point(n: &NumSeries, tau: HalfPlanePoint, eta_min: f64, tol: f64, scale: f64) -> Result<()> {
    if tau.im() < eta_min {
        return Err(Error::DomainTooLow {
            im: tau.im(),
            eta_min,
        });
    }
    let tail = n.tail_estimate(n.nome().modulus(tau.im()));
    let allowed = tol * scale.max(1.0);
    if !(tail <= allowed) {
        return Err(Error::TruncationInsufficient { tail, tol: allowed });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FormsConfig {
    /// Number of `q = e^{2 pi i tau}` terms; series in `q4` carry `8 * order`.
    pub order: i64,
    /// Smallest imaginary part at which a series is evaluated directly.
    pub eta_min: f64,
    /// Tail tolerance, relative to `max(1, |value|)`.
    pub tol: f64,
}

impl Default for FormsConfig {
    fn default() -> Self {
        FormsConfig {
            order: 50,
            eta_min: 0.5,
            tol: 1e-12,
        }
    }
}

/// One summand `factor * t^power * S(i t)` of an expansion valid for `t >= 1`.
#[derive(Debug, Clone, Copy)]
pub struct AxisPiece<'a> {
    pub power: i32,
    pub factor: f64,
    pub series: &'a NumSeries,
}

/// Precomputed float expansions of every form, shared across evaluations.
#[derive(Debug, Clone)]
pub struct Forms {
    config: FormsConfig,
    e2: NumSeries,
    e4: NumSeries,
    e6: NumSeries,
    delta: NumSeries,
    phi0: NumSeries,
    phi_m2: NumSeries,
    phi_m4: NumSeries,
    theta00: NumSeries,
    theta01: NumSeries,
    theta10: NumSeries,
    psi_s: NumSeries,
    psi_i: NumSeries,
    /// `E_4^2 / Delta - psi_I` in `q4`; the `q4^{-8}` terms cancel.
    y_minus_psi_i: NumSeries,
    /// `E_4^2 / Delta + psi_I` in `q4`.
    y_plus_psi_i: NumSeries,
}

impl Forms {
    pub fn new(config: FormsConfig) -> Result<Self> {
        if config.order < 2 {
            return Err(Error::InvalidArgument("forms order must be >= 2".into()));
        }
        if !(config.eta_min > 0.0) || !(config.tol > 0.0) {
            return Err(Error::InvalidArgument(
                "eta_min and tol must be positive".into(),
            ));
        }
        let n = config.order;
        let n4 = 8 * n;
        let num = |s: QSeries| NumSeries::from_qseries(&s);
        let y4 = phi_m4_qseries(n)?.to_q4();
        let psi_i = psi_i_qseries(n4)?;
        Ok(Forms {
            config,
            e2: num(eisenstein_qseries(2, n)?),
            e4: num(eisenstein_qseries(4, n)?),
            e6: num(eisenstein_qseries(6, n)?),
            delta: num(super::delta_qseries(n)?),
            phi0: num(phi0_qseries(n)?),
            phi_m2: num(phi_m2_qseries(n)?),
            phi_m4: num(phi_m4_qseries(n)?),
            theta00: num(theta_qseries(ThetaKind::T00, n4)?),
            theta01: num(theta_qseries(ThetaKind::T01, n4)?),
            theta10: num(theta_qseries(ThetaKind::T10, n4)?),
            psi_s: num(psi_s_qseries(n4)?),
            y_minus_psi_i: num(y4.sub(&psi_i)?),
            y_plus_psi_i: num(y4.add(&psi_i)?),
            psi_i: num(psi_i),
        })
    }

    /// Shared instance with the default configuration.
    pub fn standard() -> &'static Forms {
        static FORMS: OnceLock<Forms> = OnceLock::new();
        FORMS.get_or_init(|| Forms::new(FormsConfig::default()).expect("default forms config"))
    }

    pub fn config(&self) -> &FormsConfig {
        &self.config
    }

    fn eval_num(&self, n: &NumSeries, tau: HalfPlanePoint) -> Result<Complex64> {
        if tau.im() < self.config.eta_min {
            return Err(Error::DomainTooLow {
                im: tau.im(),
                eta_min: self.config.eta_min,
            });
        }
        let v = n.eval_unchecked(tau.to_complex());
        check_point(n, tau, self.config.eta_min, self.config.tol, v.norm())?;
        Ok(v)
    }

    fn eval_axis_num(&self, n: &NumSeries, t: f64) -> Result<f64> {
        let tau = HalfPlanePoint::on_axis(t)?;
        let v = n.eval_axis_unchecked(t);
        check_point(n, tau, self.config.eta_min, self.config.tol, v.abs())?;
        Ok(v)
    }

    /// Value of `form` at `tau`. `psi_S` is assembled from theta values.
    pub fn eval(&self, form: FormId, tau: HalfPlanePoint) -> Result<Complex64> {
        match form {
            FormId::E2 => self.eval_num(&self.e2, tau),
            FormId::E4 => self.eval_num(&self.e4, tau),
            FormId::E6 => self.eval_num(&self.e6, tau),
            FormId::Delta => self.eval_num(&self.delta, tau),
            FormId::Theta00 => self.eval_num(&self.theta00, tau),
            FormId::Theta01 => self.eval_num(&self.theta01, tau),
            FormId::Theta10 => self.eval_num(&self.theta10, tau),
            FormId::Phi0 => self.eval_phi0(tau),
            FormId::PsiS => self.eval_psi_s(tau),
        }
    }

    pub fn eval_phi0(&self, tau: HalfPlanePoint) -> Result<Complex64> {
        self.eval_num(&self.phi0, tau)
    }

    /// `(E_2 E_4 - E_6) E_4 / Delta`.
    pub fn eval_phi_m2(&self, tau: HalfPlanePoint) -> Result<Complex64> {
        self.eval_num(&self.phi_m2, tau)
    }

    /// `E_4^2 / Delta`.
    pub fn eval_phi_m4(&self, tau: HalfPlanePoint) -> Result<Complex64> {
        self.eval_num(&self.phi_m4, tau)
    }

    /// Fourth powers of `theta00, theta01, theta10` at `tau`.
    pub fn theta_fourth(&self, tau: HalfPlanePoint) -> Result<[Complex64; 3]> {
        Ok([
            self.eval_num(&self.theta00, tau)?.powi(4),
            self.eval_num(&self.theta01, tau)?.powi(4),
            self.eval_num(&self.theta10, tau)?.powi(4),
        ])
    }

    /// `psi_S` from theta values.
    pub fn eval_psi_s(&self, tau: HalfPlanePoint) -> Result<Complex64> {
        let [a, b, c] = self.theta_fourth(tau)?;
        Ok(psi_s_from_thetas(a, b, c))
    }

    /// `psi_S` from its own expansion.
    pub fn eval_psi_s_series(&self, tau: HalfPlanePoint) -> Result<Complex64> {
        self.eval_num(&self.psi_s, tau)
    }

    /// `tau^2 psi_S(-1/tau)` from theta values.
    pub fn eval_psi_i(&self, tau: HalfPlanePoint) -> Result<Complex64> {
        let [a, b, c] = self.theta_fourth(tau)?;
        Ok(psi_i_from_thetas(a, b, c))
    }

    /// `tau^2 psi_S(-1/tau)` from its own expansion.
    pub fn eval_psi_i_series(&self, tau: HalfPlanePoint) -> Result<Complex64> {
        self.eval_num(&self.psi_i, tau)
    }

    fn real_part(&self, v: Complex64) -> Result<f64> {
        if v.im.abs() > 1e-9 * v.norm() {
            return Err(Error::NonRealValue { re: v.re, im: v.im });
        }
        Ok(v.re)
    }

    /// `phi0(i t)` for any `t > 0`.
    pub fn eval_phi0_axis(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        if t >= 1.0 {
            let v = self.eval_phi0(HalfPlanePoint::on_axis(t)?)?;
            self.real_part(v)
        } else {
            self.phi0_axis_transformed(t)
        }
    }

    /// Small-`t` formula for `phi0(i t)`, evaluated at `i / t`.
    pub fn phi0_axis_transformed(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        let s = 1.0 / t;
        let phi0 = self.eval_axis_num(&self.phi0, s)?;
        let x = self.eval_axis_num(&self.phi_m2, s)?;
        let y = self.eval_axis_num(&self.phi_m4, s)?;
        Ok(phi0 - 12.0 * t / PI * x + 36.0 * t * t / (PI * PI) * y)
    }

    /// `psi_S(i t)` for any `t > 0`.
    pub fn eval_psi_s_axis(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        if t >= 1.0 {
            // the theta assembly cancels to roundoff once psi_S is tiny
            Ok(self.eval_axis_num(&self.psi_s, t)?)
        } else {
            self.psi_s_axis_transformed(t)
        }
    }

    /// `psi_S(i t)` through the theta fourth-power transforms
    /// `theta00^4(it) = t^-2 theta00^4(i/t)`, `theta01^4(it) = t^-2 theta10^4(i/t)`,
    /// `theta10^4(it) = t^-2 theta01^4(i/t)`.
    pub fn psi_s_axis_transformed(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        let [a, b, c] = self.theta_fourth(HalfPlanePoint::on_axis(1.0 / t)?)?;
        let w = 1.0 / (t * t);
        let v = psi_s_from_thetas(a * w, c * w, b * w);
        self.real_part(v)
    }

    /// `t^2 phi0(i / t)`, the weighted kernel of the `+1` eigenfunction.
    pub fn phi0_s_weighted(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        if t <= 1.0 {
            return Ok(t * t * self.eval_axis_num(&self.phi0, 1.0 / t)?);
        }
        let mut total = 0.0;
        for p in self.phi0_s_weighted_pieces() {
            total += p.factor * t.powi(p.power) * self.eval_axis_num(p.series, t)?;
        }
        Ok(total)
    }

    /// `t^2 psi_S(i / t)`, the weighted kernel of the `-1` eigenfunction.
    pub fn psi_s_s_weighted(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        if t <= 1.0 {
            return Ok(t * t * self.eval_axis_num(&self.psi_s, 1.0 / t)?);
        }
        let v = self.eval_psi_i(HalfPlanePoint::on_axis(t)?)?;
        Ok(-self.real_part(v)?)
    }

    /// `t^2 phi0(i / t) + sign (36 / pi^2) t^2 psi_S(i / t)` for `sign = +-1`.
    ///
    /// For `t > 1` the exponentially large parts of the two kernels cancel in
    /// the `+` combination, so it is summed from one combined series.
    pub fn s_weighted_combo(&self, t: f64, sign: f64) -> Result<f64> {
        check_t(t)?;
        let c = 36.0 / (PI * PI);
        if t <= 1.0 {
            return Ok(self.phi0_s_weighted(t)? + sign * c * self.psi_s_s_weighted(t)?);
        }
        let y = if sign > 0.0 {
            &self.y_minus_psi_i
        } else {
            &self.y_plus_psi_i
        };
        Ok(t * t * self.eval_axis_num(&self.phi0, t)?
            - 12.0 * t / PI * self.eval_axis_num(&self.phi_m2, t)?
            + c * self.eval_axis_num(y, t)?)
    }

    /// `t^2 phi0(i/t) = t^2 phi0(it) - (12 t / pi) X(it) + (36 / pi^2) Y(it)`
    /// with `X = (E_2 E_4 - E_6) E_4 / Delta` and `Y = E_4^2 / Delta`.
    pub fn phi0_s_weighted_pieces(&self) -> [AxisPiece<'_>; 3] {
        [
            AxisPiece {
                power: 2,
                factor: 1.0,
                series: &self.phi0,
            },
            AxisPiece {
                power: 1,
                factor: -12.0 / PI,
                series: &self.phi_m2,
            },
            AxisPiece {
                power: 0,
                factor: 36.0 / (PI * PI),
                series: &self.phi_m4,
            },
        ]
    }

    /// `t^2 psi_S(i/t) = -psi_I(it)` with `psi_I(tau) = tau^2 psi_S(-1/tau)`.
    pub fn psi_s_s_weighted_pieces(&self) -> [AxisPiece<'_>; 1] {
        [AxisPiece {
            power: 0,
            factor: -1.0,
            series: &self.psi_i,
        }]
    }

    /// Float series of a named form (in its own nome).
    pub fn series(&self, form: FormId) -> &NumSeries {
        match form {
            FormId::E2 => &self.e2,
            FormId::E4 => &self.e4,
            FormId::E6 => &self.e6,
            FormId::Delta => &self.delta,
            FormId::Theta00 => &self.theta00,
            FormId::Theta01 => &self.theta01,
            FormId::Theta10 => &self.theta10,
            FormId::Phi0 => &self.phi0,
            FormId::PsiS => &self.psi_s,
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("axis parameter must be positive, got {t}")));
    }
    Ok(())
}

fn psi_s_from_thetas(a: Complex64, b: Complex64, c: Complex64) -> Complex64 {
    128.0 * ((b - c) / (a * a) - (c + a) / (b * b))
}

fn psi_i_from_thetas(a: Complex64, b: Complex64, c: Complex64) -> Complex64 {
    128.0 * ((b - c) / (a * a) + (a + b) / (c * c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forms() -> &'static Forms {
        Forms::standard()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn at(re: f64, im: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(re, im).unwrap()
    }

    // Reference values from an independent 50-digit evaluation.
    const E4_AT_I: f64 = 1.455_762_892_268_709_3;
    const THETA00_AT_I: f64 = 1.086_434_811_213_308;
    const PHI0_AT_3I: f64 = 0.003_376_035_770_511_725;
    const PSI_S_AT_3I: f64 = -0.826_363_718_629_983_3;

    #[test]
    fn constant_series_evaluates_to_one() {
        let one = QSeries::one(Nome::Q2, 5);
        let v = eval_series(&one, at(0.2, 0.7), 0.5, 1e-12).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_series_guards() {
        let e4 = eisenstein_qseries(4, 10).unwrap();
        assert!(matches!(
            eval_series(&e4, at(0.0, 0.4), 0.5, 1e-12),
            Err(Error::DomainTooLow { .. })
        ));
        assert!(matches!(
            eval_series(&e4, at(0.0, 0.6), 0.5, 1e-30),
            Err(Error::TruncationInsufficient { .. })
        ));
    }

    #[test]
    fn reference_values_at_i() {
        let e4 = forms().eval(FormId::E4, at(0.0, 1.0)).unwrap();
        assert!(rel(e4.re, E4_AT_I) < 1e-10);
        assert!(e4.im.abs() < 1e-14);
        let t = forms().eval(FormId::Theta00, at(0.0, 1.0)).unwrap();
        assert!(rel(t.re, THETA00_AT_I) < 1e-10);
    }

    #[test]
    fn phi0_and_psi_s_at_3i() {
        let p = forms().eval_phi0(at(0.0, 3.0)).unwrap();
        assert!(rel(p.re, PHI0_AT_3I) < 1e-10);
        let lead = 518400.0 * (-6.0 * PI).exp();
        assert!(rel(p.re, lead) < 0.01);
        let s = forms().eval_psi_s(at(0.0, 3.0)).unwrap();
        assert!(rel(s.re, PSI_S_AT_3I) < 1e-10);
        let lead = -10240.0 * (-3.0 * PI).exp();
        assert!(rel(s.re, lead) < 0.05);
    }

    #[test]
    fn psi_s_paths_agree() {
        for (re, im) in [(0.0, 0.5), (0.3, 0.6), (-0.45, 0.9), (0.1, 1.7), (0.0, 3.0)] {
            let a = forms().eval_psi_s(at(re, im)).unwrap();
            let b = forms().eval_psi_s_series(at(re, im)).unwrap();
            assert!((a - b).norm() < 1e-10 * a.norm(), "{re} {im}: {a} vs {b}");
            let a = forms().eval_psi_i(at(re, im + 0.5)).unwrap();
            let b = forms().eval_psi_i_series(at(re, im + 0.5)).unwrap();
            assert!((a - b).norm() < 1e-10 * a.norm(), "{re} {im}: {a} vs {b}");
        }
    }

    #[test]
    fn psi_s_has_period_two() {
        let a = forms().eval_psi_s(at(0.3, 1.1)).unwrap();
        let b = forms().eval_psi_s(at(2.3, 1.1)).unwrap();
        assert!((a - b).norm() < 1e-12);
        let c = forms().eval_psi_s(at(1.3, 1.1)).unwrap();
        assert!((a + c).norm() < 1e-12);
    }

    #[test]
    fn axis_overlap_at_one() {
        let d = forms().eval_phi0_axis(1.0).unwrap();
        let s = forms().phi0_axis_transformed(1.0).unwrap();
        assert!(rel(s, d) < 1e-9);
        let d = forms().eval_psi_s_axis(1.0).unwrap();
        let s = forms().psi_s_axis_transformed(1.0).unwrap();
        assert!(rel(s, d) < 1e-9);
    }

    #[test]
    fn axis_overlap_band() {
        for i in 0..=20 {
            let t = 0.8 * (1.25f64 / 0.8).powf(i as f64 / 20.0);
            let d = forms().eval_phi0(HalfPlanePoint::on_axis(t).unwrap()).unwrap().re;
            let s = forms().phi0_axis_transformed(t).unwrap();
            assert!(rel(s, d) < 1e-8, "phi0 t = {t}");
            let d = forms().eval_psi_s(HalfPlanePoint::on_axis(t).unwrap()).unwrap().re;
            let s = forms().psi_s_axis_transformed(t).unwrap();
            assert!(rel(s, d) < 1e-8, "psi_s t = {t}");
        }
    }

    #[test]
    fn axis_asymptotics() {
        let v = forms().eval_phi0_axis(4.0).unwrap();
        assert!(rel(v, 518400.0 * (-8.0 * PI).exp()) < 0.01);
        let v = forms().eval_psi_s_axis(3.0).unwrap();
        assert!(rel(v, -10240.0 * (-3.0 * PI).exp()) < 0.05);
        let v = forms().eval_phi0_axis(0.25).unwrap();
        assert!(v >= 1e6);
    }

    #[test]
    fn axis_values_are_real() {
        for t in [0.5f64, 1.0, 2.0, 5.0] {
            let tau = HalfPlanePoint::on_axis(t.max(0.5)).unwrap();
            let p = forms().eval_phi0(tau).unwrap();
            assert!(p.im.abs() < 1e-9 * p.norm());
            let s = forms().eval_psi_s(tau).unwrap();
            assert!(s.im.abs() < 1e-10 * s.norm());
        }
        assert!(forms().eval_phi0_axis(0.3).is_ok());
        assert!(forms().eval_psi_s_axis(0.3).is_ok());
    }

    #[test]
    fn phi0_positive_on_axis() {
        for i in 0..200 {
            let t = 0.05 * (400.0f64).powf(i as f64 / 199.0);
            assert!(forms().eval_phi0_axis(t).unwrap() > 0.0, "t = {t}");
        }
    }

    #[test]
    fn weighted_kernels_match_their_definition() {
        for t in [0.3, 0.7, 1.0, 1.5, 2.5, 6.0] {
            let s = 1.0 / t;
            let a = forms().phi0_s_weighted(t).unwrap();
            let direct = t * t * forms().eval_phi0_axis(s).unwrap();
            assert!(rel(a, direct) < 1e-9, "t = {t}");
            let b = forms().psi_s_s_weighted(t).unwrap();
            let direct = t * t * forms().eval_psi_s_axis(s).unwrap();
            assert!(rel(b, direct) < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn axis_rejects_nonpositive() {
        assert!(forms().eval_phi0_axis(0.0).is_err());
        assert!(forms().eval_psi_s_axis(-1.0).is_err());
    }

    #[test]
    fn eval_above_drops_principal_part() {
        let y = forms().series(FormId::E4);
        let t = 1.3;
        let full = y.eval_axis_unchecked(t);
        let head: f64 = y
            .terms_up_to(2)
            .map(|(k, c)| c * (-2.0 * PI * k as f64 * t).exp())
            .sum();
        assert!(rel(head + y.eval_axis_above(t, 2), full) < 1e-14);
    }
}
