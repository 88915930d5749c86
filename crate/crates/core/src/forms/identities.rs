//! Derivative operators and the classical identities, checked exactly.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{eisenstein_qseries, theta_qseries, Forms, HalfPlanePoint, ThetaKind};
use crate::error::Result;
use crate::series::{Nome, QSeries};

/// Serre derivative `D s - (k / 12) E_2 s`.
pub fn serre_derivative(s: &QSeries, weight: i64) -> Result<QSeries> {
    let q2_order = match s.nome() {
        Nome::Q2 => s.order().max(0),
        Nome::Q4 => s.order().max(0) / 8 + 1,
    };
    let mut e2 = eisenstein_qseries(2, q2_order)?;
    if s.nome() == Nome::Q4 {
        e2 = e2.to_q4();
    }
    let correction = e2
        .mul(s)?
        .scale(&BigRational::new(BigInt::from(weight), BigInt::from(12)));
    s.normalized_derivative().sub(&correction)
}

/// Outcome of one exact residual check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub identity: String,
    pub order: i64,
    pub identically_zero: bool,
    /// Exponent of the first nonzero residual coefficient, if any.
    pub first_nonzero: Option<i64>,
}

impl Residual {
    fn from_series(identity: &str, s: &QSeries) -> Self {
        let first_nonzero = s.valuation();
        Residual {
            identity: identity.to_string(),
            order: s.order(),
            identically_zero: first_nonzero.is_none(),
            first_nonzero,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RamanujanReport {
    pub residuals: Vec<Residual>,
    pub pass: bool,
}

/// `D E_2 = (E_2^2 - E_4) / 12`, `D E_4 = (E_2 E_4 - E_6) / 3`,
/// `D E_6 = (E_2 E_6 - E_4^2) / 2`, as exact residual series.
pub fn check_ramanujan(order: i64) -> Result<RamanujanReport> {
    let order = order.max(2);
    let e2 = eisenstein_qseries(2, order)?;
    let e4 = eisenstein_qseries(4, order)?;
    let e6 = eisenstein_qseries(6, order)?;
    let frac = |n: i64| BigRational::new(BigInt::from(1), BigInt::from(n));

    let r2 = e2
        .normalized_derivative()
        .sub(&e2.pow(2)?.sub(&e4)?.scale(&frac(12)))?;
    let r4 = e4
        .normalized_derivative()
        .sub(&e2.mul(&e4)?.sub(&e6)?.scale(&frac(3)))?;
    let r6 = e6
        .normalized_derivative()
        .sub(&e2.mul(&e6)?.sub(&e4.pow(2)?)?.scale(&frac(2)))?;

    let residuals = vec![
        Residual::from_series("D E2 - (E2^2 - E4)/12", &r2),
        Residual::from_series("D E4 - (E2 E4 - E6)/3", &r4),
        Residual::from_series("D E6 - (E2 E6 - E4^2)/2", &r6),
    ];
    let pass = residuals.iter().all(|r| r.identically_zero);
    Ok(RamanujanReport { residuals, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiSample {
    pub re: f64,
    pub im: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiReport {
    pub series: Residual,
    pub samples: Vec<JacobiSample>,
    pub max_residual: f64,
    pub pass: bool,
}

/// `theta00^4 = theta10^4 + theta01^4`, exactly through `order` (in `q4`) and
/// numerically at each sample point.
pub fn check_jacobi(order: i64, samples: &[HalfPlanePoint], forms: &Forms) -> Result<JacobiReport> {
    let order = order.max(8);
    let a = theta_qseries(ThetaKind::T00, order)?.pow(4)?;
    let b = theta_qseries(ThetaKind::T01, order)?.pow(4)?;
    let c = theta_qseries(ThetaKind::T10, order)?.pow(4)?;
    let residual = a.sub(&b)?.sub(&c)?;
    let series = Residual::from_series("theta00^4 - theta10^4 - theta01^4", &residual);

    let mut out = Vec::with_capacity(samples.len());
    for &tau in samples {
        let [a, b, c]: [Complex64; 3] = forms.theta_fourth(tau)?;
        out.push(JacobiSample {
            re: tau.re(),
            im: tau.im(),
            residual: (a - b - c).norm(),
        });
    }
    let max_residual = out.iter().fold(0.0f64, |m, s| m.max(s.residual));
    let pass = series.identically_zero && max_residual < 1e-12;
    Ok(JacobiReport {
        series,
        samples: out,
        max_residual,
        pass,
    })
}

/// `q prod_{n >= 1} (1 - q^n)^24` through `order`, by direct polynomial
/// multiplication.
pub fn eta_product_delta(order: i64) -> QSeries {
    let len = order.max(0) as usize + 1;
    // prod (1 - q^n)^24 through q^(order - 1), then shift by one
    let inner = len.saturating_sub(1);
    let mut poly = vec![BigInt::zero(); inner.max(1)];
    poly[0] = BigInt::from(1);
    for n in 1..inner {
        for _ in 0..24 {
            for k in (n..inner).rev() {
                let prev = poly[k - n].clone();
                poly[k] -= prev;
            }
        }
    }
    let mut coeffs = vec![BigInt::zero(); len];
    for (k, c) in poly.into_iter().enumerate().take(inner) {
        coeffs[k + 1] = c;
    }
    QSeries::from_big_integers(Nome::Q2, 0, coeffs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaReport {
    pub residual: Residual,
    pub pass: bool,
}

/// `(E_4^3 - E_6^2) / 1728` against the eta product.
pub fn check_delta(order: i64) -> Result<DeltaReport> {
    let order = order.max(1);
    let from_eisenstein = super::delta_qseries(order)?;
    let from_eta = eta_product_delta(order);
    let residual = Residual::from_series(
        "(E4^3 - E6^2)/1728 - q prod (1 - q^n)^24",
        &from_eisenstein.sub(&from_eta)?,
    );
    let pass = residual.identically_zero;
    Ok(DeltaReport { residual, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{delta_qseries, FormId};
    use num_traits::ToPrimitive;

    fn c(s: &QSeries, k: i64) -> i64 {
        s.coeff_integer(k).unwrap().unwrap().to_i64().unwrap()
    }

    #[test]
    fn derivative_basics() {
        let one = QSeries::one(Nome::Q2, 5);
        assert!(one.normalized_derivative().is_zero());
        let q = QSeries::monomial(Nome::Q2, 1, 5);
        assert_eq!(q.normalized_derivative(), q);
        let de4 = eisenstein_qseries(4, 5).unwrap().normalized_derivative();
        assert_eq!(c(&de4, 1), 240);
    }

    #[test]
    fn serre_derivatives_of_eisenstein_series() {
        let n = 30;
        let one = QSeries::one(Nome::Q2, n);
        assert!(serre_derivative(&one, 0).unwrap().is_zero());

        let e4 = eisenstein_qseries(4, n).unwrap();
        let e6 = eisenstein_qseries(6, n).unwrap();
        let lhs = serre_derivative(&e4, 4).unwrap();
        let rhs = e6.scale(&BigRational::new((-1).into(), 3.into()));
        assert!(lhs.sub(&rhs).unwrap().is_zero());

        let lhs = serre_derivative(&e6, 6).unwrap();
        let rhs = e4
            .pow(2)
            .unwrap()
            .scale(&BigRational::new((-1).into(), 2.into()));
        assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn ramanujan_through_fifty() {
        let r = check_ramanujan(50).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.residuals.iter().all(|x| x.order == 50));
    }

    #[test]
    fn ramanujan_first_coefficients() {
        let e2 = eisenstein_qseries(2, 3).unwrap();
        let e4 = eisenstein_qseries(4, 3).unwrap();
        let rhs = e2
            .pow(2)
            .unwrap()
            .sub(&e4)
            .unwrap()
            .scale(&BigRational::new(1.into(), 12.into()));
        assert_eq!(c(&e2.normalized_derivative(), 1), -24);
        assert_eq!(c(&rhs, 1), -24);
    }

    #[test]
    fn jacobi_exact_and_numeric() {
        let forms = Forms::standard();
        let tau = HalfPlanePoint::new(0.3, 0.9).unwrap();
        let r = check_jacobi(400, &[tau], forms).unwrap();
        assert!(r.pass, "{r:?}");
        let a = theta_qseries(ThetaKind::T00, 8).unwrap().pow(4).unwrap();
        let b = theta_qseries(ThetaKind::T01, 8).unwrap().pow(4).unwrap();
        let cc = theta_qseries(ThetaKind::T10, 8).unwrap().pow(4).unwrap();
        assert_eq!((c(&a, 4), c(&cc, 4), c(&b, 4)), (8, 16, -8));
    }

    #[test]
    fn eta_product_first_terms() {
        let d = eta_product_delta(6);
        let tau: Vec<i64> = (0..=6).map(|k| c(&d, k)).collect();
        assert_eq!(tau, vec![0, 1, -24, 252, -1472, 4830, -6048]);
    }

    #[test]
    fn delta_matches_eta_product() {
        assert!(check_delta(50).unwrap().pass);
        assert_eq!(delta_qseries(50).unwrap().order(), 50);
    }

    #[test]
    fn numeric_delta_matches_eisenstein_combination() {
        use rand::{Rng, SeedableRng};
        let forms = Forms::standard();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let tau = HalfPlanePoint::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.6..3.0)).unwrap();
            let d = forms.eval(FormId::Delta, tau).unwrap();
            // E4 = 1 + a, E6 = 1 + b with a, b evaluated without their constant
            // terms, so that E4^3 - E6^2 is formed without cancellation.
            let a = forms.series(FormId::E4).eval_above_unchecked(tau.to_complex(), 0);
            let b = forms.series(FormId::E6).eval_above_unchecked(tau.to_complex(), 0);
            let combo = (3.0 * a - 2.0 * b + 3.0 * a * a - b * b + a.powi(3)) / 1728.0;
            assert!((d - combo).norm() < 1e-10 * d.norm(), "{tau:?}");
        }
    }
}
