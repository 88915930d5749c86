//! Quasimodular forms on the upper half-plane.
//!
//! Every form is built as an exact [`QSeries`]; floating point only enters
//! when a series is evaluated at a point (see [`Forms`]).
//!
//! Conventions: `q = e^{2 pi i tau}` for the Eisenstein series, the
//! discriminant and `phi0`; `q4 = e^{pi i tau / 4}` for the theta constants
//! and everything built from them, so that
//! `theta00 = sum q4^{4 n^2}`, `theta01 = sum (-1)^n q4^{4 n^2}` and
//! `theta10 = sum q4^{(2n+1)^2}` are honest power series.

mod eval;
mod identities;

pub use eval::{eval_series, AxisPiece, Forms, FormsConfig, NumSeries};
pub use identities::{
    check_delta, check_jacobi, check_ramanujan, eta_product_delta, serre_derivative, DeltaReport,
    JacobiReport, RamanujanReport,
};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Nome, QSeries};

/// A point `tau` with `Im tau > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    re: f64,
    im: f64,
}

impl HalfPlanePoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return Err(Error::NotInUpperHalfPlane(im));
        }
        Ok(HalfPlanePoint { re, im })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    /// The point `i t` on the imaginary axis.
    pub fn on_axis(t: f64) -> Result<Self> {
        Self::new(0.0, t)
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// The forms this crate knows how to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormId {
    E2,
    E4,
    E6,
    Delta,
    Theta00,
    Theta01,
    Theta10,
    Phi0,
    PsiS,
}

impl FormId {
    pub const ALL: [FormId; 9] = [
        FormId::E2,
        FormId::E4,
        FormId::E6,
        FormId::Delta,
        FormId::Theta00,
        FormId::Theta01,
        FormId::Theta10,
        FormId::Phi0,
        FormId::PsiS,
    ];

    pub fn nome(self) -> Nome {
        match self {
            FormId::Theta00 | FormId::Theta01 | FormId::Theta10 | FormId::PsiS => Nome::Q4,
            _ => Nome::Q2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FormId::E2 => "e2",
            FormId::E4 => "e4",
            FormId::E6 => "e6",
            FormId::Delta => "delta",
            FormId::Theta00 => "theta00",
            FormId::Theta01 => "theta01",
            FormId::Theta10 => "theta10",
            FormId::Phi0 => "phi0",
            FormId::PsiS => "psi_s",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Exact expansion of this form through `order` (in its own nome).
    pub fn qseries(self, order: i64) -> Result<QSeries> {
        match self {
            FormId::E2 => eisenstein_qseries(2, order),
            FormId::E4 => eisenstein_qseries(4, order),
            FormId::E6 => eisenstein_qseries(6, order),
            FormId::Delta => delta_qseries(order),
            FormId::Theta00 => theta_qseries(ThetaKind::T00, order),
            FormId::Theta01 => theta_qseries(ThetaKind::T01, order),
            FormId::Theta10 => theta_qseries(ThetaKind::T10, order),
            FormId::Phi0 => phi0_qseries(order),
            FormId::PsiS => psi_s_qseries(order),
        }
    }
}

/// `sigma_k(n) = sum of d^k over the divisors d of n`.
pub fn divisor_sum(n: u64, k: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("divisor_sum needs n >= 1".into()));
    }
    let mut total: u64 = 0;
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += d.pow(k);
            let e = n / d;
            if e != d {
                total += e.pow(k);
            }
        }
        d += 1;
    }
    Ok(total)
}

/// `E_2 = 1 - 24 sum sigma_1(n) q^n`, `E_4 = 1 + 240 sum sigma_3(n) q^n`,
/// `E_6 = 1 - 504 sum sigma_5(n) q^n`.
pub fn eisenstein_qseries(weight: u32, order: i64) -> Result<QSeries> {
    let (scale, power): (i64, u32) = match weight {
        2 => (-24, 1),
        4 => (240, 3),
        6 => (-504, 5),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "Eisenstein weight must be 2, 4 or 6, got {weight}"
            )))
        }
    };
    if order < 0 {
        return Err(Error::InvalidArgument("order must be >= 0".into()));
    }
    let mut coeffs = Vec::with_capacity(order as usize + 1);
    coeffs.push(BigInt::from(1));
    for n in 1..=order as u64 {
        coeffs.push(BigInt::from(scale) * BigInt::from(divisor_sum(n, power)?));
    }
    Ok(QSeries::from_big_integers(Nome::Q2, 0, coeffs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThetaKind {
    T00,
    T01,
    T10,
}

/// Theta constants in the nome `q4`.
pub fn theta_qseries(kind: ThetaKind, order: i64) -> Result<QSeries> {
    if order < 0 {
        return Err(Error::InvalidArgument("order must be >= 0".into()));
    }
    let mut coeffs = vec![0i64; order as usize + 1];
    let mut n: i64 = 0;
    loop {
        let exponent = match kind {
            ThetaKind::T00 | ThetaKind::T01 => 4 * n * n,
            ThetaKind::T10 => (2 * n + 1) * (2 * n + 1),
        };
        if exponent > order {
            break;
        }
        let sign = if kind == ThetaKind::T01 && n % 2 == 1 { -1 } else { 1 };
        // n and -n (resp. n and -n-1 for theta10) give the same exponent
        let mult = if kind != ThetaKind::T10 && n == 0 { 1 } else { 2 };
        coeffs[exponent as usize] += sign * mult;
        n += 1;
    }
    Ok(QSeries::from_integers(Nome::Q4, 0, &coeffs))
}

/// `Delta = (E_4^3 - E_6^2) / 1728`.
pub fn delta_qseries(order: i64) -> Result<QSeries> {
    if order < 1 {
        return Err(Error::InvalidArgument("delta needs order >= 1".into()));
    }
    let e4 = eisenstein_qseries(4, order)?;
    let e6 = eisenstein_qseries(6, order)?;
    let num = e4.pow(3)?.sub(&e6.pow(2)?)?;
    Ok(num.scale(&BigRational::new(1.into(), 1728.into())))
}

/// `E_2 E_4 - E_6`, which starts at `720 q`.
fn e2e4_minus_e6(order: i64) -> Result<QSeries> {
    let e2 = eisenstein_qseries(2, order)?;
    let e4 = eisenstein_qseries(4, order)?;
    let e6 = eisenstein_qseries(6, order)?;
    e2.mul(&e4)?.sub(&e6)
}

/// `phi0 = (E_2 E_4 - E_6)^2 / Delta`; valuation 1, leading coefficient 518400.
pub fn phi0_qseries(order: i64) -> Result<QSeries> {
    if order < 2 {
        return Err(Error::InvalidArgument("phi0 needs order >= 2".into()));
    }
    let work = order + 1;
    let num = e2e4_minus_e6(work)?.pow(2)?;
    Ok(num.div(&delta_qseries(work)?)?.truncate(order))
}

/// `(E_2 E_4 - E_6) E_4 / Delta`, the coefficient of `1/tau` in the
/// S-transformation of `phi0`; constant term 720.
pub fn phi_m2_qseries(order: i64) -> Result<QSeries> {
    let work = order + 1;
    let num = e2e4_minus_e6(work)?.mul(&eisenstein_qseries(4, work)?)?;
    Ok(num.div(&delta_qseries(work)?)?.truncate(order))
}

/// `E_4^2 / Delta = q^{-1} + 504 + ...`.
pub fn phi_m4_qseries(order: i64) -> Result<QSeries> {
    let work = order + 1;
    let num = eisenstein_qseries(4, work)?.pow(2)?;
    Ok(num.div(&delta_qseries(work)?)?.truncate(order))
}

struct ThetaFourth {
    a: QSeries,
    b: QSeries,
    c: QSeries,
}

fn theta_fourth_powers(order: i64) -> Result<ThetaFourth> {
    Ok(ThetaFourth {
        a: theta_qseries(ThetaKind::T00, order)?.pow(4)?,
        b: theta_qseries(ThetaKind::T01, order)?.pow(4)?,
        c: theta_qseries(ThetaKind::T10, order)?.pow(4)?,
    })
}

/// `psi_S = 128 ((theta01^4 - theta10^4) / theta00^8 - (theta10^4 + theta00^4) / theta01^8)`
/// in the nome `q4`; it starts at `-10240 q4^4 = -10240 e^{pi i tau}`.
pub fn psi_s_qseries(order: i64) -> Result<QSeries> {
    if order < 8 {
        return Err(Error::InvalidArgument("psi_S needs order >= 8".into()));
    }
    let t = theta_fourth_powers(order)?;
    let first = t.b.sub(&t.c)?.div(&t.a.pow(2)?)?;
    let second = t.c.add(&t.a)?.div(&t.b.pow(2)?)?;
    Ok(first.sub(&second)?.scale_int(128).truncate(order))
}

/// `tau^2 psi_S(-1/tau) = 128 ((theta01^4 - theta10^4) / theta00^8 + (theta00^4 + theta01^4) / theta10^8)`,
/// a Laurent series starting at `q4^{-8}`.
pub fn psi_i_qseries(order: i64) -> Result<QSeries> {
    let work = order + 16;
    let t = theta_fourth_powers(work)?;
    let first = t.b.sub(&t.c)?.div(&t.a.pow(2)?)?;
    let second = t.a.add(&t.b)?.div(&t.c.pow(2)?)?;
    Ok(first.add(&second)?.scale_int(128).truncate(order))
}
