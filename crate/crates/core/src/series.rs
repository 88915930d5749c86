//! Truncated Laurent series in a nome with exact rational coefficients.
//!
//! A [`QSeries`] knows its coefficients from exponent `lowest` through
//! exponent `order` inclusive; everything above `order` is unknown and
//! every operation propagates the truncation order so that the result only
//! claims coefficients it actually determined.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Expansion variable of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Nome {
    /// `q = exp(2 pi i tau)`
    Q2,
    /// `q4 = exp(pi i tau / 4)`, so that `q = q4^8`.
    Q4,
}

impl Nome {
    /// Numerical value of the nome at `tau`.
    pub fn value(self, tau: Complex64) -> Complex64 {
        let scale = match self {
            Nome::Q2 => 2.0 * std::f64::consts::PI,
            Nome::Q4 => std::f64::consts::PI / 4.0,
        };
        (Complex64::i() * scale * tau).exp()
    }

    /// `|nome|` at a point with imaginary part `im`.
    pub fn modulus(self, im: f64) -> f64 {
        match self {
            Nome::Q2 => (-2.0 * std::f64::consts::PI * im).exp(),
            Nome::Q4 => (-std::f64::consts::PI * im / 4.0).exp(),
        }
    }

    /// Decay rate `lambda` with `|nome^k| = exp(-lambda k t)` at `tau = i t`.
    pub fn axis_rate(self) -> f64 {
        match self {
            Nome::Q2 => 2.0 * std::f64::consts::PI,
            Nome::Q4 => std::f64::consts::PI / 4.0,
        }
    }

    /// Multiplier turning `d/d(exponent)` into the normalized derivative
    /// `(1 / 2 pi i) d/dtau`: `D nome^k = (k / divisor) nome^k`.
    fn derivative_divisor(self) -> i64 {
        match self {
            Nome::Q2 => 1,
            Nome::Q4 => 8,
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct QSeries {
    nome: Nome,
    lowest: i64,
    order: i64,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({:?}, ", self.nome)?;
        let mut first = true;
        for (k, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*x^{k}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{}))", self.order + 1)
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn is_integral(c: &[BigRational]) -> bool {
    c.iter().all(|x| x.is_integer())
}

impl QSeries {
    /// Series with the given coefficients starting at exponent `lowest`.
    pub fn from_rationals(nome: Nome, lowest: i64, coeffs: Vec<BigRational>) -> Self {
        let order = lowest + coeffs.len() as i64 - 1;
        QSeries {
            nome,
            lowest,
            order,
            coeffs,
        }
    }

    pub fn from_integers(nome: Nome, lowest: i64, coeffs: &[i64]) -> Self {
        Self::from_rationals(nome, lowest, coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_big_integers(nome: Nome, lowest: i64, coeffs: Vec<BigInt>) -> Self {
        Self::from_rationals(
            nome,
            lowest,
            coeffs.into_iter().map(BigRational::from_integer).collect(),
        )
    }

    /// The zero series known through `order`.
    pub fn zero(nome: Nome, order: i64) -> Self {
        Self::from_rationals(nome, 0, vec![BigRational::zero(); (order + 1).max(0) as usize])
    }

    pub fn one(nome: Nome, order: i64) -> Self {
        Self::monomial(nome, 0, order)
    }

    /// `nome^exponent + O(nome^(order + 1))`.
    pub fn monomial(nome: Nome, exponent: i64, order: i64) -> Self {
        let lowest = exponent.min(order + 1);
        let mut coeffs = vec![BigRational::zero(); (order - lowest + 1).max(0) as usize];
        if exponent <= order {
            coeffs[(exponent - lowest) as usize] = BigRational::one();
        }
        QSeries {
            nome,
            lowest,
            order,
            coeffs,
        }
    }

    pub fn nome(&self) -> Nome {
        self.nome
    }

    /// Exponent of the first stored coefficient (possibly zero).
    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    /// Highest exponent whose coefficient is known.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Coefficient of `nome^exponent`.
    pub fn coeff(&self, exponent: i64) -> Result<BigRational> {
        if exponent > self.order {
            return Err(Error::BeyondOrder {
                exponent,
                order: self.order,
            });
        }
        if exponent < self.lowest {
            return Ok(BigRational::zero());
        }
        Ok(self.coeffs[(exponent - self.lowest) as usize].clone())
    }

    /// Coefficient as an integer, if it is one.
    pub fn coeff_integer(&self, exponent: i64) -> Result<Option<BigInt>> {
        let c = self.coeff(exponent)?;
        Ok(c.is_integer().then(|| c.to_integer()))
    }

    /// `(exponent, coefficient)` pairs for every stored coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.lowest + i as i64, c))
    }

    /// Exponent of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.terms().find(|(_, c)| !c.is_zero()).map(|(k, _)| k)
    }

    /// True if every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// True if every nonzero coefficient sits at an exponent divisible by `modulus`.
    pub fn support_divisible_by(&self, modulus: i64) -> bool {
        self.terms()
            .all(|(k, c)| c.is_zero() || k.rem_euclid(modulus) == 0)
    }

    /// Largest absolute coefficient, as a float.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    /// Coefficients converted to floats, starting at `lowest`.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Drop leading zero coefficients so that `lowest` is the valuation.
    pub fn normalized(&self) -> Self {
        match self.valuation() {
            Some(v) => self.restricted(v, self.order),
            None => QSeries {
                nome: self.nome,
                lowest: self.order + 1,
                order: self.order,
                coeffs: Vec::new(),
            },
        }
    }

    /// Lower the truncation order.
    pub fn truncate(&self, order: i64) -> Self {
        self.restricted(self.lowest, order.min(self.order))
    }

    /// Only the terms with exponent strictly greater than `exponent`.
    pub fn terms_above(&self, exponent: i64) -> Self {
        let lo = (exponent + 1).max(self.lowest);
        let mut out = self.restricted(lo, self.order);
        if lo > self.lowest {
            out.lowest = lo;
        }
        out
    }

    fn restricted(&self, lowest: i64, order: i64) -> Self {
        let coeffs = (lowest..=order)
            .map(|k| {
                if k < self.lowest {
                    BigRational::zero()
                } else {
                    self.coeffs[(k - self.lowest) as usize].clone()
                }
            })
            .collect();
        QSeries {
            nome: self.nome,
            lowest,
            order,
            coeffs,
        }
    }

    fn check_nome(&self, other: &Self) -> Result<()> {
        if self.nome != other.nome {
            return Err(Error::NomeMismatch(self.nome, other.nome));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_nome(other)?;
        let lowest = self.lowest.min(other.lowest);
        let order = self.order.min(other.order);
        let coeffs = (lowest..=order)
            .map(|k| {
                let mut c = BigRational::zero();
                if k >= self.lowest {
                    c += &self.coeffs[(k - self.lowest) as usize];
                }
                if k >= other.lowest {
                    c += &other.coeffs[(k - other.lowest) as usize];
                }
                c
            })
            .collect();
        Ok(QSeries {
            nome: self.nome,
            lowest,
            order,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat(-1))
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            ..self.clone()
        }
    }

    pub fn scale_int(&self, factor: i64) -> Self {
        self.scale(&rat(factor))
    }

    /// Multiply by `nome^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        QSeries {
            lowest: self.lowest + shift,
            order: self.order + shift,
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_nome(other)?;
        let lowest = self.lowest + other.lowest;
        let va = self.valuation().unwrap_or(self.order + 1);
        let vb = other.valuation().unwrap_or(other.order + 1);
        let order = (self.order + vb).min(other.order + va);
        let len = (order - lowest + 1).max(0) as usize;
        let coeffs = convolve(&self.coeffs, &other.coeffs, len);
        Ok(QSeries {
            nome: self.nome,
            lowest,
            order,
            coeffs,
        })
    }

    pub fn pow(&self, exponent: u32) -> Result<Self> {
        if exponent == 0 {
            return Ok(QSeries::one(self.nome, (self.order - self.lowest).max(0)));
        }
        let mut result: Option<QSeries> = None;
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base)?,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result.expect("exponent > 0"))
    }

    /// Multiplicative inverse of a series whose valuation is `v`;
    /// the result starts at `-v`.
    pub fn inverse(&self) -> Result<Self> {
        let b = self.normalized();
        if b.coeffs.is_empty() {
            return Err(Error::DivisionByZeroSeries);
        }
        let len = b.coeffs.len();
        let inv = invert_unit(&b.coeffs, len);
        Ok(QSeries {
            nome: b.nome,
            lowest: -b.lowest,
            order: b.order - 2 * b.lowest,
            coeffs: inv,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_nome(other)?;
        let inv = other.inverse()?;
        self.normalized().mul(&inv)
    }

    /// Re-express a `Q2` series in the nome `Q4` (exponents times 8).
    pub fn to_q4(&self) -> Self {
        match self.nome {
            Nome::Q4 => self.clone(),
            Nome::Q2 => {
                let lowest = 8 * self.lowest;
                let order = 8 * self.order + 7;
                let mut coeffs = vec![BigRational::zero(); (order - lowest + 1) as usize];
                for (i, c) in self.coeffs.iter().enumerate() {
                    coeffs[8 * i] = c.clone();
                }
                QSeries {
                    nome: Nome::Q4,
                    lowest,
                    order,
                    coeffs,
                }
            }
        }
    }

    /// Normalized derivative `D = (1 / 2 pi i) d/dtau`, applied termwise.
    pub fn normalized_derivative(&self) -> Self {
        let div = BigRational::from_integer(BigInt::from(self.nome.derivative_divisor()));
        let coeffs = self
            .terms()
            .map(|(k, c)| c * rat(k) / &div)
            .collect();
        QSeries {
            coeffs,
            ..self.clone()
        }
    }
}

/// Truncated product of two coefficient vectors, `len` terms.
fn convolve(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    if is_integral(a) && is_integral(b) {
        let ai: Vec<BigInt> = a.iter().map(|x| x.to_integer()).collect();
        let bi: Vec<BigInt> = b.iter().map(|x| x.to_integer()).collect();
        let mut out = vec![BigInt::zero(); len];
        for (i, x) in ai.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bi.iter().enumerate().take(len - i) {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        return out.into_iter().map(BigRational::from_integer).collect();
    }
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Inverse of a power series with nonzero constant term, `len` terms.
fn invert_unit(b: &[BigRational], len: usize) -> Vec<BigRational> {
    let b0 = &b[0];
    let nonzero: Vec<(usize, &BigRational)> = b
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .collect();
    if is_integral(b) && b0.abs().is_one() {
        let unit = b0.to_integer();
        let nz: Vec<(usize, BigInt)> = nonzero.iter().map(|(j, c)| (*j, c.to_integer())).collect();
        let mut r: Vec<BigInt> = Vec::with_capacity(len);
        r.push(unit.clone());
        for k in 1..len {
            let mut acc = BigInt::zero();
            for (j, c) in &nz {
                if *j > k {
                    break;
                }
                acc += c * &r[k - j];
            }
            r.push(-acc * &unit);
        }
        return r.into_iter().map(BigRational::from_integer).collect();
    }
    let inv0 = b0.recip();
    let mut r: Vec<BigRational> = Vec::with_capacity(len);
    r.push(inv0.clone());
    for k in 1..len {
        let mut acc = BigRational::zero();
        for (j, c) in &nonzero {
            if *j > k {
                break;
            }
            acc += *c * &r[k - j];
        }
        r.push(-acc * &inv0);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric(order: i64) -> QSeries {
        QSeries::from_integers(Nome::Q2, 0, &vec![1; (order + 1) as usize])
    }

    #[test]
    fn multiplicative_identity() {
        let f = QSeries::from_integers(Nome::Q2, 0, &[3, -1, 4, 1, -5]);
        let one = QSeries::one(Nome::Q2, 10);
        assert_eq!(f.mul(&one).unwrap(), f);
    }

    #[test]
    fn telescoping_product() {
        let mut c = vec![0; 21];
        c[0] = 1;
        c[1] = -1;
        let one_minus_q = QSeries::from_integers(Nome::Q2, 0, &c);
        let p = one_minus_q.mul(&geometric(20)).unwrap();
        assert_eq!(p.order(), 20);
        assert_eq!(p.coeff(0).unwrap(), rat(1));
        for k in 1..=20 {
            assert!(p.coeff(k).unwrap().is_zero(), "k = {k}");
        }
    }

    #[test]
    fn self_division_is_one() {
        let f = QSeries::from_integers(Nome::Q2, 0, &[0, 1, -24, 252, -1472, 4830]);
        let q = f.div(&f).unwrap();
        assert_eq!(q.lowest(), 0);
        assert_eq!(q.coeff(0).unwrap(), rat(1));
        for k in 1..=q.order() {
            assert!(q.coeff(k).unwrap().is_zero());
        }
    }

    #[test]
    fn division_tracks_valuation_and_order() {
        // q^2 (1 + q)^2 / (q (1 - q)) = q (1 + 3q + 4q^2 + ...)
        let num = QSeries::from_integers(Nome::Q2, 0, &[0, 0, 1, 2, 1, 0, 0]);
        let den = QSeries::from_integers(Nome::Q2, 0, &[0, 1, -1, 0, 0, 0, 0]);
        let r = num.div(&den).unwrap();
        assert_eq!(r.valuation(), Some(1));
        assert_eq!(r.order(), 5);
        let want = [0, 1, 3, 4, 4, 4];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(r.coeff(k as i64).unwrap(), rat(*w), "k = {k}");
        }
    }

    #[test]
    fn rational_division() {
        let two_plus_q = QSeries::from_integers(Nome::Q2, 0, &[2, 1, 0, 0]);
        let inv = two_plus_q.inverse().unwrap();
        assert_eq!(inv.coeff(2).unwrap(), BigRational::new(1.into(), 8.into()));
        assert_eq!(inv.coeff(3).unwrap(), BigRational::new((-1).into(), 16.into()));
    }

    #[test]
    fn zero_series_division_fails() {
        let z = QSeries::zero(Nome::Q2, 5);
        let f = QSeries::one(Nome::Q2, 5);
        assert_eq!(f.div(&z), Err(Error::DivisionByZeroSeries));
    }

    #[test]
    fn nome_mismatch_is_rejected() {
        let a = QSeries::one(Nome::Q2, 5);
        let b = QSeries::one(Nome::Q4, 5);
        assert!(matches!(a.add(&b), Err(Error::NomeMismatch(..))));
        assert!(matches!(a.mul(&b), Err(Error::NomeMismatch(..))));
    }

    #[test]
    fn q4_conversion_multiplies_exponents_by_eight() {
        let f = QSeries::from_integers(Nome::Q2, 0, &[1, 240, 2160]);
        let g = f.to_q4();
        assert_eq!(g.nome(), Nome::Q4);
        assert_eq!(g.coeff(8).unwrap(), rat(240));
        assert_eq!(g.coeff(16).unwrap(), rat(2160));
        assert!(g.coeff(9).unwrap().is_zero());
        assert_eq!(g.order(), 23);
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let f = QSeries::from_integers(Nome::Q2, 0, &[1, 2, 0, -1, 3, 1, 0, 0]);
        let cube = f.mul(&f).unwrap().mul(&f).unwrap();
        assert_eq!(f.pow(3).unwrap(), cube);
        assert_eq!(f.pow(1).unwrap(), f);
        let one = f.pow(0).unwrap();
        assert_eq!(one.coeff(0).unwrap(), rat(1));
        assert!(one.coeff(3).unwrap().is_zero());
    }

    #[test]
    fn derivative_in_both_nomes() {
        let f = QSeries::from_integers(Nome::Q2, 0, &[5, 1, 1]);
        let d = f.normalized_derivative();
        assert!(d.coeff(0).unwrap().is_zero());
        assert_eq!(d.coeff(1).unwrap(), rat(1));
        assert_eq!(d.coeff(2).unwrap(), rat(2));
        let g = QSeries::monomial(Nome::Q4, 4, 10).normalized_derivative();
        assert_eq!(g.coeff(4).unwrap(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn beyond_order_is_an_error() {
        let f = QSeries::one(Nome::Q2, 3);
        assert!(matches!(f.coeff(4), Err(Error::BeyondOrder { .. })));
        assert!(f.coeff(-2).unwrap().is_zero());
    }

    #[test]
    fn terms_above_drops_principal_part() {
        let f = QSeries::from_integers(Nome::Q2, -1, &[1, 504, 7, 9]);
        let r = f.terms_above(0);
        assert_eq!(r.lowest(), 1);
        assert_eq!(r.coeff(1).unwrap(), rat(7));
        assert!(r.coeff(0).unwrap().is_zero());
        assert_eq!(r.order(), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn series() -> impl Strategy<Value = QSeries> {
            (-2i64..3, prop::collection::vec(-20i64..20, 4..12))
                .prop_map(|(lo, c)| QSeries::from_integers(Nome::Q2, lo, &c))
        }

        proptest! {
            #[test]
            fn mul_is_commutative(a in series(), b in series()) {
                prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            }

            #[test]
            fn division_undoes_multiplication(a in series(), mut b in series()) {
                prop_assume!(!b.is_zero());
                b = b.normalized();
                let q = a.mul(&b).unwrap().div(&b).unwrap();
                for k in q.lowest()..=q.order() {
                    prop_assert_eq!(q.coeff(k).unwrap(), a.coeff(k).unwrap());
                }
            }
        }
    }
}
