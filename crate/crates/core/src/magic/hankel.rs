//! Radial tables and the eight-dimensional radial Fourier transform
//! `f_hat(r) = 2 pi r^{-3} int_0^oo f(s) J_3(2 pi r s) s^4 ds`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Magic;
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Below this argument Bessel functions come from their power series.
const SERIES_LIMIT: f64 = 12.0;

/// Bessel function of the first kind `J_n(x)` for small `n` and `x >= 0`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_LIMIT {
        return bessel_series(n, x);
    }
    let j0 = bessel_asymptotic(0, x);
    if n == 0 {
        return j0;
    }
    let mut prev = j0;
    let mut cur = bessel_asymptotic(1, x);
    for k in 1..n {
        let next = 2.0 * k as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `sum_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!)`.
pub(crate) fn bessel_series(n: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let mut sum = term;
    let h2 = half * half;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= -h2 / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && k as f64 > half {
            break;
        }
        if k > 500 {
            break;
        }
    }
    sum
}

/// Large-argument expansion `sqrt(2 / (pi x)) (P cos chi - Q sin chi)`,
/// summed until the terms stop decreasing.
fn bessel_asymptotic(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let chi = x - (nu as f64 / 2.0 + 0.25) * PI;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= last || term == 0.0 {
            break;
        }
        last = term.abs();
        // a_k / x^k enters Q for odd k and P for even k, with alternating signs
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// What a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    /// `Im a(r)`; `a` itself is purely imaginary.
    A,
    /// `Im b(r)`.
    B,
    G,
    GHat,
}

impl TableKind {
    pub fn name(self) -> &'static str {
        match self {
            TableKind::A => "a",
            TableKind::B => "b",
            TableKind::G => "g",
            TableKind::GHat => "ghat",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [TableKind::A, TableKind::B, TableKind::G, TableKind::GHat]
            .into_iter()
            .find(|k| k.name() == name)
    }
}

/// Samples of a radial function on an increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialTable {
    pub kind: TableKind,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadialTable {
    pub fn new(kind: TableKind, radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 4 {
            return Err(Error::InvalidArgument(
                "a table needs at least four radii and one value per radius".into(),
            ));
        }
        if radii.windows(2).any(|w| !(w[1] > w[0])) || radii[0] < 0.0 {
            return Err(Error::InvalidArgument(
                "table radii must be nonnegative and strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("table values must be finite".into()));
        }
        Ok(RadialTable {
            kind,
            radii,
            values,
        })
    }

    /// `0, step, 2 step, ...` through `max`.
    pub fn grid(max: f64, step: f64) -> Vec<f64> {
        let n = (max / step).round() as usize;
        (0..=n).map(|i| i as f64 * step).collect()
    }

    /// Four-point Lagrange interpolation; zero beyond the last radius.
    pub fn interpolate(&self, s: f64) -> f64 {
        let n = self.radii.len();
        if s > self.radii[n - 1] {
            return 0.0;
        }
        let i = self.radii.partition_point(|&x| x <= s).clamp(1, n - 1);
        let lo = i.saturating_sub(2).min(n - 4);
        let xs = &self.radii[lo..lo + 4];
        let ys = &self.values[lo..lo + 4];
        let mut total = 0.0;
        for j in 0..4 {
            let mut l = 1.0;
            for m in 0..4 {
                if m != j {
                    l *= (s - xs[m]) / (xs[j] - xs[m]);
                }
            }
            total += l * ys[j];
        }
        total
    }
}

/// Tabulate `which` on `radii`.
pub fn tabulate_radial(which: TableKind, radii: &[f64], magic: &Magic<'_>) -> Result<RadialTable> {
    let eval = |r: f64| -> Result<f64> {
        match which {
            TableKind::A => Ok(magic.a().eval(r)?.im),
            TableKind::B => Ok(magic.b().eval(r)?.im),
            TableKind::G => magic.eval_g(r),
            TableKind::GHat => magic.eval_g_hat(r),
        }
    };
    #[cfg(feature = "parallel")]
    let values: Result<Vec<f64>> = {
        use rayon::prelude::*;
        radii.par_iter().map(|&r| eval(r)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values: Result<Vec<f64>> = radii.iter().map(|&r| eval(r)).collect();
    RadialTable::new(which, radii.to_vec(), values?)
}

/// Eight-dimensional Fourier transform of the tabulated radial function at `r > 0`.
pub fn hankel8(table: &RadialTable, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("transform radius must be positive, got {r}")));
    }
    let weight = |i: usize| table.values[i].abs() * table.radii[i].powi(4);
    let n = table.radii.len();
    let peak = (0..n).map(weight).fold(0.0, f64::max);
    let edge = (n - 3..n).map(weight).fold(0.0, f64::max);
    if edge > 1e-10 * peak {
        return Err(Error::InsufficientTable(format!(
            "|f(s)| s^4 = {edge:e} at s = {} against a peak of {peak:e}",
            table.radii[n - 1]
        )));
    }
    let end = table.radii[n - 1];
    let start = table.radii[0];
    // at least 32 nodes per period 1/r of the Bessel kernel
    let width = (0.05f64).min(0.25 / r);
    let panels = ((end - start) / width).ceil() as usize;
    let gl = GaussLegendre::new(8)?;
    let integral = gl.integrate(start, end, panels, |s| {
        table.interpolate(s) * bessel_j(3, 2.0 * PI * r * s) * s.powi(4)
    });
    Ok(2.0 * PI * integral / r.powi(3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_at_zero() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(3, 0.0), 0.0);
    }

    #[test]
    fn bessel_reference_values() {
        // standard tabulated values
        assert!((bessel_j(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j(1, 1.0) - 0.440_050_585_744_933_5).abs() < 1e-15);
        assert!((bessel_j(0, 20.0) - 0.167_024_664_340_583_2).abs() < 1e-12);
        assert!((bessel_j(1, 20.0) - 0.066_833_124_175_849_93).abs() < 1e-12);
        assert!((bessel_j(3, 20.0) - (-0.098_901_394_560_449_58)).abs() < 1e-12);
    }

    #[test]
    fn j1_is_minus_j0_derivative() {
        let h = 1e-5;
        for x in [1.0, 5.0, 20.0] {
            let d = (bessel_j(0, x + h) - bessel_j(0, x - h)) / (2.0 * h);
            assert!((bessel_j(1, x) + d).abs() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn j3_matches_long_series() {
        // sixty explicit terms with factorials built up independently
        let x: f64 = 5.0;
        let mut sum = 0.0;
        for k in 0..60 {
            let mut t = (x / 2.0).powi(2 * k + 3);
            for j in 1..=k {
                t /= j as f64;
            }
            for j in 1..=(k + 3) {
                t /= j as f64;
            }
            sum += if k % 2 == 0 { t } else { -t };
        }
        assert!((bessel_j(3, x) - sum).abs() < 1e-10);
    }

    #[test]
    fn series_and_asymptotic_agree_near_the_switch() {
        for n in 0..=3 {
            let x = SERIES_LIMIT;
            let s = bessel_series(n, x);
            let a = bessel_j(n, x + 1e-12);
            assert!((s - a).abs() < 1e-9, "n = {n}: {s} vs {a}");
        }
    }

    #[test]
    fn gaussian_is_its_own_transform() {
        let radii = RadialTable::grid(6.0, 0.01);
        let values = radii.iter().map(|s| (-PI * s * s).exp()).collect();
        let t = RadialTable::new(TableKind::G, radii, values).unwrap();
        let v = hankel8(&t, 1.0).unwrap();
        assert!((v - (-PI).exp()).abs() < 1e-6 * (-PI).exp());
        let v = hankel8(&t, 0.5).unwrap();
        assert!((v - (-PI * 0.25).exp()).abs() < 1e-6);
    }

    #[test]
    fn short_table_is_rejected() {
        let radii = RadialTable::grid(1.0, 0.01);
        let values = radii.iter().map(|s| (-PI * s * s).exp()).collect();
        let t = RadialTable::new(TableKind::G, radii, values).unwrap();
        assert!(matches!(hankel8(&t, 1.0), Err(Error::InsufficientTable(_))));
    }

    #[test]
    fn interpolation_is_exact_on_cubics() {
        let radii = RadialTable::grid(2.0, 0.1);
        let values = radii.iter().map(|s| 1.0 - 2.0 * s + s * s * s).collect();
        let t = RadialTable::new(TableKind::G, radii, values).unwrap();
        for s in [0.0, 0.03, 0.77, 1.5, 1.96, 2.0] {
            assert!((t.interpolate(s) - (1.0 - 2.0 * s + s * s * s)).abs() < 1e-12);
        }
        assert!(RadialTable::new(TableKind::G, vec![0.0, 1.0, 1.0, 2.0], vec![0.0; 4]).is_err());
    }
}
