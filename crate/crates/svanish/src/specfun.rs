//! Spherical Bessel and Hankel functions with their Riccati-type
//! combinations, double factorials, and small-argument series.
//!
//! Everything downstream — transfer matrices, low-frequency expansions,
//! far-field multipoles — reduces to the four radial functions
//!
//! ```text
//! j_n(t),  y_n(t),  h1_n(t) = j_n(t) + i y_n(t),
//! J_n(t) = j_n(t) + t j_n'(t),  H_n(t) = h1_n(t) + t h1_n'(t),
//! ```
//!
//! evaluated for positive real argument. Two exact identities anchor the
//! implementation and are enforced by the test suite:
//!
//! ```text
//! j_n y_n' - j_n' y_n = t^-2          (Wronskian)
//! j_n H_n - h1_n J_n  = i/t           (cross identity)
//! ```
//!
//! `j_n` uses Miller-style downward recurrence normalized against the closed
//! form of `j_0` (or `j_1` when `j_0` sits near a zero) below the turning
//! point `t < n`, and plain upward recurrence above it; `y_n` always recurses
//! upward, which is stable for the singular solution. Derivatives come from
//! `f_n' = f_{n-1} - ((n+1)/t) f_n`, never from finite differences.

use num_complex::Complex64;

use crate::lseries::LaurentSeries;
use crate::{Error, Result};

/// Default cap on the multipole order `n`. Nothing in the intended
/// applications needs more than single digits; 32 is cheap headroom.
pub const DEFAULT_N_MAX: usize = 32;

/// Largest argument accepted by [`double_factorial`]; products stay exact in
/// 128-bit integer arithmetic well past this point, but series construction
/// never needs more.
pub const DOUBLE_FACTORIAL_MAX: i64 = 40;

/// One order of the spherical Bessel family at a fixed positive argument.
#[derive(Clone, Copy, Debug)]
pub struct BesselEval {
    pub n: usize,
    pub t: f64,
    /// Regular solution `j_n(t)`.
    pub j: f64,
    /// Derivative `j_n'(t)`.
    pub jp: f64,
    /// Singular solution `y_n(t)`.
    pub y: f64,
    /// Derivative `y_n'(t)`.
    pub yp: f64,
}

impl BesselEval {
    /// Spherical Hankel function of the first kind, `h1_n = j_n + i y_n`.
    pub fn h1(&self) -> Complex64 {
        Complex64::new(self.j, self.y)
    }

    /// Derivative of the spherical Hankel function of the first kind.
    pub fn h1p(&self) -> Complex64 {
        Complex64::new(self.jp, self.yp)
    }

    /// Riccati combination `J_n(t) = j_n(t) + t j_n'(t)`.
    pub fn riccati_j(&self) -> f64 {
        self.j + self.t * self.jp
    }

    /// Riccati combination `H_n(t) = h1_n(t) + t h1_n'(t)`.
    pub fn riccati_h(&self) -> Complex64 {
        self.h1() + self.t * self.h1p()
    }
}

/// Evaluates `j_n, y_n` and their derivatives at `t > 0`, capping the order
/// at [`DEFAULT_N_MAX`].
pub fn sph_bessel(n: usize, t: f64) -> Result<BesselEval> {
    sph_bessel_capped(n, t, DEFAULT_N_MAX)
}

/// Like [`sph_bessel`] but with a caller-chosen order cap.
pub fn sph_bessel_capped(n: usize, t: f64, n_max: usize) -> Result<BesselEval> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "spherical Bessel argument must be positive and finite, got {t}"
        )));
    }
    if n > n_max {
        return Err(Error::Capacity(format!(
            "order {n} exceeds the configured cap {n_max}"
        )));
    }
    let js = j_ladder(n, t);
    let ys = y_ladder(n, t);
    let (jm1, ym1) = if n == 0 {
        // j_{-1} = cos t / t and y_{-1} = sin t / t close the derivative
        // recurrence at the bottom of the ladder.
        (t.cos() / t, t.sin() / t)
    } else {
        (js[n - 1], ys[n - 1])
    };
    let fac = (n as f64 + 1.0) / t;
    Ok(BesselEval {
        n,
        t,
        j: js[n],
        jp: jm1 - fac * js[n],
        y: ys[n],
        yp: ym1 - fac * ys[n],
    })
}

/// `j_0 .. j_n` by upward recurrence above the turning point, Miller downward
/// recurrence below it.
fn j_ladder(n: usize, t: f64) -> Vec<f64> {
    let j0 = t.sin() / t;
    if n == 0 {
        return vec![j0];
    }
    let j1 = t.sin() / (t * t) - t.cos() / t;
    if t >= n as f64 {
        let mut js = vec![0.0; n + 1];
        js[0] = j0;
        js[1] = j1;
        for k in 1..n {
            js[k + 1] = (2 * k + 1) as f64 / t * js[k] - js[k - 1];
        }
        return js;
    }
    // Downward from a start order well above n; the recurrence amplifies the
    // regular solution going down, so an arbitrary tiny seed converges onto
    // a multiple of j, fixed afterwards by the closed form at the bottom.
    let start = n + 32 + t.ceil() as usize;
    let mut f_up = 0.0_f64; // f_{k+1}
    let mut f = 1e-300_f64; // f_k
    let mut stored = vec![0.0; n + 1];
    for k in (0..=start).rev() {
        if k <= n {
            stored[k] = f;
        }
        if k == 0 {
            break;
        }
        let f_dn = (2 * k + 1) as f64 / t * f - f_up;
        f_up = f;
        f = f_dn;
        if f.abs() > 1e250 {
            f_up /= 1e250;
            f /= 1e250;
            for v in stored.iter_mut() {
                *v /= 1e250;
            }
        }
    }
    // Normalize against whichever closed form is farther from a zero.
    let scale = if j0.abs() >= j1.abs() {
        j0 / f
    } else {
        j1 / stored[1]
    };
    for v in stored.iter_mut() {
        *v *= scale;
    }
    stored
}

/// `y_0 .. y_n` by upward recurrence (stable for the singular solution).
fn y_ladder(n: usize, t: f64) -> Vec<f64> {
    let mut ys = vec![0.0; n.max(1) + 1];
    ys[0] = -t.cos() / t;
    ys[1] = -t.cos() / (t * t) - t.sin() / t;
    for k in 1..n {
        ys[k + 1] = (2 * k + 1) as f64 / t * ys[k] - ys[k - 1];
    }
    ys.truncate(n + 1);
    ys
}

/// Exact double factorial `n!!`, with `(-1)!! = 0!! = 1`.
///
/// Arguments above [`DOUBLE_FACTORIAL_MAX`] are refused so the result is
/// always exact in integer arithmetic.
pub fn double_factorial(n: i64) -> Result<u128> {
    if n < -1 {
        return Err(Error::Domain(format!(
            "double factorial needs n >= -1, got {n}"
        )));
    }
    if n > DOUBLE_FACTORIAL_MAX {
        return Err(Error::Capacity(format!(
            "double factorial capped at {DOUBLE_FACTORIAL_MAX}, got {n}"
        )));
    }
    let mut acc: u128 = 1;
    let mut k = n;
    while k > 1 {
        acc *= k as u128;
        k -= 2;
    }
    Ok(acc)
}

/// Double factorial as a float, for series coefficients at orders where the
/// exact integer would not be needed (relative rounding stays at machine
/// epsilon, far below every tolerance used downstream).
pub(crate) fn double_factorial_f64(n: i64) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

/// Which solution a small-argument series expands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselKind {
    /// The regular solution `j_n`, leading term `t^n / (2n+1)!!`.
    First,
    /// The singular solution `y_n`, leading term `-(2n-1)!! t^(-n-1)`.
    Second,
}

/// Small-argument series of `j_n` or `y_n` with `terms` coefficients in
/// `t^2`.
///
/// Successive terms obey simple ratios, so the series is built without large
/// factorials:
///
/// ```text
/// j_n: c_{l+1}/c_l = -1 / (2(l+1)(2n + 2l + 3)),   c_0 = 1/(2n+1)!!
/// y_n: c_{l+1}/c_l = -1 / (2(l+1)(2l + 1 - 2n)),   c_0 = -(2n-1)!!
/// ```
///
/// The returned validity ends one exponent short of the first dropped term.
pub fn bessel_series(n: usize, kind: BesselKind, terms: usize) -> LaurentSeries {
    let k = terms.max(1);
    let n = n as i64;
    let (lead, first) = match kind {
        BesselKind::First => (n, 1.0 / double_factorial_f64(2 * n + 1)),
        BesselKind::Second => (-n - 1, -double_factorial_f64(2 * n - 1)),
    };
    let mut coeffs = vec![Complex64::ZERO; 2 * k - 1];
    let mut term = first;
    for l in 0..k {
        coeffs[2 * l] = Complex64::new(term, 0.0);
        let denom = match kind {
            BesselKind::First => 2 * (l as i64 + 1) * (2 * n + 2 * l as i64 + 3),
            BesselKind::Second => 2 * (l as i64 + 1) * (2 * l as i64 + 1 - 2 * n),
        };
        term *= -1.0 / denom as f64;
    }
    LaurentSeries::new(lead, coeffs, lead + 2 * k as i64 - 1)
}

/// Series of `j_n` valid through exponent `valid_to` (at least).
pub(crate) fn j_series(n: usize, valid_to: i64) -> LaurentSeries {
    let lead = n as i64;
    let terms = ((valid_to - lead) / 2 + 1).max(1) as usize;
    bessel_series(n, BesselKind::First, terms)
}

/// Series of `y_n` valid through exponent `valid_to` (at least).
pub(crate) fn y_series(n: usize, valid_to: i64) -> LaurentSeries {
    let lead = -(n as i64) - 1;
    let terms = ((valid_to - lead) / 2 + 1).max(1) as usize;
    bessel_series(n, BesselKind::Second, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn downward_and_upward_agree_at_turning_point() {
        // Reference values straddling the recurrence-direction seam t = n,
        // computed with 40-digit arithmetic. The lower point exercises the
        // downward ladder, the upper point the upward one.
        let cases = [
            (3usize, 2.999_999_999, 1.520_516_619_346_313_5e-1),
            (3, 3.000_000_001, 1.520_516_621_264_352_6e-1),
            (8, 7.999_999_999, 7.614_322_221_798_701_4e-2),
            (8, 8.000_000_001, 7.614_322_229_121_020_5e-2),
            (15, 14.999_999_999, 4.769_220_599_341_567_8e-2),
            (15, 15.000_000_001, 4.769_220_603_116_583_5e-2),
        ];
        for (n, t, expect) in cases {
            let e = sph_bessel(n, t).unwrap();
            assert!(
                (e.j - expect).abs() <= 1e-13 * expect.abs(),
                "j_{n}({t}) = {} vs {expect}",
                e.j
            );
        }
    }

    #[test]
    fn miller_normalization_near_j0_zero() {
        // t = pi makes j_0 vanish; the ladder must fall back to j_1.
        let e = sph_bessel(6, std::f64::consts::PI).unwrap();
        let wronskian = e.j * e.yp - e.jp * e.y;
        let expect = 1.0 / (e.t * e.t);
        assert!((wronskian - expect).abs() <= 1e-13 * expect);
    }

    #[test]
    fn double_factorial_exact_values() {
        assert_eq!(double_factorial(-1).unwrap(), 1);
        assert_eq!(double_factorial(0).unwrap(), 1);
        assert_eq!(double_factorial(9).unwrap(), 945);
        assert_eq!(double_factorial(10).unwrap(), 3840);
        assert!(double_factorial(-2).is_err());
        assert!(double_factorial(41).is_err());
    }
}
