//! Truncated Laurent-series arithmetic in one real frequency-like variable.
//!
//! A [`LaurentSeries`] stores a contiguous window of complex coefficients
//! starting at exponent `lead`, plus `valid_to`: the largest exponent whose
//! coefficient is still trustworthy after truncated arithmetic. Every
//! operation propagates `valid_to` pessimistically, and [`LaurentSeries::coeff`]
//! refuses to read beyond it, so truncation error can never masquerade as a
//! computed coefficient.
//!
//! Validity propagation rules:
//!
//! * addition: `valid = min(a.valid, b.valid)`
//! * multiplication: `valid = min(a.valid + b.lead, b.valid + a.lead)`
//! * division `num/den`: `valid = min(num.valid - den.lead,
//!   den.valid + num.lead - 2*den.lead)`
//!
//! The zero series of known accuracy is encoded with an empty coefficient
//! window and `lead = valid_to + 1`.

use num_complex::Complex64;

use crate::{Error, Result};

/// Relative tolerance below which a leading denominator coefficient is
/// treated as structurally zero by [`LaurentSeries::divide`]. The comparison
/// is against the largest stored coefficient magnitude of the denominator,
/// which separates genuine structural zeros from rounding dust.
pub const DIV_LEAD_TOL: f64 = 1e-13;

/// A truncated Laurent series `sum_k coeffs[k] * t^(lead + k)` with explicit
/// validity bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    lead: i64,
    coeffs: Vec<Complex64>,
    valid_to: i64,
}

impl LaurentSeries {
    /// Builds a series and normalizes it: coefficients beyond `valid_to` are
    /// dropped and exactly-zero leading coefficients are stripped (adjusting
    /// `lead`). An all-zero window collapses to the zero series.
    pub fn new(lead: i64, coeffs: Vec<Complex64>, valid_to: i64) -> Self {
        let mut s = LaurentSeries {
            lead,
            coeffs,
            valid_to,
        };
        s.trim();
        s
    }

    /// The zero series whose coefficients are known (to be zero) through
    /// `valid_to`.
    pub fn zero(valid_to: i64) -> Self {
        LaurentSeries {
            lead: valid_to + 1,
            coeffs: Vec::new(),
            valid_to,
        }
    }

    /// Single-term series `coeff * t^exponent`.
    pub fn monomial(coeff: Complex64, exponent: i64, valid_to: i64) -> Self {
        Self::new(exponent, vec![coeff], valid_to)
    }

    fn trim(&mut self) {
        let window = (self.valid_to - self.lead + 1).max(0) as usize;
        self.coeffs.truncate(window);
        let nz = self
            .coeffs
            .iter()
            .position(|c| *c != Complex64::ZERO)
            .unwrap_or(self.coeffs.len());
        if nz == self.coeffs.len() {
            self.coeffs.clear();
            self.lead = self.valid_to + 1;
        } else if nz > 0 {
            self.coeffs.drain(..nz);
            self.lead += nz as i64;
        }
    }

    /// Smallest exponent with a stored coefficient. For the zero series this
    /// is the sentinel `valid_to + 1`.
    pub fn lead(&self) -> i64 {
        self.lead
    }

    /// Largest exponent whose coefficient is trustworthy.
    pub fn valid_to(&self) -> i64 {
        self.valid_to
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Stored coefficient window, starting at exponent [`Self::lead`].
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `t^exponent`. Exponents inside the validity range but
    /// outside the stored window are zero; exponents beyond `valid_to` are a
    /// bookkeeping error.
    pub fn coeff(&self, exponent: i64) -> Result<Complex64> {
        if exponent > self.valid_to {
            return Err(Error::ValidityShortfall {
                needed: exponent,
                got: self.valid_to,
            });
        }
        let k = exponent - self.lead;
        if k < 0 || k as usize >= self.coeffs.len() {
            Ok(Complex64::ZERO)
        } else {
            Ok(self.coeffs[k as usize])
        }
    }

    /// Coefficientwise sum; `valid_to` is the minimum of the operands'.
    pub fn add(&self, other: &Self) -> Self {
        let valid = self.valid_to.min(other.valid_to);
        let lead = self.lead.min(other.lead);
        if lead > valid {
            return Self::zero(valid);
        }
        let len = (valid - lead + 1) as usize;
        let mut c = vec![Complex64::ZERO; len];
        for s in [self, other] {
            let lo = (s.lead - lead) as usize;
            for (k, v) in s.coeffs.iter().enumerate() {
                if lo + k < len {
                    c[lo + k] += v;
                }
            }
        }
        Self::new(lead, c, valid)
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            valid_to: self.valid_to,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Cauchy product truncated to the propagated validity window.
    pub fn mul(&self, other: &Self) -> Self {
        let valid = (self.valid_to + other.lead).min(other.valid_to + self.lead);
        let lead = self.lead + other.lead;
        if self.is_zero() || other.is_zero() || lead > valid {
            return Self::zero(valid);
        }
        let len = (valid - lead + 1) as usize;
        let mut c = vec![Complex64::ZERO; len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            let jmax = (len - i).min(other.coeffs.len());
            for (j, b) in other.coeffs[..jmax].iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(lead, c, valid)
    }

    /// Formal long division. Fails with [`Error::SingularDivision`] when the
    /// denominator's leading coefficient is zero or below [`DIV_LEAD_TOL`]
    /// relative to its largest stored coefficient.
    pub fn divide(&self, den: &Self) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::SingularDivision { magnitude: 0.0 });
        }
        let max_mag = den
            .coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max);
        let rel = den.coeffs[0].norm() / max_mag;
        if rel < DIV_LEAD_TOL {
            return Err(Error::SingularDivision { magnitude: rel });
        }
        let qlead = self.lead - den.lead;
        let qvalid = (self.valid_to - den.lead).min(den.valid_to + self.lead - 2 * den.lead);
        let nq = qvalid - qlead + 1;
        if nq <= 0 {
            return Ok(Self::zero(qvalid));
        }
        let nq = nq as usize;
        let num: Vec<Complex64> = (0..nq)
            .map(|k| self.coeffs.get(k).copied().unwrap_or(Complex64::ZERO))
            .collect();
        let d = &den.coeffs;
        let mut q = vec![Complex64::ZERO; nq];
        for k in 0..nq {
            let mut s = num[k];
            let amin = (k + 1).saturating_sub(d.len());
            for (a, qa) in q[amin..k].iter().enumerate() {
                s -= qa * d[k - (amin + a)];
            }
            q[k] = s / d[0];
        }
        Ok(Self::new(qlead, q, qvalid))
    }

    /// Multiplies every coefficient by `z`.
    pub fn scalar(&self, z: Complex64) -> Self {
        LaurentSeries {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| c * z).collect(),
            valid_to: self.valid_to,
        }
    }

    /// Substitutes `t <- s*t` for positive real `s`: the coefficient of
    /// `t^e` picks up a factor `s^e`.
    pub fn scale_arg(&self, s: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * s.powi((self.lead + k as i64) as i32))
            .collect();
        LaurentSeries {
            lead: self.lead,
            coeffs,
            valid_to: self.valid_to,
        }
    }

    /// Maps `f(t)` to `f(t) + t f'(t)`, i.e. weights the coefficient of
    /// `t^e` by `1 + e`. This turns the series of a spherical Bessel
    /// function into the series of its Riccati combination.
    pub fn riccati(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let e = self.lead + k as i64;
                c * Complex64::new((1 + e) as f64, 0.0)
            })
            .collect();
        Self::new(self.lead, coeffs, self.valid_to)
    }

    /// Multiplies by the monomial `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            lead: self.lead + k,
            coeffs: self.coeffs.clone(),
            valid_to: self.valid_to + k,
        }
    }

    /// Evaluates the stored (valid) coefficients at `t > 0`.
    pub fn eval(&self, t: f64) -> Result<Complex64> {
        if t <= 0.0 {
            return Err(Error::Domain(format!(
                "series evaluation requires t > 0, got {t}"
            )));
        }
        let mut acc = Complex64::ZERO;
        for (k, c) in self.coeffs.iter().enumerate() {
            acc += c * t.powi((self.lead + k as i64) as i32);
        }
        Ok(acc)
    }
}

impl std::ops::Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::add(self, rhs)
    }
}

impl std::ops::Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::sub(self, rhs)
    }
}

impl std::ops::Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::mul(self, rhs)
    }
}

impl std::ops::Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn trim_strips_leading_zeros_and_truncates() {
        let s = LaurentSeries::new(-1, vec![re(0.0), re(2.0), re(3.0), re(4.0)], 1);
        assert_eq!(s.lead(), 0);
        assert_eq!(s.coeffs(), &[re(2.0), re(3.0)]);
        assert_eq!(s.valid_to(), 1);
    }

    #[test]
    fn all_zero_collapses() {
        let s = LaurentSeries::new(2, vec![re(0.0), re(0.0)], 5);
        assert!(s.is_zero());
        assert_eq!(s.lead(), 6);
    }

    #[test]
    fn coeff_beyond_validity_errors() {
        let s = LaurentSeries::monomial(re(1.0), 0, 3);
        assert!(s.coeff(3).is_ok());
        assert!(s.coeff(4).is_err());
    }
}
