//! Low-frequency Laurent expansion of modal scattering coefficients.
//!
//! Every quantity in the transfer-matrix solve of [`crate::multilayer`] is a
//! Laurent series in `t = k_0` once the spherical Bessel functions are
//! replaced by their expansions. Composing the same interface products in
//! series arithmetic and dividing yields
//!
//! ```text
//! t * W_n(t) = sum_{l >= 0} W_{n,l} t^(2n+1+2l),
//! ```
//!
//! whose coefficients `W_{n,l}` are the design targets for scattering
//! suppression: zeroing the block `{W_{n,l} : n + l <= N}` for both
//! polarizations improves the vanishing order of the whole scattered field
//! from `t^3` to `t^(2N+3)`.
//!
//! Implementation notes:
//!
//! * the adjugate-composed rows carry a common factor of one interface
//!   determinant per layer. The cross identity `j_n H_n - h1_n J_n = i/t`
//!   holds exactly termwise, so each determinant is exactly a monomial
//!   `(+/- i / (m s)) t^-1` and the whole factor divides out by a scalar
//!   multiply and an index shift — no series division, no noise;
//! * series multiplication and division shrink the window of trustworthy
//!   coefficients, so the Bessel inputs are built with a safety margin that
//!   doubles until the requested window is certified (or an error reports
//!   the shortfall).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::lseries::LaurentSeries;
use crate::multilayer::{LayeredStructure, Polarization};
use crate::specfun::{j_series, y_series};
use crate::{Error, Result};

type SeriesMat2 = [[LaurentSeries; 2]; 2];

/// One low-frequency coefficient `W_{n,l}` of one polarization.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub n: usize,
    pub l: usize,
    pub polarization: Polarization,
    pub re: f64,
    pub im: f64,
}

impl CoefficientEntry {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// The complete block `{W_{n,l} : 1 <= n, 0 <= l, n + l <= order}` for both
/// polarizations, in canonical order (TE before TM, then `n` ascending,
/// then `l` ascending). Each polarization contributes
/// `order * (order + 1) / 2` entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub order: usize,
    pub entries: Vec<CoefficientEntry>,
}

impl CoefficientTable {
    pub fn get(&self, n: usize, l: usize, pol: Polarization) -> Option<Complex64> {
        self.entries
            .iter()
            .find(|e| e.n == n && e.l == l && e.polarization == pol)
            .map(|e| e.value())
    }

    /// Values in canonical order.
    pub fn values(&self) -> Vec<Complex64> {
        self.entries.iter().map(|e| e.value()).collect()
    }
}

/// Interface matrix of [`crate::multilayer::interface_matrix`] with every
/// entry expanded as a Laurent series in `t = k_0`; the Bessel argument is
/// `s t` where `s` folds the radius and the medium contrast together.
fn series_interface_matrix(
    n: usize,
    pol: Polarization,
    s: f64,
    material: f64,
    valid_to: i64,
) -> Result<SeriesMat2> {
    let j = j_series(n, valid_to).scale_arg(s);
    let y = y_series(n, valid_to).scale_arg(s);
    let h = &j + &y.scalar(Complex64::I);
    let inv_m = Complex64::new(1.0 / material, 0.0);
    let jj = j.riccati().scalar(inv_m);
    let hh = h.riccati().scalar(inv_m);
    Ok(match pol {
        Polarization::TE => [[j, h], [jj, hh]],
        Polarization::TM => [[jj, hh], [j, h]],
    })
}

fn series_adjugate(m: &SeriesMat2) -> SeriesMat2 {
    [
        [m[1][1].clone(), m[0][1].neg()],
        [m[1][0].neg(), m[0][0].clone()],
    ]
}

fn series_mat_mul(a: &SeriesMat2, b: &SeriesMat2) -> SeriesMat2 {
    let entry = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

fn series_row_mul(
    r: &(LaurentSeries, LaurentSeries),
    m: &SeriesMat2,
) -> (LaurentSeries, LaurentSeries) {
    (
        &(&r.0 * &m[0][0]) + &(&r.1 * &m[1][0]),
        &(&r.0 * &m[0][1]) + &(&r.1 * &m[1][1]),
    )
}

/// Exact `i^k` for signed `k`.
pub(crate) fn ipow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Series analogue of [`crate::multilayer::transfer_product`]: the core
/// boundary row composed through all interfaces, as Laurent series in
/// `t = k_0`, with the exact per-layer determinant monomial divided out so
/// that `p1` has lead exponent `n` and `p2` has lead exponent `-n-1`.
///
/// All Bessel inputs are built valid through `valid_to`; the outputs'
/// certified windows are narrower (series products shrink validity), so
/// callers needing a specific window should use [`w_series`], which manages
/// the margin.
pub fn series_transfer_product(
    structure: &LayeredStructure,
    n: usize,
    pol: Polarization,
    valid_to: i64,
) -> Result<(LaurentSeries, LaurentSeries)> {
    let bg = structure.background();
    let z0 = bg.z();
    let ell = structure.num_layers();
    let z = |j: usize| -> f64 {
        if j == 0 {
            z0
        } else {
            (structure.mu()[j - 1] * structure.eps()[j - 1]).sqrt()
        }
    };
    let mat = |j: usize| -> f64 {
        match pol {
            Polarization::TE => {
                if j == 0 {
                    bg.mu
                } else {
                    structure.mu()[j - 1]
                }
            }
            Polarization::TM => {
                if j == 0 {
                    bg.eps
                } else {
                    structure.eps()[j - 1]
                }
            }
        }
    };

    let s_core = z(ell) * structure.core_radius() / z0;
    let jc = j_series(n, valid_to).scale_arg(s_core);
    let yc = y_series(n, valid_to).scale_arg(s_core);
    let hc = &jc + &yc.scalar(Complex64::I);
    let mut row = match pol {
        Polarization::TE => (jc, hc),
        Polarization::TM => (jc.riccati(), hc.riccati()),
    };

    // Product of the inner-side determinant scalars; the determinant of an
    // interface matrix is (i/(m s)) t^-1 for TE and (-i/(m s)) t^-1 for TM,
    // exactly, so the composed rows equal the normalized rows times
    // (phase)^L * prod(1/(m_j s_j)) * t^-L.
    let mut det_scale = 1.0;
    for j in (1..=ell).rev() {
        let rj = structure.radii()[j - 1];
        let s_in = z(j) * rj / z0;
        let s_out = z(j - 1) * rj / z0;
        let inner = series_interface_matrix(n, pol, s_in, mat(j), valid_to)?;
        let outer = series_interface_matrix(n, pol, s_out, mat(j - 1), valid_to)?;
        let f = series_mat_mul(&series_adjugate(&inner), &outer);
        row = series_row_mul(&row, &f);
        det_scale *= mat(j) * s_in;
    }

    let phase = match pol {
        Polarization::TE => ipow(-(ell as i64)),
        Polarization::TM => ipow(ell as i64),
    };
    let norm = phase * det_scale;
    Ok((
        row.0.scalar(norm).shift(ell as i64),
        row.1.scalar(norm).shift(ell as i64),
    ))
}

/// Laurent series of the modal coefficient `W_n(t)` in `t = k_0`, certified
/// valid through exponent `valid_through`.
///
/// The lead exponent is `2n` and only every second coefficient is nonzero;
/// coefficient `2n + 2l` is `W_{n,l}`. (Equivalently, the scale-invariant
/// form `t * W_n(t)` has `W_{n,l}` at exponent `2n + 1 + 2l` — the same
/// values.) The working margin on the Bessel inputs starts at a heuristic
/// based on layer count and order and doubles up to four times before
/// reporting a shortfall.
pub fn w_series(
    structure: &LayeredStructure,
    n: usize,
    pol: Polarization,
    valid_through: i64,
) -> Result<LaurentSeries> {
    if n == 0 {
        return Err(Error::Domain("multipole order must be at least 1".into()));
    }
    let ell = structure.num_layers() as i64;
    // The ratio is shifted down by one at the end, so it must be certified
    // one exponent beyond the request.
    let target = valid_through + 1;
    let mut margin = (2 * ell + 2) * (n as i64 + 1) + 6;
    let mut best_got = i64::MIN;
    for _ in 0..4 {
        let (p1, p2) = series_transfer_product(structure, n, pol, target + margin)?;
        let ratio = p1.divide(&p2)?;
        let w = ratio
            .scalar(Complex64::new(0.0, (n * (n + 1)) as f64))
            .shift(-1);
        if w.valid_to() >= valid_through {
            return Ok(w);
        }
        best_got = best_got.max(w.valid_to());
        margin *= 2;
    }
    Err(Error::ValidityShortfall {
        needed: valid_through,
        got: best_got,
    })
}

/// All low-frequency coefficients `W_{n,l}` with `n + l <= order` for both
/// polarizations, in canonical order.
pub fn lowfreq_coefficients(structure: &LayeredStructure, order: usize) -> Result<CoefficientTable> {
    if order == 0 {
        return Err(Error::Domain("order must be at least 1".into()));
    }
    let mut entries = Vec::with_capacity(order * (order + 1));
    for pol in Polarization::BOTH {
        for n in 1..=order {
            let l_max = order - n;
            let w = w_series(structure, n, pol, (2 * n + 2 * l_max) as i64)?;
            for l in 0..=l_max {
                let value = w.coeff((2 * n + 2 * l) as i64)?;
                entries.push(CoefficientEntry {
                    n,
                    l,
                    polarization: pol,
                    re: value.re,
                    im: value.im,
                });
            }
        }
    }
    Ok(CoefficientTable { order, entries })
}
