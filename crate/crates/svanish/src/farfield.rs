//! Vector spherical harmonics, plane-wave multipole coefficients, and the
//! assembly of scattered fields, far-field amplitudes and cross sections
//! from the modal coefficients of a layered structure.
//!
//! Conventions, fixed once and used everywhere:
//!
//! * `Y_n^m` is orthonormal on the unit sphere with the Condon–Shortley
//!   phase; negative orders via `Y_n^{-m} = (-1)^m conj(Y_n^m)`.
//! * `U_{n,m} = grad_S Y_n^m / sqrt(n(n+1))`, `V_{n,m} = x̂ × U_{n,m}`; both
//!   tangent, and `{U} ∪ {V}` orthonormal in `L²(S)³`.
//! * A plane wave `c e^{i k_0 k̂·x}` expands over the regular multipoles with
//!   coefficients `a_{p,q} = -(4π i^p/sqrt(p(p+1))) conj(V_{p,q}(k̂))·c` and
//!   `b_{p,q} = -(4π i^p/sqrt(p(p+1))) sqrt(ε₀/μ₀) conj(U_{p,q}(k̂))·c`.
//!   These are the forms that actually satisfy the reconstruction identity;
//!   they were pinned by projecting the plane wave onto the basis by
//!   quadrature.
//! * The far field is normalized as
//!   `E - E^i ~ (e^{i k_0 |x|}/(k_0 |x|)) A_∞(x̂)`, and the cross section is
//!   `(1/k_0²) ∫_S ‖A_∞‖² dσ`.
//!
//! Associated Legendre functions are evaluated with `sin^m θ` factored out
//! of the upward degree recurrence, so the pole values θ ∈ {0, π} come out
//! as the analytic limits instead of 0/0.

use num_complex::Complex64;

use crate::lowfreq::ipow;
use crate::multilayer::{modal_coefficient, Background, LayeredStructure, Polarization};
use crate::specfun::sph_bessel;
use crate::{Error, Result};

/// Hard cap on the multipole order accepted by the assembly routines.
pub const N_MAX_CAP: usize = 32;

/// Relative tail threshold used by [`suggest_n_max`].
pub const TAIL_TOL: f64 = 1e-12;

/// A complex field value at a point, in Cartesian components.
pub type FieldVector = [Complex64; 3];

// ---------------------------------------------------------------------------
// Directions
// ---------------------------------------------------------------------------

/// A unit direction on the sphere, stored Cartesian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    unit: [f64; 3],
}

impl Direction {
    /// `+z`, the default incidence direction.
    pub const Z: Direction = Direction {
        unit: [0.0, 0.0, 1.0],
    };

    /// `+x`, the default polarization direction.
    pub const X: Direction = Direction {
        unit: [1.0, 0.0, 0.0],
    };

    /// Normalizes `v`; errors on zero or non-finite input.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::Domain(format!(
                "direction must be a nonzero finite vector, got {v:?}"
            )));
        }
        Ok(Direction {
            unit: [v[0] / norm, v[1] / norm, v[2] / norm],
        })
    }

    /// Direction from polar angles, `θ` from `+z` and `φ` from `+x`.
    pub fn from_angles(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::Domain("angles must be finite".into()));
        }
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Ok(Direction {
            unit: [st * cp, st * sp, ct],
        })
    }

    pub fn unit(&self) -> [f64; 3] {
        self.unit
    }

    pub fn theta(&self) -> f64 {
        self.unit[2].clamp(-1.0, 1.0).acos()
    }

    pub fn phi(&self) -> f64 {
        self.unit[1].atan2(self.unit[0])
    }
}

// ---------------------------------------------------------------------------
// Small vector helpers
// ---------------------------------------------------------------------------

fn czero3() -> FieldVector {
    [Complex64::ZERO; 3]
}

fn axpy(acc: &mut FieldVector, s: Complex64, v: &FieldVector) {
    for k in 0..3 {
        acc[k] += s * v[k];
    }
}

/// `conj(v)·c` for a complex tangent vector against a real vector.
fn dot_conj_real(v: &FieldVector, c: [f64; 3]) -> Complex64 {
    v[0].conj() * c[0] + v[1].conj() * c[1] + v[2].conj() * c[2]
}

fn field_norm(v: &FieldVector) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt()
}

// ---------------------------------------------------------------------------
// Vector spherical harmonics
// ---------------------------------------------------------------------------

/// `Y_n^m`, `U_{n,m}` and `V_{n,m}` at one direction.
#[derive(Clone, Debug)]
pub struct VshEval {
    pub n: usize,
    pub m: i64,
    /// Scalar spherical harmonic `Y_n^m(x̂)`.
    pub y: Complex64,
    /// `grad_S Y / sqrt(n(n+1))`, tangent at `x̂`.
    pub u: FieldVector,
    /// `x̂ × U`, tangent at `x̂`.
    pub v: FieldVector,
}

/// `(-1)^m (2m-1)!! ... ` seed and upward-in-degree recurrence for
/// `Q_{n,m}(x)` where `P_n^m(cos θ) = sin^m θ · Q_{n,m}(cos θ)`; returns
/// `(Q, dQ/dx)`.
fn qpoly(n: usize, m: usize, x: f64) -> (f64, f64) {
    let mut df = 1.0;
    let mut k = 2 * m as i64 - 1;
    while k > 1 {
        df *= k as f64;
        k -= 2;
    }
    let qmm = if m % 2 == 1 { -df } else { df };
    if n == m {
        return (qmm, 0.0);
    }
    let (mut qa, mut da) = (qmm, 0.0);
    let c1 = (2 * m + 1) as f64;
    let (mut qb, mut db) = (x * c1 * qmm, c1 * qmm);
    for k in m + 2..=n {
        let (kf, mf) = (k as f64, m as f64);
        let qc = ((2.0 * kf - 1.0) * x * qb - (kf - 1.0 + mf) * qa) / (kf - mf);
        let dc = ((2.0 * kf - 1.0) * (qb + x * db) - (kf - 1.0 + mf) * da) / (kf - mf);
        (qa, da, qb, db) = (qb, db, qc, dc);
    }
    (qb, db)
}

/// Orthonormalization factor `sqrt((2n+1)/(4π) · (n-m)!/(n+m)!)`, with the
/// factorial ratio accumulated as a product to stay in range.
fn vsh_norm(n: usize, m: usize) -> f64 {
    let mut ratio = 1.0;
    for k in n - m + 1..=n + m {
        ratio *= k as f64;
    }
    ((2 * n + 1) as f64 / (4.0 * std::f64::consts::PI) / ratio).sqrt()
}

/// Evaluates `(Y_n^m, U_{n,m}, V_{n,m})` at a direction. Poles are exact
/// limits: the recurrence keeps `sin^{m-1} θ` factored, so nothing divides
/// by `sin θ`.
pub fn vsh(n: usize, m: i64, xhat: Direction) -> Result<VshEval> {
    if n == 0 {
        return Err(Error::Domain("harmonic order must be at least 1".into()));
    }
    if n > N_MAX_CAP {
        return Err(Error::Capacity(format!(
            "harmonic order {n} exceeds the cap {N_MAX_CAP}"
        )));
    }
    let am = m.unsigned_abs() as usize;
    if am > n {
        return Err(Error::Domain(format!("need |m| <= n, got m={m}, n={n}")));
    }
    let (theta, phi) = (xhat.theta(), xhat.phi());
    let (st, ct) = theta.sin_cos();
    let (q, dq) = qpoly(n, am, ct);
    let nrm = vsh_norm(n, am);
    let e = Complex64::from_polar(1.0, am as f64 * phi);
    let mut y = nrm * st.powi(am as i32) * q * e;
    // dY/dθ and (i m / sin θ)·Y, with sin^{|m|-1} θ kept factored.
    let (d_theta, d_phi) = if am >= 1 {
        let smm1 = st.powi(am as i32 - 1);
        (
            e * (nrm * (am as f64 * ct * smm1 * q - st.powi(am as i32 + 1) * dq)),
            e * Complex64::new(0.0, nrm * am as f64 * smm1 * q),
        )
    } else {
        (e * (-nrm * st * dq), Complex64::ZERO)
    };
    let (sp, cp) = phi.sin_cos();
    let that = [ct * cp, ct * sp, -st];
    let phat = [-sp, cp, 0.0];
    let s = 1.0 / ((n * (n + 1)) as f64).sqrt();
    let mut u = czero3();
    for k in 0..3 {
        u[k] = s * (d_theta * that[k] + d_phi * phat[k]);
    }
    if m < 0 {
        let sign = if am % 2 == 1 { -1.0 } else { 1.0 };
        y = sign * y.conj();
        for uk in &mut u {
            *uk = sign * uk.conj();
        }
    }
    let x = xhat.unit();
    let v = [
        x[1] * u[2] - x[2] * u[1],
        x[2] * u[0] - x[0] * u[2],
        x[0] * u[1] - x[1] * u[0],
    ];
    Ok(VshEval { n, m, y, u, v })
}

// ---------------------------------------------------------------------------
// Plane-wave multipole coefficients
// ---------------------------------------------------------------------------

/// The multipole coefficients `(a_{p,q}, b_{p,q})` of an incident field,
/// stored dense over `1 ≤ p ≤ n_max`, `|q| ≤ p`.
///
/// Built from a plane wave by [`plane_wave_coefficients`]; any other
/// incident field with known coefficients can be assembled directly via
/// [`PlaneWaveCoefficients::from_entries`] and fed to the same scattering
/// routines.
#[derive(Clone, Debug)]
pub struct PlaneWaveCoefficients {
    n_max: usize,
    background: Background,
    entries: Vec<(Complex64, Complex64)>,
}

impl PlaneWaveCoefficients {
    /// Wraps an explicit coefficient list, ordered `(p,q)` with `p`
    /// ascending and `q = -p..p`; the length must be `n_max(n_max+2)`.
    pub fn from_entries(
        n_max: usize,
        background: Background,
        entries: Vec<(Complex64, Complex64)>,
    ) -> Result<Self> {
        check_n_max(n_max)?;
        if entries.len() != n_max * (n_max + 2) {
            return Err(Error::Domain(format!(
                "coefficient list must have length {}, got {}",
                n_max * (n_max + 2),
                entries.len()
            )));
        }
        Ok(PlaneWaveCoefficients {
            n_max,
            background,
            entries,
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn background(&self) -> Background {
        self.background
    }

    fn index(&self, p: usize, q: i64) -> Result<usize> {
        if p < 1 || p > self.n_max || q.unsigned_abs() as usize > p {
            return Err(Error::Domain(format!(
                "no coefficient at (p, q) = ({p}, {q}) for n_max {}",
                self.n_max
            )));
        }
        Ok(p * p - 1 + (q + p as i64) as usize)
    }

    /// TE coefficient `a_{p,q}`.
    pub fn a(&self, p: usize, q: i64) -> Result<Complex64> {
        Ok(self.entries[self.index(p, q)?].0)
    }

    /// TM coefficient `b_{p,q}`.
    pub fn b(&self, p: usize, q: i64) -> Result<Complex64> {
        Ok(self.entries[self.index(p, q)?].1)
    }
}

fn check_n_max(n_max: usize) -> Result<()> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    if n_max > N_MAX_CAP {
        return Err(Error::Capacity(format!(
            "n_max {n_max} exceeds the cap {N_MAX_CAP}"
        )));
    }
    Ok(())
}

fn check_polarization(c: [f64; 3], khat: Direction) -> Result<()> {
    let cn = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    if !cn.is_finite() || cn < 1e-300 {
        return Err(Error::Domain(
            "polarization must be a nonzero finite vector".into(),
        ));
    }
    let k = khat.unit();
    let dot = c[0] * k[0] + c[1] * k[1] + c[2] * k[2];
    if dot.abs() > 1e-12 * cn {
        return Err(Error::Domain(format!(
            "polarization must be orthogonal to the incidence direction \
             (c·k̂ = {dot:.3e}, |c| = {cn:.3e})"
        )));
    }
    Ok(())
}

/// Multipole coefficients of the plane wave `c e^{i k_0 k̂·x}`.
///
/// Requires `c·k̂ = 0` (within `1e-12` relative) and `c ≠ 0`. The
/// coefficients do not depend on the frequency, only on `(c, k̂)` and the
/// background impedance.
pub fn plane_wave_coefficients(
    c: [f64; 3],
    khat: Direction,
    n_max: usize,
    background: Background,
) -> Result<PlaneWaveCoefficients> {
    check_n_max(n_max)?;
    check_polarization(c, khat)?;
    let imp = (background.eps / background.mu).sqrt();
    let mut entries = Vec::with_capacity(n_max * (n_max + 2));
    for p in 1..=n_max {
        let pref = ipow(p as i64)
            * Complex64::new(-4.0 * std::f64::consts::PI / ((p * (p + 1)) as f64).sqrt(), 0.0);
        for q in -(p as i64)..=p as i64 {
            let w = vsh(p, q, khat)?;
            let a = pref * dot_conj_real(&w.v, c);
            let b = pref * imp * dot_conj_real(&w.u, c);
            entries.push((a, b));
        }
    }
    PlaneWaveCoefficients::from_entries(n_max, background, entries)
}

// ---------------------------------------------------------------------------
// Multipole fields
// ---------------------------------------------------------------------------

/// Radial dependence of a multipole: regular (`j_p`-type, finite at the
/// origin) or outgoing (`h¹_p`-type, radiating).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadialKind {
    Regular,
    Outgoing,
}

/// The TE and TM multipole fields of order `(p, q)` at a point `x ≠ 0`:
///
/// `E^TE = -sqrt(p(p+1)) f_p(t) V`,
/// `E^TM = i sqrt(μ₀/ε₀) (1/t) [sqrt(p(p+1)) F_p(t) U + p(p+1) f_p(t) Y x̂]`,
///
/// with `t = k_0 |x|`, `f` the radial kind and `F` its Riccati combination.
pub fn multipole_field(
    kind: RadialKind,
    p: usize,
    q: i64,
    omega: f64,
    x: [f64; 3],
    background: Background,
) -> Result<(FieldVector, FieldVector)> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "frequency must be positive and finite, got {omega}"
        )));
    }
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let xhat = Direction::new(x)?;
    let k0 = omega * background.z();
    let t = k0 * r;
    let w = vsh(p, q, xhat)?;
    let be = sph_bessel(p, t)?;
    let (f, big_f) = match kind {
        RadialKind::Regular => (
            Complex64::new(be.j, 0.0),
            Complex64::new(be.riccati_j(), 0.0),
        ),
        RadialKind::Outgoing => (be.h1(), be.riccati_h()),
    };
    let spp = ((p * (p + 1)) as f64).sqrt();
    let mut ete = czero3();
    axpy(&mut ete, -spp * f, &w.v);
    let mut etm = czero3();
    let pref = Complex64::new(0.0, (background.mu / background.eps).sqrt()) / t;
    axpy(&mut etm, pref * spp * big_f, &w.u);
    let xv = xhat.unit();
    let radial = pref * (p * (p + 1)) as f64 * f * w.y;
    for k in 0..3 {
        etm[k] += radial * xv[k];
    }
    Ok((ete, etm))
}

/// The incident plane wave `c e^{i k_0 k̂·x}` itself.
pub fn incident_plane_wave(
    c: [f64; 3],
    khat: Direction,
    omega: f64,
    background: Background,
    x: [f64; 3],
) -> Result<FieldVector> {
    check_polarization(c, khat)?;
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "frequency must be positive and finite, got {omega}"
        )));
    }
    let k0 = omega * background.z();
    let k = khat.unit();
    let phase = Complex64::from_polar(1.0, k0 * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]));
    Ok([phase * c[0], phase * c[1], phase * c[2]])
}

/// Reconstructs the incident field from its multipole coefficients by
/// summing the regular multipoles. For plane-wave coefficients this
/// converges to `c e^{i k_0 k̂·x}` as `n_max` grows.
pub fn plane_wave_field(
    coeffs: &PlaneWaveCoefficients,
    omega: f64,
    x: [f64; 3],
) -> Result<FieldVector> {
    let mut tot = czero3();
    for p in 1..=coeffs.n_max {
        for q in -(p as i64)..=p as i64 {
            let (ete, etm) = multipole_field(RadialKind::Regular, p, q, omega, x, coeffs.background)?;
            axpy(&mut tot, coeffs.a(p, q)?, &ete);
            axpy(&mut tot, coeffs.b(p, q)?, &etm);
        }
    }
    Ok(tot)
}

// ---------------------------------------------------------------------------
// Scattering assembly
// ---------------------------------------------------------------------------

/// Modal coefficient pairs `(W_n^TE, W_n^TM)` for `n = 1..=n_max`.
fn modal_table(
    structure: &LayeredStructure,
    omega: f64,
    n_max: usize,
) -> Result<Vec<(Complex64, Complex64)>> {
    (1..=n_max)
        .map(|n| {
            Ok((
                modal_coefficient(structure, n, Polarization::TE, omega)?.value,
                modal_coefficient(structure, n, Polarization::TM, omega)?.value,
            ))
        })
        .collect()
}

/// Scattered field at `x` for a general incident multipole expansion.
///
/// Valid where the outgoing representation holds: in the homogeneous
/// background outside the scatterer (for vacuum-equivalent layers, down to
/// the core sphere).
pub fn scattered_field_from(
    structure: &LayeredStructure,
    omega: f64,
    coeffs: &PlaneWaveCoefficients,
    x: [f64; 3],
) -> Result<FieldVector> {
    let bg = structure.background();
    let cbg = coeffs.background();
    if bg.mu != cbg.mu || bg.eps != cbg.eps {
        return Err(Error::Domain(
            "incident coefficients were built for a different background".into(),
        ));
    }
    let k0 = omega * bg.z();
    let wtab = modal_table(structure, omega, coeffs.n_max)?;
    let mut tot = czero3();
    for p in 1..=coeffs.n_max {
        let (wte, wtm) = wtab[p - 1];
        let pref = Complex64::new(0.0, k0 / ((p * (p + 1)) as f64));
        for q in -(p as i64)..=p as i64 {
            let (ete, etm) = multipole_field(RadialKind::Outgoing, p, q, omega, x, bg)?;
            axpy(&mut tot, pref * coeffs.a(p, q)? * wte, &ete);
            axpy(&mut tot, pref * coeffs.b(p, q)? * wtm, &etm);
        }
    }
    Ok(tot)
}

/// Scattered field of a plane wave `c e^{i k_0 k̂·x}`.
pub fn scattered_field(
    structure: &LayeredStructure,
    omega: f64,
    c: [f64; 3],
    khat: Direction,
    x: [f64; 3],
    n_max: usize,
) -> Result<FieldVector> {
    let coeffs = plane_wave_coefficients(c, khat, n_max, structure.background())?;
    scattered_field_from(structure, omega, &coeffs, x)
}

/// Total field `E = E^i + E^s` of a plane wave, valid in the exterior
/// region.
pub fn total_field(
    structure: &LayeredStructure,
    omega: f64,
    c: [f64; 3],
    khat: Direction,
    x: [f64; 3],
    n_max: usize,
) -> Result<FieldVector> {
    let inc = incident_plane_wave(c, khat, omega, structure.background(), x)?;
    let sca = scattered_field(structure, omega, c, khat, x, n_max)?;
    Ok([inc[0] + sca[0], inc[1] + sca[1], inc[2] + sca[2]])
}

/// One evaluation of the scattering amplitude `A_∞(x̂)`.
#[derive(Clone, Debug)]
pub struct FarFieldSample {
    /// Incident polarization `c`.
    pub polarization: [f64; 3],
    /// Incidence direction `k̂`.
    pub incidence: Direction,
    /// Observation direction `x̂`.
    pub observation: Direction,
    /// `A_∞(x̂)`, tangent at `x̂`.
    pub amplitude: FieldVector,
    /// Norm of the `n = n_max` term relative to the full sum; a truncation
    /// diagnostic.
    pub tail: f64,
}

/// Per-direction amplitude with a shared modal table; returns the sum and
/// the norm of the last modal term.
fn amplitude_at(
    coeffs: &PlaneWaveCoefficients,
    wtab: &[(Complex64, Complex64)],
    k0: f64,
    background: Background,
    xhat: Direction,
) -> Result<(FieldVector, f64)> {
    let imp = (background.mu / background.eps).sqrt();
    let mut tot = czero3();
    let mut last = 0.0;
    for n in 1..=coeffs.n_max {
        let (wte, wtm) = wtab[n - 1];
        let pref = -ipow(-(n as i64)) * k0 / ((n * (n + 1)) as f64).sqrt();
        let mut term = czero3();
        for m in -(n as i64)..=n as i64 {
            let w = vsh(n, m, xhat)?;
            axpy(&mut term, pref * coeffs.a(n, m)? * wte, &w.v);
            axpy(&mut term, pref * coeffs.b(n, m)? * wtm * imp, &w.u);
        }
        last = field_norm(&term);
        for k in 0..3 {
            tot[k] += term[k];
        }
    }
    Ok((tot, last))
}

/// Scattering amplitude `A_∞(x̂)` of a plane wave, in the normalization
/// `E - E^i ~ (e^{i k_0 |x|}/(k_0 |x|)) A_∞(x̂)`:
///
/// `A_∞ = Σ_n (-i^{-n} k_0/sqrt(n(n+1))) Σ_m [a W^TE V + b W^TM sqrt(μ₀/ε₀) U]`.
pub fn scattering_amplitude(
    structure: &LayeredStructure,
    omega: f64,
    c: [f64; 3],
    khat: Direction,
    xhat: Direction,
    n_max: usize,
) -> Result<FarFieldSample> {
    let bg = structure.background();
    let coeffs = plane_wave_coefficients(c, khat, n_max, bg)?;
    let wtab = modal_table(structure, omega, n_max)?;
    let k0 = omega * bg.z();
    let (amplitude, last) = amplitude_at(&coeffs, &wtab, k0, bg, xhat)?;
    let tail = last / field_norm(&amplitude).max(f64::MIN_POSITIVE);
    Ok(FarFieldSample {
        polarization: c,
        incidence: khat,
        observation: xhat,
        amplitude,
        tail,
    })
}

/// Smallest order whose modal term falls below [`TAIL_TOL`] of the running
/// modal power, capped at [`N_MAX_CAP`]. The modal magnitudes decay like
/// `C^{2n}/n^{2n}` at fixed frequency, so the first order below threshold is
/// a sound truncation point.
pub fn suggest_n_max(structure: &LayeredStructure, omega: f64) -> Result<usize> {
    let mut total = 0.0;
    for n in 1..=N_MAX_CAP {
        let wte = modal_coefficient(structure, n, Polarization::TE, omega)?.value;
        let wtm = modal_coefficient(structure, n, Polarization::TM, omega)?.value;
        let term = (2 * n + 1) as f64 * (wte.norm() + wtm.norm());
        total += term;
        if n >= 2 && term <= TAIL_TOL * total {
            return Ok(n);
        }
    }
    Ok(N_MAX_CAP)
}

// ---------------------------------------------------------------------------
// Cross sections
// ---------------------------------------------------------------------------

/// Cross section by the modal sum,
/// `σ = Σ_{n,m} (|a W^TE|² + (μ₀/ε₀)|b W^TM|²)/(n(n+1))`,
/// which equals `(1/k_0²) ∫_S ‖A_∞‖² dσ` exactly (Parseval over the VSH
/// basis).
pub fn cross_section_modal(
    structure: &LayeredStructure,
    omega: f64,
    c: [f64; 3],
    khat: Direction,
    n_max: usize,
) -> Result<f64> {
    let bg = structure.background();
    let coeffs = plane_wave_coefficients(c, khat, n_max, bg)?;
    let wtab = modal_table(structure, omega, n_max)?;
    let imp2 = bg.mu / bg.eps;
    let mut sum = 0.0;
    for n in 1..=n_max {
        let (wte, wtm) = wtab[n - 1];
        let mut s = 0.0;
        for m in -(n as i64)..=n as i64 {
            s += (coeffs.a(n, m)? * wte).norm_sqr() + imp2 * (coeffs.b(n, m)? * wtm).norm_sqr();
        }
        sum += s / ((n * (n + 1)) as f64);
    }
    Ok(sum)
}

/// Cross section by quadrature of `‖A_∞‖²` over the sphere; must agree with
/// [`cross_section_modal`] to quadrature accuracy.
pub fn cross_section_quadrature(
    structure: &LayeredStructure,
    omega: f64,
    c: [f64; 3],
    khat: Direction,
    n_max: usize,
) -> Result<f64> {
    let bg = structure.background();
    let coeffs = plane_wave_coefficients(c, khat, n_max, bg)?;
    let wtab = modal_table(structure, omega, n_max)?;
    let k0 = omega * bg.z();
    let quad = sphere_quadrature(2 * n_max + 2, 4 * n_max + 4)?;
    let mut sum = 0.0;
    for &(theta, phi, weight) in &quad.points {
        let xhat = Direction::from_angles(theta, phi)?;
        let (a, _) = amplitude_at(&coeffs, &wtab, k0, bg, xhat)?;
        sum += weight * (a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr());
    }
    Ok(sum / (k0 * k0))
}

/// The scattering cross section `(1/k_0²) ∫_S ‖A_∞‖² dσ`, computed by the
/// modal sum (the exact route).
pub fn scattering_cross_section(
    structure: &LayeredStructure,
    omega: f64,
    c: [f64; 3],
    khat: Direction,
    n_max: usize,
) -> Result<f64> {
    cross_section_modal(structure, omega, c, khat, n_max)
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the three-term recurrence.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Domain("quadrature order must be at least 1".into()));
    }
    if n > 4096 {
        return Err(Error::Capacity(format!("quadrature order {n} is impractical")));
    }
    let legendre = |x: f64| -> (f64, f64) {
        // P_n(x) and P_{n-1}(x).
        let (mut pm, mut pc) = (1.0, x);
        for k in 2..=n {
            let kf = k as f64;
            let pn = ((2.0 * kf - 1.0) * x * pc - (kf - 1.0) * pm) / kf;
            (pm, pc) = (pc, pn);
        }
        (pc, pm)
    };
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (pn, pn1) = legendre(x);
            let dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (pn, pn1) = legendre(x);
        let dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    Ok((nodes, weights))
}

/// A product quadrature on the unit sphere: Gauss–Legendre in `cos θ`,
/// uniform trapezoid in `φ`. Weights sum to `4π`.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    /// `(θ, φ, weight)` triples.
    pub points: Vec<(f64, f64, f64)>,
}

pub fn sphere_quadrature(n_theta: usize, n_phi: usize) -> Result<SphereQuadrature> {
    if n_phi == 0 {
        return Err(Error::Domain("need at least one azimuthal node".into()));
    }
    let (xs, ws) = gauss_legendre(n_theta)?;
    let wphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let mut points = Vec::with_capacity(n_theta * n_phi);
    for (x, w) in xs.iter().zip(&ws) {
        let theta = x.clamp(-1.0, 1.0).acos();
        for k in 0..n_phi {
            points.push((theta, wphi * k as f64, w * wphi));
        }
    }
    Ok(SphereQuadrature { points })
}
