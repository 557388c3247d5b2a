//! Scattering-suppression design: drive the low-frequency coefficient block
//! `{W_{n,l} : n + l <= N}` of a layered structure to zero over the layer
//! materials with a projected Gauss–Newton iteration.
//!
//! The residual is the canonical coefficient vector of
//! [`crate::lowfreq::lowfreq_coefficients`], with each component divided by
//! the magnitude of the corresponding coefficient of the all-vacuum-layer
//! (bare PEC) structure so that every target is O(1) at the start. For
//! lossless layered structures the coefficients are real in exact
//! arithmetic; the residual keeps the real parts and surfaces any imaginary
//! part above rounding dust as an error instead of silently discarding it.
//!
//! Each iteration solves `J step = r` in the minimum-norm least-squares
//! sense through an SVD pseudoinverse (relative rank cutoff 1e-12), clamps
//! the update into the box bounds, and backtracks the damping by halves up
//! to 20 times, accepting only a strict residual decrease. A parameter
//! pinned at a bound whose gradient pushes outward has its Jacobian column
//! zeroed, so the step cannot burn effort on an inactive direction.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lowfreq::{lowfreq_coefficients, CoefficientTable};
use crate::multilayer::{Background, LayeredStructure};
use crate::{Error, Result};

/// Relative tolerance on the imaginary parts of the (structurally real)
/// scaled coefficients; anything larger indicates a numerical problem and
/// is reported, not ignored.
const IMAG_DUST_TOL: f64 = 1e-8;

/// Optional random-restart configuration. Restarts draw uniform parameter
/// vectors inside the bounds from a counter-based generator, so a recorded
/// seed reproduces the run exactly.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MultiStart {
    pub restarts: usize,
    pub seed: u64,
}

/// An S-vanishing design problem: fixed radii and background, material
/// parameters of `L` layers as unknowns, coefficient block of order `N` as
/// targets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DesignProblem {
    pub radii: Vec<f64>,
    pub background: Background,
    pub order: usize,
    pub initial_mu: Vec<f64>,
    pub initial_eps: Vec<f64>,
    pub bounds: (f64, f64),
    pub max_iters: usize,
    pub residual_tol: f64,
    pub step_damping: f64,
    pub multistart: Option<MultiStart>,
}

impl DesignProblem {
    /// Problem with the default solver settings: bounds (0.1, 10), at most
    /// 200 iterations, residual tolerance 1e-10, undamped first step.
    pub fn new(
        radii: Vec<f64>,
        order: usize,
        initial_mu: Vec<f64>,
        initial_eps: Vec<f64>,
    ) -> Self {
        DesignProblem {
            radii,
            background: Background::VACUUM,
            order,
            initial_mu,
            initial_eps,
            bounds: (0.1, 10.0),
            max_iters: 200,
            residual_tol: 1e-10,
            step_damping: 1.0,
            multistart: None,
        }
    }

    pub fn num_layers(&self) -> usize {
        self.radii.len().saturating_sub(1)
    }

    /// Number of scalar targets: the coefficient block has `N(N+1)/2`
    /// entries per polarization.
    pub fn residual_dim(&self) -> usize {
        self.order * (self.order + 1)
    }

    /// More targets than the `2L` material unknowns; allowed, with
    /// least-squares semantics.
    pub fn is_overdetermined(&self) -> bool {
        self.residual_dim() > 2 * self.num_layers()
    }

    fn validate(&self) -> Result<()> {
        let ell = self.num_layers();
        if ell == 0 {
            return Err(Error::Domain("problem needs at least one layer".into()));
        }
        if self.order == 0 {
            return Err(Error::Domain("order must be at least 1".into()));
        }
        if self.initial_mu.len() != ell || self.initial_eps.len() != ell {
            return Err(Error::Domain(format!(
                "initial parameters must have length {ell}, got mu={}, eps={}",
                self.initial_mu.len(),
                self.initial_eps.len()
            )));
        }
        let (lo, hi) = self.bounds;
        if !(lo > 0.0 && lo < hi) {
            return Err(Error::Domain(format!(
                "bounds must satisfy 0 < lower < upper, got ({lo}, {hi})"
            )));
        }
        if self
            .initial_mu
            .iter()
            .chain(&self.initial_eps)
            .any(|p| *p < lo || *p > hi)
        {
            return Err(Error::Domain(
                "initial parameters must lie within the bounds".into(),
            ));
        }
        if !(self.step_damping > 0.0 && self.step_damping <= 1.0) {
            return Err(Error::Domain(format!(
                "step damping must be in (0, 1], got {}",
                self.step_damping
            )));
        }
        if !(self.residual_tol > 0.0) {
            return Err(Error::Domain("residual tolerance must be positive".into()));
        }
        // Structure validation (radii ordering etc.) happens on first build.
        self.structure(&self.initial_mu, &self.initial_eps)?;
        Ok(())
    }

    /// The layered structure at the given material parameters.
    pub fn structure(&self, mu: &[f64], eps: &[f64]) -> Result<LayeredStructure> {
        LayeredStructure::new(
            self.radii.clone(),
            mu.to_vec(),
            eps.to_vec(),
            self.background,
        )
    }

    /// Per-component scales: magnitudes of the all-vacuum-layer coefficient
    /// block in canonical order.
    fn scales(&self) -> Result<Vec<f64>> {
        let ell = self.num_layers();
        let vacuum = LayeredStructure::new(
            self.radii.clone(),
            vec![self.background.mu; ell],
            vec![self.background.eps; ell],
            self.background,
        )?;
        let table = lowfreq_coefficients(&vacuum, self.order)?;
        Ok(table
            .values()
            .iter()
            .map(|v| {
                let s = v.norm();
                if s > 1e-300 {
                    s
                } else {
                    1.0
                }
            })
            .collect())
    }
}

/// Why the iteration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    /// Residual norm at or below the tolerance.
    Converged,
    /// No damping level produced a strict decrease, or the accepted step
    /// was below resolution.
    Stalled,
    /// Iteration budget exhausted.
    MaxIters,
}

/// Outcome of a design run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DesignResult {
    pub mu: Vec<f64>,
    pub eps: Vec<f64>,
    /// Scaled residual norms of the accepted iterates, starting with the
    /// initial point; non-increasing by construction.
    pub residual_norm_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub stop_reason: StopReason,
    /// Coefficient table of the final structure (unscaled values).
    pub table: CoefficientTable,
}

impl DesignResult {
    pub fn final_residual_norm(&self) -> f64 {
        *self.residual_norm_history.last().unwrap()
    }
}

/// Scaled real residual vector at the given parameters, in canonical
/// coefficient order. Errors if any imaginary part exceeds rounding dust.
pub fn residual(problem: &DesignProblem, mu: &[f64], eps: &[f64]) -> Result<DVector<f64>> {
    let scales = problem.scales()?;
    residual_scaled(problem, mu, eps, &scales)
}

fn residual_scaled(
    problem: &DesignProblem,
    mu: &[f64],
    eps: &[f64],
    scales: &[f64],
) -> Result<DVector<f64>> {
    let structure = problem.structure(mu, eps)?;
    let table = lowfreq_coefficients(&structure, problem.order)?;
    let mut out = DVector::zeros(scales.len());
    for (k, (value, scale)) in table.values().iter().zip(scales).enumerate() {
        let scaled = value / scale;
        if scaled.im.abs() > IMAG_DUST_TOL * scaled.norm().max(1.0) {
            return Err(Error::Solver(format!(
                "coefficient {k} has non-negligible imaginary part {:.3e} (scaled)",
                scaled.im
            )));
        }
        out[k] = scaled.re;
    }
    Ok(out)
}

/// Central-difference Jacobian of the scaled residual; steps that would
/// leave the bounds are clamped, degrading gracefully to one-sided
/// differences at the box faces. Columns ordered `mu_1..mu_L, eps_1..eps_L`.
pub fn jacobian(problem: &DesignProblem, mu: &[f64], eps: &[f64]) -> Result<DMatrix<f64>> {
    let scales = problem.scales()?;
    jacobian_scaled(problem, mu, eps, &scales)
}

fn jacobian_scaled(
    problem: &DesignProblem,
    mu: &[f64],
    eps: &[f64],
    scales: &[f64],
) -> Result<DMatrix<f64>> {
    let ell = problem.num_layers();
    let dim = scales.len();
    let (lo, hi) = problem.bounds;
    let mut params: Vec<f64> = mu.iter().chain(eps.iter()).copied().collect();
    let mut jac = DMatrix::zeros(dim, 2 * ell);
    for jcol in 0..2 * ell {
        let p0 = params[jcol];
        let h = 1e-6 * p0.abs().max(1.0);
        let pp = (p0 + h).min(hi);
        let pm = (p0 - h).max(lo);
        let denom = pp - pm;
        if denom <= 0.0 {
            return Err(Error::Solver(format!(
                "degenerate finite-difference interval at parameter {jcol}"
            )));
        }
        params[jcol] = pp;
        let rp = residual_scaled(problem, &params[..ell], &params[ell..], scales)?;
        params[jcol] = pm;
        let rm = residual_scaled(problem, &params[..ell], &params[ell..], scales)?;
        params[jcol] = p0;
        jac.set_column(jcol, &((rp - rm) / denom));
    }
    Ok(jac)
}

fn clamp_params(params: &mut [f64], lo: f64, hi: f64) {
    for p in params {
        *p = p.clamp(lo, hi);
    }
}

struct SingleRun {
    params: Vec<f64>,
    history: Vec<f64>,
    iterations: usize,
    stop_reason: StopReason,
}

fn design_from(
    problem: &DesignProblem,
    initial: &[f64],
    scales: &[f64],
) -> Result<SingleRun> {
    let ell = problem.num_layers();
    let (lo, hi) = problem.bounds;
    let mut params = initial.to_vec();
    clamp_params(&mut params, lo, hi);
    let mut r = residual_scaled(problem, &params[..ell], &params[ell..], scales)?;
    let mut rn = r.norm();
    if !rn.is_finite() {
        return Err(Error::Solver("non-finite residual at initial point".into()));
    }
    let mut history = vec![rn];
    let mut iterations = 0;
    let mut stop_reason = StopReason::MaxIters;
    for _ in 0..problem.max_iters {
        if rn <= problem.residual_tol {
            stop_reason = StopReason::Converged;
            break;
        }
        let mut jac = jacobian_scaled(problem, &params[..ell], &params[ell..], scales)?;
        if jac.iter().any(|v| !v.is_finite()) {
            return Err(Error::Solver("non-finite Jacobian entry".into()));
        }
        // Projected Gauss-Newton: a parameter at a bound whose negative
        // gradient points outward is frozen for this step.
        let grad = jac.transpose() * &r;
        for j in 0..2 * ell {
            let at_lo = params[j] <= lo && grad[j] > 0.0;
            let at_hi = params[j] >= hi && grad[j] < 0.0;
            if at_lo || at_hi {
                jac.set_column(j, &DVector::zeros(scales.len()));
            }
        }
        let svd = jac.svd(true, true);
        let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
        if smax <= 0.0 {
            stop_reason = StopReason::Stalled;
            break;
        }
        let step = svd
            .solve(&r, 1e-12 * smax)
            .map_err(|e| Error::Solver(format!("pseudoinverse solve failed: {e}")))?;
        // Backtracking on the damping: keep the best candidate, accept only
        // a strict decrease.
        let mut best: Option<(Vec<f64>, DVector<f64>, f64)> = None;
        for k in 0..=20 {
            let lambda = problem.step_damping / f64::powi(2.0, k);
            let mut cand = params.clone();
            for j in 0..2 * ell {
                cand[j] -= lambda * step[j];
            }
            clamp_params(&mut cand, lo, hi);
            let rc = residual_scaled(problem, &cand[..ell], &cand[ell..], scales)?;
            let rcn = rc.norm();
            if rcn.is_finite() && best.as_ref().is_none_or(|b| rcn < b.2) {
                best = Some((cand, rc, rcn));
            }
            if best.as_ref().is_some_and(|b| b.2 < rn) {
                break;
            }
        }
        let Some((cand, rc, rcn)) = best else {
            return Err(Error::Solver("all backtracking candidates non-finite".into()));
        };
        if rcn >= rn {
            stop_reason = StopReason::Stalled;
            break;
        }
        let moved = params
            .iter()
            .zip(&cand)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        params = cand;
        r = rc;
        rn = rcn;
        history.push(rn);
        iterations += 1;
        if moved < 1e-14 {
            stop_reason = StopReason::Stalled;
            break;
        }
    }
    let _ = r;
    if rn <= problem.residual_tol {
        stop_reason = StopReason::Converged;
    }
    Ok(SingleRun {
        params,
        history,
        iterations,
        stop_reason,
    })
}

/// Runs the design iteration (and optional random restarts) and returns the
/// best result found. Deterministic: the same problem yields bitwise the
/// same history.
pub fn design(problem: &DesignProblem) -> Result<DesignResult> {
    problem.validate()?;
    let ell = problem.num_layers();
    let scales = problem.scales()?;
    let initial: Vec<f64> = problem
        .initial_mu
        .iter()
        .chain(&problem.initial_eps)
        .copied()
        .collect();
    let mut best = design_from(problem, &initial, &scales)?;
    if let Some(ms) = problem.multistart {
        let (lo, hi) = problem.bounds;
        let mut rng = ChaCha8Rng::seed_from_u64(ms.seed);
        for _ in 0..ms.restarts {
            let start: Vec<f64> = (0..2 * ell).map(|_| rng.random_range(lo..=hi)).collect();
            let run = design_from(problem, &start, &scales)?;
            let run_rn = *run.history.last().unwrap();
            let best_rn = *best.history.last().unwrap();
            let run_conv = run.stop_reason == StopReason::Converged;
            let best_conv = best.stop_reason == StopReason::Converged;
            if (run_conv && !best_conv) || (run_conv == best_conv && run_rn < best_rn) {
                best = run;
            }
        }
    }
    let mu = best.params[..ell].to_vec();
    let eps = best.params[ell..].to_vec();
    let structure = problem.structure(&mu, &eps)?;
    let table = lowfreq_coefficients(&structure, problem.order)?;
    Ok(DesignResult {
        mu,
        eps,
        converged: best.stop_reason == StopReason::Converged,
        residual_norm_history: best.history,
        iterations: best.iterations,
        stop_reason: best.stop_reason,
        table,
    })
}
