//! The blow-up diffeomorphism and the push-forward of layer materials into
//! anisotropic cloak tensors.
//!
//! `F_ρ` (for `0 < ρ < 1/2`) expands the ball of radius `ρ` to the unit
//! ball while fixing everything outside radius 2:
//!
//! * `|x| ≥ 2`: identity;
//! * `2ρ ≤ |x| ≤ 2`: `((3-4ρ)/(2(1-ρ)) + |x|/(4(1-ρ))) x̂`;
//! * `ρ ≤ |x| ≤ 2ρ`: `(1/2 + |x|/(2ρ)) x̂`;
//! * `|x| ≤ ρ`: `x/ρ`.
//!
//! The pieces agree at the seams (`ρ ↦ 1`, `2ρ ↦ 3/2`, `2 ↦ 2`), and each
//! is affine in the radius, so the inverse is closed-form.
//!
//! A layered structure in the standard frame (outer radius 2, core radius
//! 1), shrunk by `Ψ_{1/ρ}` to live in `[ρ, 2ρ]` and pushed forward through
//! `F_ρ`, becomes a graded anisotropic coating on `1 ≤ |y| ≤ 3/2` with a
//! PEC wall at `|y| = 1`; the transformation rule is
//! `(F_*α)(y) = DF(x) α(x) DFᵀ(x) / det DF(x)` at `x = F⁻¹(y)`. For the
//! radial map `DF = f'(r) x̂x̂ᵀ + (f(r)/r)(I - x̂x̂ᵀ)`, so a scalar `α`
//! pushes to eigenvalues `α f' r²/f²` (radial) and `α/f'` (tangential).
//!
//! No anisotropic Maxwell solver is included: the cloak's far field equals
//! that of the `ρ`-scaled isotropic structure by the change-of-variables
//! identity, and that equivalent problem is what the rest of the crate
//! solves. The tensors here are the export artifact.

use nalgebra::Matrix3;

use crate::multilayer::LayeredStructure;
use crate::{Error, Result};

/// Relative tolerance for "on an interface sphere" rejection in
/// [`push_forward`].
const INTERFACE_TOL: f64 = 1e-12;

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho < 0.5) || !rho.is_finite() {
        return Err(Error::Domain(format!(
            "blow-up parameter must lie in (0, 1/2), got {rho}"
        )));
    }
    Ok(())
}

fn norm3(v: [f64; 3]) -> Result<f64> {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if !r.is_finite() {
        return Err(Error::Domain(format!("point must be finite, got {v:?}")));
    }
    Ok(r)
}

/// Radial profile `(f(r), f'(r))` of `F_ρ`; the piece at a seam radius is
/// the inner one (half-open pieces `[·, ·)` going outward), which matters
/// only for `f'` — `f` itself is continuous.
pub fn radial_profile(rho: f64, r: f64) -> Result<(f64, f64)> {
    check_rho(rho)?;
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "radius must be non-negative and finite, got {r}"
        )));
    }
    Ok(if r < rho {
        (r / rho, 1.0 / rho)
    } else if r < 2.0 * rho {
        (0.5 + r / (2.0 * rho), 1.0 / (2.0 * rho))
    } else if r < 2.0 {
        let d = 4.0 * (1.0 - rho);
        ((2.0 * (3.0 - 4.0 * rho) + r) / d, 1.0 / d)
    } else {
        (r, 1.0)
    })
}

/// The blow-up map `F_ρ(x)`.
pub fn blow_up_map(rho: f64, x: [f64; 3]) -> Result<[f64; 3]> {
    let r = norm3(x)?;
    if r >= 2.0 {
        check_rho(rho)?;
        return Ok(x);
    }
    if r == 0.0 {
        check_rho(rho)?;
        return Ok([0.0; 3]);
    }
    let (f, _) = radial_profile(rho, r)?;
    let s = f / r;
    Ok([s * x[0], s * x[1], s * x[2]])
}

/// The exact piecewise inverse `F_ρ^{-1}(y)`.
pub fn inverse_map(rho: f64, y: [f64; 3]) -> Result<[f64; 3]> {
    check_rho(rho)?;
    let s = norm3(y)?;
    if s >= 2.0 {
        return Ok(y);
    }
    let r = if s < 1.0 {
        s * rho
    } else if s < 1.5 {
        (s - 0.5) * 2.0 * rho
    } else {
        s * 4.0 * (1.0 - rho) - 2.0 * (3.0 - 4.0 * rho)
    };
    if s == 0.0 {
        return Ok([0.0; 3]);
    }
    let scale = r / s;
    Ok([scale * y[0], scale * y[1], scale * y[2]])
}

/// The Jacobian `DF_ρ(x) = f'(r) x̂x̂ᵀ + (f(r)/r)(I − x̂x̂ᵀ)`; at the origin
/// the innermost piece is linear, `DF = I/ρ`.
pub fn jacobian(rho: f64, x: [f64; 3]) -> Result<Matrix3<f64>> {
    check_rho(rho)?;
    let r = norm3(x)?;
    if r == 0.0 {
        return Ok(Matrix3::identity() / rho);
    }
    let (f, fp) = radial_profile(rho, r)?;
    let xhat = nalgebra::Vector3::new(x[0] / r, x[1] / r, x[2] / r);
    let proj = xhat * xhat.transpose();
    Ok(proj * fp + (Matrix3::identity() - proj) * (f / r))
}

/// Anisotropic material tensors at one exterior point of the cloak.
#[derive(Clone, Debug)]
pub struct MaterialTensorField {
    /// Evaluation point `y`.
    pub point: [f64; 3],
    /// Pushed-forward permeability tensor.
    pub mu_tensor: Matrix3<f64>,
    /// Pushed-forward permittivity tensor.
    pub eps_tensor: Matrix3<f64>,
}

/// Pushed-forward cloak tensors at `y`: the structure is shrunk by `ρ`
/// (material at `x` read from the structure at `|x|/ρ`) and transformed by
/// `F_ρ`.
///
/// Requires the standard frame (outer radius 2, core radius 1), `|y| > 1`
/// (the unit ball is the cloaked region), and `y` off the interface
/// spheres, where the tensors jump; grid exporters sample points nudged off
/// interfaces. For `|y| ≥ 2` the map is the identity and the background
/// scalars are returned exactly.
pub fn push_forward(
    structure: &LayeredStructure,
    rho: f64,
    y: [f64; 3],
) -> Result<MaterialTensorField> {
    check_rho(rho)?;
    let radii = structure.radii();
    if (structure.outer_radius() - 2.0).abs() > 1e-12 || (structure.core_radius() - 1.0).abs() > 1e-12
    {
        return Err(Error::Domain(format!(
            "the blow-up construction needs the standard frame with outer radius 2 \
             and core radius 1, got outer {} and core {}",
            structure.outer_radius(),
            structure.core_radius()
        )));
    }
    let s = norm3(y)?;
    let bg = structure.background();
    if s >= 2.0 {
        return Ok(MaterialTensorField {
            point: y,
            mu_tensor: Matrix3::identity() * bg.mu,
            eps_tensor: Matrix3::identity() * bg.eps,
        });
    }
    if s <= 1.0 {
        return Err(Error::Domain(format!(
            "|y| = {s} lies in the cloaked region (PEC wall at |y| = 1)"
        )));
    }
    // Interface spheres: the map seam at 3/2, the PEC wall at 1, and the
    // images 1/2 + r_j/2 of the layer interfaces.
    let mut seams = vec![1.0, 1.5];
    for &r in &radii[1..radii.len() - 1] {
        seams.push(0.5 + r / 2.0);
    }
    for b in seams {
        if (s - b).abs() <= INTERFACE_TOL * b {
            return Err(Error::Domain(format!(
                "|y| = {s} lies on the interface sphere {b}; sample off-interface"
            )));
        }
    }
    let x = inverse_map(rho, y)?;
    let r = norm3(x)?;
    let (f, fp) = radial_profile(rho, r)?;
    let (mu_s, eps_s) = if s > 1.5 {
        (bg.mu, bg.eps)
    } else {
        // Material of the shrunk structure: look up |x|/ρ in the design
        // frame.
        let u = r / rho;
        let mut found = None;
        for j in 0..structure.num_layers() {
            if u < radii[j] && u > radii[j + 1] {
                found = Some((structure.mu()[j], structure.eps()[j]));
                break;
            }
        }
        found.ok_or_else(|| {
            Error::Domain(format!(
                "preimage radius {u} does not fall inside any layer; \
                 this indicates an interface hit that escaped the seam check"
            ))
        })?
    };
    let xhat = nalgebra::Vector3::new(x[0] / r, x[1] / r, x[2] / r);
    let proj = xhat * xhat.transpose();
    let tangential = Matrix3::identity() - proj;
    let lam_radial = fp * r * r / (f * f);
    let lam_tangential = 1.0 / fp;
    let shape = proj * lam_radial + tangential * lam_tangential;
    Ok(MaterialTensorField {
        point: y,
        mu_tensor: shape * mu_s,
        eps_tensor: shape * eps_s,
    })
}
