//! Scattering of an x-polarized plane wave travelling along z: multipole
//! decomposition of the incident wave, near-field reconstruction check, and
//! the far-field amplitude on a small direction fan.

use num_complex::Complex64;
use svanish::farfield::{
    incident_plane_wave, plane_wave_coefficients, plane_wave_field, scattering_amplitude,
    Direction,
};
use svanish::multilayer::{Background, LayeredStructure};

fn main() -> svanish::Result<()> {
    let structure = LayeredStructure::new(
        vec![2.0, 1.4, 1.0],
        vec![3.0, 0.8],
        vec![1.5, 4.0],
        Background::VACUUM,
    )?;
    let omega = 1.0;
    let c = [1.0, 0.0, 0.0];
    let khat = Direction::Z;

    // The multipole expansion reproduces the plane wave in the near zone.
    let coeffs = plane_wave_coefficients(c, khat, 12, structure.background())?;
    let x = [0.4, -0.2, 0.3];
    let e_exact = incident_plane_wave(c, khat, omega, structure.background(), x)?;
    let e_series = plane_wave_field(&coeffs, omega, x)?;
    let err: f64 = (0..3)
        .map(|i| (e_exact[i] - e_series[i]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    println!("plane-wave reconstruction error at {x:?}: {err:.2e}");
    println!();

    println!("{:>8} {:>12} {:>12}", "theta", "|A|", "|A . xhat|");
    for k in 0..=6 {
        let theta = std::f64::consts::PI * k as f64 / 6.0;
        let xhat = Direction::from_angles(theta, 0.3)?;
        let sample = scattering_amplitude(&structure, omega, c, khat, xhat, 10)?;
        let norm: f64 = sample.amplitude.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let u = xhat.unit();
        let radial: Complex64 = (0..3).map(|i| sample.amplitude[i] * u[i]).sum();
        println!("{theta:>8.4} {norm:>12.6} {:>12.2e}", radial.norm());
    }
    Ok(())
}
