//! Modal scattering coefficients |W_n| of a six-layer structure over a
//! log-spaced frequency grid, printed as CSV. The low-frequency tail shows
//! the 2n leading power of W (2n+1 after the 1/k_0 prefactor is removed).

use svanish::io::{log_grid, wcoef_csv};
use svanish::multilayer::{modal_coefficient, Background, LayeredStructure, Polarization};

fn main() -> svanish::Result<()> {
    let radii: Vec<f64> = (1..=7).map(|j| 2.0 - (j as f64 - 1.0) / 6.0).collect();
    let structure = LayeredStructure::new(
        radii,
        vec![3.0, 6.0, 3.0, 6.0, 3.0, 6.0],
        vec![3.0, 6.0, 3.0, 6.0, 3.0, 6.0],
        Background::VACUUM,
    )?;

    let scale = structure.background().z() * structure.core_radius();
    let mut rows = Vec::new();
    for &t in &log_grid(1e-3, 1.0, 16)? {
        for n in 1..=2usize {
            for pol in [Polarization::TE, Polarization::TM] {
                let w = modal_coefficient(&structure, n, pol, t / scale)?;
                rows.push((t, n, pol, w.value));
            }
        }
    }
    print!("{}", wcoef_csv(&rows));
    Ok(())
}
