//! Total scattering cross sections over frequency for the bare PEC sphere
//! and for an order-1 designed coating, showing the low-frequency
//! suppression bought by cancelling the leading coefficient block.

use svanish::designer::{design, DesignProblem};
use svanish::farfield::{scattering_cross_section, suggest_n_max, Direction};
use svanish::io::log_grid;
use svanish::multilayer::{Background, LayeredStructure};

fn main() -> svanish::Result<()> {
    let bare = LayeredStructure::new(vec![2.0, 1.0], vec![1.0], vec![1.0], Background::VACUUM)?;

    let radii: Vec<f64> = (1..=7).map(|j| 2.0 - (j as f64 - 1.0) / 6.0).collect();
    let initial = vec![3.0, 6.0, 3.0, 6.0, 3.0, 6.0];
    let problem = DesignProblem::new(radii, 1, initial.clone(), initial);
    let result = design(&problem)?;
    let designed = problem.structure(&result.mu, &result.eps)?;

    let c = [1.0, 0.0, 0.0];
    println!("{:>10} {:>14} {:>14} {:>10}", "omega", "sigma_bare", "sigma_design", "ratio");
    for &omega in &log_grid(0.02, 0.5, 8)? {
        let nb = suggest_n_max(&bare, omega)?;
        let nd = suggest_n_max(&designed, omega)?;
        let sb = scattering_cross_section(&bare, omega, c, Direction::Z, nb)?;
        let sd = scattering_cross_section(&designed, omega, c, Direction::Z, nd)?;
        println!("{omega:>10.4} {sb:>14.6e} {sd:>14.6e} {:>10.2e}", sd / sb);
    }
    Ok(())
}
