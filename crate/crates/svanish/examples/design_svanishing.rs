//! Gauss-Newton design of an order-1 S-vanishing structure: six layers
//! whose materials are tuned until the W_{1,0} coefficients of both
//! polarizations vanish, then a before/after comparison of |W_1(t)|.

use svanish::designer::{design, DesignProblem};
use svanish::multilayer::{modal_coefficient, Polarization};

fn main() -> svanish::Result<()> {
    let radii: Vec<f64> = (1..=7).map(|j| 2.0 - (j as f64 - 1.0) / 6.0).collect();
    let initial = vec![3.0, 6.0, 3.0, 6.0, 3.0, 6.0];
    let problem = DesignProblem::new(radii, 1, initial.clone(), initial);

    let result = design(&problem)?;
    println!(
        "stopped: {:?} after {} iterations, scaled residual {:.3e}",
        result.stop_reason,
        result.iterations,
        result.final_residual_norm()
    );
    println!("residual history:");
    for (k, r) in result.residual_norm_history.iter().enumerate() {
        println!("  iter {k:>2}: {r:.6e}");
    }
    println!("mu  = {:?}", result.mu.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>());
    println!("eps = {:?}", result.eps.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>());

    // Suppression relative to the starting structure at a small frequency.
    let designed = problem.structure(&result.mu, &result.eps)?;
    let start = problem.structure(&problem.initial_mu, &problem.initial_eps)?;
    let t = 0.01;
    println!();
    for pol in [Polarization::TE, Polarization::TM] {
        let before = modal_coefficient(&start, 1, pol, t)?.value.norm();
        let after = modal_coefficient(&designed, 1, pol, t)?.value.norm();
        println!(
            "{pol:?}: |W_1({t})| {before:.3e} -> {after:.3e}  (factor {:.1e})",
            before / after
        );
    }
    Ok(())
}
