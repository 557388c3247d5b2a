//! Anisotropic cloak materials from the blow-up map: the layered design is
//! shrunk by rho and pushed forward, producing tensors on the coating
//! 1 < |y| < 3/2 whose eigenvalues collapse linearly in rho while the
//! stretched shell 3/2 < |y| < 2 develops the strong anisotropy.

use svanish::cloakmap::{blow_up_map, inverse_map, push_forward};
use svanish::multilayer::{Background, LayeredStructure};

fn main() -> svanish::Result<()> {
    let radii: Vec<f64> = (1..=7).map(|j| 2.0 - (j as f64 - 1.0) / 6.0).collect();
    let structure = LayeredStructure::new(
        radii,
        vec![3.0, 6.0, 3.0, 6.0, 3.0, 6.0],
        vec![3.0, 6.0, 3.0, 6.0, 3.0, 6.0],
        Background::VACUUM,
    )?;
    let rho = 0.1;

    let y = [1.25, 0.0, 0.0];
    let x = inverse_map(rho, y)?;
    let back = blow_up_map(rho, x)?;
    println!("forward/inverse: |y| = {} -> |x| = {} -> {}", y[0], x[0], back[0]);
    println!();

    println!("{:>6} {:>12} {:>12} {:>10}", "|y|", "mu_radial", "mu_tangent", "ratio");
    for s in [1.05, 1.2, 1.4, 1.6, 1.9, 2.5] {
        let t = push_forward(&structure, rho, [s, 0.0, 0.0])?;
        // With y on the x-axis the tensor is diagonal: radial eigenvalue
        // first, the tangential pair after.
        let radial = t.mu_tensor[(0, 0)];
        let tangent = t.mu_tensor[(1, 1)];
        println!(
            "{s:>6.2} {radial:>12.6} {tangent:>12.6} {:>10.3}",
            tangent.max(radial) / tangent.min(radial)
        );
    }
    Ok(())
}
