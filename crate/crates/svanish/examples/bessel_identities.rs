//! Spherical Bessel evaluations and their exactness witnesses: the
//! Wronskian `j_n y_n' - j_n' y_n = 1/t^2` and the cross identity
//! `j_n H_n - h1_n J_n = i/t` that underpin every transfer matrix.

use num_complex::Complex64;
use svanish::specfun::sph_bessel;

fn main() -> svanish::Result<()> {
    println!("{:>3} {:>8} {:>13} {:>13} {:>11} {:>11}", "n", "t", "j_n", "y_n", "wronskian", "cross");
    for n in [1usize, 2, 5, 8] {
        for t in [0.1, 1.0, 10.0] {
            let e = sph_bessel(n, t)?;
            let wronskian = (e.j * e.yp - e.jp * e.y) * t * t - 1.0;
            let cross = (e.j * e.riccati_h() - e.h1() * e.riccati_j()) * t - Complex64::i();
            println!(
                "{:>3} {:>8} {:>13.4e} {:>13.4e} {:>11.2e} {:>11.2e}",
                n,
                t,
                e.j,
                e.y,
                wronskian.abs(),
                cross.norm()
            );
        }
    }
    Ok(())
}
