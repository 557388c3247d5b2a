//! Low-frequency coefficient block W_{n,l} for n + l <= 2, extracted by
//! running the transfer-matrix composition over truncated Laurent series.
//! These are the quantities the designer drives to zero.

use svanish::io::coeffs_human_table;
use svanish::lowfreq::lowfreq_coefficients;
use svanish::multilayer::{Background, LayeredStructure};

fn main() -> svanish::Result<()> {
    let structure = LayeredStructure::new(
        vec![2.0, 1.4, 1.0],
        vec![3.0, 0.8],
        vec![1.5, 4.0],
        Background::VACUUM,
    )?;
    let table = lowfreq_coefficients(&structure, 2)?;
    print!("{}", coeffs_human_table(&table));

    // W_n(t) ~ W_{n,0} t^{2n} at the leading order; check n = 1 numerically.
    let t = 1e-3;
    let w10 = table.get(1, 0, svanish::multilayer::Polarization::TE).unwrap();
    let direct = svanish::multilayer::modal_coefficient(
        &structure,
        1,
        svanish::multilayer::Polarization::TE,
        t,
    )?;
    println!();
    println!(
        "leading-order check at t = {t}: W_{{1,0}} t^2 = {:.6e}, direct W_1 = {:.6e}",
        w10.re * t * t,
        direct.value.re
    );
    Ok(())
}
