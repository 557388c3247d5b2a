//! Oracle tests for the layered-sphere transfer-matrix solution.
//!
//! All-vacuum layer stacks must collapse to the bare PEC sphere's closed
//! forms; the static (omega -> 0) limit of the two-shell structure is
//! checked against exact rational values obtained from the textbook
//! electrostatic/magnetostatic solution (potential theory, solved in exact
//! arithmetic — completely independent of the wave solver); unitarity and
//! the radii/frequency scaling identity pin down the remaining structure.

use num_complex::Complex64;
use svanish::multilayer::{
    interface_matrix, layer_fields, modal_coefficient, normalized_coefficient,
    outgoing_amplitude, transfer_product, Background, LayeredStructure, Polarization,
};
use svanish::specfun::sph_bessel;
use svanish::Error;

const TE: Polarization = Polarization::TE;
const TM: Polarization = Polarization::TM;

fn vacuum_stack(layers: usize) -> LayeredStructure {
    let radii: Vec<f64> = (0..=layers)
        .map(|j| 2.0 - j as f64 / layers as f64)
        .collect();
    LayeredStructure::new(radii, vec![1.0; layers], vec![1.0; layers], Background::VACUUM).unwrap()
}

/// A fixed mildly contrasted 3-layer structure used by several tests.
fn contrast_stack() -> LayeredStructure {
    LayeredStructure::new(
        vec![2.0, 5.0 / 3.0, 4.0 / 3.0, 1.0],
        vec![2.5, 0.7, 4.0],
        vec![1.8, 3.2, 0.4],
        Background::VACUUM,
    )
    .unwrap()
}

#[test]
fn constructor_validation() {
    assert!(matches!(
        LayeredStructure::new(vec![2.0], vec![], vec![], Background::VACUUM),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        LayeredStructure::new(vec![1.0, 2.0], vec![1.0], vec![1.0], Background::VACUUM),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        LayeredStructure::new(vec![2.0, 1.0], vec![1.0, 1.0], vec![1.0], Background::VACUUM),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        LayeredStructure::new(vec![2.0, 1.0], vec![-1.0], vec![1.0], Background::VACUUM),
        Err(Error::Domain(_))
    ));
    let s = LayeredStructure::new(vec![3.0, 1.5], vec![1.0], vec![1.0], Background::VACUUM);
    assert!(s.unwrap().nonstandard_frame_note().is_some());
    assert!(vacuum_stack(2).nonstandard_frame_note().is_none());
}

#[test]
fn interface_matrix_entries_match_specfun() {
    let e = sph_bessel(1, 1.0).unwrap();
    let m = interface_matrix(1, TE, 1.0, 1.0, 1.0).unwrap();
    assert_eq!(m[0][0], Complex64::new(e.j, 0.0));
    assert_eq!(m[0][1], e.h1());
    assert_eq!(m[1][0], Complex64::new(e.riccati_j(), 0.0));
    assert_eq!(m[1][1], e.riccati_h());
}

#[test]
fn interface_matrix_determinant_is_cross_identity() {
    for (n, k, mu, r) in [(1usize, 1.3, 2.0, 1.7), (3, 0.4, 0.5, 2.0), (5, 2.2, 7.0, 0.9)] {
        let m = interface_matrix(n, TE, k, mu, r).unwrap();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let expect = Complex64::new(0.0, 1.0 / (k * r)) / mu;
        assert!(
            (det - expect).norm() <= 1e-13 * expect.norm(),
            "n={n}: {det} vs {expect}"
        );
    }
}

#[test]
fn tm_matrix_is_row_swapped_te_matrix_at_unit_material() {
    let te = interface_matrix(2, TE, 0.8, 1.0, 1.5).unwrap();
    let tm = interface_matrix(2, TM, 0.8, 1.0, 1.5).unwrap();
    assert_eq!(te[0], tm[1]);
    assert_eq!(te[1], tm[0]);
}

#[test]
fn vacuum_transfer_ratio_is_bare_pec_ratio() {
    // Any number of vacuum layers collapses to the PEC sphere of core
    // radius 1: p1/p2 = j_n(omega)/h1_n(omega) for TE.
    for layers in [1usize, 3, 6] {
        let s = vacuum_stack(layers);
        for omega in [0.5, 1.0, 2.0] {
            let e = sph_bessel(1, omega).unwrap();
            let (p1, p2) = transfer_product(&s, 1, TE, omega).unwrap();
            let want = Complex64::new(e.j, 0.0) / e.h1();
            let got = p1 / p2;
            assert!(
                (got - want).norm() <= 1e-12 * want.norm(),
                "L={layers}, omega={omega}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn bare_pec_closed_form() {
    // W_n^TE = -(i n(n+1)/k_0) * (-j_n(k_0)/h1_n(k_0)) and the TM analogue
    // with the Riccati pair, for the vacuum stack with core radius 1.
    let s = vacuum_stack(3);
    for n in 1..=6 {
        for omega in [0.5, 1.0, 2.0] {
            let e = sph_bessel(n, omega).unwrap();
            let pref = -Complex64::new(0.0, (n * (n + 1)) as f64 / omega);
            let want_te = pref * (-Complex64::new(e.j, 0.0) / e.h1());
            let got_te = modal_coefficient(&s, n, TE, omega).unwrap().value;
            assert!(
                (got_te - want_te).norm() <= 1e-12 * want_te.norm(),
                "TE n={n}, omega={omega}: {got_te} vs {want_te}"
            );
            let want_tm = pref * (-Complex64::new(e.riccati_j(), 0.0) / e.riccati_h());
            let got_tm = modal_coefficient(&s, n, TM, omega).unwrap().value;
            assert!(
                (got_tm - want_tm).norm() <= 1e-12 * want_tm.norm(),
                "TM n={n}, omega={omega}: {got_tm} vs {want_tm}"
            );
        }
    }
}

#[test]
fn static_limit_matches_exact_potential_theory() {
    // Two coating shells on radii [2, 3/2, 1]: the omega -> 0 limit of
    // a_0(structure)/a_0(bare PEC) equals an exact rational computed from
    // the electro/magnetostatic interface problem in exact arithmetic.
    // At omega = 1e-4 the finite-frequency correction is O(1e-8).
    let cases: [(Polarization, f64, f64, f64); 6] = [
        (TM, 4.0, 0.5, 53516.0 / 19265.0),
        (TM, 0.3, 7.0, -495424.0 / 1741147.0),
        (TM, 9.0, 2.0, 175531.0 / 33074.0),
        (TE, 4.0, 0.5, -115288.0 / 26777.0),
        (TE, 0.3, 7.0, 1158272.0 / 881983.0),
        (TE, 9.0, 2.0, -181519.0 / 19717.0),
    ];
    let omega = 1e-4;
    let bare = LayeredStructure::bare_pec(2.0, 1.0, Background::VACUUM).unwrap();
    for (pol, pa, pb, want) in cases {
        let (mu, eps) = match pol {
            Polarization::TE => (vec![pa, pb], vec![1.0, 1.0]),
            Polarization::TM => (vec![1.0, 1.0], vec![pa, pb]),
        };
        let s = LayeredStructure::new(vec![2.0, 1.5, 1.0], mu, eps, Background::VACUUM).unwrap();
        let ratio = outgoing_amplitude(&s, 1, pol, omega).unwrap()
            / outgoing_amplitude(&bare, 1, pol, omega).unwrap();
        assert!(
            (ratio.re - want).abs() <= 1e-7 * want.abs(),
            "{pol} ({pa}, {pb}): {} vs {want}",
            ratio.re
        );
    }
}

#[test]
fn unitarity_for_lossless_structures() {
    let structures = [vacuum_stack(1), vacuum_stack(6), contrast_stack()];
    for s in &structures {
        for pol in Polarization::BOTH {
            for n in 1..=6 {
                for omega in [0.5, 1.0, 2.0] {
                    let a0 = outgoing_amplitude(s, n, pol, omega).unwrap();
                    let u = (Complex64::new(1.0, 0.0) + 2.0 * a0).norm();
                    assert!(
                        (u - 1.0).abs() <= 1e-10,
                        "{pol} n={n}, omega={omega}: |1+2a0| = {u}"
                    );
                }
            }
        }
    }
}

#[test]
fn scaling_identity() {
    // Scaling every radius by rho at fixed t equals scaling the frequency
    // by rho: exact for a_0 and for the normalized coefficient t*W.
    let s = contrast_stack();
    for rho in [0.5, 0.1] {
        let scaled = s.scaled(rho).unwrap();
        for pol in Polarization::BOTH {
            for n in 1..=4 {
                for omega in [0.7, 1.9] {
                    let a = outgoing_amplitude(&scaled, n, pol, omega).unwrap();
                    let b = outgoing_amplitude(&s, n, pol, rho * omega).unwrap();
                    assert!(
                        (a - b).norm() <= 1e-12 * b.norm().max(1e-300),
                        "a0: {pol} n={n}, rho={rho}, omega={omega}"
                    );
                    let wa = normalized_coefficient(&scaled, n, pol, omega).unwrap();
                    let wb = normalized_coefficient(&s, n, pol, rho * omega).unwrap();
                    assert!(
                        (wa - wb).norm() <= 1e-12 * wb.norm().max(1e-300),
                        "t*W: {pol} n={n}, rho={rho}, omega={omega}"
                    );
                }
            }
        }
    }
}

#[test]
fn layer_fields_vacuum_and_consistency() {
    let s = vacuum_stack(4);
    let omega = 1.3;
    for pol in Polarization::BOTH {
        let lf = layer_fields(&s, 1, pol, omega).unwrap();
        assert_eq!(lf.pairs.len(), 5);
        assert!(lf.pec_residual <= 1e-10, "residual {}", lf.pec_residual);
        // No material contrast: every layer carries the background pair.
        let a0 = lf.outgoing_background();
        for (tilde, plain) in &lf.pairs {
            assert!((tilde - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
            assert!((plain - a0).norm() <= 1e-12 * a0.norm());
        }
        // Definitional consistency with the modal coefficient.
        let w = modal_coefficient(&s, 1, pol, omega).unwrap().value;
        let from_fields = -Complex64::new(0.0, 2.0 / omega) * a0;
        assert!((w - from_fields).norm() <= 1e-13 * w.norm());
    }
}

#[test]
fn layer_fields_contrast_closure() {
    let s = contrast_stack();
    for pol in Polarization::BOTH {
        for n in 1..=3 {
            for omega in [0.4, 1.0, 2.3] {
                let lf = layer_fields(&s, n, pol, omega).unwrap();
                assert!(
                    lf.pec_residual <= 1e-10,
                    "{pol} n={n}, omega={omega}: residual {}",
                    lf.pec_residual
                );
            }
        }
    }
}

#[test]
fn low_frequency_decay_slope() {
    // log-log slope of |t*W_n(t)| over t in [1e-3, 1e-2] is 2n+1 for
    // generic structures.
    let s = contrast_stack();
    for pol in Polarization::BOTH {
        for n in 1..=3 {
            let (t0, t1) = (1e-3, 1e-2);
            let w0 = normalized_coefficient(&s, n, pol, t0).unwrap().norm();
            let w1 = normalized_coefficient(&s, n, pol, t1).unwrap().norm();
            let slope = (w1.ln() - w0.ln()) / (t1.ln() - t0.ln());
            let want = (2 * n + 1) as f64;
            assert!(
                (slope - want).abs() <= 0.05,
                "{pol} n={n}: slope {slope} vs {want}"
            );
        }
    }
}

#[test]
fn transparent_layer_is_noop() {
    // Splitting a layer into two with identical materials cannot change W.
    let base = LayeredStructure::new(
        vec![2.0, 1.4, 1.0],
        vec![3.0, 0.6],
        vec![0.9, 5.0],
        Background::VACUUM,
    )
    .unwrap();
    let split = LayeredStructure::new(
        vec![2.0, 1.7, 1.4, 1.0],
        vec![3.0, 3.0, 0.6],
        vec![0.9, 0.9, 5.0],
        Background::VACUUM,
    )
    .unwrap();
    for pol in Polarization::BOTH {
        for n in 1..=3 {
            let a = modal_coefficient(&base, n, pol, 1.1).unwrap().value;
            let b = modal_coefficient(&split, n, pol, 1.1).unwrap().value;
            assert!((a - b).norm() <= 1e-12 * a.norm(), "{pol} n={n}");
        }
    }
}

#[test]
fn nonvacuum_background_consistency() {
    // A structure in background (mu0, eps0) with all layers equal to the
    // background is again a bare PEC sphere with k_0 = omega*sqrt(mu0 eps0).
    let bg = Background { mu: 2.0, eps: 3.0 };
    let s = LayeredStructure::new(vec![2.0, 1.5, 1.0], vec![2.0, 2.0], vec![3.0, 3.0], bg).unwrap();
    let omega = 0.8;
    let k0 = omega * bg.z();
    let e = sph_bessel(1, k0).unwrap();
    let want = -Complex64::new(0.0, 2.0 / k0) * (-Complex64::new(e.j, 0.0) / e.h1());
    let got = modal_coefficient(&s, 1, TE, omega).unwrap().value;
    assert!((got - want).norm() <= 1e-12 * want.norm());
}
