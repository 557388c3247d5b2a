//! Oracle tests for JSON schemas, CSV shapes, and grid helpers.

use svanish::designer::{design, DesignProblem};
use svanish::io::{
    cloak_csv, cloak_grid_radii, coeffs_from_json, coeffs_human_table, coeffs_to_json,
    design_to_json, farfield_csv, log_grid, structure_from_json, structure_hash,
    structure_to_json, wcoef_csv, xsection_csv, CoeffsDoc, DesignDoc, FarFieldRow, StructureDoc,
    COEFFS_SCHEMA, DESIGN_SCHEMA, STRUCTURE_SCHEMA,
};
use svanish::lowfreq::lowfreq_coefficients;
use svanish::multilayer::{Background, LayeredStructure, Polarization};
use svanish::Error;

use num_complex::Complex64;

fn sample() -> LayeredStructure {
    LayeredStructure::new(
        vec![2.0, 1.4, 1.0],
        vec![3.0, 0.8],
        vec![1.5, 4.0],
        Background { mu: 1.0, eps: 2.0 },
    )
    .unwrap()
}

#[test]
fn structure_json_round_trip() {
    let s = sample();
    let text = structure_to_json(&s);
    assert!(text.contains(STRUCTURE_SCHEMA));
    assert!(text.ends_with('\n'));
    let back = structure_from_json(&text).unwrap();
    assert_eq!(back, s);
}

#[test]
fn structure_schema_violations_name_the_field() {
    let good = structure_to_json(&sample());

    let wrong_schema = good.replace("svanish-structure/1", "svanish-structure/2");
    match structure_from_json(&wrong_schema) {
        Err(Error::Schema(msg)) => assert!(msg.contains("`schema`"), "{msg}"),
        other => panic!("expected schema error, got {other:?}"),
    }

    // Unknown fields are rejected by the parser.
    let extra = good.replace("\"radii\"", "\"bogus\": 1, \"radii\"");
    assert!(matches!(structure_from_json(&extra), Err(Error::Json(_))));

    // Wrong material count names the array.
    let doc = StructureDoc {
        schema: STRUCTURE_SCHEMA.into(),
        radii: vec![2.0, 1.0],
        mu: vec![1.0, 1.0],
        eps: vec![1.0],
        background: Background::VACUUM,
    };
    match doc.into_structure() {
        Err(Error::Schema(msg)) => assert!(msg.contains("`mu`"), "{msg}"),
        other => panic!("expected schema error, got {other:?}"),
    }

    let doc = StructureDoc {
        schema: STRUCTURE_SCHEMA.into(),
        radii: vec![1.0, 2.0],
        mu: vec![1.0],
        eps: vec![1.0],
        background: Background::VACUUM,
    };
    match doc.into_structure() {
        Err(Error::Schema(msg)) => assert!(msg.contains("`radii`"), "{msg}"),
        other => panic!("expected schema error, got {other:?}"),
    }

    let doc = StructureDoc {
        schema: STRUCTURE_SCHEMA.into(),
        radii: vec![2.0, 1.0],
        mu: vec![-1.0],
        eps: vec![1.0],
        background: Background::VACUUM,
    };
    assert!(matches!(doc.into_structure(), Err(Error::Schema(_))));
}

#[test]
fn coefficient_table_json_round_trip() {
    let table = lowfreq_coefficients(&sample(), 2).unwrap();
    let text = coeffs_to_json(&table);
    assert!(text.contains(COEFFS_SCHEMA));
    let back = coeffs_from_json(&text).unwrap();
    assert_eq!(back.order, table.order);
    assert_eq!(back.entries.len(), table.entries.len());
    for (a, b) in back.entries.iter().zip(&table.entries) {
        assert_eq!((a.n, a.l, a.polarization), (b.n, b.l, b.polarization));
        assert_eq!((a.re, a.im), (b.re, b.im));
    }

    let bad_pol = text.replace("\"TE\"", "\"XX\"");
    match coeffs_from_json(&bad_pol) {
        Err(Error::Schema(msg)) => assert!(msg.contains("`pol`"), "{msg}"),
        other => panic!("expected schema error, got {other:?}"),
    }

    let doc: CoeffsDoc = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.entries.len(), 2 * 3); // order 2: (1,0),(1,1),(2,0) per polarization
}

#[test]
fn design_document_embeds_the_final_structure() {
    let problem = DesignProblem::new(vec![2.0, 1.0], 1, vec![2.0], vec![2.0]);
    let result = design(&problem).unwrap();
    let text = design_to_json(&problem, &result).unwrap();
    assert!(text.contains(DESIGN_SCHEMA) && text.contains(STRUCTURE_SCHEMA));
    let doc: DesignDoc = serde_json::from_str(&text).unwrap();
    doc.check().unwrap();
    assert!(doc.converged);
    let s = doc.structure.into_structure().unwrap();
    assert_eq!(s.mu(), &result.mu[..]);
    assert_eq!(s.eps(), &result.eps[..]);
    assert_eq!(doc.residual_norm_history, result.residual_norm_history);
}

#[test]
fn log_grid_spacing_and_errors() {
    let g = log_grid(1e-3, 1.0, 7).unwrap();
    assert_eq!(g.len(), 7);
    assert!((g[0] - 1e-3).abs() <= 1e-18 && (g[6] - 1.0).abs() <= 1e-15);
    let ratio = g[1] / g[0];
    for w in g.windows(2) {
        assert!((w[1] / w[0] - ratio).abs() <= 1e-12 * ratio);
    }
    assert_eq!(log_grid(0.5, 0.5, 1).unwrap(), vec![0.5]);
    assert!(matches!(log_grid(0.0, 1.0, 5), Err(Error::Domain(_))));
    assert!(matches!(log_grid(2.0, 1.0, 5), Err(Error::Domain(_))));
    assert!(matches!(log_grid(1.0, 2.0, 0), Err(Error::Domain(_))));
}

#[test]
fn csv_headers_and_shapes() {
    let w = wcoef_csv(&[(1e-3, 1, Polarization::TE, Complex64::new(2e-9, -1e-12))]);
    let mut lines = w.lines();
    assert_eq!(lines.next().unwrap(), "t,n,pol,re_w,im_w,abs_w");
    let row = lines.next().unwrap();
    assert!(row.starts_with("0.001,1,TE,2e-9,-1e-12,"));

    let x = xsection_csv(&[(1.0, 2.5), (2.0, 0.125)]);
    assert_eq!(x, "omega,sigma\n1,2.5\n2,0.125\n");

    let f = farfield_csv(&[FarFieldRow {
        theta: 0.5,
        phi: 1.5,
        amplitude: [
            Complex64::new(1.0, -2.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(3.0, 0.0),
        ],
    }]);
    assert_eq!(
        f,
        "theta,phi,re_a1,re_a2,re_a3,im_a1,im_a2,im_a3\n0.5,1.5,1,0,3,-2,0.5,0\n"
    );

    let s = LayeredStructure::new(vec![2.0, 1.0], vec![2.0], vec![3.0], Background::VACUUM).unwrap();
    let t = svanish::cloakmap::push_forward(&s, 0.2, [1.2, 0.0, 0.0]).unwrap();
    let c = cloak_csv(&[t]);
    let mut lines = c.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x1,x2,x3,mu11,mu12,mu13,mu22,mu23,mu33,eps11,eps12,eps13,eps22,eps23,eps33"
    );
    assert_eq!(lines.next().unwrap().split(',').count(), 15);
}

#[test]
fn structure_hash_is_stable_and_sensitive() {
    let s = sample();
    let h1 = structure_hash(&s);
    let h2 = structure_hash(&sample());
    assert_eq!(h1, h2);
    assert_eq!(h1.len(), 64);
    assert!(h1.chars().all(|c| c.is_ascii_hexdigit()));
    let other = LayeredStructure::new(
        vec![2.0, 1.4, 1.0],
        vec![3.0, 0.8000001],
        vec![1.5, 4.0],
        Background { mu: 1.0, eps: 2.0 },
    )
    .unwrap();
    assert_ne!(h1, structure_hash(&other));
}

#[test]
fn cloak_grid_avoids_interfaces() {
    let radii: Vec<f64> = (1..=7).map(|j| 2.0 - (j as f64 - 1.0) / 6.0).collect();
    let s = LayeredStructure::new(
        radii.clone(),
        vec![1.0; 6],
        vec![1.0; 6],
        Background::VACUUM,
    )
    .unwrap();
    let grid = cloak_grid_radii(&s, 0.1, 40, 2.4);
    assert_eq!(grid.len(), 40);
    let mut seams = vec![1.0, 1.5, 2.0];
    for &r in &radii[1..radii.len() - 1] {
        seams.push(0.5 + r / 2.0);
    }
    for &g in &grid {
        assert!(g > 1.0 && g < 2.4);
        for &b in &seams {
            assert!((g - b).abs() > 1e-10 * b, "grid point {g} sits on seam {b}");
        }
        svanish::cloakmap::push_forward(&s, 0.1, [g, 0.0, 0.0]).unwrap();
    }
}

#[test]
fn human_table_lists_every_pair_once() {
    let table = lowfreq_coefficients(&sample(), 2).unwrap();
    let text = coeffs_human_table(&table);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 3); // header + (1,0),(1,1),(2,0)
    assert!(lines[0].contains("W_TE"));
    assert!(lines[1].trim_start().starts_with('1'));
}
