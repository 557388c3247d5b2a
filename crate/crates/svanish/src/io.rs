//! Versioned JSON documents and deterministic CSV export.
//!
//! Every document carries a `schema` string of the form `name/major`;
//! readers accept exactly the majors they know and reject everything else
//! with an error naming the offending field. Floating-point values are
//! printed with Rust's shortest round-trip formatting, so identical inputs
//! produce byte-identical files.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::designer::{DesignProblem, DesignResult};
use crate::lowfreq::CoefficientTable;
use crate::multilayer::{Background, LayeredStructure, Polarization};
use crate::{Error, Result};

/// Schema tag for layered-structure documents.
pub const STRUCTURE_SCHEMA: &str = "svanish-structure/1";
/// Schema tag for low-frequency coefficient tables.
pub const COEFFS_SCHEMA: &str = "svanish-coeffs/1";
/// Schema tag for design problem/result documents.
pub const DESIGN_SCHEMA: &str = "svanish-design/1";

/// Shortest round-trip decimal, switching to exponent form outside
/// `[1e-4, 1e16)` so extreme magnitudes stay compact.
fn fmt_float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn check_schema(found: &str, want: &str) -> Result<()> {
    if found == want {
        return Ok(());
    }
    Err(Error::Schema(format!(
        "field `schema`: expected \"{want}\", found \"{found}\""
    )))
}

/// Serialized form of a [`LayeredStructure`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDoc {
    pub schema: String,
    /// Interface radii, strictly decreasing, outer first.
    pub radii: Vec<f64>,
    pub mu: Vec<f64>,
    pub eps: Vec<f64>,
    pub background: Background,
}

impl StructureDoc {
    pub fn from_structure(s: &LayeredStructure) -> Self {
        StructureDoc {
            schema: STRUCTURE_SCHEMA.to_string(),
            radii: s.radii().to_vec(),
            mu: s.mu().to_vec(),
            eps: s.eps().to_vec(),
            background: s.background(),
        }
    }

    /// Validate and build the structure, mapping constructor complaints to
    /// schema errors that name the field.
    pub fn into_structure(self) -> Result<LayeredStructure> {
        check_schema(&self.schema, STRUCTURE_SCHEMA)?;
        if self.radii.len() < 2 || self.radii.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Schema(
                "field `radii`: need at least two strictly decreasing radii".into(),
            ));
        }
        if self.radii.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
            return Err(Error::Schema(
                "field `radii`: radii must be positive and finite".into(),
            ));
        }
        for (name, v) in [("mu", &self.mu), ("eps", &self.eps)] {
            if v.len() != self.radii.len() - 1 {
                return Err(Error::Schema(format!(
                    "field `{name}`: expected {} entries for {} radii, found {}",
                    self.radii.len() - 1,
                    self.radii.len(),
                    v.len()
                )));
            }
            if v.iter().any(|&x| !(x > 0.0) || !x.is_finite() ) {
                return Err(Error::Schema(format!(
                    "field `{name}`: material parameters must be positive and finite"
                )));
            }
        }
        if !(self.background.mu > 0.0) || !(self.background.eps > 0.0) {
            return Err(Error::Schema(
                "field `background`: background parameters must be positive".into(),
            ));
        }
        LayeredStructure::new(self.radii, self.mu, self.eps, self.background)
            .map_err(|e| Error::Schema(format!("structure document invalid: {e}")))
    }
}

/// Parse a structure document from JSON text.
pub fn structure_from_json(text: &str) -> Result<LayeredStructure> {
    let doc: StructureDoc = serde_json::from_str(text)?;
    doc.into_structure()
}

/// Serialize a structure to pretty JSON (with trailing newline).
pub fn structure_to_json(s: &LayeredStructure) -> String {
    let mut out = serde_json::to_string_pretty(&StructureDoc::from_structure(s)).unwrap();
    out.push('\n');
    out
}

/// Hex SHA-256 of the compact canonical serialization; used to tie CSV
/// sidecars back to the structure they were computed from.
pub fn structure_hash(s: &LayeredStructure) -> String {
    let compact = serde_json::to_string(&StructureDoc::from_structure(s)).unwrap();
    let digest = Sha256::digest(compact.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Serialized form of a [`CoefficientTable`]: array of `{n, l, pol, re, im}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffsDoc {
    pub schema: String,
    pub order: usize,
    pub entries: Vec<CoeffEntryDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffEntryDoc {
    pub n: usize,
    pub l: usize,
    pub pol: String,
    pub re: f64,
    pub im: f64,
}

impl CoeffsDoc {
    pub fn from_table(table: &CoefficientTable) -> Self {
        CoeffsDoc {
            schema: COEFFS_SCHEMA.to_string(),
            order: table.order,
            entries: table
                .entries
                .iter()
                .map(|e| CoeffEntryDoc {
                    n: e.n,
                    l: e.l,
                    pol: match e.polarization {
                        Polarization::TE => "TE".to_string(),
                        Polarization::TM => "TM".to_string(),
                    },
                    re: e.re,
                    im: e.im,
                })
                .collect(),
        }
    }

    pub fn into_table(self) -> Result<CoefficientTable> {
        check_schema(&self.schema, COEFFS_SCHEMA)?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in self.entries {
            let polarization = match e.pol.as_str() {
                "TE" => Polarization::TE,
                "TM" => Polarization::TM,
                other => {
                    return Err(Error::Schema(format!(
                        "field `pol`: expected \"TE\" or \"TM\", found \"{other}\""
                    )))
                }
            };
            entries.push(crate::lowfreq::CoefficientEntry {
                n: e.n,
                l: e.l,
                polarization,
                re: e.re,
                im: e.im,
            });
        }
        Ok(CoefficientTable {
            order: self.order,
            entries,
        })
    }
}

/// Serialize a coefficient table to pretty JSON (with trailing newline).
pub fn coeffs_to_json(table: &CoefficientTable) -> String {
    let mut out = serde_json::to_string_pretty(&CoeffsDoc::from_table(table)).unwrap();
    out.push('\n');
    out
}

/// Parse a coefficient table from JSON text.
pub fn coeffs_from_json(text: &str) -> Result<CoefficientTable> {
    let doc: CoeffsDoc = serde_json::from_str(text)?;
    doc.into_table()
}

/// Fixed-width human-readable rendering of a coefficient table, one row per
/// `(n, l)` with TE and TM side by side.
pub fn coeffs_human_table(table: &CoefficientTable) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>3} {:>3} {:>24} {:>24}\n",
        "n", "l", "W_TE(n,l)", "W_TM(n,l)"
    ));
    for n in 1..=table.order {
        for l in 0..=(table.order - n) {
            let te = table.get(n, l, Polarization::TE).unwrap_or_default();
            let tm = table.get(n, l, Polarization::TM).unwrap_or_default();
            out.push_str(&format!(
                "{:>3} {:>3} {:>24.16e} {:>24.16e}\n",
                n, l, te.re, tm.re
            ));
        }
    }
    out
}

/// Full design record: problem, trajectory summary, final materials, and the
/// final structure embedded as its own document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignDoc {
    pub schema: String,
    pub problem: DesignProblem,
    pub converged: bool,
    pub stop_reason: crate::designer::StopReason,
    pub iterations: usize,
    pub residual_norm_history: Vec<f64>,
    pub mu: Vec<f64>,
    pub eps: Vec<f64>,
    pub structure: StructureDoc,
    pub table: CoeffsDoc,
}

impl DesignDoc {
    pub fn from_run(problem: &DesignProblem, result: &DesignResult) -> Result<Self> {
        let structure = problem.structure(&result.mu, &result.eps)?;
        Ok(DesignDoc {
            schema: DESIGN_SCHEMA.to_string(),
            problem: problem.clone(),
            converged: result.converged,
            stop_reason: result.stop_reason,
            iterations: result.iterations,
            residual_norm_history: result.residual_norm_history.clone(),
            mu: result.mu.clone(),
            eps: result.eps.clone(),
            structure: StructureDoc::from_structure(&structure),
            table: CoeffsDoc::from_table(&result.table),
        })
    }

    pub fn check(&self) -> Result<()> {
        check_schema(&self.schema, DESIGN_SCHEMA)
    }
}

/// Serialize a design run to pretty JSON (with trailing newline).
pub fn design_to_json(problem: &DesignProblem, result: &DesignResult) -> Result<String> {
    let mut out = serde_json::to_string_pretty(&DesignDoc::from_run(problem, result)?).unwrap();
    out.push('\n');
    Ok(out)
}

/// Sidecar metadata written next to far-field CSV exports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FarFieldSidecar {
    pub omega: f64,
    /// Polarization vector as `[re, im]` pairs.
    pub c: [[f64; 2]; 3],
    pub khat: [f64; 3],
    pub n_max: usize,
    pub structure_sha256: String,
}

/// Sidecar metadata written next to cloak-tensor CSV exports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CloakSidecar {
    pub rho: f64,
    pub structure_sha256: String,
}

/// Pretty JSON with trailing newline for any serializable sidecar.
pub fn sidecar_to_json<T: Serialize>(sidecar: &T) -> String {
    let mut out = serde_json::to_string_pretty(sidecar).unwrap();
    out.push('\n');
    out
}

/// Inclusive log-spaced grid from `tmin` to `tmax` with `count` points.
pub fn log_grid(tmin: f64, tmax: f64, count: usize) -> Result<Vec<f64>> {
    if !(tmin > 0.0) || !(tmax >= tmin) || !tmin.is_finite() || !tmax.is_finite() {
        return Err(Error::Domain(format!(
            "log grid needs 0 < tmin <= tmax, got [{tmin}, {tmax}]"
        )));
    }
    if count == 0 {
        return Err(Error::Domain("log grid needs at least one point".into()));
    }
    if count == 1 {
        return Ok(vec![tmin]);
    }
    let (la, lb) = (tmin.ln(), tmax.ln());
    Ok((0..count)
        .map(|i| {
            if i == 0 {
                tmin
            } else if i == count - 1 {
                tmax
            } else {
                (la + (lb - la) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

/// One far-field sample destined for CSV.
#[derive(Clone, Debug)]
pub struct FarFieldRow {
    pub theta: f64,
    pub phi: f64,
    pub amplitude: [Complex64; 3],
}

/// CSV with columns `theta,phi,re_a1..re_a3,im_a1..im_a3`.
pub fn farfield_csv(rows: &[FarFieldRow]) -> String {
    let mut out = String::from("theta,phi,re_a1,re_a2,re_a3,im_a1,im_a2,im_a3\n");
    for r in rows {
        let a = &r.amplitude;
        let cells = [
            r.theta, r.phi, a[0].re, a[1].re, a[2].re, a[0].im, a[1].im, a[2].im,
        ];
        let row: Vec<String> = cells.iter().map(|&v| fmt_float(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// CSV of modal coefficients over a `t` grid, long format: one row per
/// `(t, n, polarization)`.
pub fn wcoef_csv(rows: &[(f64, usize, Polarization, Complex64)]) -> String {
    let mut out = String::from("t,n,pol,re_w,im_w,abs_w\n");
    for &(t, n, pol, w) in rows {
        let pol = match pol {
            Polarization::TE => "TE",
            Polarization::TM => "TM",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_float(t),
            n,
            pol,
            fmt_float(w.re),
            fmt_float(w.im),
            fmt_float(w.norm())
        ));
    }
    out
}

/// CSV with columns `omega,sigma` (total scattering cross sections).
pub fn xsection_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("omega,sigma\n");
    for &(omega, sigma) in rows {
        out.push_str(&format!("{},{}\n", fmt_float(omega), fmt_float(sigma)));
    }
    out
}

/// CSV of pushed-forward tensors: point coordinates, then the six distinct
/// entries of each symmetric tensor.
pub fn cloak_csv(fields: &[crate::cloakmap::MaterialTensorField]) -> String {
    let mut out = String::from(
        "x1,x2,x3,mu11,mu12,mu13,mu22,mu23,mu33,eps11,eps12,eps13,eps22,eps23,eps33\n",
    );
    for f in fields {
        let p = f.point;
        let m = &f.mu_tensor;
        let e = &f.eps_tensor;
        let cells = [
            p[0],
            p[1],
            p[2],
            m[(0, 0)],
            m[(0, 1)],
            m[(0, 2)],
            m[(1, 1)],
            m[(1, 2)],
            m[(2, 2)],
            e[(0, 0)],
            e[(0, 1)],
            e[(0, 2)],
            e[(1, 1)],
            e[(1, 2)],
            e[(2, 2)],
        ];
        let row: Vec<String> = cells.iter().map(|&v| fmt_float(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Radial sample values in `(1, limit)` for cloak-tensor grids, each nudged
/// off the interface spheres of the given structure by one part in 1e9 of
/// the interface radius.
pub fn cloak_grid_radii(structure: &LayeredStructure, rho: f64, count: usize, limit: f64) -> Vec<f64> {
    let mut seams = vec![1.0, 1.5, 2.0];
    let radii = structure.radii();
    for &r in &radii[1..radii.len() - 1] {
        seams.push(0.5 + r / 2.0);
    }
    let _ = rho; // the seam set in y-space is rho-independent
    let lo = 1.0 + (limit - 1.0) / (count as f64 + 1.0);
    (0..count)
        .map(|i| {
            let mut s = lo + (limit - 1.0) * i as f64 / (count as f64 + 1.0);
            for &b in &seams {
                if (s - b).abs() <= 1e-9 * b {
                    s = b * (1.0 + 1e-9);
                }
            }
            s
        })
        .collect()
}
