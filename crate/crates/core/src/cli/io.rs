//! File formats: header-less square sample grids and exponent families.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use super::CliError;
use crate::ingham::ExponentFamily;
use crate::modes::SampleGrid;

/// Row `i`, column `j` holds `u(x_i, y_j)` with `x_i = iπ/(m+1)`.
pub fn read_grid(path: &Path) -> Result<SampleGrid, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| CliError::Parse {
                    line: i + 1,
                    message: format!("{}: not a number: {field:?}", path.display()),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let m = rows.len();
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
        return Err(CliError::validation(
            "grid",
            format!(
                "{}: expected a square grid, row {} has {} values for {m} rows",
                path.display(),
                i + 1,
                row.len()
            ),
        ));
    }
    SampleGrid::new(m, rows.concat()).map_err(|e| CliError::validation("grid", e.to_string()))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    omega_re: Vec<f64>,
    omega_im: Vec<f64>,
    r: Vec<f64>,
    #[serde(rename = "C_re")]
    c_re: Vec<f64>,
    #[serde(rename = "C_im")]
    c_im: Vec<f64>,
    #[serde(rename = "R")]
    r_coef: Vec<f64>,
    gamma: f64,
    tau: usize,
    theta: f64,
    mu: f64,
}

pub fn read_family(path: &Path) -> Result<ExponentFamily, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let file: FamilyFile = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        line: e.line(),
        message: format!("{}: {e}", path.display()),
    })?;
    if file.omega_re.len() != file.omega_im.len() || file.c_re.len() != file.c_im.len() {
        return Err(CliError::validation(
            "family",
            "real and imaginary parts have different lengths",
        ));
    }
    let zip =
        |re: &[f64], im: &[f64]| -> Vec<Complex64> { re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect() };
    ExponentFamily::new(
        zip(&file.omega_re, &file.omega_im),
        file.r,
        zip(&file.c_re, &file.c_im),
        file.r_coef,
        file.gamma,
        file.tau,
        file.theta,
        file.mu,
    )
    .map_err(|e| CliError::validation("family", e.to_string()))
}
