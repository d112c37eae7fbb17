//! Plain-text `(x, f_k(x))` tables, one file per eigenvalue index.

use std::io::Write;
use std::path::{Path, PathBuf};

use ansec::corr::{build_correlation, CorrelationSpec};
use ansec::numerics::QuadratureSpec;
use ansec::wishart::{pdf_table, WishartModel};

use crate::error::CliResult;
use crate::sweep::sig9;

#[derive(Debug, Clone, Copy)]
pub struct PdfDumpSpec {
    pub corr: CorrelationSpec,
    /// Free-side dimension.
    pub b: usize,
    pub points: usize,
    /// Upper end of the table; `None` picks four times the mean of `λ_1`.
    pub x_max: Option<f64>,
}

/// Writes `pdf_k{k}.txt` for `k = 1..=min(a, b)` into `dir` and returns the
/// paths in order.
pub fn pdf_dump(spec: &PdfDumpSpec, dir: &Path, quad: &QuadratureSpec) -> CliResult<Vec<PathBuf>> {
    let model = WishartModel::from_correlation(&build_correlation(&spec.corr)?, spec.b)?;
    let x_hi = match spec.x_max {
        Some(x) => x,
        None => 4.0 * model.mean(1, quad)?,
    };
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for k in 1..=model.params().n() {
        let table = pdf_table(&model, k, x_hi, spec.points)?;
        let path = dir.join(format!("pdf_k{k}.txt"));
        let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
        writeln!(f, "# a={} b={} k={k}", spec.corr.antennas, spec.b)?;
        writeln!(f, "# x pdf")?;
        for (x, p) in table {
            writeln!(f, "{} {}", sig9(x), sig9(p))?;
        }
        f.flush()?;
        paths.push(path);
    }
    Ok(paths)
}
