//! Browser entry points. Each takes plain numbers and returns a flat
//! `Float64Array`, so the page needs no glue beyond the generated module.

use ansec::corr::{build_correlation, CorrelationSpec};
use ansec::numerics::QuadratureSpec;
use ansec::rate::{ExactRateModel, SystemConfig};
use ansec::wishart::{pdf_table, WishartModel};
use wasm_bindgen::prelude::*;

fn js(e: ansec::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Eigenvalues of the receive correlation matrix, largest first.
#[wasm_bindgen]
pub fn correlation_eigenvalues(
    antennas: usize,
    spacing: f64,
    aoa_deg: f64,
    ras_deg: f64,
) -> Result<Vec<f64>, JsError> {
    let r = build_correlation(&CorrelationSpec::new(antennas, spacing, aoa_deg, ras_deg))
        .map_err(js)?;
    Ok(r.spectrum().to_vec())
}

/// Density of the `k`-th largest eigenvalue of `H H†` (`H` is
/// `antennas × b`) on `points` equispaced abscissae up to four times its
/// mean, interleaved as `x0, f0, x1, f1, ...`.
#[wasm_bindgen]
pub fn eigen_pdf(
    antennas: usize,
    b: usize,
    spacing: f64,
    aoa_deg: f64,
    ras_deg: f64,
    k: usize,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    let r = build_correlation(&CorrelationSpec::new(antennas, spacing, aoa_deg, ras_deg))
        .map_err(js)?;
    let model = WishartModel::from_correlation(&r, b).map_err(js)?;
    let x_hi = 4.0 * model.mean(k, &QuadratureSpec::default()).map_err(js)?;
    let table = pdf_table(&model, k, x_hi, points).map_err(js)?;
    Ok(table.into_iter().flat_map(|(x, p)| [x, p]).collect())
}

/// Exact ergodic secrecy rate in bits per channel use for every SNR in
/// `snr_db`, with the reference arrays at both receivers.
#[wasm_bindgen]
pub fn secrecy_vs_snr(
    t: usize,
    r: usize,
    e: usize,
    s1: usize,
    snr_db: &[f64],
) -> Result<Vec<f64>, JsError> {
    let mut config = SystemConfig::reference();
    config.t = t;
    config.r = r;
    config.e = e;
    config.bob = config.bob.with_antennas(r);
    config.eve = config.eve.with_antennas(e);
    let config = config.with_s1(s1);
    config.validate().map_err(js)?;
    let model = ExactRateModel::new(&config).map_err(js)?;
    let quad = QuadratureSpec::default();
    snr_db
        .iter()
        .map(|&db| {
            let c = config.with_snr_db(db);
            model
                .breakdown(s1, c.rho(), &quad)
                .map(|b| b.secrecy_rate)
                .map_err(js)
        })
        .collect()
}
