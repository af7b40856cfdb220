//! Browser demo: analyze a pasted matrix, simulate one, or combine many
//! synthetic matrices into a joint posterior. Each export returns a JSON
//! string that `www/index.html` plots.

use rankability::inference::{
    joint_posterior, posterior_grid, summarize, summarize_degenerate, thresholds, PdfGrid,
};
use rankability::io::MatrixFile;
use rankability::sim::{derive_seed, generate_matrix, GeneratorConfig};
use rankability::{optimal_rankings_truncated, slater_spectrum, Limits, ResultMatrix};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest matrix the page will analyze; keeps the tab responsive.
pub const DEMO_MAX_OBJECTS: usize = 16;
const LISTED_RANKINGS: usize = 20;

#[derive(Debug, Serialize)]
pub struct Curve {
    pub p: Vec<f64>,
    pub density: Vec<f64>,
}

impl From<PdfGrid> for Curve {
    fn from(g: PdfGrid) -> Self {
        Curve {
            p: g.p_values,
            density: g.density,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub m: usize,
    pub t: u64,
    pub spectrum: String,
    pub s_hat: u64,
    pub a_s_hat: String,
    pub lambda: Option<f64>,
    pub lambda_th: Option<f64>,
    pub sigma_sign: &'static str,
    pub mode: f64,
    pub mode_status: &'static str,
    pub mean: f64,
    pub mean_tilde: f64,
    pub rankings: Vec<Vec<String>>,
    pub rankings_total: String,
    pub curve: Curve,
    pub csv: String,
}

#[derive(Debug, Serialize)]
pub struct JointAnalysis {
    pub modes: Vec<f64>,
    pub s_hats: Vec<u64>,
    pub mode: f64,
    pub mode_status: &'static str,
    pub mean: f64,
    pub lambda_joint: f64,
    pub curve: Curve,
}

fn check_size(m: usize) -> Result<(), String> {
    if m > DEMO_MAX_OBJECTS {
        return Err(format!(
            "the demo is limited to {} objects, got {}",
            DEMO_MAX_OBJECTS, m
        ));
    }
    Ok(())
}

fn sign_name(sign: std::cmp::Ordering) -> &'static str {
    match sign {
        std::cmp::Ordering::Less => "negative",
        std::cmp::Ordering::Equal => "zero",
        std::cmp::Ordering::Greater => "positive",
    }
}

fn analyze_file(file: &MatrixFile, grid_points: usize) -> Result<Analysis, String> {
    let w = &file.matrix;
    check_size(w.len())?;
    let spectrum = slater_spectrum(w).map_err(|e| e.to_string())?;
    let summary = summarize(&spectrum).map_err(|e| e.to_string())?;
    let degenerate = summarize_degenerate(&spectrum).map_err(|e| e.to_string())?;
    let set = optimal_rankings_truncated(w, LISTED_RANKINGS, &Limits::default())
        .map_err(|e| e.to_string())?;
    let labels = file.labels();
    let grid = posterior_grid(&spectrum, grid_points).map_err(|e| e.to_string())?;
    Ok(Analysis {
        m: w.len(),
        t: w.total(),
        spectrum: spectrum.to_decimal_string(),
        s_hat: spectrum.s_hat(),
        a_s_hat: spectrum.a_s_hat().to_string(),
        lambda: summary.lambda,
        lambda_th: thresholds(w.total()).ok().map(|t| t.lambda_th),
        sigma_sign: sign_name(summary.sigma_sign),
        mode: summary.mode.mode,
        mode_status: summary.mode.status.as_str(),
        mean: summary.mean,
        mean_tilde: degenerate.mean_tilde,
        rankings: set
            .rankings
            .iter()
            .map(|r| r.as_slice().iter().map(|&i| labels[i].clone()).collect())
            .collect(),
        rankings_total: set.count.to_string(),
        curve: grid.into(),
        csv: file.to_csv_string(),
    })
}

/// Analysis of a CSV matrix (optional label header, `#` comments).
pub fn analyze_text(text: &str, grid_points: usize) -> Result<Analysis, String> {
    let file = MatrixFile::parse_str(text).map_err(|e| e.to_string())?;
    analyze_file(&file, grid_points)
}

/// Generates one matrix with `k` comparisons per pair and analyzes it.
pub fn simulate_one(
    m: usize,
    k: u64,
    p: f64,
    seed: u64,
    grid_points: usize,
) -> Result<Analysis, String> {
    check_size(m)?;
    let w = generate_matrix(&GeneratorConfig::uniform(m, k, p, seed)).map_err(|e| e.to_string())?;
    analyze_file(&MatrixFile::new(w), grid_points)
}

/// Joint posterior of `l` synthetic matrices.
pub fn joint_synthetic(
    m: usize,
    k: u64,
    p: f64,
    l: usize,
    seed: u64,
    grid_points: usize,
) -> Result<JointAnalysis, String> {
    check_size(m)?;
    if l == 0 {
        return Err("at least one matrix is needed".into());
    }
    let matrices: Vec<ResultMatrix> = (0..l)
        .map(|i| {
            generate_matrix(&GeneratorConfig::uniform(
                m,
                k,
                p,
                derive_seed(seed, i as u64),
            ))
        })
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let spectra = matrices
        .iter()
        .map(slater_spectrum)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let modes = spectra
        .iter()
        .map(|s| rankability::inference::mode_estimate(s).mode)
        .collect();
    let s_hats: Vec<u64> = spectra.iter().map(|s| s.s_hat()).collect();
    let totals: Vec<u64> = spectra.iter().map(|s| s.total()).collect();
    let joint = joint_posterior(&spectra, grid_points).map_err(|e| e.to_string())?;
    Ok(JointAnalysis {
        modes,
        lambda_joint: rankability::inference::lambda_joint(&s_hats, &totals)
            .map_err(|e| e.to_string())?,
        s_hats,
        mode: joint.mode,
        mode_status: joint.mode_status.as_str(),
        mean: joint.mean,
        curve: joint.grid.into(),
    })
}

fn to_js<T: Serialize>(result: Result<T, String>) -> Result<String, JsValue> {
    result
        .map(|v| serde_json::to_string(&v).expect("demo results serialize"))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn analyze(csv: &str, grid_points: u32) -> Result<String, JsValue> {
    to_js(analyze_text(csv, grid_points as usize))
}

#[wasm_bindgen]
pub fn simulate(m: u32, k: u32, p: f64, seed: u32, grid_points: u32) -> Result<String, JsValue> {
    to_js(simulate_one(
        m as usize,
        k as u64,
        p,
        seed as u64,
        grid_points as usize,
    ))
}

#[wasm_bindgen]
pub fn joint(
    m: u32,
    k: u32,
    p: f64,
    l: u32,
    seed: u32,
    grid_points: u32,
) -> Result<String, JsValue> {
    to_js(joint_synthetic(
        m as usize,
        k as u64,
        p,
        l as usize,
        seed as u64,
        grid_points as usize,
    ))
}
