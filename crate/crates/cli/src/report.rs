//! JSON report types. Big integers are decimal strings.

use std::cmp::Ordering;

use rankability::inference::{DegenerateSummary, PosteriorSummary, Thresholds};
use rankability::sim::SlaterTestResult;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Input {
    pub path: String,
    pub m: usize,
    pub t: u64,
}

/// Report of `spectrum`, `rankings` and `oracle`.
#[derive(Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub input: Input,
    pub labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<String>,
    pub s_hat: u64,
    pub a_s_hat: String,
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<ThresholdsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<SummaryReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<DegenerateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rankings: Option<RankingsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
}

#[derive(Serialize)]
pub struct ThresholdsReport {
    pub s_th: f64,
    pub lambda_th: f64,
}

impl From<&Thresholds> for ThresholdsReport {
    fn from(t: &Thresholds) -> Self {
        ThresholdsReport {
            s_th: t.s_th,
            lambda_th: t.lambda_th,
        }
    }
}

pub fn sign_name(sign: Ordering) -> &'static str {
    match sign {
        Ordering::Less => "negative",
        Ordering::Equal => "zero",
        Ordering::Greater => "positive",
    }
}

#[derive(Serialize)]
pub struct SummaryReport {
    pub z: f64,
    pub ln_z: f64,
    pub mode: f64,
    pub mode_status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode_diagnostic: Option<String>,
    pub mean: f64,
    pub sigma: Option<f64>,
    pub sigma_sign: &'static str,
}

impl From<&PosteriorSummary> for SummaryReport {
    fn from(s: &PosteriorSummary) -> Self {
        SummaryReport {
            z: s.z,
            ln_z: s.ln_z,
            mode: s.mode.mode,
            mode_status: s.mode.status.as_str(),
            mode_diagnostic: s.mode.diagnostic.clone(),
            mean: s.mean,
            sigma: s.sigma,
            sigma_sign: sign_name(s.sigma_sign),
        }
    }
}

#[derive(Serialize)]
pub struct DegenerateReport {
    pub mean_tilde: f64,
    pub sigma_tilde: Option<f64>,
    pub sigma_tilde_sign: &'static str,
    pub z_tilde: f64,
}

impl From<&DegenerateSummary> for DegenerateReport {
    fn from(d: &DegenerateSummary) -> Self {
        DegenerateReport {
            mean_tilde: d.mean_tilde,
            sigma_tilde: d.sigma_tilde,
            sigma_tilde_sign: sign_name(d.sigma_tilde_sign),
            z_tilde: d.z_tilde,
        }
    }
}

#[derive(Serialize)]
pub struct RankingsReport {
    pub count: String,
    pub complete: bool,
    pub listed: Vec<Vec<String>>,
}

#[derive(Serialize)]
pub struct JointRow {
    pub path: String,
    pub m: usize,
    pub t: u64,
    pub s_hat: u64,
    pub a_s_hat: String,
    pub mode: f64,
    pub mode_status: &'static str,
    pub lambda: Option<f64>,
}

#[derive(Serialize)]
pub struct JointSummary {
    pub mode: f64,
    pub mode_status: &'static str,
    pub mean: f64,
    pub lambda_joint: Option<f64>,
}

#[derive(Serialize)]
pub struct JointReport {
    pub schema_version: u32,
    pub matrices: Vec<JointRow>,
    pub joint: JointSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
}

#[derive(Serialize)]
pub struct SimulateReport {
    pub schema_version: u32,
    pub m: usize,
    pub k: u64,
    pub p: f64,
    pub seed: u64,
    pub files: Vec<String>,
}

#[derive(Serialize)]
pub struct SlaterTestReport {
    pub schema_version: u32,
    pub input: Input,
    pub p_val: f64,
    pub s_hat_observed: u64,
    pub n_mc: u64,
    pub count_le: u64,
    pub epsilon: f64,
    pub seed: u64,
    pub decision: &'static str,
}

impl SlaterTestReport {
    pub fn new(input: Input, r: &SlaterTestResult, seed: u64) -> Self {
        SlaterTestReport {
            schema_version: SCHEMA_VERSION,
            input,
            p_val: r.p_val,
            s_hat_observed: r.s_hat_observed,
            n_mc: r.n_mc,
            count_le: r.count_le,
            epsilon: r.epsilon,
            seed,
            decision: r.decision.as_str(),
        }
    }
}
