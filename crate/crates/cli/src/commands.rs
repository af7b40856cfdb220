use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rankability::inference::{
    degree_of_linearity, joint_posterior, lambda_joint, mode_estimate, posterior_grid, summarize,
    summarize_degenerate, thresholds, PdfGrid,
};
use rankability::io::MatrixFile;
use rankability::sim::{derive_seed, generate_matrix, slater_mc_test, GeneratorConfig};
use rankability::{
    all_optimal_rankings, brute_force_optimal_rankings, brute_force_spectrum,
    optimal_rankings_truncated, slater_spectrum, Limits, RankingSet, SlaterSpectrum,
};

use crate::report::*;
use crate::CliError;

pub struct Loaded {
    pub path: String,
    pub file: MatrixFile,
}

impl Loaded {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let file = MatrixFile::read_path(path).map_err(|e| CliError::in_file(path, e))?;
        Ok(Loaded {
            path: path.display().to_string(),
            file,
        })
    }

    fn input(&self) -> Input {
        Input {
            path: self.path.clone(),
            m: self.file.matrix.len(),
            t: self.file.matrix.total(),
        }
    }

    fn lambda(&self, s_hat: u64) -> Option<f64> {
        degree_of_linearity(s_hat, self.file.matrix.total()).ok()
    }

    fn thresholds(&self) -> Option<ThresholdsReport> {
        thresholds(self.file.matrix.total())
            .ok()
            .as_ref()
            .map(ThresholdsReport::from)
    }
}

pub struct SpectrumOptions {
    pub csv: bool,
    pub rankings: bool,
    pub max_list: Option<usize>,
    pub grid: Option<PathBuf>,
    pub grid_points: usize,
}

fn rankings_report(loaded: &Loaded, set: &RankingSet) -> RankingsReport {
    let labels = loaded.file.labels();
    RankingsReport {
        count: set.count.to_string(),
        complete: set.is_complete(),
        listed: set
            .rankings
            .iter()
            .map(|r| r.as_slice().iter().map(|&i| labels[i].clone()).collect())
            .collect(),
    }
}

fn find_rankings(loaded: &Loaded, max_list: Option<usize>) -> Result<RankingSet, CliError> {
    let w = &loaded.file.matrix;
    Ok(match max_list {
        Some(n) => optimal_rankings_truncated(w, n, &Limits::default())?,
        None => all_optimal_rankings(w)?,
    })
}

pub fn write_grid(path: &Path, grid: &PdfGrid) -> Result<String, CliError> {
    let mut out = String::from("p,density\n");
    for (p, d) in grid.p_values.iter().zip(&grid.density) {
        writeln!(out, "{},{}", p, d).unwrap();
    }
    fs::write(path, out).map_err(|e| CliError::io(path, e))?;
    Ok(path.display().to_string())
}

fn spectrum_csv(spectrum: &SlaterSpectrum) -> String {
    let mut out = String::from("t,a_t\n");
    for (t, a) in spectrum.coefficients().iter().enumerate() {
        writeln!(out, "{},{}", t, a).unwrap();
    }
    out
}

fn analysis(
    loaded: &Loaded,
    spectrum: &SlaterSpectrum,
    rankings: Option<&RankingSet>,
    grid: Option<String>,
) -> Result<AnalysisReport, CliError> {
    let summary = summarize(spectrum)?;
    let degenerate = summarize_degenerate(spectrum)?;
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        input: loaded.input(),
        labels: loaded.file.labels(),
        spectrum: Some(spectrum.to_decimal_string()),
        s_hat: spectrum.s_hat(),
        a_s_hat: spectrum.a_s_hat().to_string(),
        lambda: loaded.lambda(spectrum.s_hat()),
        thresholds: loaded.thresholds(),
        summary: Some(SummaryReport::from(&summary)),
        degenerate: Some(DegenerateReport::from(&degenerate)),
        rankings: rankings.map(|r| rankings_report(loaded, r)),
        grid,
    })
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn spectrum(path: &Path, options: &SpectrumOptions) -> Result<String, CliError> {
    let loaded = Loaded::read(path)?;
    let spectrum = slater_spectrum(&loaded.file.matrix)?;
    let rankings = if options.rankings {
        Some(find_rankings(&loaded, options.max_list)?)
    } else {
        None
    };
    let grid = match &options.grid {
        Some(grid_path) => Some(write_grid(
            grid_path,
            &posterior_grid(&spectrum, options.grid_points)?,
        )?),
        None => None,
    };
    if options.csv {
        return Ok(spectrum_csv(&spectrum));
    }
    Ok(to_json(&analysis(
        &loaded,
        &spectrum,
        rankings.as_ref(),
        grid,
    )?))
}

pub fn rankings(path: &Path, max_list: Option<usize>) -> Result<String, CliError> {
    let loaded = Loaded::read(path)?;
    let set = find_rankings(&loaded, max_list)?;
    let report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        input: loaded.input(),
        labels: loaded.file.labels(),
        spectrum: None,
        s_hat: set.s_hat,
        a_s_hat: set.count.to_string(),
        lambda: loaded.lambda(set.s_hat),
        thresholds: loaded.thresholds(),
        summary: None,
        degenerate: None,
        rankings: Some(rankings_report(&loaded, &set)),
        grid: None,
    };
    Ok(to_json(&report))
}

/// Brute-force counterpart of `spectrum --rankings`, with the same report.
pub fn oracle(path: &Path) -> Result<String, CliError> {
    let loaded = Loaded::read(path)?;
    let spectrum = brute_force_spectrum(&loaded.file.matrix)?;
    let set = brute_force_optimal_rankings(&loaded.file.matrix)?;
    Ok(to_json(&analysis(&loaded, &spectrum, Some(&set), None)?))
}

pub fn joint(
    paths: &[PathBuf],
    grid: Option<&Path>,
    grid_points: usize,
) -> Result<String, CliError> {
    let mut rows = Vec::with_capacity(paths.len());
    let mut spectra = Vec::with_capacity(paths.len());
    for path in paths {
        let loaded = Loaded::read(path)?;
        let spectrum = slater_spectrum(&loaded.file.matrix)?;
        let mode = mode_estimate(&spectrum);
        rows.push(JointRow {
            path: loaded.path.clone(),
            m: loaded.file.matrix.len(),
            t: spectrum.total(),
            s_hat: spectrum.s_hat(),
            a_s_hat: spectrum.a_s_hat().to_string(),
            mode: mode.mode,
            mode_status: mode.status.as_str(),
            lambda: loaded.lambda(spectrum.s_hat()),
        });
        spectra.push(spectrum);
    }
    let posterior = joint_posterior(&spectra, grid_points)?;
    let s_hats: Vec<u64> = rows.iter().map(|r| r.s_hat).collect();
    let totals: Vec<u64> = rows.iter().map(|r| r.t).collect();
    let grid = match grid {
        Some(path) => Some(write_grid(path, &posterior.grid)?),
        None => None,
    };
    let report = JointReport {
        schema_version: SCHEMA_VERSION,
        matrices: rows,
        joint: JointSummary {
            mode: posterior.mode,
            mode_status: posterior.mode_status.as_str(),
            mean: posterior.mean,
            lambda_joint: lambda_joint(&s_hats, &totals).ok(),
        },
        grid,
    };
    Ok(to_json(&report))
}

pub struct SimulateOptions {
    pub m: usize,
    pub k: u64,
    pub p: f64,
    pub count: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
}

pub fn simulate(o: &SimulateOptions) -> Result<String, CliError> {
    fs::create_dir_all(&o.out_dir).map_err(|e| CliError::io(&o.out_dir, e))?;
    let width = o.count.max(1).to_string().len().max(3);
    let mut files = Vec::with_capacity(o.count);
    for l in 0..o.count {
        let config = GeneratorConfig::uniform(o.m, o.k, o.p, derive_seed(o.seed, l as u64));
        let file = MatrixFile::new(generate_matrix(&config)?);
        let path = o
            .out_dir
            .join(format!("matrix_{:0width$}.csv", l + 1, width = width));
        fs::write(&path, file.to_csv_string()).map_err(|e| CliError::io(&path, e))?;
        files.push(path.display().to_string());
    }
    Ok(to_json(&SimulateReport {
        schema_version: SCHEMA_VERSION,
        m: o.m,
        k: o.k,
        p: o.p,
        seed: o.seed,
        files,
    }))
}

pub fn slater_test(path: &Path, n_mc: u64, epsilon: f64, seed: u64) -> Result<String, CliError> {
    let loaded = Loaded::read(path)?;
    let result = slater_mc_test(&loaded.file.matrix, n_mc, epsilon, seed)?;
    Ok(to_json(&SlaterTestReport::new(
        loaded.input(),
        &result,
        seed,
    )))
}
