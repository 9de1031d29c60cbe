//! Run configuration: flat key=value files, figure presets, CLI overrides.
//!
//! Config files are plain text, one `key = value` per line, `#` comments.
//! Spectra are comma-separated descending reals (`t = 2.7,0.2,0.1`); full
//! Hermitian correlation matrices are accepted through `t_matrix` /
//! `r_matrix` keys naming whitespace-separated matrix files with entries
//! like `0.5` or `0.25-0.1i`.

use crate::CliError;
use nalgebra::DMatrix;
use num_complex::Complex64;
use outage_core::channel::{CorrelationMatrix, MimoConfig};
use outage_core::exact::ExactEngineConfig;
use outage_core::montecarlo::TrialPlan;
use std::path::{Path, PathBuf};

/// Which engines a sweep evaluates.
#[derive(Debug, Clone, Copy)]
pub struct EngineSet {
    pub exact: bool,
    pub asymptotic: bool,
    pub montecarlo: bool,
}

impl EngineSet {
    pub fn all() -> Self {
        Self { exact: true, asymptotic: true, montecarlo: true }
    }

    fn parse(text: &str) -> Result<Self, CliError> {
        let mut set = Self { exact: false, asymptotic: false, montecarlo: false };
        for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match name {
                "exact" => set.exact = true,
                "asymptotic" => set.asymptotic = true,
                "montecarlo" => set.montecarlo = true,
                other => return Err(CliError::Usage(format!("unknown engine '{other}'"))),
            }
        }
        if !(set.exact || set.asymptotic || set.montecarlo) {
            return Err(CliError::Usage("engines must be a nonempty subset".into()));
        }
        Ok(set)
    }
}

/// One fully resolved sweep: a channel, a rate, a grid, and engine settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Curve label; distinguishes the three transmit spectra of fig3.
    pub label: String,
    pub config: MimoConfig,
    pub rate_bps_hz: f64,
    pub snr_grid_db: Vec<f64>,
    pub engines: EngineSet,
    pub plan: TrialPlan,
    pub engine_settings: ExactEngineConfig,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.snr_grid_db.is_empty() {
            return Err(CliError::Usage("snr grid must be nonempty".into()));
        }
        if self.snr_grid_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Usage("snr grid must be strictly increasing".into()));
        }
        if !(self.rate_bps_hz > 0.0) || !self.rate_bps_hz.is_finite() {
            return Err(CliError::Usage(format!(
                "rate must be finite and > 0 (got {})",
                self.rate_bps_hz
            )));
        }
        Ok(())
    }
}

fn default_grid() -> Vec<f64> {
    (0..=8).map(|k| 5.0 * k as f64).collect()
}

fn mimo(t: &[f64], r: &[f64]) -> Result<MimoConfig, CliError> {
    MimoConfig::from_eigenvalues(t, r).map_err(|e| CliError::Usage(e.to_string()))
}

/// The `fig1` preset: Nt=3, Nr=2, t=(2.7,0.2,0.1), r=(1.9,0.1), R=2.
pub fn preset_fig1() -> Result<RunConfig, CliError> {
    Ok(RunConfig {
        label: "fig1".into(),
        config: mimo(&[2.7, 0.2, 0.1], &[1.9, 0.1])?,
        rate_bps_hz: 2.0,
        snr_grid_db: default_grid(),
        engines: EngineSet::all(),
        plan: TrialPlan::default(),
        engine_settings: ExactEngineConfig::default(),
        output_path: None,
    })
}

/// The `fig3` preset: Nt=Nr=3, r=(2.7,0.2,0.1), one run per transmit
/// spectrum t1=(1,1,1), t2=(2.3,0.5,0.2), t3=(2.7,0.2,0.1).
pub fn preset_fig3() -> Result<Vec<RunConfig>, CliError> {
    let r = [2.7, 0.2, 0.1];
    let spectra: [(&str, [f64; 3]); 3] = [
        ("fig3_t1", [1.0, 1.0, 1.0]),
        ("fig3_t2", [2.3, 0.5, 0.2]),
        ("fig3_t3", [2.7, 0.2, 0.1]),
    ];
    spectra
        .iter()
        .map(|(label, t)| {
            Ok(RunConfig {
                label: (*label).into(),
                config: mimo(t, &r)?,
                rate_bps_hz: 2.0,
                snr_grid_db: default_grid(),
                engines: EngineSet::all(),
                plan: TrialPlan::default(),
                engine_settings: ExactEngineConfig::default(),
                output_path: None,
            })
        })
        .collect()
}

/// The `fig2` preset: antenna pairs whose coding gain C(R) is tabulated
/// against the rate.
pub fn preset_fig2_pairs() -> Vec<(usize, usize)> {
    vec![(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)]
}

/// Default rate grid of the `gain` subcommand: 0.25, 0.5, ..., 8.
pub fn default_rate_grid() -> Vec<f64> {
    (1..=32).map(|k| 0.25 * k as f64).collect()
}

/// Parse a comma-separated list of reals.
pub fn parse_reals(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| CliError::Usage(format!("bad number '{s}'"))))
        .collect()
}

fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Usage(format!("bad matrix entry '{text}'"));
    let s = text.trim();
    if let Some(body) = s.strip_suffix('i') {
        // split at the last +/- that is not a leading sign or an exponent sign
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        let (re, im) = match split {
            Some(k) => {
                let re: f64 = body[..k].parse().map_err(|_| bad())?;
                let sign = if bytes[k] as char == '-' { -1.0 } else { 1.0 };
                let mag = body[k + 1..].trim();
                let im: f64 = if mag.is_empty() { 1.0 } else { mag.parse().map_err(|_| bad())? };
                (re, sign * im)
            }
            None => (0.0, body.parse().map_err(|_| bad())?),
        };
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(s.parse().map_err(|_| bad())?, 0.0))
    }
}

fn parse_matrix_file(path: &Path) -> Result<CorrelationMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read matrix file {}: {e}", path.display())))?;
    let rows: Vec<Vec<Complex64>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(parse_complex).collect())
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Usage(format!(
            "matrix file {} must hold a square matrix",
            path.display()
        )));
    }
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    CorrelationMatrix::from_matrix(m).map_err(|e| CliError::Usage(e.to_string()))
}

/// Parse a flat key=value config file into a RunConfig.
pub fn parse_run_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let dir = path.parent().unwrap_or(Path::new("."));

    let mut t_spec: Option<Vec<f64>> = None;
    let mut r_spec: Option<Vec<f64>> = None;
    let mut t_mat: Option<CorrelationMatrix> = None;
    let mut r_mat: Option<CorrelationMatrix> = None;
    let mut rate = 2.0;
    let mut grid = default_grid();
    let mut engines = EngineSet::all();
    let mut plan = TrialPlan::default();
    let mut out: Option<PathBuf> = None;

    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "t" => t_spec = Some(parse_reals(value)?),
            "r" => r_spec = Some(parse_reals(value)?),
            "t_matrix" => t_mat = Some(parse_matrix_file(&dir.join(value))?),
            "r_matrix" => r_mat = Some(parse_matrix_file(&dir.join(value))?),
            "rate" => {
                rate = value.parse().map_err(|_| CliError::Usage(format!("bad rate '{value}'")))?
            }
            "snr_db" => grid = parse_reals(value)?,
            "engines" => engines = EngineSet::parse(value)?,
            "trials" => {
                let n = value
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad trials '{value}'")))?;
                plan = TrialPlan::new(n, plan.seed, plan.shards)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
            }
            "seed" => {
                plan.seed =
                    value.parse().map_err(|_| CliError::Usage(format!("bad seed '{value}'")))?
            }
            "out" => out = Some(dir.join(value)),
            other => return Err(CliError::Usage(format!("unknown config key '{other}'"))),
        }
    }

    let rt = match (t_mat, t_spec) {
        (Some(m), None) => m,
        (None, Some(s)) => {
            CorrelationMatrix::from_eigenvalues(&s).map_err(|e| CliError::Usage(e.to_string()))?
        }
        (None, None) => return Err(CliError::Usage("config needs 't' or 't_matrix'".into())),
        _ => return Err(CliError::Usage("give exactly one of 't' and 't_matrix'".into())),
    };
    let rr = match (r_mat, r_spec) {
        (Some(m), None) => m,
        (None, Some(s)) => {
            CorrelationMatrix::from_eigenvalues(&s).map_err(|e| CliError::Usage(e.to_string()))?
        }
        (None, None) => return Err(CliError::Usage("config needs 'r' or 'r_matrix'".into())),
        _ => return Err(CliError::Usage("give exactly one of 'r' and 'r_matrix'".into())),
    };
    let config = MimoConfig::new(rt, rr).map_err(|e| CliError::Usage(e.to_string()))?;

    let run = RunConfig {
        label: path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into()),
        config,
        rate_bps_hz: rate,
        snr_grid_db: grid,
        engines,
        plan,
        engine_settings: ExactEngineConfig::default(),
        output_path: out,
    };
    run.validate()?;
    Ok(run)
}
