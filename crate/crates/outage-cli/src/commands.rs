//! Subcommand bodies: sweep, majorize, gain, rate-opt.
//!
//! Every numeric CSV field is printed with 17 significant digits so that
//! re-parsing an emitted file recovers the values bit-exactly.

use crate::config::RunConfig;
use crate::CliError;
use outage_core::asymptotic::{asymptotic_outage, coding_gain, optimize_rate, RateObjective};
use outage_core::channel::{majorizes, spectrum_is_distinct};
use outage_core::exact::exact_outage;
use outage_core::montecarlo::sweep as mc_sweep;
use outage_core::montecarlo::OutageEstimate;
use std::io::Write;
use std::path::Path;

pub const SWEEP_HEADER: &str = "snr_db,exact,asymptotic,mc_p,mc_ci_low,mc_ci_high";

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_default()
}

/// One evaluated grid point of a sweep.
pub struct SweepRow {
    pub snr_db: f64,
    pub exact: Option<f64>,
    pub asymptotic: Option<f64>,
    pub mc: Option<OutageEstimate>,
}

/// Evaluate the selected engines over the grid of one run.
pub fn run_sweep(run: &RunConfig) -> Result<Vec<SweepRow>, CliError> {
    run.validate()?;
    let mc = if run.engines.montecarlo {
        let list = mc_sweep(&run.config, run.rate_bps_hz, &run.snr_grid_db, &run.plan)
            .map_err(|e| CliError::Numerical(format!("montecarlo engine failed: {e}")))?;
        Some(list.into_iter().map(|(_, est)| est).collect::<Vec<_>>())
    } else {
        None
    };
    let mut rows = Vec::with_capacity(run.snr_grid_db.len());
    for (i, &db) in run.snr_grid_db.iter().enumerate() {
        let rho = 10f64.powf(db / 10.0);
        let exact = if run.engines.exact {
            Some(
                exact_outage(&run.config, run.rate_bps_hz, rho, &run.engine_settings).map_err(
                    |e| CliError::Numerical(format!("exact engine failed at snr_db={db}: {e}")),
                )?,
            )
        } else {
            None
        };
        let asymptotic = if run.engines.asymptotic {
            Some(asymptotic_outage(&run.config, run.rate_bps_hz, rho).map_err(|e| {
                CliError::Numerical(format!("asymptotic engine failed at snr_db={db}: {e}"))
            })?)
        } else {
            None
        };
        rows.push(SweepRow {
            snr_db: db,
            exact,
            asymptotic,
            mc: mc.as_ref().map(|l| l[i]),
        });
    }
    Ok(rows)
}

/// Render sweep rows as the CSV contract.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt(row.snr_db),
            opt(row.exact),
            opt(row.asymptotic),
            opt(row.mc.map(|e| e.p_hat)),
            opt(row.mc.map(|e| e.ci_low)),
            opt(row.mc.map(|e| e.ci_high)),
        ));
    }
    out
}

/// Stderr notes: near-degenerate spectra and the pre-asymptotic region.
pub fn sweep_notes(run: &RunConfig, rows: &[SweepRow]) -> Vec<String> {
    let mut notes = Vec::new();
    if !spectrum_is_distinct(run.config.rt.eigenvalues()) {
        notes.push(format!(
            "note [{}]: near-degenerate transmit spectrum split by distinct_spectrum (eps = {:.0e})",
            run.label, run.engine_settings.spectrum_eps
        ));
    }
    if !spectrum_is_distinct(run.config.rr.eigenvalues()) {
        notes.push(format!(
            "note [{}]: near-degenerate receive spectrum split by distinct_spectrum (eps = {:.0e})",
            run.label, run.engine_settings.spectrum_eps
        ));
    }
    let pre: Vec<f64> = rows
        .iter()
        .filter(|r| match (r.exact, r.asymptotic) {
            (Some(e), Some(a)) => e > 0.0 && a / e > 1.1,
            _ => false,
        })
        .map(|r| r.snr_db)
        .collect();
    if let Some(&worst) = pre.last() {
        notes.push(format!(
            "note [{}]: pre-asymptotic at and below {worst} dB (asymptote exceeds exact by >10%)",
            run.label
        ));
    }
    notes
}

pub fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

/// Majorization report between two equal-length positive spectra.
pub fn majorize_report(a: &[f64], b: &[f64]) -> Result<String, CliError> {
    if a.iter().chain(b).any(|&v| !(v > 0.0)) {
        return Err(CliError::Usage("spectra must be strictly positive".into()));
    }
    let ab = majorizes(b, a).map_err(|e| CliError::Usage(e.to_string()))?;
    let ba = majorizes(a, b).map_err(|e| CliError::Usage(e.to_string()))?;
    let relation = match (ab, ba) {
        (true, true) => "a \u{2aaf} b and b \u{2aaf} a".to_string(),
        (true, false) => "a \u{2aaf} b".to_string(),
        (false, true) => "b \u{2aaf} a".to_string(),
        (false, false) => "incomparable".to_string(),
    };
    let det_a: f64 = a.iter().product();
    let det_b: f64 = b.iter().product();
    let det_rel = if det_a >= det_b { "\u{2265}" } else { "<" };
    let n = a.len() as i32;
    // Correlation penalty with an identity receive side of the same size:
    // S = det(Rt)^{-Nr}; Schur ordering of the spectra orders S inversely
    // to the determinant.
    let s_a = det_a.powi(-n);
    let s_b = det_b.powi(-n);
    let s_rel = if s_a <= s_b { "\u{2264}" } else { ">" };
    Ok(format!(
        "{relation}; det(a)={det_a} {det_rel} det(b)={det_b}\n\
         S-penalty (identity receive side, Nr={n}): S(a)={s_a:.6e} {s_rel} S(b)={s_b:.6e}\n"
    ))
}

/// CSV of 10·log10 C(R) over a rate grid for one antenna pair.
pub fn gain_csv(nt: usize, nr: usize, rates: &[f64]) -> Result<String, CliError> {
    if rates.is_empty() || rates.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage("rate grid must be nonempty and strictly increasing".into()));
    }
    let mut out = String::from("rate,coding_gain_db\n");
    for &rate in rates {
        let c = coding_gain(rate, nt, nr).map_err(|e| {
            CliError::Numerical(format!("gain engine failed at rate={rate} (Nt={nt}, Nr={nr}): {e}"))
        })?;
        out.push_str(&format!("{},{}\n", fmt(rate), fmt(10.0 * c.log10())));
    }
    Ok(out)
}

/// Rate selection through the asymptotic engine; returns a short report.
pub fn rate_opt_report(
    run: &RunConfig,
    snr_db: f64,
    objective: RateObjective,
) -> Result<String, CliError> {
    let rho = 10f64.powf(snr_db / 10.0);
    let r_star = optimize_rate(&run.config, rho, objective)
        .map_err(|e| CliError::Numerical(format!("rate-opt failed at snr_db={snr_db}: {e}")))?;
    let p = asymptotic_outage(&run.config, r_star, rho)
        .map_err(|e| CliError::Numerical(format!("rate-opt failed at snr_db={snr_db}: {e}")))?;
    Ok(format!(
        "R* = {r_star:.6} bps/Hz at {snr_db} dB (asymptotic outage {p:.6e})\n"
    ))
}
