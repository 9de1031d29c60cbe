//! High-SNR outage asymptote and its decomposition.
//!
//! At high SNR the outage probability behaves as
//!
//!   p_out(R, rho) ~ S · rho^{-d} · g(2^R) = S · (C(R) · rho)^{-d}
//!
//! with diversity order d = Nt·Nr, correlation penalty
//! S = 1/(det(Rr)^{Nt} det(Rt)^{Nr}), and coding gain C(R) = g(2^R)^{-1/d}.
//! The asymptote is reported unclamped: it exceeds 1 at low SNR by design.

use crate::channel::MimoConfig;
use crate::error::{OutageError, Result};
use crate::specfun::meijer_g_rate;

/// Hard ceiling for rate searches, in bits/s/Hz.
pub const RATE_CAP: f64 = 64.0;

/// The (S, C(R), d) triple of the high-SNR expansion.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticDecomposition {
    pub correlation_penalty_s: f64,
    pub coding_gain_c: f64,
    pub diversity_d: usize,
}

fn dims(config: &MimoConfig) -> (usize, usize) {
    let (nt, nr) = (config.nt, config.nr);
    if nt >= nr {
        (nt, nr)
    } else {
        (nr, nt)
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(OutageError::Domain(format!("rate must be finite and > 0 (got {rate})")));
    }
    Ok(())
}

/// d = Nt·Nr; spatial correlation never changes it.
pub fn diversity_order(config: &MimoConfig) -> usize {
    config.nt * config.nr
}

/// S = 1/(det(Rr)^{Nt} · det(Rt)^{Nr}), evaluated in log space.
pub fn correlation_penalty(config: &MimoConfig) -> f64 {
    let log_s = -(config.nt as f64) * config.rr.log_det() - (config.nr as f64) * config.rt.log_det();
    log_s.exp()
}

/// C(R) = g(2^R)^{-1/(Nt·Nr)}, in linear SNR units.
pub fn coding_gain(rate: f64, nt: usize, nr: usize) -> Result<f64> {
    check_rate(rate)?;
    let (nt, nr) = if nt >= nr { (nt, nr) } else { (nr, nt) };
    let g = meijer_g_rate(nt, nr, rate.exp2())?;
    if g <= 0.0 {
        return Err(OutageError::Domain(format!("g(2^{rate}) is not positive")));
    }
    Ok(g.powf(-1.0 / (nt * nr) as f64))
}

/// S · rho^{-d} · g(2^R); unclamped by design.
pub fn asymptotic_outage(config: &MimoConfig, rate: f64, rho: f64) -> Result<f64> {
    check_rate(rate)?;
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(OutageError::Domain(format!("snr must be finite and > 0 (got {rho})")));
    }
    let (nt, nr) = dims(config);
    let g = meijer_g_rate(nt, nr, rate.exp2())?;
    if g == 0.0 {
        return Ok(0.0);
    }
    let d = (nt * nr) as f64;
    let log_p = correlation_penalty(config).ln() - d * rho.ln() + g.ln();
    Ok(log_p.exp())
}

/// The full (S, C(R), d) decomposition at a given rate.
pub fn decompose(config: &MimoConfig, rate: f64) -> Result<AsymptoticDecomposition> {
    let (nt, nr) = dims(config);
    Ok(AsymptoticDecomposition {
        correlation_penalty_s: correlation_penalty(config),
        coding_gain_c: coding_gain(rate, nt, nr)?,
        diversity_d: nt * nr,
    })
}

/// Least-squares slope of -log p against log rho over (rho, p) pairs.
pub fn estimate_diversity_slope(curve: &[(f64, f64)]) -> Result<f64> {
    if curve.len() < 2 {
        return Err(OutageError::DegenerateInput(format!(
            "slope fit needs at least 2 points (got {})",
            curve.len()
        )));
    }
    for &(rho, p) in curve {
        if !(rho > 0.0) || !(p > 0.0) || !rho.is_finite() || !p.is_finite() {
            return Err(OutageError::Domain(format!(
                "slope fit needs positive finite (rho, p) pairs (got ({rho}, {p}))"
            )));
        }
    }
    let xs: Vec<f64> = curve.iter().map(|&(rho, _)| rho.ln()).collect();
    let ys: Vec<f64> = curve.iter().map(|&(_, p)| p.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx < 1e-24 {
        return Err(OutageError::DegenerateInput("all rho values coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(-sxy / sxx)
}

/// Finite-difference check of Theorem 3 over a rate grid.
#[derive(Debug, Clone, Copy)]
pub struct ConvexityReport {
    pub monotone: bool,
    pub convex: bool,
    /// Most negative first or second difference encountered (0 when none).
    pub worst_violation: f64,
}

pub fn check_rate_convexity(nt: usize, nr: usize, rate_grid: &[f64]) -> Result<ConvexityReport> {
    if rate_grid.len() < 4 {
        return Err(OutageError::DegenerateInput(format!(
            "convexity check needs >= 4 grid points (got {})",
            rate_grid.len()
        )));
    }
    for w in rate_grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(OutageError::Domain("rate grid must be strictly increasing".into()));
        }
    }
    check_rate(rate_grid[0])?;
    let g: Vec<f64> = rate_grid
        .iter()
        .map(|&r| meijer_g_rate(nt.max(nr), nt.min(nr), r.exp2()))
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    let mut monotone = true;
    let mut convex = true;
    let first: Vec<f64> = g.windows(2).map(|w| w[1] - w[0]).collect();
    for &d in &first {
        if d < -1e-9 {
            monotone = false;
        }
        worst = worst.min(d);
    }
    for w in first.windows(2) {
        let d2 = w[1] - w[0];
        if d2 < -1e-9 {
            convex = false;
        }
        worst = worst.min(d2);
    }
    Ok(ConvexityReport { monotone, convex, worst_violation: worst.min(0.0).abs() })
}

/// What `optimize_rate` should aim for.
#[derive(Debug, Clone, Copy)]
pub enum RateObjective {
    /// The unique R with asymptotic_outage(R) equal to the target.
    TargetOutage(f64),
    /// Maximize R · (1 − min(1, asymptotic_outage(R))).
    MaxThroughput,
}

pub fn optimize_rate(config: &MimoConfig, rho: f64, objective: RateObjective) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(OutageError::Domain(format!("snr must be finite and > 0 (got {rho})")));
    }
    match objective {
        RateObjective::TargetOutage(target) => {
            if !(target > 0.0 && target < 1.0) {
                return Err(OutageError::Domain(format!("target outage must be in (0,1) (got {target})")));
            }
            let p_cap = asymptotic_outage(config, RATE_CAP, rho)?;
            if p_cap < target {
                return Err(OutageError::InfeasibleTarget { target, cap: RATE_CAP });
            }
            // p is increasing in R (Theorem 3); bisect on [lo, RATE_CAP].
            let mut lo = 1e-9;
            let mut hi = RATE_CAP;
            if asymptotic_outage(config, lo, rho)? > target {
                return Err(OutageError::InfeasibleTarget { target, cap: RATE_CAP });
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if asymptotic_outage(config, mid, rho)? < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-12 * hi.max(1.0) {
                    break;
                }
            }
            Ok(0.5 * (lo + hi))
        }
        RateObjective::MaxThroughput => {
            let objective = |r: f64| -> Result<f64> {
                let p = asymptotic_outage(config, r, rho)?;
                Ok(r * (1.0 - p.min(1.0)))
            };
            // Coarse grid to bracket the maximum, then golden-section.
            let grid_n = 512;
            let mut best_i = 0;
            let mut best_v = f64::NEG_INFINITY;
            let step = RATE_CAP / grid_n as f64;
            for i in 1..=grid_n {
                let v = objective(i as f64 * step)?;
                if v > best_v {
                    best_v = v;
                    best_i = i;
                }
            }
            let mut a = ((best_i as f64 - 1.0) * step).max(1e-9);
            let mut b = ((best_i as f64 + 1.0) * step).min(RATE_CAP);
            let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
            let mut c = b - inv_phi * (b - a);
            let mut d = a + inv_phi * (b - a);
            let mut fc = objective(c)?;
            let mut fd = objective(d)?;
            while b - a > 1e-9 {
                if fc > fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - inv_phi * (b - a);
                    fc = objective(c)?;
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + inv_phi * (b - a);
                    fd = objective(d)?;
                }
            }
            Ok(0.5 * (a + b))
        }
    }
}
