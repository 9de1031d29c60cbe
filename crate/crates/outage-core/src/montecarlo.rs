//! Monte Carlo simulation oracle with reproducible parallel seeding.
//!
//! Every trial owns a counter-based substream keyed by (seed, stream, shard,
//! trial index), so estimates are bit-identical for a fixed plan regardless
//! of worker count or scheduling. Shard partials are reduced in fixed shard
//! order.

use crate::channel::{capacity, correlate_channel, MimoConfig};
use crate::error::{OutageError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

/// Partitioned trial budget with its seeding.
#[derive(Debug, Clone, Copy)]
pub struct TrialPlan {
    pub n_trials: u64,
    pub seed: u64,
    pub shards: u64,
}

impl TrialPlan {
    pub fn new(n_trials: u64, seed: u64, shards: u64) -> Result<Self> {
        if n_trials < 100 {
            return Err(OutageError::Domain(format!(
                "need at least 100 trials (got {n_trials})"
            )));
        }
        if shards == 0 {
            return Err(OutageError::Domain("shards must be positive".into()));
        }
        Ok(Self { n_trials, seed, shards })
    }
}

impl Default for TrialPlan {
    fn default() -> Self {
        Self { n_trials: 100_000, seed: 1, shards: 64 }
    }
}

/// Empirical outage probability with its confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_trials: u64,
    /// Wilson interval engaged because successes or failures were rare.
    pub rare_event: bool,
}

impl OutageEstimate {
    fn from_count(successes: u64, n: u64, z: f64) -> Self {
        let nf = n as f64;
        let p = successes as f64 / nf;
        let stderr = (p * (1.0 - p) / nf).sqrt();
        let rare = (successes.min(n - successes) as f64) < 30.0;
        let (lo, hi) = if rare {
            // Wilson score interval
            let z2 = z * z;
            let denom = 1.0 + z2 / nf;
            let center = (p + z2 / (2.0 * nf)) / denom;
            let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
            (center - half, center + half)
        } else {
            (p - z * stderr, p + z * stderr)
        };
        Self {
            p_hat: p,
            stderr,
            ci_low: lo.max(0.0),
            ci_high: hi.min(1.0),
            n_trials: n,
            rare_event: rare,
        }
    }

    /// Recompute the interval for a different z (e.g. 3.0 for 99.7%).
    /// p_hat is an exact count ratio, so the count round-trips losslessly.
    pub fn interval(&self, z: f64) -> (f64, f64) {
        let successes = (self.p_hat * self.n_trials as f64).round() as u64;
        let e = Self::from_count(successes, self.n_trials, z);
        (e.ci_low, e.ci_high)
    }
}

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn mix(a: u64, b: u64) -> u64 {
    let mut s = a ^ b.wrapping_mul(GOLDEN);
    splitmix64(&mut s)
}

/// Per-trial random stream: splitmix64 seeded by a keyed hash chain.
struct TrialRng {
    state: u64,
    spare: Option<f64>,
}

impl TrialRng {
    fn new(seed: u64, stream: u64, shard: u64, trial: u64) -> Self {
        Self { state: mix(mix(mix(seed, stream), shard), trial), spare: None }
    }

    fn uniform(&mut self) -> f64 {
        ((splitmix64(&mut self.state) >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
    }

    /// Standard normal via Box-Muller.
    fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let th = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * th.sin());
        r * th.cos()
    }

    /// Nr x Nt matrix of iid CN(0,1) entries.
    fn white_matrix(&mut self, nr: usize, nt: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(nr, nt, |_, _| {
            Complex64::new(self.normal(), self.normal()) * std::f64::consts::FRAC_1_SQRT_2
        })
    }
}

/// Shard boundaries: trials split as evenly as possible, in shard order.
fn shard_range(plan: &TrialPlan, shard: u64) -> (u64, u64) {
    let base = plan.n_trials / plan.shards;
    let extra = plan.n_trials % plan.shards;
    let start = shard * base + shard.min(extra);
    let len = base + u64::from(shard < extra);
    (start, start + len)
}

fn run_shards<T, M, R>(plan: &TrialPlan, map: M, reduce: R) -> Result<T>
where
    T: Send,
    M: Fn(u64) -> Result<T> + Sync,
    R: Fn(Vec<T>) -> T,
{
    let partials: Vec<Result<T>> = (0..plan.shards).into_par_iter().map(|sh| map(sh)).collect();
    let mut ok = Vec::with_capacity(partials.len());
    for p in partials {
        ok.push(p?);
    }
    Ok(reduce(ok))
}

fn count_outages(config: &MimoConfig, rho: f64, rate: f64, plan: &TrialPlan, stream: u64) -> Result<u64> {
    run_shards(
        plan,
        |shard| {
            let (start, end) = shard_range(plan, shard);
            let mut count = 0u64;
            for trial in start..end {
                let mut rng = TrialRng::new(plan.seed, stream, shard, trial);
                let w = rng.white_matrix(config.nr, config.nt);
                let h = correlate_channel(config, &w)?;
                if capacity(&h, rho)? < rate {
                    count += 1;
                }
            }
            Ok(count)
        },
        |parts| parts.iter().sum(),
    )
}

/// Empirical outage frequency with a 95% interval.
pub fn estimate_outage(config: &MimoConfig, rho: f64, rate: f64, plan: &TrialPlan) -> Result<OutageEstimate> {
    estimate_outage_stream(config, rho, rate, plan, 0)
}

/// As [`estimate_outage`] with an explicit substream id; sweeps use the grid
/// index so points draw disjoint randomness.
pub fn estimate_outage_stream(
    config: &MimoConfig,
    rho: f64,
    rate: f64,
    plan: &TrialPlan,
    stream: u64,
) -> Result<OutageEstimate> {
    if !(rho > 0.0) || !(rate > 0.0) {
        return Err(OutageError::Domain(format!(
            "snr and rate must be > 0 (got rho={rho}, rate={rate})"
        )));
    }
    let successes = count_outages(config, rho, rate, plan, stream)?;
    Ok(OutageEstimate::from_count(successes, plan.n_trials, 1.959963984540054))
}

/// Raw outage count, for callers that need intervals at other z values.
pub fn outage_count(config: &MimoConfig, rho: f64, rate: f64, plan: &TrialPlan) -> Result<u64> {
    count_outages(config, rho, rate, plan, 0)
}

/// Empirical Mellin moment E[G^{s-1}], G = det(I + rho H H^H) = 2^capacity,
/// with a componentwise standard error. Re(s) > 1 is allowed but the moment
/// may be heavy-tailed there.
pub fn estimate_mellin(
    config: &MimoConfig,
    rho: f64,
    s: Complex64,
    plan: &TrialPlan,
) -> Result<(Complex64, f64)> {
    if !(rho > 0.0) {
        return Err(OutageError::Domain(format!("snr must be > 0 (got {rho})")));
    }
    // per shard: (sum, sum of |.|^2 componentwise)
    let partials = run_shards(
        plan,
        |shard| {
            let (start, end) = shard_range(plan, shard);
            let mut sum = Complex64::new(0.0, 0.0);
            let mut sq = Complex64::new(0.0, 0.0);
            for trial in start..end {
                let mut rng = TrialRng::new(plan.seed, 0x4D31, shard, trial);
                let w = rng.white_matrix(config.nr, config.nt);
                let h = correlate_channel(config, &w)?;
                let ln_g = capacity(&h, rho)? * std::f64::consts::LN_2;
                let v = ((s - 1.0) * ln_g).exp();
                sum += v;
                sq += Complex64::new(v.re * v.re, v.im * v.im);
            }
            Ok(vec![(sum, sq)])
        },
        |parts| parts.into_iter().flatten().collect::<Vec<_>>(),
    )?;
    let n = plan.n_trials as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sq = Complex64::new(0.0, 0.0);
    for (a, b) in partials {
        sum += a;
        sq += b;
    }
    let mean = sum / n;
    let var_re = (sq.re / n - mean.re * mean.re).max(0.0);
    let var_im = (sq.im / n - mean.im * mean.im).max(0.0);
    let stderr = ((var_re + var_im) / n).sqrt();
    Ok((mean, stderr))
}

/// One estimate per dB grid point, with disjoint substreams across points.
pub fn sweep(
    config: &MimoConfig,
    rate: f64,
    rho_grid_db: &[f64],
    plan: &TrialPlan,
) -> Result<Vec<(f64, OutageEstimate)>> {
    if rho_grid_db.is_empty() {
        return Err(OutageError::Domain("sweep grid must be nonempty".into()));
    }
    rho_grid_db
        .iter()
        .enumerate()
        .map(|(i, &db)| {
            let rho = 10f64.powf(db / 10.0);
            Ok((db, estimate_outage_stream(config, rho, rate, plan, i as u64)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn siso() -> MimoConfig {
        MimoConfig::from_eigenvalues(&[1.0], &[1.0]).unwrap()
    }

    fn fig1() -> MimoConfig {
        MimoConfig::from_eigenvalues(&[2.7, 0.2, 0.1], &[1.9, 0.1]).unwrap()
    }

    #[test]
    fn plan_validation() {
        assert!(TrialPlan::new(99, 1, 4).is_err());
        assert!(TrialPlan::new(100, 1, 0).is_err());
        assert!(TrialPlan::new(100, 1, 4).is_ok());
    }

    #[test]
    fn shard_ranges_partition() {
        let plan = TrialPlan { n_trials: 1003, seed: 0, shards: 7 };
        let mut next = 0;
        let mut total = 0;
        for sh in 0..plan.shards {
            let (a, b) = shard_range(&plan, sh);
            assert_eq!(a, next);
            next = b;
            total += b - a;
        }
        assert_eq!(total, 1003);
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let plan = TrialPlan { n_trials: 20_000, seed: 42, shards: 16 };
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| estimate_outage(&fig1(), 10.0, 2.0, &plan).unwrap())
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a, b);
        // and across repeated calls
        assert_eq!(a, run(4));
    }

    #[test]
    fn siso_matches_closed_form() {
        let plan = TrialPlan { n_trials: 200_000, seed: 7, shards: 32 };
        let est = estimate_outage(&siso(), 10.0, 2.0, &plan).unwrap();
        let truth = 1.0 - (-(4.0f64 - 1.0) / 10.0).exp();
        assert!(
            (est.p_hat - truth).abs() < 4.0 * est.stderr,
            "p_hat {} truth {truth} stderr {}",
            est.p_hat,
            est.stderr
        );
        assert!(est.ci_low <= est.p_hat && est.p_hat <= est.ci_high);
    }

    #[test]
    fn low_snr_outage_is_certain() {
        let plan = TrialPlan { n_trials: 1000, seed: 3, shards: 8 };
        let est = estimate_outage(&fig1(), 1e-9, 2.0, &plan).unwrap();
        assert!(est.p_hat > 0.999 && est.ci_low > 0.99);
    }

    #[test]
    fn mellin_at_one_is_exact() {
        let plan = TrialPlan { n_trials: 1000, seed: 5, shards: 8 };
        let (v, se) = estimate_mellin(&siso(), 1.0, Complex64::new(1.0, 0.0), &plan).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
        assert!(se < 1e-12);
    }

    #[test]
    fn mellin_matches_quadrature_oracle() {
        // E[(1+lam)^{-1/2}], lam ~ Exp(1): 1D quadrature oracle
        let oracle = {
            let rule = crate::specfun::quad::gauss_legendre(64);
            let mut total = 0.0;
            for k in 0..40 {
                let (a, b) = (k as f64, k as f64 + 1.0);
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                    let u = mid + half * x;
                    total += w * half * (1.0 + u).powf(-0.5) * (-u).exp();
                }
            }
            total
        };
        let plan = TrialPlan { n_trials: 400_000, seed: 11, shards: 32 };
        let (v, se) = estimate_mellin(&siso(), 1.0, Complex64::new(0.5, 0.0), &plan).unwrap();
        assert!((v.re - oracle).abs() < 4.0 * se, "{} vs {oracle} (se {se})", v.re);
        assert!(v.im.abs() < 4.0 * se);
    }

    #[test]
    fn sweep_monotone_and_deterministic() {
        let plan = TrialPlan { n_trials: 20_000, seed: 9, shards: 16 };
        let grid = [0.0, 5.0, 10.0, 15.0, 20.0];
        let s1 = sweep(&fig1(), 2.0, &grid, &plan).unwrap();
        let s2 = sweep(&fig1(), 2.0, &grid, &plan).unwrap();
        assert_eq!(s1, s2);
        for w in s1.windows(2) {
            let (p0, p1) = (w[0].1, w[1].1);
            assert!(p1.p_hat <= p0.p_hat + 3.0 * (p0.stderr + p1.stderr));
        }
        assert!(sweep(&fig1(), 2.0, &[], &plan).is_err());
    }

    #[test]
    fn single_point_sweep_equals_estimate() {
        let plan = TrialPlan { n_trials: 5_000, seed: 13, shards: 8 };
        let s = sweep(&fig1(), 2.0, &[10.0], &plan).unwrap();
        let e = estimate_outage_stream(&fig1(), 10.0, 2.0, &plan, 0).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].1, e);
    }

    #[test]
    fn coverage_calibration() {
        // 200 small plans against the SISO closed form: 95% CI should cover
        // truth in 95% +- 4% of repetitions.
        let truth = 1.0 - (-(4.0f64 - 1.0) / 10.0).exp();
        let mut covered = 0;
        for rep in 0..200u64 {
            let plan = TrialPlan { n_trials: 2_000, seed: 1000 + rep, shards: 4 };
            let est = estimate_outage(&siso(), 10.0, 2.0, &plan).unwrap();
            if est.ci_low <= truth && truth <= est.ci_high {
                covered += 1;
            }
        }
        let rate = covered as f64 / 200.0;
        assert!((rate - 0.95).abs() <= 0.04, "coverage {rate}");
    }

    #[test]
    fn wilson_interval_for_rare_events() {
        let est = OutageEstimate::from_count(2, 10_000, 1.96);
        assert!(est.rare_event);
        assert!(est.ci_low >= 0.0 && est.ci_high <= 1.0);
        assert!(est.ci_low < est.p_hat && est.p_hat < est.ci_high);
        let common = OutageEstimate::from_count(5_000, 10_000, 1.96);
        assert!(!common.rare_event);
    }
}
