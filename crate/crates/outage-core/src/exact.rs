//! Exact outage CDF by Mellin–Barnes inversion.
//!
//! The mutual-information kernel G = det(I + rho H H^H) has the Mellin
//! transform phi(s) = E[G^{s-1}], a ratio of Vandermonde factors times a
//! determinant of Tricomi functions in the correlation spectra. The CDF is
//! recovered on a vertical line with Re(s) in (-1, 0):
//!
//!   F(x) = (1/2·pi·i) ∫ x^{-s} (-1/s) phi(s+1) ds.
//!
//! Two routes are provided: [`exact_cdf`] expands the determinant into a
//! compensated alternating permutation sum inside the contour integrand,
//! and [`exact_cdf_via_phi`] evaluates phi per node through an LU
//! determinant. Both share the same quadrature and must agree.
//!
//! G >= 1 almost surely, so phi is entire left of Re(s) = 1 and the
//! integrand has no singularity for Re(s) < 0. The engine exploits this by
//! lowering the abscissa to c = -(Nt·Nr) - 1/2 whenever the shallow-line
//! result is too small to resolve above f64 roundoff, which is what happens
//! deep in the high-SNR tail.

use crate::channel::{distinct_spectrum, MimoConfig};
use crate::error::{OutageError, Result};
use crate::specfun::{pochhammer, tricomi_u1_with_tol};
use crate::specfun::{mellin_barnes_integrate, mellin_barnes_integrate_noisy, ContourSpec};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Largest transmit dimension the Nt! permutation sum accepts.
pub const MAX_PERMUTATION_DIM: usize = 8;

/// Decimal digits of cancellation along the contour (integrated permutation
/// sum magnitude against the result) that trigger an error instead of a
/// silently inaccurate result.
const CANCELLATION_ALARM_DIGITS: f64 = 10.0;

/// Below this magnitude a shallow-contour CDF is considered roundoff-limited
/// and the contour is deepened.
const DEEPEN_THRESHOLD: f64 = 1e-6;

/// Allowed excess outside [0, 1] before clamping is refused.
const CLAMP_TOL: f64 = 1e-6;

/// Tuning knobs of the exact engine.
#[derive(Debug, Clone)]
pub struct ExactEngineConfig {
    pub contour: ContourSpec,
    pub tricomi_tolerance: f64,
    /// Neumaier-compensated accumulation of the permutation sum.
    pub compensated_summation: bool,
    /// Lower the abscissa automatically when the result is roundoff-limited.
    pub auto_deepen: bool,
    /// Graded perturbation applied to near-degenerate spectra.
    pub spectrum_eps: f64,
}

impl Default for ExactEngineConfig {
    fn default() -> Self {
        Self {
            contour: ContourSpec::default(),
            tricomi_tolerance: 1e-12,
            compensated_summation: true,
            auto_deepen: true,
            spectrum_eps: 1e-2,
        }
    }
}

/// Swap transmit and receive sides when needed so that nt >= nr; the second
/// element reports whether a swap happened. Analytic results are invariant.
pub fn normalize_config(config: &MimoConfig) -> (MimoConfig, bool) {
    if config.nt >= config.nr {
        (config.clone(), false)
    } else {
        (config.swapped(), true)
    }
}

/// Eigenvalue-level view of a config, normalized so that nt >= nr and with
/// near-degenerate spectra split.
struct Prepared {
    nt: usize,
    nr: usize,
    /// 1 / receive eigenvalues.
    a: Vec<f64>,
    /// 1 / transmit eigenvalues.
    b: Vec<f64>,
}

fn prepare(config: &MimoConfig, eps: f64) -> Result<Prepared> {
    let (t_raw, r_raw) = if config.nt >= config.nr {
        (config.rt.eigenvalues(), config.rr.eigenvalues())
    } else {
        (config.rr.eigenvalues(), config.rt.eigenvalues())
    };
    let nt = t_raw.len();
    let nr = r_raw.len();
    if nt > MAX_PERMUTATION_DIM {
        return Err(OutageError::PermutationCap(nt));
    }
    let t_eigs = distinct_spectrum(t_raw, eps)?;
    let r_eigs = distinct_spectrum(r_raw, eps)?;
    Ok(Prepared {
        nt,
        nr,
        a: r_eigs.iter().map(|l| 1.0 / l).collect(),
        b: t_eigs.iter().map(|l| 1.0 / l).collect(),
    })
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(OutageError::Domain(format!("snr must be finite and > 0 (got {rho})")));
    }
    Ok(())
}

/// Delta(v) = prod_{i<j} (v_j - v_i).
fn vandermonde(v: &[f64]) -> f64 {
    let mut out = 1.0;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            out *= v[j] - v[i];
        }
    }
    out
}

/// Lambda · prod a_i^Nr · prod b_j^Nr · rho^{-Nr(Nr+1)/2} with
/// Lambda = (-1)^{Nr(Nt-Nr) + Nr(Nr-1)/2} / (Delta(a) Delta(b)).
fn cdf_prefactor(p: &Prepared, rho: f64) -> Result<f64> {
    let da = vandermonde(&p.a);
    let db = vandermonde(&p.b);
    if da == 0.0 || db == 0.0 {
        return Err(OutageError::DegenerateInput(
            "repeated inverse eigenvalues leave a zero Vandermonde factor".into(),
        ));
    }
    let sign = if (p.nr * (p.nt - p.nr) + p.nr * (p.nr - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let mut pref = sign / (da * db);
    for ai in &p.a {
        pref *= ai.powi(p.nr as i32);
    }
    for bj in &p.b {
        pref *= bj.powi(p.nr as i32);
    }
    pref *= rho.powf(-((p.nr * (p.nr + 1)) as f64) / 2.0);
    if !pref.is_finite() {
        return Err(OutageError::NonFinite);
    }
    Ok(pref)
}

struct Neumaier {
    sum: Complex64,
    comp: Complex64,
}

impl Neumaier {
    fn new() -> Self {
        Self { sum: Complex64::new(0.0, 0.0), comp: Complex64::new(0.0, 0.0) }
    }

    fn add(&mut self, v: Complex64) {
        let t_re = self.sum.re + v.re;
        self.comp.re += if self.sum.re.abs() >= v.re.abs() {
            (self.sum.re - t_re) + v.re
        } else {
            (v.re - t_re) + self.sum.re
        };
        let t_im = self.sum.im + v.im;
        self.comp.im += if self.sum.im.abs() >= v.im.abs() {
            (self.sum.im - t_im) + v.im
        } else {
            (v.im - t_im) + self.sum.im
        };
        self.sum = Complex64::new(t_re, t_im);
    }

    fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// Heap's algorithm: visit every permutation of 0..n with its sign.
fn signed_permutations(n: usize, mut visit: impl FnMut(&[usize], f64)) {
    let mut idx: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1.0;
    visit(&idx, sign);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                idx.swap(0, i);
            } else {
                idx.swap(c[i], i);
            }
            sign = -sign;
            visit(&idx, sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Alternating permutation sum of the determinant with Tricomi rows `u`
/// (nr x nt) and monomial rows b_j^{nt-1-i} below. Returns the sum and the
/// sum of term magnitudes for the cancellation diagnostic.
fn permutation_sum(
    u: &[Vec<Complex64>],
    bpow: &[Vec<f64>],
    nt: usize,
    nr: usize,
    compensated: bool,
) -> (Complex64, f64) {
    let mut acc = Neumaier::new();
    let mut plain = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    signed_permutations(nt, |sigma, sign| {
        let mut term = Complex64::new(sign, 0.0);
        for i in 0..nr {
            term *= u[i][sigma[i]];
        }
        for i in nr..nt {
            term *= bpow[sigma[i]][nt - 1 - i];
        }
        abs_sum += term.norm();
        if compensated {
            acc.add(term);
        } else {
            plain += term;
        }
    });
    (if compensated { acc.value() } else { plain }, abs_sum)
}

struct CdfIntegrand<'a> {
    p: &'a Prepared,
    rho: f64,
    ln_x: f64,
    tricomi_tol: f64,
    compensated: bool,
    /// b_j^e for e = 0..nt.
    bpow: Vec<Vec<f64>>,
}

impl<'a> CdfIntegrand<'a> {
    fn new(p: &'a Prepared, rho: f64, x: f64, engine: &ExactEngineConfig) -> Self {
        let nt = p.nt;
        let bpow = p
            .b
            .iter()
            .map(|&bj| (0..nt).map(|e| bj.powi(e as i32)).collect())
            .collect();
        Self {
            p,
            rho,
            ln_x: x.ln(),
            tricomi_tol: engine.tricomi_tolerance,
            compensated: engine.compensated_summation,
            bpow,
        }
    }

    /// Permutation sum at s, with its cancellation magnitude.
    fn perm(&self, s: Complex64) -> Result<(Complex64, f64)> {
        let (nt, nr) = (self.p.nt, self.p.nr);
        let beta = s + Complex64::new(1.0 + nr as f64, 0.0);
        let mut u = vec![vec![Complex64::new(0.0, 0.0); nt]; nr];
        for i in 0..nr {
            for j in 0..nt {
                u[i][j] = tricomi_u1_with_tol(beta, self.p.a[i] * self.p.b[j] / self.rho, self.tricomi_tol)?;
            }
        }
        Ok(permutation_sum(&u, &self.bpow, nt, nr, self.compensated))
    }

    fn eval(&self, s: Complex64) -> Result<Complex64> {
        let nr = self.p.nr;
        let (perm, _) = self.perm(s)?;
        let mut poch = Complex64::new(1.0, 0.0);
        for j in 1..nr {
            poch *= pochhammer(-s - Complex64::new(nr as f64 - 1.0, 0.0), (nr - j) as u32);
        }
        if poch.norm() == 0.0 || s.norm() == 0.0 {
            return Err(OutageError::PoleInput(format!("integrand pole at s = {s}")));
        }
        Ok(-perm / (s * poch) * (-s * self.ln_x).exp())
    }
}

fn integrate_cdf(p: &Prepared, rho: f64, x: f64, engine: &ExactEngineConfig, contour: &ContourSpec) -> Result<f64> {
    let integrand = CdfIntegrand::new(p, rho, x, engine);
    let pref = cdf_prefactor(p, rho)?;

    // The permutation sum loses digits to cancellation (badly so when a
    // near-degenerate spectrum has been split by a small eps), which raises
    // the relative noise of every integrand sample far above 5e-16. Probe
    // the loss at the contour center and widen the quadrature's noise
    // floors to match.
    let center = Complex64::new(contour.abscissa_c, 0.0);
    let (perm_c, abs_c) = integrand.perm(center)?;
    let cancel = if perm_c.norm() > 0.0 { abs_c / perm_c.norm() } else { f64::INFINITY };
    let noise_rel = (1e-13 * cancel.max(1.0)).max(5e-16);
    let quad = mellin_barnes_integrate_noisy(|s| integrand.eval(s), contour, noise_rel)?;

    // End-to-end cancellation diagnostic: digits lost between the integrated
    // magnitude of the compensated-permutation-sum integrand and the result.
    // Pointwise node cancellation does not by itself limit the integral (a
    // deepened contour trades node cancellation for tail resolvability), so
    // the alarm watches what actually reaches the caller.
    if quad.value.norm() > 0.0 {
        let digits = (quad.abs_integral / quad.value.norm()).log10();
        if digits > CANCELLATION_ALARM_DIGITS {
            return Err(OutageError::CancellationAlarm { digits });
        }
    } else if quad.abs_integral > 0.0 {
        return Err(OutageError::CancellationAlarm { digits: f64::INFINITY });
    }
    Ok(pref * quad.value.re)
}

/// P[det(I + rho H H^H) <= x], the exact CDF of the capacity kernel.
pub fn exact_cdf(config: &MimoConfig, x: f64, rho: f64, engine: &ExactEngineConfig) -> Result<f64> {
    check_rho(rho)?;
    if !x.is_finite() {
        return Err(OutageError::NonFinite);
    }
    if x <= 1.0 {
        if x <= 0.0 {
            return Err(OutageError::Domain(format!("threshold x must be positive (got {x})")));
        }
        return Ok(0.0);
    }
    let p = prepare(config, engine.spectrum_eps)?;
    let c = engine.contour.abscissa_c;
    if !(c > -1.0 && c < 0.0) && !engine_allows_abscissa(c) {
        return Err(OutageError::Domain(format!(
            "contour abscissa must lie in (-1, 0) or at a noninteger c < 0 (got {c})"
        )));
    }

    // A shallow-line result that is roundoff-limited shows up either as a
    // tiny magnitude or as a cancellation alarm; both deepen the contour.
    let shallow = integrate_cdf(&p, rho, x, engine, &engine.contour);
    let deepen = engine.auto_deepen
        && c > -1.0
        && match &shallow {
            Ok(v) => v.abs() < DEEPEN_THRESHOLD,
            Err(OutageError::CancellationAlarm { .. }) => true,
            Err(_) => false,
        };
    let raw = if deepen {
        let deep = engine.contour.clone().with_abscissa(-((p.nt * p.nr) as f64) - 0.5);
        integrate_cdf(&p, rho, x, engine, &deep)?
    } else {
        shallow?
    };
    clamp_unit(raw)
}

fn engine_allows_abscissa(c: f64) -> bool {
    // Any noninteger abscissa left of 0 is valid: the summed integrand is
    // analytic on Re(s) < 0 apart from the Pochhammer zeros at integers.
    c < 0.0 && c.fract() != 0.0
}

fn clamp_unit(v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(OutageError::NonFinite);
    }
    if v < 0.0 {
        if v < -CLAMP_TOL {
            return Err(OutageError::NonConvergence { achieved: -v, requested: CLAMP_TOL });
        }
        return Ok(0.0);
    }
    if v > 1.0 {
        if v > 1.0 + CLAMP_TOL {
            return Err(OutageError::NonConvergence { achieved: v - 1.0, requested: CLAMP_TOL });
        }
        return Ok(1.0);
    }
    Ok(v)
}

/// Outage probability at rate R bits/s/Hz: F(2^R).
pub fn exact_outage(config: &MimoConfig, rate: f64, rho: f64, engine: &ExactEngineConfig) -> Result<f64> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(OutageError::Domain(format!("rate must be finite and > 0 (got {rate})")));
    }
    exact_cdf(config, rate.exp2(), rho, engine)
}

/// The Mellin transform phi(s) = E[det(I + rho H H^H)^{s-1}] through the LU
/// determinant of the Tricomi matrix.
pub fn mellin_phi(config: &MimoConfig, s: Complex64, rho: f64) -> Result<Complex64> {
    check_rho(rho)?;
    let p = prepare(config, ExactEngineConfig::default().spectrum_eps)?;
    let (nt, nr) = (p.nt, p.nr);
    let da = vandermonde(&p.a);
    let db = vandermonde(&p.b);
    let sign = if (nr * (nt - nr)) % 2 == 0 { 1.0 } else { -1.0 };
    let mut pref = Complex64::new(sign * rho.powf(-((nr * (nr + 1)) as f64) / 2.0), 0.0);
    for ai in &p.a {
        pref *= ai.powi(nr as i32);
    }
    for bj in &p.b {
        pref *= bj.powi(nr as i32);
    }
    let mut denom = Complex64::new(da * db, 0.0);
    for i in 1..=nr {
        let base = s + Complex64::new(i as f64 - 2.0, 0.0);
        for _ in 0..(i - 1) {
            denom *= base;
        }
    }
    if denom.norm() < 1e-300 {
        return Err(OutageError::PoleInput(format!("phi pole at s = {s}")));
    }
    let beta = s + Complex64::new(nr as f64, 0.0);
    let m = DMatrix::from_fn(nt, nt, |i, j| {
        if i < nr {
            tricomi_u1_with_tol(beta, p.a[i] * p.b[j] / rho, 1e-12).unwrap_or(Complex64::new(f64::NAN, 0.0))
        } else {
            Complex64::new(p.b[j].powi((nt - 1 - i) as i32), 0.0)
        }
    });
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(OutageError::NonFinite);
    }
    let det = m.lu().determinant();
    Ok(pref / denom * det)
}

/// The same CDF evaluated through phi(s+1) per contour node; cross-validation
/// route for [`exact_cdf`].
pub fn exact_cdf_via_phi(config: &MimoConfig, x: f64, rho: f64, contour: &ContourSpec) -> Result<f64> {
    check_rho(rho)?;
    if x <= 1.0 {
        if x <= 0.0 {
            return Err(OutageError::Domain(format!("threshold x must be positive (got {x})")));
        }
        return Ok(0.0);
    }
    let ln_x = x.ln();
    let one = Complex64::new(1.0, 0.0);
    let quad = mellin_barnes_integrate(
        |s| {
            let phi = mellin_phi(config, s + one, rho)?;
            Ok(-phi / s * (-s * ln_x).exp())
        },
        contour,
    )?;
    clamp_unit(quad.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::quad::gauss_legendre;

    fn fig1() -> MimoConfig {
        MimoConfig::from_eigenvalues(&[2.7, 0.2, 0.1], &[1.9, 0.1]).unwrap()
    }

    fn siso() -> MimoConfig {
        MimoConfig::from_eigenvalues(&[1.0], &[1.0]).unwrap()
    }

    /// Oracle for SISO phi(s) = E[(1 + rho L)^{s-1}], L ~ Exp(1), by direct
    /// 1D quadrature of the defining integral.
    fn siso_phi_oracle(s: Complex64, rho: f64) -> Complex64 {
        let rule = gauss_legendre(64);
        let mut total = Complex64::new(0.0, 0.0);
        // map panels [k, k+1) of u in [0, 40]
        for k in 0..40 {
            let (a, b) = (k as f64, k as f64 + 1.0);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let u = mid + half * x;
                let f = ((s - 1.0) * (1.0 + rho * u).ln()).exp() * (-u).exp();
                total += w * half * f;
            }
        }
        total
    }

    #[test]
    fn phi_at_one_is_one() {
        for (cfg, rho) in [(fig1(), 10.0), (fig1(), 1.0), (siso(), 10.0)] {
            let v = mellin_phi(&cfg, Complex64::new(1.0, 0.0), rho).unwrap();
            assert!((v - 1.0).norm() < 1e-10, "phi(1) = {v}");
        }
    }

    #[test]
    fn phi_matches_siso_oracle() {
        for s in [
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.25, 0.5),
            Complex64::new(-0.5, 3.0),
        ] {
            for rho in [1.0, 10.0] {
                let v = mellin_phi(&siso(), s, rho).unwrap();
                let o = siso_phi_oracle(s, rho);
                assert!((v - o).norm() < 1e-8, "s={s} rho={rho}: {v} vs {o}");
            }
        }
    }

    #[test]
    fn siso_cdf_closed_form() {
        // SISO: F(x) = 1 - exp(-(x-1)/rho)
        let engine = ExactEngineConfig::default();
        for (x, rho) in [(4.0f64, 10.0f64), (2.0, 1.0), (1.5, 100.0), (16.0, 10.0)] {
            let truth = 1.0 - (-(x - 1.0) / rho).exp();
            let v = exact_cdf(&siso(), x, rho, &engine).unwrap();
            assert!((v - truth).abs() < 1e-9, "x={x} rho={rho}: {v} vs {truth}");
        }
    }

    #[test]
    fn cdf_routes_agree() {
        let engine = ExactEngineConfig::default();
        let v1 = exact_cdf(&fig1(), 4.0, 10.0, &engine).unwrap();
        let v2 = exact_cdf_via_phi(&fig1(), 4.0, 10.0, &engine.contour).unwrap();
        assert!((v1 - v2).abs() < 1e-9 * v1.max(1e-12), "{v1} vs {v2}");
        assert!(v1 > 0.0 && v1 < 1.0);
    }

    #[test]
    fn cdf_invariant_under_side_swap() {
        let engine = ExactEngineConfig::default();
        let v1 = exact_cdf(&fig1(), 4.0, 10.0, &engine).unwrap();
        let v2 = exact_cdf(&fig1().swapped(), 4.0, 10.0, &engine).unwrap();
        assert!((v1 - v2).abs() < 1e-10 * v1);
    }

    #[test]
    fn cdf_contour_independent() {
        let shallow = ExactEngineConfig::default();
        let mut deep = ExactEngineConfig::default();
        deep.contour.abscissa_c = -6.5;
        let v1 = exact_cdf(&fig1(), 4.0, 10.0, &shallow).unwrap();
        let v2 = exact_cdf(&fig1(), 4.0, 10.0, &deep).unwrap();
        assert!((v1 - v2).abs() < 1e-8 * v1, "{v1} vs {v2}");
    }

    #[test]
    fn cdf_monotone_in_x() {
        let engine = ExactEngineConfig::default();
        let mut prev = 0.0;
        for k in 0..8 {
            let x = 1.0 + 2.0f64.powi(k);
            let v = exact_cdf(&fig1(), x, 10.0, &engine).unwrap();
            assert!(v >= prev - 1e-12, "x={x}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn cdf_below_one_is_zero() {
        let engine = ExactEngineConfig::default();
        assert_eq!(exact_cdf(&fig1(), 1.0, 10.0, &engine).unwrap(), 0.0);
        assert_eq!(exact_cdf(&fig1(), 0.5, 10.0, &engine).unwrap(), 0.0);
        assert!(exact_cdf(&fig1(), 0.0, 10.0, &engine).is_err());
    }

    #[test]
    fn deep_tail_is_resolved() {
        // 35 dB sits far below the shallow-contour noise floor; auto-deepen
        // must recover a strictly positive value with the right slope.
        let engine = ExactEngineConfig::default();
        let rho35 = 10f64.powf(3.5);
        let rho40 = 10f64.powf(4.0);
        let p35 = exact_outage(&fig1(), 2.0, rho35, &engine).unwrap();
        let p40 = exact_outage(&fig1(), 2.0, rho40, &engine).unwrap();
        assert!(p35 > 0.0 && p40 > 0.0);
        let slope = (p35 / p40).log10() / 0.5;
        assert!((slope - 6.0).abs() < 0.1, "diversity slope {slope}");
    }

    #[test]
    fn repeated_eigenvalues_handled() {
        let engine = ExactEngineConfig::default();
        let cfg = MimoConfig::from_eigenvalues(&[1.0, 1.0], &[1.0, 1.0]).unwrap();
        let v = exact_cdf(&cfg, 4.0, 10.0, &engine).unwrap();
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn uncompensated_route_still_close() {
        let mut engine = ExactEngineConfig::default();
        let v1 = exact_cdf(&fig1(), 4.0, 10.0, &engine).unwrap();
        engine.compensated_summation = false;
        let v2 = exact_cdf(&fig1(), 4.0, 10.0, &engine).unwrap();
        assert!((v1 - v2).abs() < 1e-8 * v1);
    }

    #[test]
    fn rejects_bad_inputs() {
        let engine = ExactEngineConfig::default();
        assert!(exact_cdf(&fig1(), 4.0, 0.0, &engine).is_err());
        assert!(exact_cdf(&fig1(), 4.0, -1.0, &engine).is_err());
        assert!(exact_outage(&fig1(), 0.0, 10.0, &engine).is_err());
        let mut bad = ExactEngineConfig::default();
        bad.contour.abscissa_c = -2.0; // integer abscissa sits on Pochhammer zeros
        assert!(exact_cdf(&fig1(), 4.0, 10.0, &bad).is_err());
        let nine = MimoConfig::from_eigenvalues(&[1.0; 9], &[1.0; 2]).unwrap();
        assert!(matches!(
            exact_cdf(&nine, 4.0, 10.0, &engine),
            Err(OutageError::PermutationCap(9))
        ));
    }
}
