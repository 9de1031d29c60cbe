//! Adaptive quadrature on a vertical Mellin–Barnes line.
//!
//! Composite Gauss–Legendre panels with error-driven bisection on the
//! truncated line [−T, T], plus doubling of T until the outer strips fall
//! below the requested tail tolerance (or the f64 noise floor of the
//! integrand, whichever is larger).

use crate::error::{OutageError, Result};
use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Parameters of a vertical integration line Re(s) = `abscissa_c`.
#[derive(Debug, Clone)]
pub struct ContourSpec {
    /// Real part of the integration line.
    pub abscissa_c: f64,
    /// Initial truncation of the imaginary axis; doubled adaptively.
    pub half_height_t: f64,
    /// Gauss–Legendre points per panel per refinement pass.
    pub nodes: usize,
    /// Relative bound on the discarded tail.
    pub tail_tolerance: f64,
}

impl ContourSpec {
    pub fn new(abscissa_c: f64, half_height_t: f64, nodes: usize, tail_tolerance: f64) -> Result<Self> {
        if !(half_height_t > 0.0) {
            return Err(OutageError::Domain(format!(
                "half_height_t must be > 0 (got {half_height_t})"
            )));
        }
        if nodes < 16 {
            return Err(OutageError::Domain(format!("nodes must be >= 16 (got {nodes})")));
        }
        if !(tail_tolerance > 0.0 && tail_tolerance < 1.0) {
            return Err(OutageError::Domain(format!(
                "tail_tolerance must be in (0,1) (got {tail_tolerance})"
            )));
        }
        Ok(Self { abscissa_c, half_height_t, nodes, tail_tolerance })
    }

    pub fn with_abscissa(mut self, abscissa_c: f64) -> Self {
        self.abscissa_c = abscissa_c;
        self
    }
}

impl Default for ContourSpec {
    fn default() -> Self {
        // 32-node panels resolve roughly twice the oscillation cycles of
        // 16-node panels per evaluation, which matters in the far tails.
        Self { abscissa_c: -0.5, half_height_t: 64.0, nodes: 32, tail_tolerance: 1e-9 }
    }
}

/// Outcome of one contour integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// Magnitude of the last-discarded strip relative to |value|.
    pub tail_estimate: f64,
    /// (1/2π) ∫ |integrand| |ds| over the evaluated contour; the ratio
    /// abs_integral / |value| measures cancellation along the contour.
    pub abs_integral: f64,
    pub nodes_used: usize,
}

pub(crate) struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss–Legendre nodes/weights on [−1, 1] by Newton iteration on P_n.
pub(crate) fn gauss_legendre(n: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P'_n(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    let rule = Arc::new(GaussRule { nodes, weights });
    cache.lock().unwrap().insert(n, Arc::clone(&rule));
    rule
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    abs: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(std::cmp::Ordering::Equal)
    }
}

struct SegmentIntegrator<'a, F> {
    f: &'a F,
    base_nodes: usize,
    evals: usize,
    /// Relative noise level of the integrand itself. 5e-16 for a clean f64
    /// evaluation; callers whose integrand carries internal cancellation
    /// (e.g. an alternating permutation sum) pass their amplified level.
    noise_rel: f64,
}

impl<'a, F> SegmentIntegrator<'a, F>
where
    F: Fn(f64) -> Result<Complex64>,
{
    fn panel(&mut self, a: f64, b: f64) -> Result<Panel> {
        let lo = self.rule_eval(a, b, self.base_nodes)?;
        let hi = self.rule_eval(a, b, 2 * self.base_nodes)?;
        Ok(Panel { a, b, value: hi.0, abs: hi.1, err: (hi.0 - lo.0).norm() })
    }

    fn rule_eval(&mut self, a: f64, b: f64, n: usize) -> Result<(Complex64, f64)> {
        let rule = gauss_legendre(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let v = (self.f)(mid + half * x)?;
            acc += w * v;
            abs += w * v.norm();
        }
        self.evals += n;
        Ok((acc * half, abs * half))
    }

    /// Integrate over [a, b] to absolute tolerance `tol_abs`, refining the
    /// worst panel first. Refinement stops early when the largest panel
    /// error sits at the f64 noise floor of the accumulated |integrand|.
    fn integrate(&mut self, a: f64, b: f64, tol_abs: f64, init_panels: usize) -> Result<(Complex64, f64)> {
        let mut heap = BinaryHeap::new();
        let width = (b - a) / init_panels as f64;
        let mut total_err = 0.0;
        for i in 0..init_panels {
            let p = self.panel(a + i as f64 * width, a + (i + 1) as f64 * width)?;
            total_err += p.err;
            heap.push(p);
        }
        let mut total_abs: f64 = heap.iter().map(|p| p.abs).sum();
        let mut splits = 0usize;
        let mut checkpoint_err = total_err;
        let mut next_checkpoint = heap.len().max(64);
        loop {
            if total_err <= tol_abs {
                break;
            }
            let worst = heap.pop().expect("heap nonempty");
            if worst.err <= self.noise_rel * worst.abs {
                // every panel is at its own noise floor; nothing left to gain
                heap.push(worst);
                break;
            }
            total_err -= worst.err;
            total_abs -= worst.abs;
            let mid = 0.5 * (worst.a + worst.b);
            let left = self.panel(worst.a, mid)?;
            let right = self.panel(mid, worst.b)?;
            total_err += left.err + right.err;
            total_abs += left.abs + right.abs;
            heap.push(left);
            heap.push(right);
            splits += 1;
            if splits >= next_checkpoint {
                // Noise plateau: once the worst panel error is far below the
                // integrand scale, refinement that no longer shrinks the
                // total is chasing the integrand's own f64 noise. A stalled
                // but large worst panel is under-resolution instead, and
                // splitting must continue.
                let gate = (1e3 * self.noise_rel).max(1e-6) * total_abs;
                let at_noise = heap.peek().map(|p| p.err <= gate).unwrap_or(true);
                if at_noise && total_err > 0.9 * checkpoint_err {
                    break;
                }
                checkpoint_err = total_err;
                next_checkpoint = splits + heap.len().max(64);
            }
            if splits > 50_000 {
                return Err(OutageError::NonConvergence { achieved: total_err, requested: tol_abs });
            }
        }
        let mut value = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for p in heap {
            value += p.value;
            abs += p.abs;
        }
        Ok((value, abs))
    }
}

/// (1/2πi) ∫_{c−i∞}^{c+i∞} integrand(s) ds along the line Re(s) = c, with
/// adaptive truncation doubling and panel refinement.
pub fn mellin_barnes_integrate<F>(integrand: F, contour: &ContourSpec) -> Result<QuadratureResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    mellin_barnes_integrate_noisy(integrand, contour, 5e-16)
}

/// [`mellin_barnes_integrate`] for integrands whose own evaluation noise is
/// `noise_rel` relative to their magnitude; accuracy targets and refinement
/// floors are widened accordingly.
pub fn mellin_barnes_integrate_noisy<F>(
    integrand: F,
    contour: &ContourSpec,
    noise_rel: f64,
) -> Result<QuadratureResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    // Re-validate (callers may have built the struct literally).
    ContourSpec::new(contour.abscissa_c, contour.half_height_t, contour.nodes, contour.tail_tolerance)?;
    let c = contour.abscissa_c;
    let g = |t: f64| integrand(Complex64::new(c, t));
    let noise_rel = noise_rel.clamp(5e-16, 1e-2);
    let mut integ =
        SegmentIntegrator { f: &g, base_nodes: contour.nodes, evals: 0, noise_rel };

    let t0 = contour.half_height_t;
    let tail_tol = contour.tail_tolerance;

    // Pass 1: rough core for the scale.
    let (rough, rough_abs) = integ.integrate(-t0, t0, f64::INFINITY, 16)?;
    let noise = 2.0 * noise_rel * rough_abs.max(f64::MIN_POSITIVE);
    let target = (0.25 * tail_tol * rough.norm()).max(noise);

    // Pass 2: refined core.
    let (core, core_abs) = integ.integrate(-t0, t0, target, 16)?;
    let mut total = core;
    let mut total_abs = core_abs;
    let mut t = t0;
    let mut strips: Vec<f64> = Vec::new();
    let tail_estimate;
    loop {
        let (up, up_abs) = integ.integrate(t, 2.0 * t, 0.25 * target, 8)?;
        let (down, down_abs) = integ.integrate(-2.0 * t, -t, 0.25 * target, 8)?;
        total_abs += up_abs + down_abs;
        let strip = up + down;
        let smag = strip.norm();
        total += strip;
        strips.push(smag);
        if smag <= (tail_tol * total.norm()).max(noise) {
            tail_estimate = smag / total.norm().max(noise / tail_tol);
            break;
        }
        let k = strips.len();
        if k >= 3 && strips[k - 1] > strips[k - 2] && strips[k - 2] > strips[k - 3] {
            return Err(OutageError::TailDivergence(strips[k - 2], strips[k - 1]));
        }
        t *= 2.0;
        if t > t0 * (1u64 << 48) as f64 {
            return Err(OutageError::NonConvergence { achieved: smag / total.norm().max(1e-300), requested: tail_tol });
        }
    }

    Ok(QuadratureResult {
        value: total / (2.0 * PI),
        tail_estimate,
        abs_integral: total_abs / (2.0 * PI),
        nodes_used: integ.evals,
    })
}

/// ∫ f(s) ds along the straight segment z0 → z1, adaptively refined to the
/// absolute tolerance. Returns the value and the integral of |f|·|ds|.
pub(crate) fn integrate_complex_segment<F>(
    f: &F,
    z0: Complex64,
    z1: Complex64,
    tol_abs: f64,
    init_panels: usize,
) -> Result<(Complex64, f64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let delta = z1 - z0;
    let g = |u: f64| Ok(f(z0 + u * delta)? * delta);
    let mut integ = SegmentIntegrator { f: &g, base_nodes: 16, evals: 0, noise_rel: 5e-16 };
    integ.integrate(0.0, 1.0, tol_abs, init_panels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::log_gamma;

    #[test]
    fn gauss_legendre_weights_sum_to_two() {
        for &n in &[16usize, 32, 61] {
            let r = gauss_legendre(n);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13);
            // x^2 integrates to 2/3
            let v: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x * x).sum();
            assert!((v - 2.0 / 3.0).abs() < 1e-13);
        }
    }

    #[test]
    fn contour_spec_validation() {
        assert!(ContourSpec::new(-0.5, 0.0, 16, 1e-9).is_err());
        assert!(ContourSpec::new(-0.5, 64.0, 8, 1e-9).is_err());
        assert!(ContourSpec::new(-0.5, 64.0, 16, 1.5).is_err());
        assert!(ContourSpec::new(-0.5, 64.0, 16, 1e-9).is_ok());
    }

    #[test]
    fn mellin_pair_of_exp() {
        // (1/2πi) ∫ Γ(s) x^{−s} ds = e^{−x} at c = 1, x = 2
        let contour = ContourSpec { abscissa_c: 1.0, half_height_t: 32.0, nodes: 16, tail_tolerance: 1e-10 };
        let x: f64 = 2.0;
        let r = mellin_barnes_integrate(
            |s| Ok(log_gamma(s)?.exp() * (-s * x.ln()).exp()),
            &contour,
        )
        .unwrap();
        assert!((r.value.re - (-x).exp()).abs() < 1e-11, "got {}", r.value);
        assert!(r.value.im.abs() < 1e-11);
        assert!(r.tail_estimate <= contour.tail_tolerance);
    }

    #[test]
    fn residue_pair_rational() {
        // (1/2πi) ∫ x^s / (s(s−1)) ds = x − 1 at c = 2, x = 4 (close left)
        let contour = ContourSpec { abscissa_c: 2.0, half_height_t: 64.0, nodes: 16, tail_tolerance: 1e-10 };
        let x: f64 = 4.0;
        let r = mellin_barnes_integrate(
            |s| Ok((s * x.ln()).exp() / (s * (s - 1.0))),
            &contour,
        )
        .unwrap();
        assert!((r.value.re - 3.0).abs() < 1e-8, "got {}", r.value);
    }

    #[test]
    fn lorentzian_integrates_to_half() {
        // (1/2π) ∫ dt / (1 + t²) = 1/2 regardless of x
        let contour = ContourSpec { abscissa_c: 0.0, half_height_t: 64.0, nodes: 16, tail_tolerance: 1e-8 };
        let r = mellin_barnes_integrate(
            |s| Ok(Complex64::new(1.0 / (1.0 + s.im * s.im), 0.0)),
            &contour,
        )
        .unwrap();
        assert!((r.value.re - 0.5).abs() < 1e-8, "got {}", r.value);
    }

    #[test]
    fn tail_divergence_detected() {
        // A growing integrand has no convergent tail.
        let contour = ContourSpec { abscissa_c: 0.0, half_height_t: 8.0, nodes: 16, tail_tolerance: 1e-6 };
        let r = mellin_barnes_integrate(|s| Ok(Complex64::new(1.0 + s.im * s.im, 0.0)), &contour);
        assert!(matches!(r, Err(OutageError::TailDivergence(_, _))));
    }
}
