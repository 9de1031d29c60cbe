//! Kronecker channel domain model: correlation matrices, channel sampling,
//! instantaneous capacity, and spectrum-ordering utilities.

use crate::error::{OutageError, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-9;
const MAJORIZATION_TOL: f64 = 1e-9;
const SPECTRUM_GAP_TOL: f64 = 1e-6;

/// A Hermitian positive-definite correlation matrix with trace equal to its
/// dimension, carrying its eigenvalues (descending) and principal square root.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    entries: DMatrix<Complex64>,
    eigenvalues: Vec<f64>,
    sqrt: DMatrix<Complex64>,
}

fn check_finite(m: &DMatrix<Complex64>) -> Result<()> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(OutageError::NonFinite);
    }
    Ok(())
}

impl CorrelationMatrix {
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(OutageError::DimensionMismatch(format!(
                "correlation matrix must be square and nonempty ({}x{})",
                entries.nrows(),
                entries.ncols()
            )));
        }
        check_finite(&entries)?;
        for i in 0..n {
            for j in 0..n {
                let d = entries[(i, j)] - entries[(j, i)].conj();
                if d.norm() > HERMITIAN_TOL {
                    return Err(OutageError::Domain(format!(
                        "matrix is not Hermitian: |R[{i},{j}] - conj(R[{j},{i}])| = {:.3e}",
                        d.norm()
                    )));
                }
            }
        }
        let trace: f64 = (0..n).map(|i| entries[(i, i)].re).sum();
        if (trace - n as f64).abs() > TRACE_TOL {
            return Err(OutageError::TraceViolation { trace, dim: n });
        }
        // Symmetrize exactly before the eigendecomposition.
        let herm = DMatrix::from_fn(n, n, |i, j| 0.5 * (entries[(i, j)] + entries[(j, i)].conj()));
        let eig = nalgebra::SymmetricEigen::new(herm);
        let mut pairs: Vec<(f64, DVector<Complex64>)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(k, &l)| (l, eig.eigenvectors.column(k).into_owned()))
            .collect();
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        for &(l, _) in &pairs {
            if l <= 0.0 {
                return Err(OutageError::NonPositiveEigenvalue(l));
            }
        }
        let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let mut sqrt = DMatrix::zeros(n, n);
        for (l, v) in &pairs {
            sqrt += (v * v.adjoint()).scale(l.sqrt());
        }
        Ok(Self { entries, eigenvalues, sqrt })
    }

    /// Diagonal correlation matrix with the given spectrum.
    pub fn from_eigenvalues(eigenvalues: &[f64]) -> Result<Self> {
        let n = eigenvalues.len();
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(eigenvalues[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::from_matrix(m)
    }

    /// Exponential profile R[i][j] = r^{|i−j|} with coefficient r in [0, 1).
    pub fn exponential_profile(n: usize, r: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(OutageError::Domain(format!(
                "exponential profile coefficient must lie in [0, 1) (got {r})"
            )));
        }
        let m = DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(r.powi((i as i32 - j as i32).abs()), 0.0)
        });
        Self::from_matrix(m)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_matrix(DMatrix::identity(n, n)).expect("identity is a valid correlation matrix")
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Hermitian principal square root.
    pub fn sqrt(&self) -> &DMatrix<Complex64> {
        &self.sqrt
    }

    pub fn log_det(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.ln()).sum()
    }
}

/// Antenna counts and the transmit/receive correlation pair.
#[derive(Debug, Clone)]
pub struct MimoConfig {
    pub nt: usize,
    pub nr: usize,
    pub rt: CorrelationMatrix,
    pub rr: CorrelationMatrix,
}

impl MimoConfig {
    pub fn new(rt: CorrelationMatrix, rr: CorrelationMatrix) -> Result<Self> {
        let nt = rt.dim();
        let nr = rr.dim();
        Ok(Self { nt, nr, rt, rr })
    }

    pub fn from_eigenvalues(t_eigs: &[f64], r_eigs: &[f64]) -> Result<Self> {
        Self::new(
            CorrelationMatrix::from_eigenvalues(t_eigs)?,
            CorrelationMatrix::from_eigenvalues(r_eigs)?,
        )
    }

    pub fn uncorrelated(nt: usize, nr: usize) -> Self {
        Self {
            nt,
            nr,
            rt: CorrelationMatrix::identity(nt),
            rr: CorrelationMatrix::identity(nr),
        }
    }

    /// Receive-side inverse eigenvalues a_i = 1/eig_i(Rr), ascending in a.
    pub fn a(&self) -> Vec<f64> {
        self.rr.eigenvalues().iter().map(|l| 1.0 / l).collect()
    }

    /// Transmit-side inverse eigenvalues b_j = 1/eig_j(Rt), ascending in b.
    pub fn b(&self) -> Vec<f64> {
        self.rt.eigenvalues().iter().map(|l| 1.0 / l).collect()
    }

    /// The same channel viewed with transmit and receive sides exchanged.
    /// Outage is invariant under this swap, which normalizes Nt >= Nr.
    pub fn swapped(&self) -> Self {
        Self {
            nt: self.nr,
            nr: self.nt,
            rt: self.rr.clone(),
            rr: self.rt.clone(),
        }
    }
}

/// H = Rr^{1/2} W Rt^{1/2} for an Nr x Nt matrix W of iid CN(0,1) entries.
pub fn correlate_channel(config: &MimoConfig, w: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    if w.nrows() != config.nr || w.ncols() != config.nt {
        return Err(OutageError::DimensionMismatch(format!(
            "white matrix is {}x{}, expected {}x{}",
            w.nrows(),
            w.ncols(),
            config.nr,
            config.nt
        )));
    }
    Ok(config.rr.sqrt() * w * config.rt.sqrt())
}

/// Instantaneous capacity log2 det(I + rho H H^H) in bits/s/Hz.
pub fn capacity(h: &DMatrix<Complex64>, rho: f64) -> Result<f64> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(OutageError::Domain(format!("snr must be finite and >= 0 (got {rho})")));
    }
    check_finite(h)?;
    let nr = h.nrows();
    let gram = DMatrix::identity(nr, nr) + (h * h.adjoint()).scale(rho);
    let chol = nalgebra::Cholesky::new(gram)
        .ok_or_else(|| OutageError::Domain("I + rho H H^H is not positive definite".into()))?;
    let log_det2: f64 = (0..nr).map(|i| chol.l_dirty()[(i, i)].re.ln()).sum();
    Ok(2.0 * log_det2 / std::f64::consts::LN_2)
}

/// True when `x` majorizes `y`: equal sums and dominating partial sums of the
/// descending rearrangements, both within an absolute tolerance.
pub fn majorizes(x: &[f64], y: &[f64]) -> Result<bool> {
    if x.len() != y.len() {
        return Err(OutageError::LengthMismatch(x.len(), y.len()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(OutageError::NonFinite);
    }
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ys.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut px = 0.0;
    let mut py = 0.0;
    for k in 0..xs.len() {
        px += xs[k];
        py += ys[k];
        if k + 1 < xs.len() {
            if px < py - MAJORIZATION_TOL {
                return Ok(false);
            }
        } else if (px - py).abs() > MAJORIZATION_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether all pairwise relative eigenvalue gaps exceed the working tolerance.
pub fn spectrum_is_distinct(eigenvalues: &[f64]) -> bool {
    for i in 0..eigenvalues.len() {
        for j in (i + 1)..eigenvalues.len() {
            let scale = eigenvalues[i].abs().max(eigenvalues[j].abs()).max(1e-300);
            if (eigenvalues[i] - eigenvalues[j]).abs() / scale < SPECTRUM_GAP_TOL {
                return false;
            }
        }
    }
    true
}

/// Graded perturbation that splits repeated eigenvalues while preserving the
/// trace: e_i -> e_i (1 + i·eps), then rescale to the original sum. Returns
/// the input unchanged when the spectrum is already distinct.
pub fn distinct_spectrum(eigenvalues: &[f64], eps: f64) -> Result<Vec<f64>> {
    if eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(OutageError::NonFinite);
    }
    if eigenvalues.iter().any(|&v| v <= 0.0) {
        return Err(OutageError::NonPositiveEigenvalue(
            eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min),
        ));
    }
    if !(eps > 0.0 && eps <= 1e-2) {
        return Err(OutageError::Domain(format!("perturbation eps must be in (0, 1e-2] (got {eps})")));
    }
    if spectrum_is_distinct(eigenvalues) {
        return Ok(eigenvalues.to_vec());
    }
    let trace: f64 = eigenvalues.iter().sum();
    let mut out: Vec<f64> = eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &v)| v * (1.0 + i as f64 * eps))
        .collect();
    let new_trace: f64 = out.iter().sum();
    let scale = trace / new_trace;
    for v in &mut out {
        *v *= scale;
    }
    if !spectrum_is_distinct(&out) {
        return Err(OutageError::DegenerateInput(
            "spectrum still has near-ties after graded perturbation".into(),
        ));
    }
    Ok(out)
}
