//! Integer-parameter Meijer G factor of the high-SNR outage asymptote.
//!
//! For antenna counts Nt >= Nr the rate-dependent gain factor is
//!
//!   g(Nt, Nr, x) = (1/2πi) ∫ x^s / (s ∏_{i=1}^{Nr} (s−Nt−i+1)_{Nt}) ds
//!
//! along a vertical line right of every pole, closed to the left. The
//! integrand is a pure rational function times x^s, so the same value is
//! also a finite sum of residues at the integers 0, 1, ..., Nt+Nr−1; both
//! routes are provided and cross-checked in tests.

use crate::error::{OutageError, Result};
use crate::specfun::pochhammer;
use crate::specfun::quad::integrate_complex_segment;
use num_complex::Complex64;
use std::f64::consts::PI;

fn validate(nt: usize, nr: usize, x: f64) -> Result<()> {
    if nr == 0 || nt < nr {
        return Err(OutageError::Domain(format!(
            "require Nt >= Nr >= 1 (got Nt={nt}, Nr={nr})"
        )));
    }
    if !(x >= 1.0) {
        return Err(OutageError::Domain(format!("require x >= 1 (got {x})")));
    }
    Ok(())
}

/// Roots of the denominator s ∏_{i=1}^{Nr} (s−Nt−i+1)_{Nt}, with repeats.
fn denominator_roots(nt: usize, nr: usize) -> Vec<i64> {
    let mut roots = vec![0i64];
    for i in 1..=nr {
        for k in 0..nt {
            roots.push((i + k) as i64);
        }
    }
    roots
}

/// g(Nt, Nr, x) by contour quadrature on the vertical line Re(s) = c,
/// c = Nt+Nr−1/2, right of every pole.
///
/// The raw vertical line decays only algebraically (degree −(Nt·Nr+1)), so
/// the outer legs are folded left by Cauchy's theorem: with every pole on
/// the real axis, the line is deformed into a left-opening staple; the
/// segment [c−iT, c+iT] plus two horizontal rays at Im(s) = ±T, where x^s
/// dies exponentially. The deformation is exact; only truncation of the
/// already-exponentially-small ray ends is approximate.
pub fn meijer_g_rate(nt: usize, nr: usize, x: f64) -> Result<f64> {
    validate(nt, nr, x)?;
    if x == 1.0 {
        return Ok(0.0);
    }
    let c = (nt + nr) as f64 - 0.5;
    let ln_x = x.ln();
    let ntu = nt as u32;
    let integrand = |s: Complex64| -> Result<Complex64> {
        let mut den = s;
        for i in 1..=nr {
            den *= pochhammer(s - Complex64::new((nt + i - 1) as f64, 0.0), ntu);
        }
        if den.norm() == 0.0 {
            return Err(OutageError::PoleInput(format!("denominator zero at s={s}")));
        }
        Ok((s * ln_x).exp() / den)
    };
    // A tall staple keeps the whole contour far from the pole block, so the
    // rational factor stays small everywhere and the representation carries
    // little cancellation even when g itself is tiny (small x, large Nt·Nr).
    let t = (nt + nr) as f64 + 8.0;
    // Truncate the rays 52 decay lengths left of the pole block.
    let l = 52.0 / ln_x + (nt + nr) as f64;
    let corners = [
        (Complex64::new(-l, -t), Complex64::new(c, -t)),
        (Complex64::new(c, -t), Complex64::new(c, t)),
        (Complex64::new(c, t), Complex64::new(-l, t)),
    ];
    // Rough pass for the scale, then a refined pass.
    let mut rough = Complex64::new(0.0, 0.0);
    let mut rough_abs = 0.0;
    for (z0, z1) in corners {
        let (v, a) = integrate_complex_segment(&integrand, z0, z1, f64::INFINITY, 16)?;
        rough += v;
        rough_abs += a;
    }
    let tol = (1e-12 * rough.norm()).max(1e-15 * rough_abs);
    let mut total = Complex64::new(0.0, 0.0);
    for (z0, z1) in corners {
        let (v, _) = integrate_complex_segment(&integrand, z0, z1, tol / 3.0, 16)?;
        total += v;
    }
    let g = (total / Complex64::new(0.0, 2.0 * PI)).re;
    Ok(g.max(0.0))
}

/// Unevaluated double-double value hi + lo, |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct Dd(f64, f64);

impl Dd {
    fn from(v: f64) -> Self {
        Dd(v, 0.0)
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        Dd(s, (a - (s - bb)) + (b - bb))
    }

    fn add(self, o: Dd) -> Self {
        let s = Self::two_sum(self.0, o.0);
        let lo = s.1 + self.1 + o.1;
        Self::two_sum(s.0, lo)
    }

    fn mul(self, o: Dd) -> Self {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        let lo = e + self.0 * o.1 + self.1 * o.0;
        Self::two_sum(p, lo)
    }

    fn div_scalar(self, d: f64) -> Self {
        let q0 = self.0 / d;
        // remainder of self - d * q0 to one extra limb
        let p = d * q0;
        let e = d.mul_add(q0, -p);
        let r = (self.0 - p) - e + self.1;
        Self::two_sum(q0, r / d)
    }

    /// e^self via range reduction by ln 2 and a Taylor series.
    fn exp(self) -> Self {
        const LN2_HI: f64 = 0.693_147_180_559_945_3;
        const LN2_LO: f64 = 2.319_046_813_846_299_6e-17;
        let k = (self.0 / LN2_HI).round();
        let r = self.add(Dd::from(-k).mul(Dd(LN2_HI, LN2_LO)));
        let mut term = Dd::from(1.0);
        let mut sum = Dd::from(1.0);
        for j in 1..48 {
            term = term.mul(r).div_scalar(j as f64);
            sum = sum.add(term);
            if term.0.abs() < 1e-36 * sum.0.abs() {
                break;
            }
        }
        let scale = 2f64.powi(k as i32);
        Dd(sum.0 * scale, sum.1 * scale)
    }
}

/// g(Nt, Nr, x) by summing residues at the integer poles.
///
/// The residues cancel across poles by the full (x−1)^{Nt·Nr} vanishing
/// order, up to ~17 digits at desk scale, so the whole evaluation runs in
/// double-double precision. L = ln x is the exact parameter: every residue
/// is a combination of e^{pL} and powers of L, and the cancellation
/// identity holds identically in L, which is the same parameterization the
/// quadrature route integrates.
pub fn meijer_g_rate_residue(nt: usize, nr: usize, x: f64) -> Result<f64> {
    validate(nt, nr, x)?;
    let roots = denominator_roots(nt, nr);
    let ln_x = x.ln();
    let l_dd = Dd::from(ln_x);
    let mut total = Dd::from(0.0);
    let max_pole = (nt + nr - 1) as i64;
    for p in 0..=max_pole {
        let m = roots.iter().filter(|&&q| q == p).count();
        if m == 0 {
            continue;
        }
        // Residue at a pole of order m: the coefficient of u^{m-1} in the
        // Taylor series (in u = s − p) of x^{p+u} ∏_{q≠p} 1/(u + (p−q)).
        // Rational part first: series of ∏ 1/(u + d) up to u^{m-1}.
        let mut series = vec![Dd::from(0.0); m];
        series[0] = Dd::from(1.0);
        for &q in &roots {
            if q == p {
                continue;
            }
            let d = (p - q) as f64;
            // multiply series by 1/(u + d) = (1/d) Σ (−u/d)^j
            let mut next = vec![Dd::from(0.0); m];
            for (j, slot) in next.iter_mut().enumerate() {
                let mut acc = Dd::from(0.0);
                let mut coef = Dd::from(1.0).div_scalar(d);
                for k in (0..=j).rev() {
                    acc = acc.add(series[k].mul(coef));
                    coef = coef.div_scalar(-d);
                }
                *slot = acc;
            }
            series = next;
        }
        // Combine with x^{p+u} = e^{pL} Σ L^j u^j / j!.
        let mut pow = Dd::from(p as f64).mul(l_dd).exp();
        for j in 0..m {
            total = total.add(series[m - 1 - j].mul(pow));
            pow = pow.mul(l_dd).div_scalar(j as f64 + 1.0);
        }
    }
    Ok(total.0 + total.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn siso_is_x_minus_one() {
        for &x in &[1.0, 1.5, 4.0, 100.0] {
            assert!((meijer_g_rate_residue(1, 1, x).unwrap() - (x - 1.0)).abs() < 1e-12 * x);
            assert!((meijer_g_rate(1, 1, x).unwrap() - (x - 1.0)).abs() < 1e-9 * x.max(1.0));
        }
    }

    #[test]
    fn miso_two_by_one() {
        // g(2, 1, x) = (x−1)²/2 from the residues at s = 0, 1, 2.
        for &x in &[1.0, 2.0, 3.0, 10.0] {
            let expect = (x - 1.0) * (x - 1.0) / 2.0;
            assert!((meijer_g_rate_residue(2, 1, x).unwrap() - expect).abs() < 1e-11 * expect.max(1.0));
            assert!((meijer_g_rate(2, 1, x).unwrap() - expect).abs() < 1e-8 * expect.max(1.0));
        }
    }

    #[test]
    fn vanishes_at_one() {
        for &(nt, nr) in &[(1usize, 1usize), (2, 1), (2, 2), (3, 2), (3, 3)] {
            assert!(meijer_g_rate_residue(nt, nr, 1.0).unwrap().abs() < 1e-12);
            assert!(meijer_g_rate(nt, nr, 1.0).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn quadrature_matches_residues() {
        for &(nt, nr) in &[(2usize, 2usize), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2)] {
            for &x in &[1.5, 2.0, 4.0, 16.0] {
                let r = meijer_g_rate_residue(nt, nr, x).unwrap();
                let q = meijer_g_rate(nt, nr, x).unwrap();
                assert!(
                    (r - q).abs() < 1e-8 * r.abs().max(1e-12),
                    "Nt={nt} Nr={nr} x={x}: residue {r} vs quadrature {q}"
                );
            }
            // Near x = 1 the tiny g sits under heavy contour cancellation;
            // only absolute agreement at the f64 floor is meaningful.
            let r = meijer_g_rate_residue(nt, nr, 1.01).unwrap();
            let q = meijer_g_rate(nt, nr, 1.01).unwrap();
            assert!((r - q).abs() < 1e-12, "Nt={nt} Nr={nr} x=1.01: {r} vs {q}");
        }
    }

    #[test]
    fn monotone_increasing_in_x() {
        let mut prev = 0.0;
        for k in 0..40 {
            let x = 1.0 + 0.25 * k as f64;
            let g = meijer_g_rate_residue(3, 2, x).unwrap();
            assert!(g >= prev - 1e-20);
            prev = g;
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(meijer_g_rate(1, 2, 2.0).is_err());
        assert!(meijer_g_rate(2, 0, 2.0).is_err());
        assert!(meijer_g_rate(2, 2, 0.5).is_err());
    }
}
