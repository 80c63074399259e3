//! Mathieu functions `ce_r`, `se_r` and the radial functions `Mc⁽¹⁾_r`, `Ms⁽¹⁾_r`.
//!
//! Characteristic values and Fourier coefficients come from the four
//! symmetric tridiagonal recurrences (even/odd `ce`, even/odd `se`). The
//! normalization is `∫₀^{2π} ce² dv = π` with the coefficient of the
//! leading harmonic positive.

use crate::error::{Error, Result};
use crate::specfun::bessel::bessel_j_seq;

const START_DIM: usize = 40;
const MAX_DIM: usize = 320;
const MAX_ORDER: u32 = 20;

/// Eigen-decomposition of a symmetric tridiagonal matrix by implicit QL.
/// `off[i]` couples rows `i` and `i+1`. Returns ascending eigenvalues and
/// the matching eigenvectors (one `Vec` per eigenvalue).
pub fn symmetric_tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    if off.len() + 1 != n {
        return Err(Error::InvalidParams("off-diagonal length must be n-1".into()));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iterations = 0;
            loop {
                iterations += 1;
                if iterations > 60 {
                    return Err(Error::ConvergenceFailure { s: l as i32, delta: f64::NAN });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;
                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in v.iter_mut() {
                        let hk = row[i + 1];
                        row[i + 1] = s * row[i] + c * hk;
                        row[i] = c * row[i] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&j| d[j]).collect();
    let vectors = order.iter().map(|&j| v.iter().map(|row| row[j]).collect()).collect();
    Ok((values, vectors))
}

/// Which of the four Fourier families a label belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    CeEven,
    CeOdd,
    SeEven,
    SeOdd,
}

fn classify(s: i32) -> (Class, usize) {
    let r = s.unsigned_abs() as usize;
    match (s >= 0, r % 2 == 0) {
        (true, true) => (Class::CeEven, r / 2),
        (true, false) => (Class::CeOdd, (r - 1) / 2),
        (false, true) => (Class::SeEven, (r - 2) / 2),
        (false, false) => (Class::SeOdd, (r - 1) / 2),
    }
}

/// `ce_s` (`s ≥ 0`) or `se_{|s|}` (`s < 0`) at Mathieu parameter `δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MathieuSolution {
    pub s: i32,
    pub delta: f64,
    /// `a_s` for `s ≥ 0`, `b_{|s|}` for `s < 0`.
    pub char_value: f64,
    /// Harmonic numbers matching `fourier_coeffs`.
    pub harmonics: Vec<u32>,
    pub fourier_coeffs: Vec<f64>,
}

impl MathieuSolution {
    pub fn is_even(&self) -> bool {
        self.s >= 0
    }

    /// `ce_s(v)` or `se_{|s|}(v)`.
    pub fn eval(&self, v: f64) -> f64 {
        let trig = if self.is_even() { f64::cos } else { f64::sin };
        self.harmonics
            .iter()
            .zip(&self.fourier_coeffs)
            .map(|(&h, &c)| c * trig(h as f64 * v))
            .sum()
    }

    /// First derivative in `v`.
    pub fn derivative(&self, v: f64) -> f64 {
        self.harmonics
            .iter()
            .zip(&self.fourier_coeffs)
            .map(|(&h, &c)| {
                let h = h as f64;
                if self.is_even() {
                    -c * h * (h * v).sin()
                } else {
                    c * h * (h * v).cos()
                }
            })
            .sum()
    }

    /// `ce_s(ix)` for `s ≥ 0`; for `s < 0` the real factor of `se(ix) = i·Σ B sinh`.
    pub fn eval_imaginary_axis(&self, x: f64) -> f64 {
        let trig = if self.is_even() { f64::cosh } else { f64::sinh };
        self.harmonics
            .iter()
            .zip(&self.fourier_coeffs)
            .map(|(&h, &c)| c * trig(h as f64 * x))
            .sum()
    }

    /// `|y″ + (char - 2δ cos 2v) y|` at `v`, from the series.
    pub fn ode_residual(&self, v: f64) -> f64 {
        let trig = if self.is_even() { f64::cos } else { f64::sin };
        let second: f64 = self
            .harmonics
            .iter()
            .zip(&self.fourier_coeffs)
            .map(|(&h, &c)| -c * (h as f64).powi(2) * trig(h as f64 * v))
            .sum();
        (second + (self.char_value - 2.0 * self.delta * (2.0 * v).cos()) * self.eval(v)).abs()
    }
}

fn solve(s: i32, delta: f64, dim: usize) -> Result<MathieuSolution> {
    let (class, index) = classify(s);
    let q = delta;
    let (diag, harmonics): (Vec<f64>, Vec<u32>) = (0..dim)
        .map(|k| {
            let h = match class {
                Class::CeEven => 2 * k,
                Class::CeOdd | Class::SeOdd => 2 * k + 1,
                Class::SeEven => 2 * k + 2,
            } as u32;
            ((h as f64).powi(2), h)
        })
        .unzip();
    let mut diag = diag;
    let mut off = vec![q; dim - 1];
    match class {
        Class::CeEven => off[0] = std::f64::consts::SQRT_2 * q,
        Class::CeOdd => diag[0] += q,
        Class::SeOdd => diag[0] -= q,
        Class::SeEven => {}
    }
    let (values, vectors) = symmetric_tridiagonal_eigen(&diag, &off)?;
    let mut coeffs = vectors[index].clone();
    if class == Class::CeEven {
        // the symmetric form carries √2·A₀ in its first slot; the unit
        // eigenvector then already satisfies 2A₀² + ΣA² = 1
        coeffs[0] /= std::f64::consts::SQRT_2;
    }
    let lead = harmonics
        .iter()
        .position(|&h| h == s.unsigned_abs())
        .unwrap_or(0);
    if coeffs[lead] < 0.0 {
        for c in coeffs.iter_mut() {
            *c = -*c;
        }
    }
    let largest = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if coeffs[dim - 1].abs() > 1e-14 * largest {
        return Err(Error::ConvergenceFailure { s, delta });
    }
    Ok(MathieuSolution { s, delta, char_value: values[index], harmonics, fourier_coeffs: coeffs })
}

/// Characteristic value and Fourier coefficients for `|s| ≤ 20`, `δ ≥ 0`.
/// The matrix dimension starts at 40 and doubles until the trailing
/// coefficient is negligible.
pub fn mathieu_char_and_fn(s: i32, delta: f64) -> Result<MathieuSolution> {
    if s.unsigned_abs() > MAX_ORDER {
        return Err(Error::InvalidParams(format!("|s| = {} exceeds {MAX_ORDER}", s.unsigned_abs())));
    }
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParams(format!("delta must be non-negative, got {delta}")));
    }
    let mut dim = START_DIM;
    loop {
        match solve(s, delta, dim) {
            Err(Error::ConvergenceFailure { .. }) if dim < MAX_DIM => dim *= 2,
            Err(Error::ConvergenceFailure { .. }) => return Err(Error::ConvergenceFailure { s, delta }),
            other => return other,
        }
    }
}

/// Radial Mathieu function of the first kind, `Mc⁽¹⁾_s(z, δ)` for `s ≥ 0` or
/// `Ms⁽¹⁾_{|s|}(z, δ)` for `s < 0`, by its Bessel-product series. Real for
/// real `z`.
pub fn modified_mathieu_m1(s: i32, z: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParams(format!("radial Mathieu functions need delta > 0, got {delta}")));
    }
    let sol = mathieu_char_and_fn(s, delta)?;
    radial_from_solution(&sol, z)
}

/// Same as [`modified_mathieu_m1`] for an already computed solution.
pub fn radial_from_solution(sol: &MathieuSolution, z: f64) -> Result<f64> {
    let (class, n) = classify(sol.s);
    let c = &sol.fourier_coeffs;
    let dim = c.len();
    let root = sol.delta.sqrt();
    let j1 = bessel_j_seq(dim + 2, root * (-z).exp());
    let j2 = bessel_j_seq(dim + 2, root * z.exp());
    let mut sum = 0.0;
    let mut biggest: f64 = 0.0;
    let mut tail: f64 = 0.0;
    for k in 0..dim {
        let sign = if (n + k) % 2 == 0 { 1.0 } else { -1.0 };
        let prod = match class {
            Class::CeEven => j1[k] * j2[k],
            Class::CeOdd => j1[k] * j2[k + 1] + j1[k + 1] * j2[k],
            Class::SeEven => j1[k] * j2[k + 2] - j1[k + 2] * j2[k],
            Class::SeOdd => j1[k] * j2[k + 1] - j1[k + 1] * j2[k],
        };
        let term = sign * c[k] * prod;
        sum += term;
        biggest = biggest.max(term.abs());
        if k + 3 >= dim {
            tail = tail.max(term.abs());
        }
    }
    if tail > 1e-13 * biggest.max(sum.abs()) {
        return Err(Error::SeriesDivergence(dim));
    }
    Ok(sum / c[0])
}

/// Leading large-argument form `(i^{|s|-p}/√π) √(2/X) cos(X - (p+½)π/2)`,
/// `X = √δ e^z`, `p = |s| mod 2`.
pub fn radial_asymptotic(s: i32, z: f64, delta: f64) -> f64 {
    let r = s.unsigned_abs();
    let p = r % 2;
    let x = delta.sqrt() * z.exp();
    let sign = if ((r - p) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    sign / std::f64::consts::PI.sqrt() * (2.0 / x).sqrt() * (x - (p as f64 + 0.5) * std::f64::consts::FRAC_PI_2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn eigen_solver_on_known_matrix() {
        // tridiag(-1, 2, -1) has eigenvalues 2 - 2cos(kπ/(n+1))
        let n = 12;
        let (vals, vecs) = symmetric_tridiagonal_eigen(&vec![2.0; n], &vec![-1.0; n - 1]).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * PI / (n + 1) as f64).cos();
            assert!((v - want).abs() < 1e-13);
        }
        for (i, a) in vecs.iter().enumerate() {
            for (j, b) in vecs.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn free_limit() {
        let ce0 = mathieu_char_and_fn(0, 0.0).unwrap();
        assert!(ce0.char_value.abs() < 1e-15);
        assert!((ce0.eval(0.7) - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        let se1 = mathieu_char_and_fn(-1, 0.0).unwrap();
        assert!((se1.char_value - 1.0).abs() < 1e-15);
        assert!((se1.eval(0.7) - 0.7f64.sin()).abs() < 1e-15);
        for s in [-5, -2, 1, 3, 6] {
            let sol = mathieu_char_and_fn(s, 0.0).unwrap();
            assert!((sol.char_value - (s * s) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn frozen_characteristic_values() {
        // reference characteristic values a₀(1), b₁(1), a₁(1), b₂(5)
        let table = [(0, 1.0, -0.455_138_604_107_414_4), (-1, 1.0, -0.110_248_816_992_095_2), (1, 1.0, 1.859_108_072_514_364), (-2, 5.0, 2.099_460_445_486_665)];
        for (s, q, want) in table {
            let got = mathieu_char_and_fn(s, q).unwrap().char_value;
            assert!((got - want).abs() < 1e-12, "{s} {q}: {got}");
        }
    }

    #[test]
    fn satisfies_mathieu_equation() {
        for s in [0, 1, -1, 2, -2, 5, -7, 20] {
            for delta in [0.5, 3.0, 25.0] {
                let sol = mathieu_char_and_fn(s, delta).unwrap();
                let h = 1e-3;
                for i in 0..20 {
                    let v = 2.0 * PI * i as f64 / 20.0;
                    let fd = (-sol.eval(v - 2.0 * h) + 16.0 * sol.eval(v - h) - 30.0 * sol.eval(v)
                        + 16.0 * sol.eval(v + h)
                        - sol.eval(v + 2.0 * h))
                        / (12.0 * h * h);
                    let res = fd + (sol.char_value - 2.0 * delta * (2.0 * v).cos()) * sol.eval(v);
                    assert!(res.abs() < 1e-8 * (1.0 + sol.char_value.abs()), "{s} {delta} {v}: {res}");
                    assert!(sol.ode_residual(v) < 1e-9 * (1.0 + sol.char_value.abs()));
                }
            }
        }
    }

    #[test]
    fn normalization_is_pi() {
        for s in [0, 3, -4] {
            let sol = mathieu_char_and_fn(s, 2.0).unwrap();
            let n = 256;
            let h = 2.0 * PI / n as f64;
            let integral: f64 = (0..n).map(|k| sol.eval(h * k as f64).powi(2)).sum::<f64>() * h;
            assert!((integral - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn coefficients_decay_fast() {
        let sol = mathieu_char_and_fn(0, 16.0).unwrap();
        let c = &sol.fourier_coeffs;
        // beyond k ≈ √δ each ratio shrinks
        for k in 8..20 {
            assert!(c[k + 1].abs() < 0.5 * c[k].abs());
        }
    }

    #[test]
    fn radial_is_proportional_to_continued_angular() {
        for s in [0, 2, 1, -2, -1] {
            let sol = mathieu_char_and_fn(s, 0.5).unwrap();
            let ratios: Vec<f64> = [0.2, 0.4, 0.6, 0.8, 1.0]
                .iter()
                .map(|&x| radial_from_solution(&sol, x).unwrap() / sol.eval_imaginary_axis(x))
                .collect();
            for r in &ratios {
                assert!((r - ratios[0]).abs() < 1e-8 * ratios[0].abs(), "{s}: {ratios:?}");
            }
        }
    }

    #[test]
    fn radial_matches_large_argument_form() {
        let delta: f64 = 0.5;
        for s in [0i32, 1, -1, 2, -2] {
            let p = (s.unsigned_abs() % 2) as f64;
            let mut prev = f64::INFINITY;
            for target in [20.0, 40.0, 80.0, 160.0] {
                // X at a crest of the cosine
                let x = (p + 0.5) * PI / 2.0 + PI * (target / PI).round();
                let z = (x / delta.sqrt()).ln();
                let ratio = modified_mathieu_m1(s, z, delta).unwrap() / radial_asymptotic(s, z, delta);
                let err = (ratio - 1.0).abs();
                assert!(err < 0.1, "{s} {x}: {ratio}");
                assert!(err < prev * 0.75 || err < 1e-4, "{s} {x}: {err} {prev}");
                prev = err;
            }
        }
    }

    #[test]
    fn order_limits() {
        assert!(mathieu_char_and_fn(21, 1.0).is_err());
        assert!(mathieu_char_and_fn(0, -1.0).is_err());
        assert!(modified_mathieu_m1(0, 0.3, 0.0).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]

        #[test]
        fn coefficients_decay_past_sqrt_delta(s in -6i32..7, delta in 0.1f64..40.0) {
            let sol = mathieu_char_and_fn(s, delta).unwrap();
            let c = &sol.fourier_coeffs;
            let start = (2.0 * delta.sqrt()).ceil() as usize + 4;
            for k in start..c.len() - 1 {
                if c[k].abs() > 1e-250 {
                    proptest::prop_assert!(c[k + 1].abs() < 0.5 * c[k].abs(), "k = {k}");
                }
            }
        }
    }
}
