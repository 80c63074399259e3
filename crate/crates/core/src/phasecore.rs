//! Physical parameters, the standard potentials and their classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mass, Planck constant, potential strength and inverse length scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub m: f64,
    pub hbar: f64,
    pub lambda: f64,
    pub a: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params { m: 1.0, hbar: 1.0, lambda: 1.0, a: 1.0 }
    }
}

impl Params {
    pub fn new(m: f64, hbar: f64, lambda: f64, a: f64) -> Result<Self> {
        let p = Params { m, hbar, lambda, a };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("m", self.m), ("hbar", self.hbar), ("lambda", self.lambda), ("a", self.a)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Oscillator frequency `√(λ/m)`.
    pub fn omega(&self) -> f64 {
        (self.lambda / self.m).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PotentialFamily {
    Free,
    Quadratic,
    Sinusoidal,
    EvenHyperbolic,
    Linear,
    Exponential,
    OddHyperbolic,
}

impl PotentialFamily {
    pub const ALL: [PotentialFamily; 7] = [
        PotentialFamily::Free,
        PotentialFamily::Quadratic,
        PotentialFamily::Sinusoidal,
        PotentialFamily::EvenHyperbolic,
        PotentialFamily::Linear,
        PotentialFamily::Exponential,
        PotentialFamily::OddHyperbolic,
    ];

    /// The six interacting families.
    pub const STANDARD: [PotentialFamily; 6] = [
        PotentialFamily::Quadratic,
        PotentialFamily::Sinusoidal,
        PotentialFamily::EvenHyperbolic,
        PotentialFamily::Linear,
        PotentialFamily::Exponential,
        PotentialFamily::OddHyperbolic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PotentialFamily::Free => "free",
            PotentialFamily::Quadratic => "quadratic",
            PotentialFamily::Sinusoidal => "sinusoidal",
            PotentialFamily::EvenHyperbolic => "even-hyperbolic",
            PotentialFamily::Linear => "linear",
            PotentialFamily::Exponential => "exponential",
            PotentialFamily::OddHyperbolic => "odd-hyperbolic",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        PotentialFamily::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Families whose potential and eigenfunctions are periodic in `q`.
    pub fn is_periodic(self) -> bool {
        self == PotentialFamily::Sinusoidal
    }

    /// `V, V′, V″, V‴` at `q`.
    pub fn jet(self, params: &Params, q: f64) -> [f64; 4] {
        let Params { lambda: l, a, .. } = *params;
        let k = 2.0 * a;
        match self {
            PotentialFamily::Free => [0.0; 4],
            PotentialFamily::Quadratic => [0.5 * l * q * q, l * q, l, 0.0],
            PotentialFamily::Linear => [l * q, l, 0.0, 0.0],
            PotentialFamily::Sinusoidal => {
                let (s, c) = (k * q).sin_cos();
                let base = l / (k * k);
                [base * c, -base * k * s, -base * k * k * c, base * k * k * k * s]
            }
            PotentialFamily::EvenHyperbolic => {
                let (s, c) = ((k * q).sinh(), (k * q).cosh());
                let base = l / (k * k);
                [base * c, base * k * s, base * k * k * c, base * k * k * k * s]
            }
            PotentialFamily::Exponential => {
                let e = (k * q).exp();
                let base = l / k;
                [base * e, base * k * e, base * k * k * e, base * k * k * k * e]
            }
            PotentialFamily::OddHyperbolic => {
                let (s, c) = ((k * q).sinh(), (k * q).cosh());
                let base = l / k;
                [base * s, base * k * c, base * k * k * s, base * k * k * k * c]
            }
        }
    }

    pub fn potential(self, params: &Params, q: f64) -> f64 {
        self.jet(params, q)[0]
    }

    pub fn force_gradient(self, params: &Params, q: f64) -> f64 {
        self.jet(params, q)[1]
    }

    /// The constant `ρ` in `V‴ = ρV′`, when the family has one.
    pub fn rho(self, params: &Params) -> Option<f64> {
        let k2 = 4.0 * params.a * params.a;
        match self {
            PotentialFamily::Sinusoidal => Some(-k2),
            PotentialFamily::EvenHyperbolic | PotentialFamily::Exponential | PotentialFamily::OddHyperbolic => {
                Some(k2)
            }
            _ => None,
        }
    }
}

impl fmt::Display for PotentialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(q: f64, p: f64) -> Self {
        PhasePoint { q, p }
    }
}

pub fn eval_hamiltonian(pot: PotentialFamily, params: &Params, pt: PhasePoint) -> f64 {
    pt.p * pt.p / (2.0 * params.m) + pot.potential(params, pt.q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub family: PotentialFamily,
    pub rho: Option<f64>,
    pub residual: f64,
}

const CLASSIFY_TOL: f64 = 1e-6;

fn rms(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
}

/// Identify which standard family produced the samples `(x, V(x))`.
///
/// The samples must lie on a uniform grid with at least nine points. First
/// and third derivatives come from five-point central differences with
/// Richardson extrapolation over strides 1, 2 and 4 (1 and 2 below 17 points); a vanishing third derivative selects the quadratic,
/// linear or free class, otherwise `ρ` is fitted to `V‴ = ρV′`.
pub fn classify_potential(samples: &[(f64, f64)]) -> Result<Classification> {
    let n = samples.len();
    if n < 9 {
        return Err(Error::InvalidParams("need at least nine samples".into()));
    }
    let h = samples[1].0 - samples[0].0;
    if !(h > 0.0) {
        return Err(Error::InvalidParams("sample abscissae must increase".into()));
    }
    for w in samples.windows(2) {
        if ((w[1].0 - w[0].0) - h).abs() > 1e-9 * h.max(w[1].0.abs()) {
            return Err(Error::InvalidParams("samples must be uniformly spaced".into()));
        }
    }
    let v: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let d1 = |i: usize, s: usize| {
        let hs = h * s as f64;
        (v[i - 2 * s] - 8.0 * v[i - s] + 8.0 * v[i + s] - v[i + 2 * s]) / (12.0 * hs)
    };
    let d2 = |i: usize, s: usize| {
        let hs = h * s as f64;
        (-v[i - 2 * s] + 16.0 * v[i - s] - 30.0 * v[i] + 16.0 * v[i + s] - v[i + 2 * s]) / (12.0 * hs * hs)
    };
    let d3 = |i: usize, s: usize| {
        let hs = h * s as f64;
        (-v[i - 2 * s] + 2.0 * v[i - s] - 2.0 * v[i + s] + v[i + 2 * s]) / (2.0 * hs * hs * hs)
    };
    // two Richardson levels (strides 1, 2, 4) when the grid allows it
    let deep = n >= 17;
    let reach = if deep { 8 } else { 4 };
    let rich = |d: &dyn Fn(usize, usize) -> f64, i: usize, p1: f64, p2: f64| {
        let r1 = (p1 * d(i, 1) - d(i, 2)) / (p1 - 1.0);
        if !deep {
            return r1;
        }
        let r2 = (p1 * d(i, 2) - d(i, 4)) / (p1 - 1.0);
        (p2 * r1 - r2) / (p2 - 1.0)
    };
    let mut dv1 = Vec::new();
    let mut dv2 = Vec::new();
    let mut dv3 = Vec::new();
    for i in reach..n - reach {
        dv1.push(rich(&d1, i, 16.0, 64.0));
        dv2.push(rich(&d2, i, 16.0, 64.0));
        dv3.push(rich(&d3, i, 4.0, 16.0));
    }
    let scale = rms(&dv1).max(rms(&dv2)).max(rms(&v));
    if scale == 0.0 {
        return Ok(Classification { family: PotentialFamily::Free, rho: None, residual: 0.0 });
    }
    let r3 = rms(&dv3);
    let mean2 = dv2.iter().sum::<f64>() / dv2.len() as f64;
    if r3 <= CLASSIFY_TOL * scale {
        let spread2 = rms(&dv2.iter().map(|x| x - mean2).collect::<Vec<_>>());
        let r1 = rms(&dv1);
        let family = if mean2.abs() > CLASSIFY_TOL * scale {
            PotentialFamily::Quadratic
        } else if r1 > CLASSIFY_TOL * scale {
            PotentialFamily::Linear
        } else {
            PotentialFamily::Free
        };
        return Ok(Classification { family, rho: None, residual: (r3 + spread2) / scale });
    }
    let num: f64 = dv3.iter().zip(&dv1).map(|(a, b)| a * b).sum();
    let den: f64 = dv1.iter().map(|b| b * b).sum();
    if den == 0.0 {
        return Err(Error::Unclassifiable { residual: f64::INFINITY });
    }
    let rho = num / den;
    let miss: Vec<f64> = dv3.iter().zip(&dv1).map(|(a, b)| a - rho * b).collect();
    let residual = rms(&miss) / r3;
    if residual > CLASSIFY_TOL {
        return Err(Error::Unclassifiable { residual });
    }
    if rho < 0.0 {
        return Ok(Classification { family: PotentialFamily::Sinusoidal, rho: Some(rho), residual });
    }
    // V = c + α e^{bx} + β e^{-bx}; the signs of α and β pick the family
    let b = rho.sqrt();
    let x0 = 0.5 * (samples[0].0 + samples[n - 1].0);
    let basis: Vec<[f64; 3]> = samples
        .iter()
        .map(|&(x, _)| [1.0, (b * (x - x0)).exp(), (-b * (x - x0)).exp()])
        .collect();
    let coef = least_squares3(&basis, &v)?;
    let (alpha, beta) = (coef[1], coef[2]);
    let big = alpha.abs().max(beta.abs());
    let family = if alpha.abs() < 1e-6 * big || beta.abs() < 1e-6 * big {
        PotentialFamily::Exponential
    } else if alpha * beta > 0.0 {
        PotentialFamily::EvenHyperbolic
    } else {
        PotentialFamily::OddHyperbolic
    };
    Ok(Classification { family, rho: Some(rho), residual })
}

fn least_squares3(rows: &[[f64; 3]], y: &[f64]) -> Result<[f64; 3]> {
    let mut m = [[0.0; 4]; 3];
    for (r, &yi) in rows.iter().zip(y) {
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += r[i] * r[j];
            }
            m[i][3] += r[i] * yi;
        }
    }
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap_or(col);
        m.swap(col, piv);
        if m[col][col].abs() < 1e-300 {
            return Err(Error::Singular("least-squares normal matrix".into()));
        }
        for row in 0..3 {
            if row != col {
                let f = m[row][col] / m[col][col];
                for k in col..4 {
                    m[row][k] -= f * m[col][k];
                }
            }
        }
    }
    Ok([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (0..=100).map(|i| -1.0 + 0.02 * i as f64).map(|x| (x, f(x))).collect()
    }

    #[test]
    fn hamiltonian_examples() {
        let p = Params::default();
        assert_eq!(eval_hamiltonian(PotentialFamily::Quadratic, &p, PhasePoint::new(1.0, 1.0)), 1.0);
        assert_eq!(eval_hamiltonian(PotentialFamily::Sinusoidal, &p, PhasePoint::new(0.0, 0.0)), 0.25);
        assert_eq!(eval_hamiltonian(PotentialFamily::Exponential, &p, PhasePoint::new(0.0, 2.0)), 2.5);
    }

    #[test]
    fn params_reject_non_positive() {
        assert!(Params::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(Params::new(-1.0, 1.0, 1.0, 1.0).is_err());
        assert!(Params::new(1.0, f64::NAN, 1.0, 1.0).is_err());
        assert!(Params::new(2.0, 0.5, 3.0, 0.7).is_ok());
    }

    #[test]
    fn classify_examples() {
        let c = classify_potential(&grid(|x| 0.5 * x * x)).unwrap();
        assert_eq!((c.family, c.rho), (PotentialFamily::Quadratic, None));
        let c = classify_potential(&grid(|x| 0.25 * (2.0 * x).cos())).unwrap();
        assert_eq!(c.family, PotentialFamily::Sinusoidal);
        assert!((c.rho.unwrap() + 4.0).abs() < 4e-6);
        let c = classify_potential(&grid(|x| 0.25 * (2.0 * x).cosh())).unwrap();
        assert_eq!(c.family, PotentialFamily::EvenHyperbolic);
        assert!((c.rho.unwrap() - 4.0).abs() < 4e-6);
    }

    #[test]
    fn classify_rejects_quartic() {
        assert!(matches!(
            classify_potential(&grid(|x| x.powi(4))),
            Err(Error::Unclassifiable { .. })
        ));
    }

    #[test]
    fn classify_recovers_every_family() {
        for a in [0.5, 1.0, 1.7] {
            let params = Params::new(1.3, 1.0, 0.8, a).unwrap();
            for fam in PotentialFamily::ALL {
                let c = classify_potential(&grid(|x| fam.potential(&params, x))).unwrap();
                assert_eq!(c.family, fam, "a={a}");
                match (c.rho, fam.rho(&params)) {
                    (Some(got), Some(want)) => assert!(((got - want) / want).abs() < 1e-6, "{fam} {got} {want}"),
                    (None, None) => {}
                    other => panic!("{fam}: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn jet_matches_finite_differences() {
        let params = Params::new(1.0, 1.0, 1.3, 0.9).unwrap();
        let h = 1e-5;
        for fam in PotentialFamily::ALL {
            for q in [-0.7, 0.1, 0.8] {
                let j = fam.jet(&params, q);
                let jp = fam.jet(&params, q + h);
                let jm = fam.jet(&params, q - h);
                for k in 0..3 {
                    let fd = (jp[k] - jm[k]) / (2.0 * h);
                    assert!((fd - j[k + 1]).abs() < 1e-6 * (1.0 + j[k + 1].abs()), "{fam} {k}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn hamiltonian_is_even_in_momentum(q in -3.0f64..3.0, p in -5.0f64..5.0, idx in 0usize..7) {
            let fam = PotentialFamily::ALL[idx];
            let params = Params::default();
            let h1 = eval_hamiltonian(fam, &params, PhasePoint::new(q, p));
            let h2 = eval_hamiltonian(fam, &params, PhasePoint::new(q, -p));
            prop_assert_eq!(h1, h2);
        }
    }
}
