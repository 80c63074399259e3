//! Special functions and the eigenstates of the four solvable families.

pub mod airy;
pub mod bessel;
pub mod hermite;
pub mod mathieu;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phasecore::{Params, PotentialFamily};

/// Quantum label of an eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EigenState {
    /// Oscillator level `n`.
    Oscillator { n: u32 },
    /// Linear potential at energy `E`.
    Linear { energy: f64 },
    /// Exponential wall, asymptotic wavenumber `k > 0`.
    Exponential { k: f64 },
    /// Sinusoidal potential: `ce_s` for `s ≥ 0`, `se_{|s|}` for `s < 0`.
    Sinusoidal { s: i32 },
}

impl EigenState {
    pub fn family(&self) -> PotentialFamily {
        match self {
            EigenState::Oscillator { .. } => PotentialFamily::Quadratic,
            EigenState::Linear { .. } => PotentialFamily::Linear,
            EigenState::Exponential { .. } => PotentialFamily::Exponential,
            EigenState::Sinusoidal { .. } => PotentialFamily::Sinusoidal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            EigenState::Oscillator { .. } => Ok(()),
            EigenState::Linear { energy } if energy.is_finite() => Ok(()),
            EigenState::Exponential { k } if k > 0.0 && k.is_finite() => Ok(()),
            EigenState::Sinusoidal { s } if s.unsigned_abs() <= 20 => Ok(()),
            other => Err(Error::InvalidParams(format!("invalid eigenstate label {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
enum Evaluator {
    Oscillator,
    Linear { gamma: f64, shift: f64, amp: f64 },
    Exponential { nu: f64, beta: f64, norm: f64 },
    Sinusoidal { sol: mathieu::MathieuSolution, norm: f64 },
}

/// An eigenstate with everything expensive (Mathieu coefficients, continuum
/// normalization) computed once.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    state: EigenState,
    params: Params,
    energy: f64,
    eval: Evaluator,
}

impl Eigenfunction {
    pub fn new(state: EigenState, params: &Params) -> Result<Self> {
        params.validate()?;
        state.validate()?;
        let Params { m, hbar, lambda, a } = *params;
        let (energy, eval) = match state {
            EigenState::Oscillator { n } => ((n as f64 + 0.5) * hbar * params.omega(), Evaluator::Oscillator),
            EigenState::Linear { energy } => {
                let gamma = (2.0 * m * lambda / (hbar * hbar)).cbrt();
                (energy, Evaluator::Linear { gamma, shift: energy / lambda, amp: gamma / lambda.sqrt() })
            }
            EigenState::Exponential { k } => {
                let nu = k / a;
                let beta = (m * lambda / a.powi(3)).sqrt() / hbar;
                (hbar * hbar * k * k / (2.0 * m), Evaluator::Exponential { nu, beta, norm: exponential_norm(nu)? })
            }
            EigenState::Sinusoidal { s } => {
                let delta = m * lambda / (4.0 * hbar * hbar * a.powi(4));
                let sol = mathieu::mathieu_char_and_fn(s, delta)?;
                let energy = hbar * hbar * a * a * sol.char_value / (2.0 * m);
                (energy, Evaluator::Sinusoidal { sol, norm: (a / PI).sqrt() })
            }
        };
        Ok(Eigenfunction { state, params: *params, energy, eval })
    }

    pub fn state(&self) -> EigenState {
        self.state
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Mathieu data for sinusoidal states.
    pub fn mathieu(&self) -> Option<&mathieu::MathieuSolution> {
        match &self.eval {
            Evaluator::Sinusoidal { sol, .. } => Some(sol),
            _ => None,
        }
    }

    pub fn eval(&self, q: f64) -> f64 {
        match &self.eval {
            Evaluator::Oscillator => {
                let EigenState::Oscillator { n } = self.state else { unreachable!() };
                hermite::oscillator_psi(n, q, &self.params)
            }
            Evaluator::Linear { gamma, shift, amp } => amp * airy::airy_ai(gamma * (q - shift)),
            Evaluator::Exponential { nu, beta, norm } => {
                let y = beta * (self.params.a * q).exp();
                if y > 700.0 {
                    return 0.0;
                }
                norm * bessel::bessel_k_imag(*nu, y).unwrap_or(0.0)
            }
            Evaluator::Sinusoidal { sol, norm } => norm * sol.eval(self.params.a * q),
        }
    }

    /// Sup-norm ratio `max|ĥψ - Eψ| / max|ψ|` over `grid`, with `ψ″` from a
    /// five-point stencil of step `1e-3`.
    pub fn schrodinger_residual(&self, grid: &[f64]) -> f64 {
        let h = 1e-3;
        let family = self.state.family();
        let Params { m, hbar, .. } = self.params;
        let mut worst: f64 = 0.0;
        let mut size: f64 = 0.0;
        for &q in grid {
            let f = |x: f64| self.eval(x);
            let d2 = (-f(q - 2.0 * h) + 16.0 * f(q - h) - 30.0 * f(q) + 16.0 * f(q + h) - f(q + 2.0 * h)) / (12.0 * h * h);
            let psi = f(q);
            let v = family.potential(&self.params, q);
            let res = -hbar * hbar / (2.0 * m) * d2 + (v - self.energy) * psi;
            worst = worst.max(res.abs());
            size = size.max(psi.abs());
        }
        if size == 0.0 {
            0.0
        } else {
            worst / size
        }
    }
}

/// Normalization per unit wavenumber of `K_{iν}(βe^{aq})`, read off from the
/// amplitude of its oscillating tail at small argument.
fn exponential_norm(nu: f64) -> Result<f64> {
    let y = 1e-6;
    let k = bessel::bessel_k_imag(nu, y)?;
    let dk = bessel::bessel_k_imag_deriv(nu, y)?;
    let amp = (k * k + (y * dk / nu).powi(2)).sqrt();
    Ok((2.0 / PI).sqrt() / amp)
}

/// One-off evaluation of `ψ(q)`; prefer [`Eigenfunction`] for repeated use.
pub fn eigenstate_psi(state: EigenState, q: f64, params: &Params) -> Result<f64> {
    Ok(Eigenfunction::new(state, params)?.eval(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn linear_states_are_translates() {
        let p = Params::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let e1 = Eigenfunction::new(EigenState::Linear { energy: p.lambda }, &p).unwrap();
        let e0 = Eigenfunction::new(EigenState::Linear { energy: 0.0 }, &p).unwrap();
        for q in [-2.0, 0.3, 1.7] {
            assert!((e1.eval(q) - e0.eval(q - 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn exponential_states_decay_under_the_wall() {
        let p = Params::default();
        let psi = Eigenfunction::new(EigenState::Exponential { k: 1.0 }, &p).unwrap();
        let vals: Vec<f64> = [1.0, 2.0, 3.0, 4.0].iter().map(|&q| psi.eval(q).abs()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(vals[3] < 1e-10);
        assert_eq!(psi.eval(10.0), 0.0);
    }

    #[test]
    fn exponential_norm_matches_closed_form() {
        for nu in [0.5, 1.0, 2.0] {
            let want = (2.0 * nu * (PI * nu).sinh()).sqrt() / PI;
            let got = exponential_norm(nu).unwrap();
            assert!((got - want).abs() < 1e-9 * want, "{nu}: {got} {want}");
        }
    }

    #[test]
    fn sinusoidal_periodicity() {
        let p = Params::new(1.0, 1.0, 2.0, 0.8).unwrap();
        let period = PI / p.a;
        for s in [0, 2, -2, 1, -1, 3] {
            let psi = Eigenfunction::new(EigenState::Sinusoidal { s }, &p).unwrap();
            let sign = if s.unsigned_abs() % 2 == 0 { 1.0 } else { -1.0 };
            for q in [0.1, 0.9, 2.2] {
                assert!((psi.eval(q + period) - sign * psi.eval(q)).abs() < 1e-13, "{s}");
            }
        }
    }

    #[test]
    fn schrodinger_residuals() {
        let p = Params::new(1.2, 0.9, 0.8, 1.1).unwrap();
        let cases = [
            (EigenState::Oscillator { n: 0 }, grid(-4.0, 4.0, 41)),
            (EigenState::Oscillator { n: 5 }, grid(-5.0, 5.0, 41)),
            (EigenState::Linear { energy: -0.4 }, grid(-6.0, 3.0, 41)),
            (EigenState::Linear { energy: 1.3 }, grid(-6.0, 4.0, 41)),
            (EigenState::Exponential { k: 1.0 }, grid(-4.0, 2.0, 31)),
            (EigenState::Exponential { k: 2.5 }, grid(-3.0, 1.5, 31)),
            (EigenState::Sinusoidal { s: 0 }, grid(0.0, 6.0, 31)),
            (EigenState::Sinusoidal { s: -3 }, grid(0.0, 6.0, 31)),
            (EigenState::Sinusoidal { s: 4 }, grid(0.0, 6.0, 31)),
        ];
        for (state, g) in cases {
            let psi = Eigenfunction::new(state, &p).unwrap();
            let r = psi.schrodinger_residual(&g);
            assert!(r < 1e-6, "{state:?}: {r}");
        }
    }

    #[test]
    fn sinusoidal_energy_from_characteristic_value() {
        let p = Params::default();
        let psi = Eigenfunction::new(EigenState::Sinusoidal { s: 0 }, &p).unwrap();
        // δ = 1/4, a₀(1/4) from the reference tables
        assert!((psi.energy() - 0.5 * -0.031_039_395_475_617_32).abs() < 1e-12, "{}", psi.energy());
    }

    #[test]
    fn invalid_labels() {
        assert!(EigenState::Exponential { k: 0.0 }.validate().is_err());
        assert!(EigenState::Sinusoidal { s: 21 }.validate().is_err());
        assert!(eigenstate_psi(EigenState::Linear { energy: f64::NAN }, 0.0, &Params::default()).is_err());
    }
}
