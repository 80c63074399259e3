//! Group laws of the quadratic and linear families, composition of kernels
//! by stationary phase, and the reciprocal eigenvalues `𝒩` that turn the
//! kernels into eigen-operators.
//!
//! The quadratic family is a one-parameter rotation group in the angle
//! `θ`, the linear family an abelian group of affine maps in `ν = 2/μ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::genfun::{GeneratingFunction, SplitGeneratingFunction};
use crate::phasecore::{Params, PhasePoint, PotentialFamily};
use crate::quadrature::{integrate, IntegrationDomain, Tolerance};
use crate::specfun::{bessel, hermite, mathieu, EigenState};

const SINGULAR_EPS: f64 = 1e-12;

/// `μ = -2√(λm) cot(θ/2)`.
pub fn mu_from_theta(theta: f64, params: &Params) -> Result<f64> {
    if !(theta > 0.0 && theta < 2.0 * PI) {
        return Err(Error::Singular(format!("theta = {theta} outside (0, 2π)")));
    }
    let half = 0.5 * theta;
    Ok(-2.0 * (params.lambda * params.m).sqrt() * half.cos() / half.sin())
}

/// Inverse of [`mu_from_theta`] on `(0, 2π)`.
pub fn theta_from_mu(mu: f64, params: &Params) -> f64 {
    let c = -mu / (2.0 * (params.lambda * params.m).sqrt());
    2.0 * 1.0f64.atan2(c)
}

fn reduce_angle(theta: f64) -> f64 {
    theta.rem_euclid(2.0 * PI)
}

/// Quadratic-family generating function at rotation angle `θ`.
pub fn quadratic_gf(theta: f64, params: &Params) -> Result<SplitGeneratingFunction> {
    let t = reduce_angle(theta);
    if t.sin().abs() < SINGULAR_EPS {
        return Err(Error::Singular(format!("theta = {theta} is a kernel singularity")));
    }
    SplitGeneratingFunction::real(PotentialFamily::Quadratic, mu_from_theta(t, params)?, *params)
}

/// Linear-family generating function at `ν = 2/μ`.
pub fn linear_gf(nu: f64, params: &Params) -> Result<SplitGeneratingFunction> {
    if nu.abs() < SINGULAR_EPS {
        return Err(Error::Singular("nu = 0 is the identity kernel".into()));
    }
    SplitGeneratingFunction::real(PotentialFamily::Linear, 2.0 / nu, *params)
}

/// Affine map `x ↦ M x + b` on `(q, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub matrix: [[f64; 2]; 2],
    pub shift: [f64; 2],
}

impl AffineMap {
    pub fn linear(matrix: [[f64; 2]; 2]) -> Self {
        AffineMap { matrix, shift: [0.0, 0.0] }
    }

    pub fn apply(&self, pt: PhasePoint) -> PhasePoint {
        let m = &self.matrix;
        PhasePoint::new(
            m[0][0] * pt.q + m[0][1] * pt.p + self.shift[0],
            m[1][0] * pt.q + m[1][1] * pt.p + self.shift[1],
        )
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let (a, b) = (&self.matrix, &other.matrix);
        let mut matrix = [[0.0; 2]; 2];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        let s = other.shift;
        AffineMap {
            matrix,
            shift: [
                a[0][0] * s[0] + a[0][1] * s[1] + self.shift[0],
                a[1][0] * s[0] + a[1][1] * s[1] + self.shift[1],
            ],
        }
    }

    pub fn max_abs_diff(&self, other: &AffineMap) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.matrix[i][j] - other.matrix[i][j]).abs());
            }
            d = d.max((self.shift[i] - other.shift[i]).abs());
        }
        d
    }
}

/// `D⁻¹R(θ)D` with `D = diag((mλ)^{1/4}, (mλ)^{-1/4})`.
pub fn rotation_decomposition(theta: f64, params: &Params) -> AffineMap {
    let s2 = (params.m * params.lambda).sqrt();
    let (s, c) = theta.sin_cos();
    AffineMap::linear([[c, s / s2], [-s2 * s, c]])
}

/// `𝒯_ν : (q, p) ↦ (q - 2νp - 2mλν², p + 2mλν)`.
pub fn linear_translation(nu: f64, params: &Params) -> AffineMap {
    let ml = params.m * params.lambda;
    AffineMap {
        matrix: [[1.0, -2.0 * nu], [0.0, 1.0]],
        shift: [-2.0 * ml * nu * nu, 2.0 * ml * nu],
    }
}

/// Two kernels of one family glued at their (unique) stationary point.
#[derive(Debug, Clone, Copy)]
pub struct Composition {
    pub first: SplitGeneratingFunction,
    pub second: SplitGeneratingFunction,
    /// Second derivative of the glued phase in the intermediate variable.
    pub kappa: f64,
    /// Closed-form family member with the composite parameter.
    pub composite: SplitGeneratingFunction,
}

impl Composition {
    pub fn stationary_point(&self, q: f64, big_q: f64) -> f64 {
        let g = |x: f64| (self.first.d_big_q(q, x) + self.second.d_q(x, big_q)).re;
        // the glued phase is quadratic in the intermediate point
        let x0 = 0.0;
        let x1 = x0 - g(x0) / self.kappa;
        x1 - g(x1) / self.kappa
    }

    /// `f_s(q,Q) = f₁(q, q̄) + f₂(q̄, Q)`.
    pub fn value(&self, q: f64, big_q: f64) -> f64 {
        let x = self.stationary_point(q, big_q);
        (self.first.value(q, x) + self.second.value(x, big_q)).re
    }

    /// `f_s - f_c`, constant in `(q, Q)`.
    pub fn offset(&self, q: f64, big_q: f64) -> f64 {
        self.value(q, big_q) - self.composite.value(q, big_q).re
    }
}

/// Compose two quadratic (or two linear) kernels by stationary phase.
pub fn compose_stationary_phase(f1: &SplitGeneratingFunction, f2: &SplitGeneratingFunction) -> Result<Composition> {
    let family = f1.family();
    if family != f2.family() {
        return Err(Error::UnsupportedFamily("composition needs two members of one family"));
    }
    if f1.mu().im != 0.0 || f2.mu().im != 0.0 {
        return Err(Error::InvalidParams("composition needs real mu".into()));
    }
    let params = *f1.params();
    let (mu1, mu2) = (f1.mu().re, f2.mu().re);
    let composite = match family {
        PotentialFamily::Quadratic => {
            let theta = theta_from_mu(mu1, &params) + theta_from_mu(mu2, &params);
            quadratic_gf(theta, &params)?
        }
        PotentialFamily::Linear => linear_gf(2.0 / mu1 + 2.0 / mu2, &params)?,
        _ => return Err(Error::UnsupportedFamily("composition is limited to the quadratic and linear families")),
    };
    let c1 = f1.d_big_q_big_q(0.0, 0.0).re;
    let c2 = f2.d_qq(0.0, 0.0).re;
    let kappa = c1 + c2;
    let scale = c1.abs().max(c2.abs());
    if kappa.abs() < 1e-8 * scale {
        return Err(Error::DegenerateStationaryPoint { kappa });
    }
    Ok(Composition { first: *f1, second: *f2, kappa, composite })
}

/// Parameter labelling a member of a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParameter {
    Theta(f64),
    Nu(f64),
    Mu(Complex64),
}

impl FamilyParameter {
    fn theta(self, params: &Params) -> Result<f64> {
        match self {
            FamilyParameter::Theta(t) => Ok(t),
            FamilyParameter::Mu(mu) if mu.im == 0.0 => Ok(theta_from_mu(mu.re, params)),
            _ => Err(Error::InvalidParams("oscillator needs an angle or a real mu".into())),
        }
    }

    fn nu(self) -> Result<f64> {
        match self {
            FamilyParameter::Nu(nu) => Ok(nu),
            FamilyParameter::Mu(mu) if mu.im == 0.0 && mu.re != 0.0 => Ok(2.0 / mu.re),
            _ => Err(Error::InvalidParams("linear family needs nu or a real non-zero mu".into())),
        }
    }

    fn mu(self) -> Result<Complex64> {
        match self {
            FamilyParameter::Mu(mu) => Ok(mu),
            _ => Err(Error::InvalidParams("this family is parametrised by mu".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReciprocalEigenvalue {
    pub family: PotentialFamily,
    pub state: EigenState,
    pub parameter: FamilyParameter,
    pub value: Complex64,
}

/// `𝒩` such that `𝒩 ∫ e^{iF/ħ} ψ dQ = ψ` for the eigenfunction `ψ` of `state`.
pub fn reciprocal_eigenvalue(
    family: PotentialFamily,
    state: EigenState,
    parameter: FamilyParameter,
    params: &Params,
) -> Result<ReciprocalEigenvalue> {
    params.validate()?;
    let i = Complex64::i();
    let value = match (family, state) {
        (PotentialFamily::Quadratic, EigenState::Oscillator { n }) => {
            oscillator_reciprocal(n, parameter.theta(params)?, params)?
        }
        (PotentialFamily::Linear, EigenState::Linear { energy }) => {
            let nu = parameter.nu()?;
            if nu.abs() < SINGULAR_EPS {
                return Err(Error::Singular("nu = 0".into()));
            }
            let ml = params.m * params.lambda;
            let phase = (2.0 * params.m * energy * nu - ml * ml * nu.powi(3) / 3.0) / params.hbar;
            Complex64::from_polar(1.0, phase) / (i * (4.0 * PI * params.hbar * nu)).sqrt()
        }
        (PotentialFamily::Exponential, EigenState::Exponential { k }) => {
            let w = exponential_argument(parameter.mu()?, params)?;
            let nu = k / params.a;
            let kv = bessel::bessel_k_imag(nu, w)?;
            if kv == 0.0 || kv.abs() < 1e-13 * (-0.5 * PI * nu).exp() * (-w).exp() {
                return Err(Error::ZeroDenominator(format!("K_i{nu}({w}) vanishes")));
            }
            Complex64::new(0.5 * params.a / kv, 0.0)
        }
        (PotentialFamily::Sinusoidal, EigenState::Sinusoidal { s }) => {
            let mu = parameter.mu()?;
            if mu.im != 0.0 || mu.re <= 0.0 {
                return Err(Error::InvalidParams("sinusoidal reciprocal eigenvalue needs real mu > 0".into()));
            }
            let zeta = (mu.re / (4.0 * params.m * params.lambda).sqrt()).ln();
            let delta = mathieu_parameter(params);
            let m1 = mathieu::modified_mathieu_m1(s, zeta, delta)?;
            if m1.abs() < 1e-300 {
                return Err(Error::ZeroDenominator(format!("M_{s}({zeta}) vanishes")));
            }
            i.powi(s.unsigned_abs() as i32) * (params.a / (2.0 * PI)) / m1
        }
        _ => return Err(Error::InvalidParams(format!("state {state:?} does not belong to {family}"))),
    };
    Ok(ReciprocalEigenvalue { family, state, parameter, value })
}

/// `√(mω i e^{-iθ} / (2πħ sin θ)) e^{-inθ}`, 2π-periodic in `θ`.
fn oscillator_reciprocal(n: u32, theta: f64, params: &Params) -> Result<Complex64> {
    let t = reduce_angle(theta);
    let s = t.sin();
    if s.abs() < SINGULAR_EPS {
        return Err(Error::Singular(format!("sin θ = 0 at θ = {theta}")));
    }
    let m_omega = params.m * params.omega();
    let inner = Complex64::i() * Complex64::from_polar(1.0, -t) * (m_omega / (2.0 * PI * params.hbar * s));
    Ok(inner.sqrt() * Complex64::from_polar(1.0, -(n as f64) * t))
}

/// `w = μ/(4iħa²)`, required to be real and positive.
pub fn exponential_argument(mu: Complex64, params: &Params) -> Result<f64> {
    if mu.re.abs() > 1e-14 * mu.norm() || mu.im <= 0.0 {
        return Err(Error::InvalidParams(
            "exponential family is supported for mu on the positive imaginary axis".into(),
        ));
    }
    Ok(mu.im / (4.0 * params.hbar * params.a * params.a))
}

/// Mathieu parameter `δ = mλ/(4ħ²a⁴)` of the sinusoidal family.
pub fn mathieu_parameter(params: &Params) -> f64 {
    params.m * params.lambda / (4.0 * params.hbar * params.hbar * params.a.powi(4))
}

/// `i e^{c_n π}` with `c_n = -(n+½)i`, the phase picked up in the `θ → π` limit.
pub fn parity_factor(n: u32) -> Complex64 {
    Complex64::i() * Complex64::from_polar(1.0, -(n as f64 + 0.5) * PI)
}

/// Relative residual of `𝒩(α₁)𝒩(α₂)√(2πħi/κ)e^{i·offset/ħ} = 𝒩(α₁+α₂)`
/// for the oscillator (angles) or the linear family (`ν`).
pub fn check_reciprocal_functional_equation(
    family: PotentialFamily,
    param1: f64,
    param2: f64,
    state: EigenState,
    params: &Params,
) -> Result<f64> {
    let (g1, g2, p1, p2, pc) = match family {
        PotentialFamily::Quadratic => (
            quadratic_gf(param1, params)?,
            quadratic_gf(param2, params)?,
            FamilyParameter::Theta(param1),
            FamilyParameter::Theta(param2),
            FamilyParameter::Theta(param1 + param2),
        ),
        PotentialFamily::Linear => (
            linear_gf(param1, params)?,
            linear_gf(param2, params)?,
            FamilyParameter::Nu(param1),
            FamilyParameter::Nu(param2),
            FamilyParameter::Nu(param1 + param2),
        ),
        _ => return Err(Error::UnsupportedFamily("functional equations exist for the quadratic and linear families")),
    };
    let comp = compose_stationary_phase(&g1, &g2)?;
    let n1 = reciprocal_eigenvalue(family, state, p1, params)?.value;
    let n2 = reciprocal_eigenvalue(family, state, p2, params)?.value;
    let nc = reciprocal_eigenvalue(family, state, pc, params)?.value;
    let gauss = (Complex64::new(0.0, 2.0 * PI * params.hbar) / comp.kappa).sqrt();
    let offset = comp.offset(0.0, 0.0);
    let lhs = n1 * n2 * gauss * Complex64::from_polar(1.0, offset / params.hbar);
    Ok((lhs - nc).norm() / nc.norm())
}

/// Largest deviation on `q_grid` of `𝒩_n(π-ε) ∫ e^{iF_θ/ħ} Φ(Q) dQ` from
/// `(-1)ⁿ Φ(-q)`, where `Φ` is the `n`-th oscillator state displaced by a
/// tenth of the oscillator length (an exact eigenfunction would make the
/// residual vanish for every `ε`).
pub fn delta_limit_parity(n: u32, epsilon: f64, q_grid: &[f64], params: &Params) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < PI) {
        return Err(Error::InvalidParams("epsilon must lie in (0, π)".into()));
    }
    let theta = PI - epsilon;
    let gf = quadratic_gf(theta, params)?;
    let norm = reciprocal_eigenvalue(
        PotentialFamily::Quadratic,
        EigenState::Oscillator { n },
        FamilyParameter::Theta(theta),
        params,
    )?
    .value;
    let length = (params.hbar / (params.m * params.omega())).sqrt();
    let shift = 0.1 * length;
    let phi = |x: f64| hermite::oscillator_psi(n, x - shift, params);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let reach = length * (12.0 + (2.0 * n as f64 + 1.0).sqrt());
    let mut worst: f64 = 0.0;
    for &q in q_grid {
        let r = integrate(
            |x| (Complex64::i() * gf.value(q, x) / params.hbar).exp() * phi(x),
            IntegrationDomain::InfiniteLine { truncation: reach },
            Tolerance::abs(1e-12),
        )?;
        let got = norm * r.value;
        worst = worst.max((got - sign * phi(-q)).norm());
    }
    Ok(worst)
}
