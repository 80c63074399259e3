//! Generating functions of the form-preserving transformations and the
//! classical checks built on them.
//!
//! Every standard family has a generating function that splits as
//! `F(q,Q) = F₊(q₊) + F₋(q₋)` with `q± = (q±Q)/2`, where `F₊ = -(4m/μ)V`.
//! Such a function satisfies `F_qq = F_QQ`, which is what makes the quantum
//! kernel `e^{iF/ħ}` free of higher-order corrections.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phasecore::{eval_hamiltonian, Params, PhasePoint, PotentialFamily};

/// A generating function `F(q,Q)` of the first kind with its partials.
pub trait GeneratingFunction {
    fn value(&self, q: f64, big_q: f64) -> Complex64;
    fn d_q(&self, q: f64, big_q: f64) -> Complex64;
    fn d_big_q(&self, q: f64, big_q: f64) -> Complex64;
    fn d_qq(&self, q: f64, big_q: f64) -> Complex64;
    fn d_big_q_big_q(&self, q: f64, big_q: f64) -> Complex64;
    fn d_q_big_q(&self, q: f64, big_q: f64) -> Complex64;
}

/// `F_μ(q,Q)` for one of the six standard families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitGeneratingFunction {
    family: PotentialFamily,
    mu: Complex64,
    params: Params,
}

impl SplitGeneratingFunction {
    pub fn new(family: PotentialFamily, mu: Complex64, params: Params) -> Result<Self> {
        params.validate()?;
        if family == PotentialFamily::Free {
            return Err(Error::UnsupportedFamily("the free theory has no split generating function"));
        }
        if mu.norm() == 0.0 || !mu.re.is_finite() || !mu.im.is_finite() {
            return Err(Error::InvalidParams(format!("mu must be finite and non-zero, got {mu}")));
        }
        Ok(SplitGeneratingFunction { family, mu, params })
    }

    pub fn real(family: PotentialFamily, mu: f64, params: Params) -> Result<Self> {
        Self::new(family, Complex64::new(mu, 0.0), params)
    }

    pub fn family(&self) -> PotentialFamily {
        self.family
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `F₊, F₊′, F₊″` at `x`.
    pub fn plus_jet(&self, x: f64) -> [Complex64; 3] {
        let v = self.family.jet(&self.params, x);
        let c = -4.0 * self.params.m / self.mu;
        [c * v[0], c * v[1], c * v[2]]
    }

    /// `F₋, F₋′, F₋″` at `x`.
    pub fn minus_jet(&self, x: f64) -> [Complex64; 3] {
        let mu = self.mu;
        let a = self.params.a;
        match self.family {
            PotentialFamily::Quadratic | PotentialFamily::Linear | PotentialFamily::Free => {
                [mu * (0.5 * x * x), mu * x, mu]
            }
            PotentialFamily::Sinusoidal => {
                let (s, c) = (2.0 * a * x).sin_cos();
                [-mu * c / (4.0 * a * a), mu * s / (2.0 * a), mu * c]
            }
            PotentialFamily::EvenHyperbolic | PotentialFamily::Exponential | PotentialFamily::OddHyperbolic => {
                let (s, c) = ((2.0 * a * x).sinh(), (2.0 * a * x).cosh());
                [mu * c / (4.0 * a * a), mu * s / (2.0 * a), mu * c]
            }
        }
    }

    /// `F(q,Q)` for complex arguments, used by the duality relations.
    pub fn value_complex(&self, q: Complex64, big_q: Complex64) -> Complex64 {
        let x_plus = (q + big_q) * 0.5;
        let x_minus = (q - big_q) * 0.5;
        let Params { m, lambda: l, a, .. } = self.params;
        let k = 2.0 * a;
        let v = match self.family {
            PotentialFamily::Free => Complex64::new(0.0, 0.0),
            PotentialFamily::Quadratic => x_plus * x_plus * (0.5 * l),
            PotentialFamily::Linear => x_plus * l,
            PotentialFamily::Sinusoidal => (x_plus * k).cos() * (l / (k * k)),
            PotentialFamily::EvenHyperbolic => (x_plus * k).cosh() * (l / (k * k)),
            PotentialFamily::Exponential => (x_plus * k).exp() * (l / k),
            PotentialFamily::OddHyperbolic => (x_plus * k).sinh() * (l / k),
        };
        let minus = match self.family {
            PotentialFamily::Quadratic | PotentialFamily::Linear | PotentialFamily::Free => {
                self.mu * x_minus * x_minus * 0.5
            }
            PotentialFamily::Sinusoidal => -self.mu * (x_minus * k).cos() / (4.0 * a * a),
            _ => self.mu * (x_minus * k).cosh() / (4.0 * a * a),
        };
        -v * (4.0 * m) / self.mu + minus
    }
}

impl GeneratingFunction for SplitGeneratingFunction {
    fn value(&self, q: f64, big_q: f64) -> Complex64 {
        self.plus_jet(0.5 * (q + big_q))[0] + self.minus_jet(0.5 * (q - big_q))[0]
    }

    fn d_q(&self, q: f64, big_q: f64) -> Complex64 {
        (self.plus_jet(0.5 * (q + big_q))[1] + self.minus_jet(0.5 * (q - big_q))[1]) * 0.5
    }

    fn d_big_q(&self, q: f64, big_q: f64) -> Complex64 {
        (self.plus_jet(0.5 * (q + big_q))[1] - self.minus_jet(0.5 * (q - big_q))[1]) * 0.5
    }

    fn d_qq(&self, q: f64, big_q: f64) -> Complex64 {
        (self.plus_jet(0.5 * (q + big_q))[2] + self.minus_jet(0.5 * (q - big_q))[2]) * 0.25
    }

    fn d_big_q_big_q(&self, q: f64, big_q: f64) -> Complex64 {
        self.d_qq(q, big_q)
    }

    fn d_q_big_q(&self, q: f64, big_q: f64) -> Complex64 {
        (self.plus_jet(0.5 * (q + big_q))[2] - self.minus_jet(0.5 * (q - big_q))[2]) * 0.25
    }
}

/// Any smooth `F(q,Q)` given as a closure; partials by central differences.
pub struct NumericGf<F> {
    f: F,
    h: f64,
}

impl<F: Fn(f64, f64) -> Complex64> NumericGf<F> {
    pub fn new(f: F) -> Self {
        NumericGf { f, h: 1e-3 }
    }

    fn d1(&self, g: impl Fn(f64) -> Complex64) -> Complex64 {
        let h = self.h;
        (g(-2.0 * h) - g(-h) * 8.0 + g(h) * 8.0 - g(2.0 * h)) / (12.0 * h)
    }

    fn d2(&self, g: impl Fn(f64) -> Complex64) -> Complex64 {
        let h = self.h;
        (-g(-2.0 * h) + g(-h) * 16.0 - g(0.0) * 30.0 + g(h) * 16.0 - g(2.0 * h)) / (12.0 * h * h)
    }
}

impl<F: Fn(f64, f64) -> Complex64> GeneratingFunction for NumericGf<F> {
    fn value(&self, q: f64, big_q: f64) -> Complex64 {
        (self.f)(q, big_q)
    }

    fn d_q(&self, q: f64, big_q: f64) -> Complex64 {
        self.d1(|t| (self.f)(q + t, big_q))
    }

    fn d_big_q(&self, q: f64, big_q: f64) -> Complex64 {
        self.d1(|t| (self.f)(q, big_q + t))
    }

    fn d_qq(&self, q: f64, big_q: f64) -> Complex64 {
        self.d2(|t| (self.f)(q + t, big_q))
    }

    fn d_big_q_big_q(&self, q: f64, big_q: f64) -> Complex64 {
        self.d2(|t| (self.f)(q, big_q + t))
    }

    fn d_q_big_q(&self, q: f64, big_q: f64) -> Complex64 {
        self.d1(|t| self.d_q(q, big_q + t))
    }
}

/// `(F, p, P)` with `p = ∂F/∂q` and `P = -∂F/∂Q`.
pub fn eval_f_and_momenta<G: GeneratingFunction + ?Sized>(
    gf: &G,
    q: f64,
    big_q: f64,
) -> (Complex64, Complex64, Complex64) {
    (gf.value(q, big_q), gf.d_q(q, big_q), -gf.d_big_q(q, big_q))
}

/// `|F_qq - F_QQ|`.
pub fn correction_free_residual<G: GeneratingFunction + ?Sized>(gf: &G, q: f64, big_q: f64) -> f64 {
    (gf.d_qq(q, big_q) - gf.d_big_q_big_q(q, big_q)).norm()
}

fn real_mu(gf: &SplitGeneratingFunction) -> Result<f64> {
    if gf.mu.im != 0.0 {
        return Err(Error::InvalidParams("phase-space maps need real mu".into()));
    }
    Ok(gf.mu.re)
}

/// Image `(Q, P)` of `(q, p)` under the canonical map generated by `gf`.
///
/// Solves `p = ∂F/∂q(q, Q)` for `Q` on a bracket around `q`. For the
/// sinusoidal family only the principal branch `|Q - q| ≤ π/(2a)` is kept.
pub fn transform_point(gf: &SplitGeneratingFunction, pt: PhasePoint) -> Result<PhasePoint> {
    real_mu(gf)?;
    let a = gf.params.a;
    let periodic = gf.family.is_periodic();
    let (lo, hi) = if periodic {
        (pt.q - 2.0 * PI / a, pt.q + 2.0 * PI / a)
    } else {
        (pt.q - 10.0, pt.q + 10.0)
    };
    let g = |x: f64| gf.d_q(pt.q, x).re - pt.p;
    let samples = 2000;
    let step = (hi - lo) / samples as f64;
    let mut roots: Vec<f64> = Vec::new();
    let mut x0 = lo;
    let mut g0 = g(x0);
    for i in 1..=samples {
        let x1 = lo + step * i as f64;
        let g1 = g(x1);
        if g0 == 0.0 {
            roots.push(x0);
        } else if g0 * g1 < 0.0 {
            roots.push(refine_root(&g, |x| gf.d_q_big_q(pt.q, x).re, x0, x1));
        }
        x0 = x1;
        g0 = g1;
    }
    if g0 == 0.0 {
        roots.push(x0);
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * (1.0 + a.abs()));
    if periodic {
        let half_width = PI / (2.0 * a) * (1.0 + 1e-12);
        roots.retain(|&x| (x - pt.q).abs() <= half_width);
    }
    match roots.len() {
        0 => Err(Error::NoRoot),
        1 => {
            let big_q = roots[0];
            Ok(PhasePoint::new(big_q, -gf.d_big_q(pt.q, big_q).re))
        }
        count => Err(Error::BranchAmbiguity { count }),
    }
}

fn refine_root(g: &impl Fn(f64) -> f64, dg: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    let mut x = 0.5 * (a + b);
    // one Newton polish, kept only if it stays inside the bracket
    let d = dg(x);
    if d != 0.0 {
        let y = x - g(x) / d;
        if y >= a && y <= b && g(y).abs() <= g(x).abs() {
            x = y;
        }
    }
    x
}

/// `|H(Q,P) - H(q,p)|` and `|{Q,P}_{q,p} - 1|`, the latter by central
/// differences of the map.
pub fn invariance_and_symplectic_residuals(gf: &SplitGeneratingFunction, pt: PhasePoint) -> Result<(f64, f64)> {
    let image = transform_point(gf, pt)?;
    let h0 = eval_hamiltonian(gf.family, &gf.params, pt);
    let h1 = eval_hamiltonian(gf.family, &gf.params, image);
    let h = 1e-6;
    let at = |dq: f64, dp: f64| transform_point(gf, PhasePoint::new(pt.q + dq, pt.p + dp));
    let (qp, qm) = (at(h, 0.0)?, at(-h, 0.0)?);
    let (pp, pm) = (at(0.0, h)?, at(0.0, -h)?);
    let dq_dq = (qp.q - qm.q) / (2.0 * h);
    let dp_dq = (qp.p - qm.p) / (2.0 * h);
    let dq_dp = (pp.q - pm.q) / (2.0 * h);
    let dp_dp = (pp.p - pm.p) / (2.0 * h);
    let bracket = dq_dq * dp_dp - dq_dp * dp_dq;
    Ok(((h1 - h0).abs(), (bracket - 1.0).abs()))
}

/// `|(P - p) - (4m/μ)V′(q₊)|` at the image of `pt`.
pub fn large_mu_check(gf: &SplitGeneratingFunction, pt: PhasePoint) -> Result<f64> {
    let mu = real_mu(gf)?;
    let image = transform_point(gf, pt)?;
    let q_plus = 0.5 * (pt.q + image.q);
    let predicted = 4.0 * gf.params.m / mu * gf.family.force_gradient(&gf.params, q_plus);
    Ok(((image.p - pt.p) - predicted).abs())
}

/// Parametrisation `μ(z) = μ₀ e^{√ρ z}` under which `F_{μ(z)}(q,Q)` is
/// symmetric in its three arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityParams {
    pub mu0: Complex64,
    pub sqrt_rho: Complex64,
}

impl DualityParams {
    pub fn for_family(family: PotentialFamily, params: &Params) -> Result<Self> {
        let Params { m, lambda: l, a, .. } = *params;
        let i = Complex64::i();
        let (mu0, sqrt_rho) = match family {
            PotentialFamily::Sinusoidal => (Complex64::new(2.0 * (m * l).sqrt(), 0.0), i * a),
            PotentialFamily::EvenHyperbolic => (i * 2.0 * (m * l).sqrt(), Complex64::new(a, 0.0)),
            PotentialFamily::Exponential => (i * 4.0 * (m * l * a).sqrt(), Complex64::new(a, 0.0)),
            PotentialFamily::OddHyperbolic => (i * 2.0 * (2.0 * m * l * a).sqrt(), Complex64::new(a, 0.0)),
            _ => return Err(Error::UnsupportedFamily("duality needs a sinusoidal or hyperbolic family")),
        };
        Ok(DualityParams { mu0, sqrt_rho })
    }

    pub fn mu_of_z(&self, z: Complex64) -> Complex64 {
        self.mu0 * (self.sqrt_rho * z).exp()
    }

    pub fn z_of_mu(&self, mu: Complex64) -> Complex64 {
        (mu / self.mu0).ln() / self.sqrt_rho
    }
}

/// Largest violation of `F_{μ(z)}(q,Q) = F_{μ(q)}(z,Q) = F_{μ(Q)}(q,z)`.
pub fn duality_residual(family: PotentialFamily, params: &Params, z: Complex64, q: f64, big_q: f64) -> Result<f64> {
    let dp = DualityParams::for_family(family, params)?;
    let eval = |mu_arg: Complex64, x: Complex64, y: Complex64| -> Result<Complex64> {
        Ok(SplitGeneratingFunction::new(family, dp.mu_of_z(mu_arg), *params)?.value_complex(x, y))
    };
    let (qc, big_qc) = (Complex64::new(q, 0.0), Complex64::new(big_q, 0.0));
    let base = eval(z, qc, big_qc)?;
    let swap_q = eval(qc, z, big_qc)?;
    let swap_big_q = eval(big_qc, qc, z)?;
    Ok((base - swap_q).norm().max((base - swap_big_q).norm()))
}
