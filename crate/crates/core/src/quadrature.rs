//! Quadrature engines for the kernel integrals.
//!
//! Three tools live here:
//!
//! * an adaptive 21-point Gauss-Kronrod integrator for complex integrands on
//!   finite or truncated intervals,
//! * the equispaced trapezoidal rule for periodic integrands, which is
//!   spectrally accurate for analytic periodic functions,
//! * a Gaussian-regulated integrator (`e^{-εx²}` damping followed by
//!   polynomial extrapolation to `ε → 0`) for the conditionally convergent
//!   kernels of the linear potential.
//!
//! Leading-order stationary-phase evaluation of `∫ e^{iF/ħ} Φ dQ` is also
//! provided, both the generic sum over stationary points and the closed
//! forms for the exponential and sinusoidal families.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::genfun::{GeneratingFunction, SplitGeneratingFunction};
use crate::phasecore::Params;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const MAX_SUBDIVISIONS: usize = 200_000;
const MAX_PERIODIC_NODES: usize = 1 << 20;

/// Where an integral is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationDomain {
    /// `[-truncation, truncation]`, standing in for the whole real line.
    InfiniteLine { truncation: f64 },
    /// `[0, truncation]`, standing in for the positive half-line.
    HalfLine { truncation: f64 },
    /// One period `[0, period)` sampled with `nodes` equispaced points.
    Periodic { period: f64, nodes: usize },
    /// An ordinary finite interval.
    Interval { lower: f64, upper: f64 },
}

impl IntegrationDomain {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            IntegrationDomain::InfiniteLine { truncation } => truncation > 0.0,
            IntegrationDomain::HalfLine { truncation } => truncation > 0.0,
            IntegrationDomain::Periodic { period, nodes } => period > 0.0 && nodes >= 2,
            IntegrationDomain::Interval { lower, upper } => {
                lower.is_finite() && upper.is_finite() && upper > lower
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("bad integration domain {self:?}")))
        }
    }

    /// Endpoints of the (truncated) range.
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            IntegrationDomain::InfiniteLine { truncation } => (-truncation, truncation),
            IntegrationDomain::HalfLine { truncation } => (0.0, truncation),
            IntegrationDomain::Periodic { period, .. } => (0.0, period),
            IntegrationDomain::Interval { lower, upper } => (lower, upper),
        }
    }
}

/// Stopping rule: converged once `error ≤ max(abs, rel·|I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn abs(abs: f64) -> Self {
        Tolerance { abs, rel: 0.0 }
    }

    pub fn rel(rel: f64) -> Self {
        Tolerance { abs: 0.0, rel }
    }

    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs.max(self.rel * value.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Gaussian damping schedule for conditionally convergent integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct Regulator {
    epsilons: Vec<f64>,
}

impl Regulator {
    /// At least three strictly positive damping strengths, each at most half
    /// of its predecessor.
    pub fn new(epsilons: Vec<f64>) -> Result<Self> {
        if epsilons.len() < 3 {
            return Err(Error::InvalidParams(
                "a regulator needs at least three epsilons".into(),
            ));
        }
        if epsilons.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
            return Err(Error::InvalidParams("regulator epsilons must be positive".into()));
        }
        if epsilons.windows(2).any(|w| w[1] > 0.5 * w[0]) {
            return Err(Error::InvalidParams(
                "regulator epsilons must shrink by at least a factor of two".into(),
            ));
        }
        Ok(Regulator { epsilons })
    }

    /// Halving schedule starting at `first`.
    pub fn halving(first: f64, levels: usize) -> Result<Self> {
        Regulator::new((0..levels).map(|i| first * 0.5f64.powi(i as i32)).collect())
    }

    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    floor: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn checked<F>(f: &F, x: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let v = f(x);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(x))
    }
}

/// One 21-point Gauss-Kronrod panel with the QUADPACK error heuristic.
/// Returns the value, the error estimate and its roundoff floor.
fn gk21<F>(f: &F, a: f64, b: f64) -> Result<(Complex64, f64, f64)>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = Complex64::new(0.0, 0.0);
    let mut res_abs = fc.norm() * WGK[10];
    let mut f1 = [Complex64::new(0.0, 0.0); 10];
    let mut f2 = [Complex64::new(0.0, 0.0); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let lo = checked(f, center - dx)?;
        let hi = checked(f, center + dx)?;
        f1[j] = lo;
        f2[j] = hi;
        res_k += (lo + hi) * WGK[j];
        res_abs += (lo.norm() + hi.norm()) * WGK[j];
        if j % 2 == 1 {
            res_g += (lo + hi) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).norm();
    for j in 0..10 {
        res_asc += WGK[j] * ((f1[j] - mean).norm() + (f2[j] - mean).norm());
    }
    let scale = half.abs();
    let value = res_k * half;
    res_abs *= scale;
    res_asc *= scale;
    let mut err = ((res_k - res_g) * half).norm();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let mut floor = 0.0;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        floor = 50.0 * f64::EPSILON * res_abs;
        err = err.max(floor);
    }
    Ok((value, err, floor))
}

/// Adaptive Gauss-Kronrod integration of a complex integrand on `[a, b]`,
/// starting from `pieces` equal panels.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, pieces: usize, tol: Tolerance) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    let pieces = pieces.max(1);
    let width = (b - a) / pieces as f64;
    let mut heap = BinaryHeap::with_capacity(pieces * 2);
    let mut evaluations = 0usize;
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    let mut total_floor = 0.0;
    for i in 0..pieces {
        let lo = a + width * i as f64;
        let hi = if i + 1 == pieces { b } else { a + width * (i + 1) as f64 };
        let (value, error, floor) = gk21(&f, lo, hi)?;
        evaluations += 21;
        total += value;
        total_err += error;
        total_floor += floor;
        heap.push(Panel { a: lo, b: hi, value, error, floor });
    }
    // tolerances below the roundoff floor cannot be met by refinement
    while total_err > tol.target(total).max(2.0 * total_floor) {
        if heap.len() >= MAX_SUBDIVISIONS {
            return Err(Error::MaxSubdivisions { error: total_err });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a).abs() <= 1e-13 * (worst.a.abs() + worst.b.abs()).max(1e-300) {
            return Err(Error::MaxSubdivisions { error: total_err });
        }
        let (v1, e1, r1) = gk21(&f, worst.a, mid)?;
        let (v2, e2, r2) = gk21(&f, mid, worst.b)?;
        evaluations += 42;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        total_floor += r1 + r2 - worst.floor;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1, floor: r1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2, floor: r2 });
        if heap.peek().map_or(true, |p| p.error == 0.0) {
            break;
        }
    }
    // re-sum to shed accumulated rounding from the running update
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for p in heap.iter() {
        value += p.value;
        error += p.error;
    }
    Ok(QuadratureResult { value, error_estimate: error, evaluations })
}

/// Real-valued convenience wrapper around [`integrate_interval`].
pub fn integrate_real<F>(f: F, a: f64, b: f64, pieces: usize, tol: Tolerance) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let r = integrate_interval(|x| Complex64::new(f(x), 0.0), a, b, pieces, tol)?;
    Ok((r.value.re, r.error_estimate))
}

fn trapezoid<F>(f: &F, period: f64, nodes: usize) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let h = period / nodes as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        sum += checked(f, h * k as f64)?;
    }
    Ok(sum * h)
}

/// Integrate over a domain: adaptive Gauss-Kronrod on line-like domains,
/// the trapezoidal rule (doubling the node count if needed) on periodic ones.
pub fn integrate<F>(f: F, domain: IntegrationDomain, tol: Tolerance) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    domain.validate()?;
    match domain {
        IntegrationDomain::Periodic { period, nodes } => {
            let mut n = nodes;
            let mut evaluations = 0;
            loop {
                let full = trapezoid(&f, period, n)?;
                let half = trapezoid(&f, period, (n / 2).max(1))?;
                evaluations += n + (n / 2).max(1);
                let error = (full - half).norm();
                if error <= tol.target(full) {
                    return Ok(QuadratureResult { value: full, error_estimate: error, evaluations });
                }
                if n * 2 > MAX_PERIODIC_NODES {
                    return Err(Error::MaxSubdivisions { error });
                }
                n *= 2;
            }
        }
        _ => {
            let (a, b) = domain.bounds();
            let pieces = ((b - a).ceil() as usize).clamp(2, 4096);
            integrate_interval(f, a, b, pieces, tol)
        }
    }
}

fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut t = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            t[i] = (t[i + 1] * xs[i] - t[i] * xs[i + level]) / (xs[i] - xs[i + level]);
        }
    }
    t[0]
}

/// Integrate `f(x)·e^{-εx²}` for each regulator strength and extrapolate the
/// sequence polynomially to `ε = 0`. Line-like domains are truncated where the
/// damping factor drops below `e^{-46}`.
pub fn integrate_regulated<F>(
    f: F,
    domain: IntegrationDomain,
    regulator: &Regulator,
    tol: Tolerance,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    let eps = regulator.epsilons();
    let mut values = Vec::with_capacity(eps.len());
    let mut evaluations = 0;
    let mut quad_err: f64 = 0.0;
    // tighter inner tolerance so extrapolation is not polluted by quadrature noise
    let inner = Tolerance::new(tol.abs * 1e-2, tol.rel * 1e-2);
    for &e in eps {
        let reach = (46.0 / e).sqrt();
        let sub = match domain {
            IntegrationDomain::InfiniteLine { truncation } => IntegrationDomain::InfiniteLine {
                truncation: truncation.min(reach),
            },
            IntegrationDomain::HalfLine { truncation } => IntegrationDomain::HalfLine {
                truncation: truncation.min(reach),
            },
            other => other,
        };
        let r = integrate(|x| f(x) * (-e * x * x).exp(), sub, inner)?;
        evaluations += r.evaluations;
        quad_err = quad_err.max(r.error_estimate);
        values.push(r.value);
    }
    let n = eps.len();
    let best = neville_at_zero(eps, &values);
    // corrections from successively higher-order extrapolants on the finest points
    let mut corrections = Vec::with_capacity(n - 1);
    let mut prev = values[n - 1];
    for order in 1..n {
        let p = neville_at_zero(&eps[n - 1 - order..], &values[n - 1 - order..]);
        corrections.push((p - prev).norm());
        prev = p;
    }
    let last = corrections[corrections.len() - 1];
    let before = corrections[corrections.len() - 2];
    let dropped = neville_at_zero(&eps[..n - 1], &values[..n - 1]);
    let error_estimate = last.max((best - dropped).norm()) + quad_err;
    if last > before && last > tol.target(best) {
        return Err(Error::ExtrapolationUnstable(last));
    }
    Ok(QuadratureResult { value: best, error_estimate, evaluations })
}

/// Leading stationary-phase (or, for imaginary μ, Laplace) approximation of
/// `∫ e^{(i/ħ)F_μ(q,Q)} Φ(Q) dQ` over `domain`: the sum over real stationary
/// points `Q̄` of `√(2πħi/F_QQ) e^{(i/ħ)F(q,Q̄)} Φ(Q̄)`.
pub fn stationary_phase_leading<P>(
    gf: &SplitGeneratingFunction,
    phi: P,
    q: f64,
    domain: IntegrationDomain,
) -> Result<Complex64>
where
    P: Fn(f64) -> Complex64,
{
    domain.validate()?;
    let hbar = gf.params().hbar;
    let mu = gf.mu();
    let imaginary = if mu.im == 0.0 {
        false
    } else if mu.re == 0.0 {
        true
    } else {
        return Err(Error::InvalidParams(
            "stationary phase needs real or purely imaginary mu".into(),
        ));
    };
    let slope = |x: f64| {
        let d = gf.d_big_q(q, x);
        if imaginary {
            d.im
        } else {
            d.re
        }
    };
    let (lo, hi) = domain.bounds();
    let periodic = matches!(domain, IntegrationDomain::Periodic { .. });
    let samples = 4000;
    let step = (hi - lo) / samples as f64;
    let mut roots: Vec<f64> = Vec::new();
    let mut x0 = lo;
    let mut s0 = slope(x0);
    for i in 1..=samples {
        let x1 = lo + step * i as f64;
        let s1 = slope(x1);
        if s0 == 0.0 {
            roots.push(x0);
        } else if s0 * s1 < 0.0 {
            roots.push(bisect(&slope, x0, x1));
        }
        x0 = x1;
        s0 = s1;
    }
    if s0 == 0.0 {
        roots.push(x0);
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
    if periodic && roots.len() > 1 {
        let period = hi - lo;
        let first = roots[0];
        if let Some(last) = roots.last() {
            if (last - first - period).abs() < 1e-10 {
                roots.pop();
            }
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    let mut used = 0;
    for &root in &roots {
        let curvature = gf.d_big_q_big_q(q, root);
        if curvature.norm() < 1e-14 * (1.0 + mu.norm()) {
            return Err(Error::DegenerateHessian);
        }
        if imaginary && (curvature / Complex64::i()).re <= 0.0 {
            // maxima of the decay exponent do not contribute
            continue;
        }
        let amp = (Complex64::new(0.0, 2.0 * PI * hbar) / curvature).sqrt();
        let phase = (Complex64::i() * gf.value(q, root) / hbar).exp();
        total += amp * phase * phi(root);
        used += 1;
    }
    if used == 0 {
        return Err(Error::NoStationaryPoint);
    }
    Ok(total)
}

fn bisect<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
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
    0.5 * (a + b)
}

/// Closed-form leading term for the exponential family:
/// `√(2π) √(4ħi/μ) e^{-μ/(4ħia²)} Φ(q)`.
pub fn exponential_leading(params: &Params, mu: Complex64, phi_at_q: Complex64) -> Complex64 {
    let i = Complex64::i();
    let a2 = params.a * params.a;
    (2.0 * PI).sqrt() * (i * 4.0 * params.hbar / mu).sqrt() * (-mu / (i * 4.0 * params.hbar * a2)).exp() * phi_at_q
}

/// Two-point stationary-phase sum for the sinusoidal family over `[0, 2π/a)`.
pub fn sinusoidal_two_point<P>(params: &Params, mu: f64, q: f64, phi: P) -> Complex64
where
    P: Fn(f64) -> Complex64,
{
    let x = mu / (4.0 * params.hbar * params.a * params.a);
    let sigma = if q - PI / params.a >= 0.0 { 1.0 } else { -1.0 };
    let pre = (8.0 * PI * params.hbar / mu).sqrt();
    let first = Complex64::from_polar(1.0, -x + PI / 4.0) * phi(q);
    let second = Complex64::from_polar(1.0, x - PI / 4.0) * phi(q - sigma * PI / params.a);
    (first + second) * pre
}

/// Collapsed form of the two-point sum for test functions in the parity
/// class `p` (`Φ(q - σπ/a) = (-1)^p Φ(q)`):
/// `2 i^{-p} √(8πħ/μ) cos[μ/(4ħa²) - (p+½)π/2] Φ(q)`.
pub fn sinusoidal_sifting(params: &Params, mu: f64, parity: u32, phi_at_q: Complex64) -> Complex64 {
    let x = mu / (4.0 * params.hbar * params.a * params.a);
    let p = (parity % 2) as f64;
    let i_pow = Complex64::i().powi(-((parity % 2) as i32));
    i_pow * 2.0 * (8.0 * PI * params.hbar / mu).sqrt() * (x - (p + 0.5) * PI / 2.0).cos() * phi_at_q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn gaussian_over_the_line() {
        let r = integrate(
            |x| c((-x * x).exp()),
            IntegrationDomain::InfiniteLine { truncation: 9.0 },
            Tolerance::abs(1e-14),
        )
        .unwrap();
        assert!((r.value.re - PI.sqrt()).abs() < 1e-12, "{}", r.value);
        // the estimate is bounded below by the roundoff floor 100·ε·∫|f|
        assert!(r.error_estimate <= 100.0 * f64::EPSILON * PI.sqrt() + 1e-14);
    }

    #[test]
    fn trapezoid_is_exact_for_trig_polynomials() {
        let r = integrate(
            |v| c(v.cos().powi(2)),
            IntegrationDomain::Periodic { period: 2.0 * PI, nodes: 8 },
            Tolerance::abs(1e-15),
        )
        .unwrap();
        assert!((r.value.re - PI).abs() < 1e-14);
        assert_eq!(r.evaluations, 12);
    }

    #[test]
    fn periodic_rule_converges_faster_than_any_power() {
        // ∫ e^{cos v} dv = 2π I₀(1)
        let exact = 2.0 * PI * 1.266_065_877_752_008_4;
        let err = |n| {
            let h = 2.0 * PI / n as f64;
            ((0..n).map(|k| (h * k as f64).cos().exp()).sum::<f64>() * h - exact).abs()
        };
        let (e4, e8, e16) = (err(4), err(8), err(16));
        assert!(e8 < e4 * 1e-3);
        assert!(e16 < 1e-14);
    }

    #[test]
    fn fresnel_integral_with_regulator() {
        let reg = Regulator::halving(0.02, 5).unwrap();
        let r = integrate_regulated(
            |x| Complex64::from_polar(1.0, x * x),
            IntegrationDomain::InfiniteLine { truncation: f64::INFINITY },
            &reg,
            Tolerance::abs(1e-9),
        )
        .unwrap();
        let exact = Complex64::from_polar(PI.sqrt(), PI / 4.0);
        assert!((r.value - exact).norm() < 1e-6, "{} vs {}", r.value, exact);
    }

    #[test]
    fn regulator_is_a_no_op_for_absolutely_convergent_integrands() {
        let reg = Regulator::halving(0.01, 4).unwrap();
        let f = |x: f64| c((-x * x).exp() * (1.0 + x).cos());
        let plain = integrate(f, IntegrationDomain::InfiniteLine { truncation: 9.0 }, Tolerance::abs(1e-14))
            .unwrap()
            .value;
        let reg = integrate_regulated(
            f,
            IntegrationDomain::InfiniteLine { truncation: 9.0 },
            &reg,
            Tolerance::abs(1e-13),
        )
        .unwrap()
        .value;
        assert!((plain - reg).norm() < 1e-10);
    }

    #[test]
    fn smooth_reference_integrals() {
        // ∫₀¹ 1/(1+x²) = π/4, ∫₀^π sin = 2, ∫₀¹ √x = 2/3
        let cases: [(Box<dyn Fn(f64) -> f64>, f64, f64, f64); 3] = [
            (Box::new(|x| 1.0 / (1.0 + x * x)), 0.0, 1.0, PI / 4.0),
            (Box::new(f64::sin), 0.0, PI, 2.0),
            (Box::new(f64::sqrt), 0.0, 1.0, 2.0 / 3.0),
        ];
        for (f, a, b, exact) in cases {
            let (v, e) = integrate_real(f, a, b, 1, Tolerance::abs(1e-13)).unwrap();
            assert!((v - exact).abs() < 1e-13, "{v} vs {exact}");
            assert!(e <= 1e-13);
        }
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let r = integrate_real(|x| 1.0 / x, 0.0, 1.0, 1, Tolerance::abs(1e-10));
        assert!(matches!(r, Err(Error::NonFinite(_))) || matches!(r, Err(Error::MaxSubdivisions { .. })));
        let r = integrate_real(|x| if x > 0.5 { f64::NAN } else { 1.0 }, 0.0, 1.0, 1, Tolerance::abs(1e-10));
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    #[test]
    fn regulator_validation() {
        assert!(Regulator::new(vec![1e-2, 5e-3]).is_err());
        assert!(Regulator::new(vec![1e-2, 6e-3, 3e-3]).is_err());
        assert!(Regulator::new(vec![1e-2, 5e-3, 2.5e-3]).is_ok());
    }

    fn bessel_i0(x: f64) -> f64 {
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..80 {
            term *= 0.25 * x * x / (k * k) as f64;
            sum += term;
        }
        sum
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(32))]

        #[test]
        fn periodic_rule_hits_bessel_reference(c in 0.1f64..6.0, period in 0.5f64..8.0) {
            // ∫₀^T e^{c cos(2πv/T)} dv = T I₀(c)
            let r = integrate(
                |v| Complex64::new((c * (2.0 * PI * v / period).cos()).exp(), 0.0),
                IntegrationDomain::Periodic { period, nodes: 16 },
                Tolerance::rel(1e-13),
            )
            .unwrap();
            let exact = period * bessel_i0(c);
            proptest::prop_assert!((r.value.re - exact).abs() < 1e-12 * exact, "{} {}", r.value.re, exact);
        }

        #[test]
        fn adaptive_rule_integrates_shifted_gaussians(s in 0.3f64..3.0, x0 in -2.0f64..2.0) {
            let r = integrate(
                |x| Complex64::new((-(x - x0) * (x - x0) / (s * s)).exp(), 0.0),
                IntegrationDomain::Interval { lower: x0 - 40.0 * s, upper: x0 + 40.0 * s },
                Tolerance::rel(1e-12),
            )
            .unwrap();
            let exact = s * PI.sqrt();
            proptest::prop_assert!((r.value.re - exact).abs() < 1e-11 * exact);
        }
    }
}
