//! Oscillator eigenfunctions and parabolic cylinder functions of integer order.

use std::f64::consts::PI;

use crate::phasecore::Params;

/// Normalized oscillator eigenfunction `ψ_n(q)` for `V = λq²/2`.
///
/// Uses the three-term recurrence of the normalized Hermite functions,
/// which stays bounded for every `n`.
pub fn oscillator_psi(n: u32, q: f64, params: &Params) -> f64 {
    let m_omega = params.m * params.omega();
    let x = q * (m_omega / params.hbar).sqrt();
    let pre = (m_omega / (PI * params.hbar)).powf(0.25);
    pre * hermite_function(n, x)
}

/// `h_n(x) = (2ⁿ n! √π)^{-1/2} H_n(x) e^{-x²/2}` without the `π^{-1/4}`.
fn hermite_function(n: u32, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = (-0.5 * x * x).exp();
    for k in 0..n {
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * x * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Weber parabolic cylinder function `D_n(z) = e^{-z²/4} He_n(z)`.
pub fn parabolic_cylinder_d(n: u32, z: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let next = z * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    (-0.25 * z * z).exp() * cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_real, Tolerance};

    #[test]
    fn ground_state_at_origin() {
        let v = oscillator_psi(0, 0.0, &Params::default());
        assert!((v - PI.powf(-0.25)).abs() < 1e-15);
        assert!((v - 0.751_125_544_464_942_5).abs() < 1e-15);
    }

    #[test]
    fn parity() {
        let p = Params::new(1.3, 0.7, 2.0, 1.0).unwrap();
        for n in 0..12 {
            for q in [0.1, 0.77, 2.3] {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert!((oscillator_psi(n, -q, &p) - sign * oscillator_psi(n, q, &p)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn orthonormal() {
        let p = Params::new(1.0, 1.0, 2.0, 1.0).unwrap();
        for m in 0..=8 {
            for n in m..=8 {
                let (v, _) = integrate_real(
                    |q| oscillator_psi(m, q, &p) * oscillator_psi(n, q, &p),
                    -12.0,
                    12.0,
                    24,
                    Tolerance::abs(1e-13),
                )
                .unwrap();
                let want = if m == n { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-10, "{m} {n}: {v}");
            }
        }
    }

    #[test]
    fn agrees_with_parabolic_cylinder_form() {
        let p = Params::new(0.8, 1.2, 1.5, 1.0).unwrap();
        let m_omega = p.m * p.omega();
        let mut fact = 1.0;
        for n in 0..15u32 {
            if n > 0 {
                fact *= n as f64;
            }
            for q in [-1.7, 0.2, 0.9, 3.1] {
                let z = (2.0 * m_omega / p.hbar).sqrt() * q;
                let want = (m_omega / (PI * p.hbar)).powf(0.25) / fact.sqrt() * parabolic_cylinder_d(n, z);
                let got = oscillator_psi(n, q, &p);
                assert!((got - want).abs() < 1e-12 * (1.0 + want.abs()), "{n} {q}");
            }
        }
    }

    #[test]
    fn frozen_values() {
        // D_3(1.5) = (1.5³ - 3·1.5) e^{-0.5625}
        assert!((parabolic_cylinder_d(3, 1.5) - (-1.125 * (-0.5625f64).exp())).abs() < 1e-15);
        // ψ_2(0) = -π^{-1/4}/√2 at unit scales
        let v = oscillator_psi(2, 0.0, &Params::default());
        assert!((v + PI.powf(-0.25) / 2f64.sqrt()).abs() < 1e-15);
    }
}
