//! Bessel functions: `K` of imaginary and real order by their cosh integral
//! representation, and integer-order `J` by backward recurrence.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_real, Tolerance};

const UNDERFLOW_X: f64 = 700.0;

fn cutoff(x: f64) -> f64 {
    // e^{-x(cosh t - 1)} < e^{-42} beyond this point
    (1.0 + 42.0 / x).acosh()
}

fn k_integral(x: f64, order_weight: impl Fn(f64) -> f64, pieces_scale: f64, tol: Tolerance) -> Result<f64> {
    let t = cutoff(x);
    let pieces = ((t * pieces_scale).ceil() as usize).clamp(4, 4000);
    let (v, _) = integrate_real(|s| (-x * (s.cosh() - 1.0)).exp() * order_weight(s), 0.0, t, pieces, tol)?;
    Ok(v)
}

fn imag_tolerance(nu: f64, x: f64) -> Tolerance {
    let abs = (1e-13 * (-0.5 * PI * nu.abs()).exp()).max(2e-14 * cutoff(x));
    Tolerance::new(abs, 1e-13)
}

/// `e^x K_{iν}(x)` for `x > 0`.
pub fn bessel_k_imag_scaled(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParams(format!("K_iν needs x > 0, got {x}")));
    }
    k_integral(x, |s| (nu * s).cos(), 1.0 + nu.abs(), imag_tolerance(nu, x))
}

/// `K_{iν}(x) = ∫₀^∞ e^{-x cosh t} cos(νt) dt`.
pub fn bessel_k_imag(nu: f64, x: f64) -> Result<f64> {
    if x > UNDERFLOW_X {
        return Err(Error::Underflow(x));
    }
    Ok(bessel_k_imag_scaled(nu, x)? * (-x).exp())
}

/// `d/dx K_{iν}(x) = -∫₀^∞ e^{-x cosh t} cosh t cos(νt) dt`.
pub fn bessel_k_imag_deriv(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParams(format!("K_iν needs x > 0, got {x}")));
    }
    if x > UNDERFLOW_X {
        return Err(Error::Underflow(x));
    }
    let tol = imag_tolerance(nu, x);
    let tol = Tolerance::new(tol.abs / x.min(1.0), tol.rel);
    Ok(-k_integral(x, |s| s.cosh() * (nu * s).cos(), 1.0 + nu.abs(), tol)? * (-x).exp())
}

/// `e^z K_ν(z)` for real order and `z > 0`.
pub fn bessel_k_real_scaled(nu: f64, z: f64) -> f64 {
    if !(z > 0.0) {
        return f64::NAN;
    }
    k_integral(z, |s| (nu * s).cosh(), 1.0, Tolerance::new(0.0, 2e-14)).unwrap_or(f64::NAN)
}

/// `J_0(x), …, J_nmax(x)` for `x ≥ 0` by Miller's backward recurrence,
/// normalized with `J₀ + 2ΣJ_{2k} = 1`.
pub fn bessel_j_seq(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let x = x.abs();
    let top = nmax.max(x.ceil() as usize);
    let mut start = top + 40 + (40.0 * top as f64).sqrt().ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        if k <= nmax {
            out[k] = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    out[0] = cur;
    norm += cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}
