//! Airy function `Ai` on the real line.
//!
//! Maclaurin series near the origin, an integral representation through
//! `K_{1/3}` on the decaying side, Taylor stepping from precomputed anchors
//! through the first oscillatory stretch, and the oscillatory asymptotic
//! expansion further out.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::specfun::bessel::bessel_k_real_scaled;

const AI0: f64 = 0.355_028_053_887_817_239;
const AIP0: f64 = 0.258_819_403_792_806_798;

const MACLAURIN_LO: f64 = -3.0;
const MACLAURIN_HI: f64 = 2.0;
const ASYMPTOTIC_FROM: f64 = -10.0;
const ANCHOR_STEP: f64 = 0.5;

/// `(Ai(x), Ai′(x))` from the Maclaurin pair.
fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f = Σ c_k x^{3k}, g = Σ d_k x^{3k+1}
    let (mut f, mut fp, mut g, mut gp) = (1.0, 0.0, x, 1.0);
    let (mut c, mut d) = (1.0, 1.0);
    let mut pow = 1.0; // x^{3k}
    for k in 1..200 {
        let kf = k as f64;
        c /= (3.0 * kf - 1.0) * (3.0 * kf);
        d /= (3.0 * kf) * (3.0 * kf + 1.0);
        let pow_prev = pow;
        pow *= x3;
        let tf = c * pow;
        let tfp = 3.0 * kf * c * pow_prev * x * x;
        let tg = d * pow * x;
        let tgp = (3.0 * kf + 1.0) * d * pow;
        f += tf;
        fp += tfp;
        g += tg;
        gp += tgp;
        let size = tf.abs() + tfp.abs() + tg.abs() + tgp.abs();
        if size < 1e-18 * (f.abs() + g.abs() + fp.abs() + gp.abs()) {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * fp - AIP0 * gp)
}

/// Taylor step of the Airy equation `y″ = xy` from `x0` by `h`.
fn taylor_step(x0: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    let mut c = [0.0f64; 80];
    c[0] = y;
    c[1] = yp;
    c[2] = 0.5 * x0 * y;
    for k in 1..78 {
        c[k + 2] = (x0 * c[k] + c[k - 1]) / ((k + 1) as f64 * (k + 2) as f64);
    }
    let (mut v, mut d) = (0.0, 0.0);
    for k in (0..80).rev() {
        v = v * h + c[k];
        if k > 0 {
            d = d * h + k as f64 * c[k];
        }
    }
    (v, d)
}

fn anchors() -> &'static Vec<(f64, f64, f64)> {
    static ANCHORS: OnceLock<Vec<(f64, f64, f64)>> = OnceLock::new();
    ANCHORS.get_or_init(|| {
        let mut out = Vec::new();
        let (mut y, mut yp) = maclaurin(MACLAURIN_LO);
        let mut x = MACLAURIN_LO;
        out.push((x, y, yp));
        while x > ASYMPTOTIC_FROM - 0.25 {
            let (ny, nyp) = taylor_step(x, y, yp, -ANCHOR_STEP);
            x -= ANCHOR_STEP;
            y = ny;
            yp = nyp;
            out.push((x, y, yp));
        }
        out
    })
}

fn oscillatory_asymptotic(z: f64) -> f64 {
    // Ai(-z) for large z > 0
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let (mut even, mut odd) = (1.0, 0.0);
    let mut u = 1.0;
    let mut inv = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        inv /= zeta;
        let term = u * inv;
        if term.abs() > last {
            break;
        }
        last = term.abs();
        // (-1)^j on c_{2j} and c_{2j+1}
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even += sign * term;
        } else {
            odd += sign * term;
        }
        if last < 1e-17 {
            break;
        }
    }
    let phase = zeta + PI / 4.0;
    (phase.sin() * even - phase.cos() * odd) / (PI.sqrt() * z.powf(0.25))
}

/// Airy function of the first kind.
pub fn airy_ai(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if (MACLAURIN_LO..=MACLAURIN_HI).contains(&x) {
        return maclaurin(x).0;
    }
    if x > MACLAURIN_HI {
        let zeta = 2.0 / 3.0 * x.powf(1.5);
        if zeta > 745.0 {
            return 0.0;
        }
        return (x / 3.0).sqrt() / PI * bessel_k_real_scaled(1.0 / 3.0, zeta) * (-zeta).exp();
    }
    if x >= ASYMPTOTIC_FROM {
        let table = anchors();
        let idx = ((MACLAURIN_LO - x) / ANCHOR_STEP).round() as usize;
        let (x0, y, yp) = table[idx.min(table.len() - 1)];
        return taylor_step(x0, y, yp, x - x0).0;
    }
    oscillatory_asymptotic(-x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_origin() {
        assert!((airy_ai(0.0) - 0.355_028_053_9).abs() < 1e-10);
        assert_eq!(airy_ai(0.0), AI0);
    }

    #[test]
    fn frozen_values() {
        let table = [
            (-12.0, -0.066_555_175_054_373_13),
            (-9.0, -0.022_133_721_547_341_40),
            (-5.0, 0.350_761_009_024_114_3),
            (-2.0, 0.227_407_428_201_685_6),
            (3.0, 0.006_591_139_357_460_719),
            (7.0, 7.492_128_863_997_167e-7),
            (8.0, 4.692_207_616_099_232e-8),
        ];
        for (x, want) in table {
            let got = airy_ai(x);
            assert!((got - want).abs() < 1e-12 * (1.0 + want.abs()) && ((got - want) / want).abs() < 1e-9, "{x}: {got} {want}");
        }
    }

    #[test]
    fn satisfies_airy_equation() {
        let h = 1e-3;
        let mut x = -8.0;
        while x <= 4.0 {
            let d2 = (-airy_ai(x - 2.0 * h) + 16.0 * airy_ai(x - h) - 30.0 * airy_ai(x) + 16.0 * airy_ai(x + h)
                - airy_ai(x + 2.0 * h))
                / (12.0 * h * h);
            // the stencil amplifies roundoff by about 5/h²
            assert!((d2 - x * airy_ai(x)).abs() < 5e-9, "{x}");
            x += 0.173;
        }
    }

    #[test]
    fn decay_ratio() {
        let z = |x: f64| 2.0 / 3.0 * x.powf(1.5);
        let want = (-(z(8.0) - z(7.0))).exp() * (7.0f64 / 8.0).powf(0.25);
        let got = airy_ai(8.0) / airy_ai(7.0);
        assert!((got / want - 1.0).abs() < 1e-3);
    }

    #[test]
    fn methods_agree_at_boundaries() {
        let stepped = |x: f64| {
            let table = anchors();
            let (x0, y, yp) = *table.iter().min_by(|a, b| (a.0 - x).abs().total_cmp(&(b.0 - x).abs())).unwrap();
            taylor_step(x0, y, yp, x - x0).0
        };
        let lo = maclaurin(MACLAURIN_LO).0;
        assert!((lo - stepped(MACLAURIN_LO)).abs() < 1e-15);
        assert!((lo - -0.378_814_293_677_658).abs() < 1e-13);
        let z = 2.0 / 3.0 * MACLAURIN_HI.powf(1.5);
        let k_form = (MACLAURIN_HI / 3.0).sqrt() / PI * bessel_k_real_scaled(1.0 / 3.0, z) * (-z).exp();
        assert!((maclaurin(MACLAURIN_HI).0 - k_form).abs() < 1e-13);
        let asym = oscillatory_asymptotic(-ASYMPTOTIC_FROM);
        assert!((stepped(ASYMPTOTIC_FROM) - asym).abs() < 1e-12, "{asym}");
        for b in [-6.25, -3.25] {
            let x0 = b + 0.25;
            let (y, yp) = {
                let a = anchors().iter().find(|a| (a.0 - x0).abs() < 1e-12).unwrap();
                (a.1, a.2)
            };
            let d = taylor_step(x0, y, yp, -0.25).0 - stepped(b - 1e-12);
            assert!(d.abs() < 2e-12, "{b}: {d}");
        }
    }
}
