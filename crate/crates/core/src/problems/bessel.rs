use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const TERMS: usize = 40;

/// Largest argument accepted by [`bessel_j1_y1`].
pub const MAX_ARGUMENT: f64 = 5.0;

/// `J1, Y1` and their derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bessel1 {
    pub j1: f64,
    pub y1: f64,
    pub dj1: f64,
    pub dy1: f64,
}

/// Ascending series for `J0, J1, Y0, Y1` on `0 < x <= 5`.
pub fn bessel_j1_y1(x: f64) -> Result<Bessel1> {
    if !(x > 0.0 && x <= MAX_ARGUMENT) {
        return Err(Error::invalid(format!("Bessel argument {x} outside (0, {MAX_ARGUMENT}]")));
    }
    let half = 0.5 * x;
    let q = -half * half;
    let (mut j0, mut j1) = (0.0, 0.0);
    // sums without the logarithmic parts
    let (mut s0, mut s1) = (0.0, 0.0);
    // t0 = q^k / (k!)^2, t1 = q^k / (k! (k+1)!)
    let (mut t0, mut t1) = (1.0, 1.0);
    // H_k
    let mut harmonic = 0.0;
    for k in 0..TERMS {
        if k > 0 {
            harmonic += 1.0 / k as f64;
            t0 *= q / (k * k) as f64;
            t1 *= q / (k * (k + 1)) as f64;
        }
        j0 += t0;
        j1 += t1;
        s0 += harmonic * t0;
        // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
        s1 += (2.0 * harmonic + 1.0 / (k + 1) as f64 - 2.0 * EULER_GAMMA) * t1;
    }
    j1 *= half;
    let log = half.ln();
    let y0 = 2.0 / PI * ((log + EULER_GAMMA) * j0 - s0);
    let y1 = 2.0 / PI * log * j1 - 2.0 / (PI * x) - half / PI * s1;
    Ok(Bessel1 { j1, y1, dj1: j0 - j1 / x, dy1: y0 - y1 / x })
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::quadrature::gauss_interval;

    /// 60-term series.
    fn j1_oracle(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut term = 0.5 * x;
        for k in 0..60 {
            if k > 0 {
                term *= -(0.25 * x * x) / (k * (k + 1)) as f64;
            }
            sum += term;
        }
        sum
    }

    /// `Y1(x) = (1/pi) int_0^pi sin(x sin t - t) dt - (2/pi) int_0^inf sinh(t) e^(-x sinh t) dt`.
    fn y1_oracle(x: f64) -> f64 {
        let panels = 400;
        let mut a = 0.0;
        for k in 0..panels {
            let (t0, t1) = (PI * k as f64 / panels as f64, PI * (k + 1) as f64 / panels as f64);
            a += gauss_interval(t0, t1, 10).map(|(t, w)| w * (x * t.sin() - t).sin()).sum::<f64>();
        }
        let mut b = 0.0;
        for k in 0..panels {
            let (t0, t1) = (0.025 * k as f64, 0.025 * (k + 1) as f64);
            b += gauss_interval(t0, t1, 10).map(|(t, w)| w * t.sinh() * (-x * t.sinh()).exp()).sum::<f64>();
        }
        (a - 2.0 * b) / PI
    }

    #[test]
    fn reference_values() {
        let b = bessel_j1_y1(1.0).unwrap();
        assert!((b.j1 - 0.440_050_585_7).abs() < 1e-9);
        assert!((b.y1 + 0.781_212_821_3).abs() < 1e-8);
        let b = bessel_j1_y1(2.5).unwrap();
        assert!((b.j1 - 0.497_094_102_464_274).abs() < 1e-12);
        assert!((b.y1 - 0.145_918_137_966_786).abs() < 1e-12);
        assert!((y1_oracle(1.0) + 0.781_212_821_3).abs() < 1e-8);
        for x in [0.05, 0.7, 1.9, 3.3, 4.9] {
            let b = bessel_j1_y1(x).unwrap();
            assert!((b.j1 - j1_oracle(x)).abs() < 1e-13);
            assert!((b.y1 - y1_oracle(x)).abs() < 1e-10, "x={x}: {} vs {}", b.y1, y1_oracle(x));
        }
    }

    #[test]
    fn small_argument_limit() {
        let b = bessel_j1_y1(1e-6).unwrap();
        assert!((b.j1 - 5e-7).abs() < 1e-18);
        assert!((b.dj1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn wronskian() {
        for i in 0..=100 {
            let x = 0.1 + 2.9 * i as f64 / 100.0;
            let b = bessel_j1_y1(x).unwrap();
            let w = b.j1 * b.dy1 - b.dj1 * b.y1;
            assert!((w - 2.0 / (PI * x)).abs() < 1e-9, "x={x}: {w}");
        }
    }

    #[test]
    fn derivatives_match_differences() {
        for x in [0.3, 1.2, 2.7, 4.4] {
            let h = 1e-5;
            let (p, m) = (bessel_j1_y1(x + h).unwrap(), bessel_j1_y1(x - h).unwrap());
            let b = bessel_j1_y1(x).unwrap();
            assert!(((p.j1 - m.j1) / (2.0 * h) - b.dj1).abs() < 1e-9);
            assert!(((p.y1 - m.y1) / (2.0 * h) - b.dy1).abs() < 1e-8);
        }
    }

    #[test]
    fn argument_range() {
        assert!(bessel_j1_y1(0.0).is_err());
        assert!(bessel_j1_y1(5.5).is_err());
    }
}
