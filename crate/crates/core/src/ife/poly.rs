//! Legendre polynomials and uniform-node Lagrange polynomials on `[-1, 1]`.

/// `P_n^(d)(x)` for `n <= degree`, `d <= derivs`.
#[derive(Clone, Debug)]
pub struct LegendreTable {
    stride: usize,
    data: Vec<f64>,
}

impl LegendreTable {
    pub fn new(degree: usize, derivs: usize, x: f64) -> Self {
        let stride = derivs + 1;
        let mut data = vec![0.0; (degree + 1) * stride];
        data[0] = 1.0;
        if degree >= 1 {
            data[stride] = x;
            if derivs >= 1 {
                data[stride + 1] = 1.0;
            }
        }
        // (n+1) P_{n+1}^(d) = (2n+1) (x P_n^(d) + d P_n^(d-1)) - n P_{n-1}^(d)
        for n in 1..degree {
            for d in 0..=derivs {
                let lower = if d > 0 { d as f64 * data[n * stride + d - 1] } else { 0.0 };
                let v = ((2 * n + 1) as f64 * (x * data[n * stride + d] + lower) - n as f64 * data[(n - 1) * stride + d])
                    / (n + 1) as f64;
                data[(n + 1) * stride + d] = v;
            }
        }
        LegendreTable { stride, data }
    }

    #[inline]
    pub fn get(&self, n: usize, d: usize) -> f64 {
        self.data[n * self.stride + d]
    }
}

/// Values and first derivatives of the `m + 1` Lagrange polynomials on the
/// uniform nodes `-1 + 2a/m` at `x`.
pub fn lagrange_1d(m: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    let node = |a: usize| -1.0 + 2.0 * a as f64 / m as f64;
    let mut values = vec![0.0; m + 1];
    let mut derivs = vec![0.0; m + 1];
    for a in 0..=m {
        let mut denom = 1.0;
        for b in 0..=m {
            if b != a {
                denom *= node(a) - node(b);
            }
        }
        let mut value = 1.0;
        for b in 0..=m {
            if b != a {
                value *= x - node(b);
            }
        }
        let mut deriv = 0.0;
        for skip in 0..=m {
            if skip == a {
                continue;
            }
            let mut prod = 1.0;
            for b in 0..=m {
                if b != a && b != skip {
                    prod *= x - node(b);
                }
            }
            deriv += prod;
        }
        values[a] = value / denom;
        derivs[a] = deriv / denom;
    }
    (values, derivs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_legendre() {
        let x: f64 = 0.37;
        let t = LegendreTable::new(4, 4, x);
        let p4 = (35.0 * x.powi(4) - 30.0 * x * x + 3.0) / 8.0;
        let dp4 = (140.0 * x.powi(3) - 60.0 * x) / 8.0;
        let ddp4 = (420.0 * x * x - 60.0) / 8.0;
        assert!((t.get(4, 0) - p4).abs() < 1e-15);
        assert!((t.get(4, 1) - dp4).abs() < 1e-14);
        assert!((t.get(4, 2) - ddp4).abs() < 1e-13);
        assert!((t.get(4, 4) - 105.0).abs() < 1e-12);
        assert!((t.get(2, 2) - 3.0).abs() < 1e-15);
        assert_eq!(t.get(1, 3), 0.0);
    }

    #[test]
    fn lagrange_delta_and_derivative() {
        for m in 1..=4 {
            for a in 0..=m {
                let xa = -1.0 + 2.0 * a as f64 / m as f64;
                let (v, _) = lagrange_1d(m, xa);
                for (b, vb) in v.iter().enumerate() {
                    assert!((vb - f64::from(u8::from(a == b))).abs() < 1e-14);
                }
            }
            let x = 0.123;
            let (v, d) = lagrange_1d(m, x);
            assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            let e = 1e-6;
            let (vp, _) = lagrange_1d(m, x + e);
            let (vm, _) = lagrange_1d(m, x - e);
            for a in 0..=m {
                assert!(((vp[a] - vm[a]) / (2.0 * e) - d[a]).abs() < 1e-8);
            }
        }
    }
}
