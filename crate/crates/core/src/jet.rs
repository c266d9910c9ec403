//! Truncated univariate Taylor arithmetic (forward-mode AD of arbitrary order).
//!
//! A `Jet<N>` stores the first `N` Taylor coefficients of a function around
//! a point, `f(t0 + s) = c[0] + c[1] s + ... + c[N-1] s^(N-1)`. Arithmetic and
//! the elementary functions propagate coefficients with the standard
//! recurrences, so derivatives come out exact to rounding.
//!
//! Geometry code and manufactured problems are written once against the
//! [`Scalar`] trait and evaluated either on plain `f64` or on jets.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Minimal real-number interface shared by `f64` and [`Jet`].
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    fn value(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn powf(self, p: f64) -> Self;
    fn powi(self, n: i32) -> Self;
    fn recip(self) -> Self {
        Self::cst(1.0) / self
    }
}

impl Scalar for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn value(self) -> f64 {
        self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<const N: usize> {
    pub c: [f64; N],
}

impl<const N: usize> Jet<N> {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = v;
        Jet { c }
    }

    /// The independent variable `t0 + s`.
    pub fn variable(t0: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = t0;
        if N > 1 {
            c[1] = 1.0;
        }
        Jet { c }
    }

    /// `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        self.c[k] * fact
    }

    /// Jet of the derivative function (one order of accuracy is lost; the
    /// top coefficient becomes zero).
    pub fn differentiate(&self) -> Self {
        let mut c = [0.0; N];
        for k in 0..N.saturating_sub(1) {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Jet { c }
    }

    fn scale(mut self, s: f64) -> Self {
        for v in &mut self.c {
            *v *= s;
        }
        self
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.c[k] += rhs.c[k];
        }
        self
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.c[k] -= rhs.c[k];
        }
        self
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut c = [0.0; N];
        for k in 0..N {
            let mut acc = 0.0;
            for i in 0..=k {
                acc += self.c[i] * rhs.c[k - i];
            }
            c[k] = acc;
        }
        Jet { c }
    }
}

impl<const N: usize> Div for Jet<N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let mut q = [0.0; N];
        let b0 = rhs.c[0];
        for k in 0..N {
            let mut acc = self.c[k];
            for i in 1..=k {
                acc -= rhs.c[i] * q[k - i];
            }
            q[k] = acc / b0;
        }
        Jet { c: q }
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> Add<f64> for Jet<N> {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.c[0] += rhs;
        self
    }
}

impl<const N: usize> Sub<f64> for Jet<N> {
    type Output = Self;
    fn sub(mut self, rhs: f64) -> Self {
        self.c[0] -= rhs;
        self
    }
}

impl<const N: usize> Mul<f64> for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl<const N: usize> Div<f64> for Jet<N> {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self.scale(1.0 / rhs)
    }
}

impl<const N: usize> Scalar for Jet<N> {
    fn cst(v: f64) -> Self {
        Jet::constant(v)
    }

    fn value(self) -> f64 {
        self.c[0]
    }

    fn sin(self) -> Self {
        sin_cos(&self).0
    }

    fn cos(self) -> Self {
        sin_cos(&self).1
    }

    fn sqrt(self) -> Self {
        let mut r = [0.0; N];
        r[0] = self.c[0].sqrt();
        for k in 1..N {
            let mut acc = self.c[k];
            for i in 1..k {
                acc -= r[i] * r[k - i];
            }
            r[k] = acc / (2.0 * r[0]);
        }
        Jet { c: r }
    }

    fn exp(self) -> Self {
        let mut e = [0.0; N];
        e[0] = self.c[0].exp();
        for k in 1..N {
            let mut acc = 0.0;
            for i in 1..=k {
                acc += i as f64 * self.c[i] * e[k - i];
            }
            e[k] = acc / k as f64;
        }
        Jet { c: e }
    }

    fn ln(self) -> Self {
        let mut l = [0.0; N];
        let a0 = self.c[0];
        l[0] = a0.ln();
        for k in 1..N {
            let mut acc = 0.0;
            for i in 1..k {
                acc += i as f64 * l[i] * self.c[k - i];
            }
            l[k] = (self.c[k] - acc / k as f64) / a0;
        }
        Jet { c: l }
    }

    fn powf(self, p: f64) -> Self {
        // y = a^p satisfies a y' = p a' y.
        let mut y = [0.0; N];
        let a0 = self.c[0];
        y[0] = a0.powf(p);
        for k in 1..N {
            let mut acc = 0.0;
            for i in 1..=k {
                acc += ((p + 1.0) * i as f64 - k as f64) * self.c[i] * y[k - i];
            }
            y[k] = acc / (k as f64 * a0);
        }
        Jet { c: y }
    }

    fn powi(self, n: i32) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut result = Jet::constant(1.0);
        let mut base = self;
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            e >>= 1;
        }
        result
    }
}

fn sin_cos<const N: usize>(a: &Jet<N>) -> (Jet<N>, Jet<N>) {
    let mut s = [0.0; N];
    let mut c = [0.0; N];
    s[0] = a.c[0].sin();
    c[0] = a.c[0].cos();
    for k in 1..N {
        let mut acc_s = 0.0;
        let mut acc_c = 0.0;
        for i in 1..=k {
            let w = i as f64 * a.c[i];
            acc_s += w * c[k - i];
            acc_c += w * s[k - i];
        }
        s[k] = acc_s / k as f64;
        c[k] = -acc_c / k as f64;
    }
    (Jet { c: s }, Jet { c })
}
