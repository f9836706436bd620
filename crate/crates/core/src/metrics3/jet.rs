//! Second-order forward-mode differentiation in three variables.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value, gradient and Hessian of a scalar function of `(x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub g: [f64; 3],
    pub h: [[f64; 3]; 3],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        Self { v, g: [0.0; 3], h: [[0.0; 3]; 3] }
    }

    /// The coordinate function `x_i` at `value`.
    pub fn variable(i: usize, value: f64) -> Self {
        let mut g = [0.0; 3];
        g[i] = 1.0;
        Self { v: value, g, h: [[0.0; 3]; 3] }
    }

    pub fn seed(p: [f64; 3]) -> [Jet; 3] {
        [Jet::variable(0, p[0]), Jet::variable(1, p[1]), Jet::variable(2, p[2])]
    }

    /// Applies a scalar function with value `f0`, derivative `f1` and second
    /// derivative `f2` at `self.v`.
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut out = Self { v: f0, g: [0.0; 3], h: [[0.0; 3]; 3] };
        for i in 0..3 {
            out.g[i] = f1 * self.g[i];
            for j in 0..3 {
                out.h[i][j] = f1 * self.h[i][j] + f2 * self.g[i] * self.g[j];
            }
        }
        out
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        self.chain(self.v.ln(), 1.0 / self.v, -1.0 / (self.v * self.v))
    }

    pub fn powf(self, p: f64) -> Self {
        let x = self.v;
        self.chain(x.powf(p), p * x.powf(p - 1.0), p * (p - 1.0) * x.powf(p - 2.0))
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn recip(self) -> Self {
        let x = self.v;
        self.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn sinh(self) -> Self {
        self.chain(self.v.sinh(), self.v.cosh(), self.v.sinh())
    }

    pub fn scale(self, s: f64) -> Self {
        self.chain(s * self.v, s, 0.0)
    }

    /// `∂_k` of the jet, correct to first order (its Hessian is dropped).
    pub fn partial(self, k: usize) -> Self {
        Self { v: self.g[k], g: self.h[k], h: [[0.0; 3]; 3] }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut out = self;
        out.v += o.v;
        for i in 0..3 {
            out.g[i] += o.g[i];
            for j in 0..3 {
                out.h[i][j] += o.h[i][j];
            }
        }
        out
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut out = Jet::constant(self.v * o.v);
        for i in 0..3 {
            out.g[i] = self.v * o.g[i] + o.v * self.g[i];
            for j in 0..3 {
                out.h[i][j] = self.v * o.h[i][j]
                    + o.v * self.h[i][j]
                    + self.g[i] * o.g[j]
                    + self.g[j] * o.g[i];
            }
        }
        out
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        let mut out = self;
        out.v += c;
        out
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self.scale(c)
    }
}
