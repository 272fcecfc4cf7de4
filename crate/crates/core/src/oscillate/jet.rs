//! Truncated Taylor series ("jets") for exact-to-rounding derivatives of
//! closed-form expressions.
//!
//! A jet stores `f(x0), f'(x0)/1!, …, f^(K)(x0)/K!`. Arithmetic on jets is
//! arithmetic on truncated power series, so composing them yields all
//! derivatives of the composite at once.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Highest derivative order carried by a jet.
pub const K_MAX: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    c: [f64; K_MAX + 1],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; K_MAX + 1];
        c[0] = v;
        Jet { c }
    }

    /// Jet of an affine map `x ↦ value + slope·(x - x0)` at `x0`.
    pub fn affine(value: f64, slope: f64) -> Self {
        let mut c = [0.0; K_MAX + 1];
        c[0] = value;
        c[1] = slope;
        Jet { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// The `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.c[k] * fact
    }

    pub fn recip(self) -> Self {
        Jet::constant(1.0) / self
    }

    pub fn exp(self) -> Self {
        // g = exp(f)  =>  k g_k = Σ_{j=1..k} j f_j g_{k-j}
        let mut g = [0.0; K_MAX + 1];
        g[0] = self.c[0].exp();
        for k in 1..=K_MAX {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.c[j] * g[k - j];
            }
            g[k] = acc / k as f64;
        }
        Jet { c: g }
    }

    pub fn scale(self, s: f64) -> Self {
        let mut c = self.c;
        c.iter_mut().for_each(|v| *v *= s);
        Jet { c }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut c = self.c;
        c.iter_mut().zip(o.c).for_each(|(a, b)| *a += b);
        Jet { c }
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
        let mut c = [0.0; K_MAX + 1];
        for i in 0..=K_MAX {
            for j in 0..=K_MAX - i {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        // q = self / o  =>  q_k = (self_k - Σ_{j=1..k} o_j q_{k-j}) / o_0
        let mut q = [0.0; K_MAX + 1];
        for k in 0..=K_MAX {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc -= o.c[j] * q[k - j];
            }
            q[k] = acc / o.c[0];
        }
        Jet { c: q }
    }
}
