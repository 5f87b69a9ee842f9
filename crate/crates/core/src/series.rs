//! Truncated real power series `a_0 + a_1 x + ... + a_n x^n`.
//!
//! Only what coefficient extraction needs: products, reciprocals,
//! composition, reversion and the binomial series of `(1+x)^{-1/2}`.
//! All operations keep the truncation order of their inputs.

#[derive(Debug, Clone, PartialEq)]
pub struct Series(Vec<f64>);

impl Series {
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least one coefficient"
        );
        Series(coeffs)
    }

    /// Series from derivative values `f(0), f'(0), ..., f^(n)(0)`.
    pub fn from_derivatives(derivs: &[f64]) -> Self {
        let mut fact = 1.0;
        let coeffs = derivs
            .iter()
            .enumerate()
            .map(|(n, d)| {
                if n > 0 {
                    fact *= n as f64;
                }
                d / fact
            })
            .collect();
        Series::new(coeffs)
    }

    pub fn zero(order: usize) -> Self {
        Series(vec![0.0; order + 1])
    }

    pub fn constant(c: f64, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.0[0] = c;
        s
    }

    /// The identity series `x`.
    pub fn var(order: usize) -> Self {
        let mut s = Series::zero(order);
        if order >= 1 {
            s.0[1] = 1.0;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.0.get(n).copied().unwrap_or(0.0)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series(self.0[..=order.min(self.order())].to_vec())
    }

    pub fn add(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        Series((0..=order).map(|i| self.0[i] + other.0[i]).collect())
    }

    pub fn sub(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        Series((0..=order).map(|i| self.0[i] - other.0[i]).collect())
    }

    pub fn scale(&self, c: f64) -> Series {
        Series(self.0.iter().map(|a| a * c).collect())
    }

    pub fn add_const(&self, c: f64) -> Series {
        let mut s = self.clone();
        s.0[0] += c;
        s
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        let mut out = vec![0.0; order + 1];
        for (i, a) in self.0.iter().enumerate().take(order + 1) {
            for (j, b) in other.0.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Series(out)
    }

    /// `1 / self`; requires a nonzero constant term.
    pub fn recip(&self) -> Series {
        let a0 = self.0[0];
        assert!(a0 != 0.0, "reciprocal of a series with zero constant term");
        let n = self.order();
        let mut out = vec![0.0; n + 1];
        out[0] = 1.0 / a0;
        for k in 1..=n {
            let s: f64 = (1..=k).map(|j| self.0[j] * out[k - j]).sum();
            out[k] = -s / a0;
        }
        Series(out)
    }

    pub fn div(&self, other: &Series) -> Series {
        self.mul(&other.recip())
    }

    /// `self(inner(x))`; `inner` must vanish at the origin.
    pub fn compose(&self, inner: &Series) -> Series {
        assert!(inner.0[0] == 0.0, "inner series must vanish at 0");
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Series::constant(self.0[order], order);
        for k in (0..order).rev() {
            acc = acc.mul(&inner).add_const(self.0[k]);
        }
        acc
    }

    /// Compositional inverse of a series with `a_0 = 0`, `a_1 != 0`.
    pub fn reversion(&self) -> Series {
        assert!(self.0[0] == 0.0, "reversion needs a_0 = 0");
        let a1 = self.coeff(1);
        assert!(a1 != 0.0, "reversion needs a_1 != 0");
        let n = self.order();
        // fixed point x = (y - (w(x) - a1 x)) / a1; each pass fixes one more order
        let mut nonlinear = self.clone();
        nonlinear.0[1] = 0.0;
        let mut x = Series::var(n).scale(1.0 / a1);
        for _ in 1..n {
            x = Series::var(n).sub(&nonlinear.compose(&x)).scale(1.0 / a1);
        }
        x
    }

    /// Series of `(1 + x)^{-1/2}` to the given order.
    pub fn inv_sqrt_one_plus(order: usize) -> Series {
        let mut out = vec![0.0; order + 1];
        out[0] = 1.0;
        for k in 1..=order {
            out[k] = out[k - 1] * (-0.5 - (k as f64 - 1.0)) / k as f64;
        }
        Series(out)
    }

    /// Drops the constant term and shifts down: `(self - a_0) / x`.
    /// The result has one order less.
    pub fn shift_down(&self) -> Series {
        assert!(self.order() >= 1, "cannot shift a constant series");
        Series(self.0[1..].to_vec())
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, a| acc * x + a)
    }
}
