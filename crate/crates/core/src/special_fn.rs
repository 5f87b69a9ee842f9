//! Theta functions at the origin, the elliptic data of a rectangle, Jacobi `sn`
//! on the real line and its inverse.
//!
//! Everything here is real-valued. The modulus `k` and the complementary
//! modulus `k' = sqrt(1 - k^2)` are carried side by side: for long thin
//! rectangles `k` rounds to 1 in double precision while `k'` is still a
//! perfectly representable number, and every formula that would otherwise
//! cancel (`1 - k^2 s^2`, the AGM start value) uses `k'` directly.
//!
//! Tolerances shared with the test-suite:
//!
//! * [`REL_TOL`] relative accuracy of `sn` and of the theta route to `K`.
//! * [`INV_TOL`] round-trip accuracy of [`eta_inv`] against [`eta`].
//! * [`THETA_TRUNC`] relative size of the first neglected theta term.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

pub const REL_TOL: f64 = 1e-12;
pub const INV_TOL: f64 = 1e-9;
pub const THETA_TRUNC: f64 = 1e-16;

const MAX_SERIES_TERMS: usize = 100_000;
const AGM_MAX_ITER: usize = 64;

/// Nome, modulus and real quarter-period of a rectangle `(-T,T) x (-B,B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticContext {
    q: f64,
    k: f64,
    kp: f64,
    quarter_period: f64,
}

impl EllipticContext {
    /// Builds the context from the nome. `q = 0` is the degenerate limit of
    /// an infinitely tall rectangle (`k = 0`, `K = pi/2`).
    pub fn from_nome(q: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::domain("from_nome", format!("nome {q} not in [0,1)")));
        }
        let t3 = theta3_zero(q);
        let t2 = theta2_zero(q);
        let k = (t2 / t3).powi(2);
        let kp = complementary_modulus(q, t3);
        Ok(EllipticContext {
            q,
            k,
            kp,
            quarter_period: FRAC_PI_2 * t3 * t3,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Elliptic modulus.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// Complementary modulus `sqrt(1 - k^2)`, computed without cancellation.
    pub fn kp(&self) -> f64 {
        self.kp
    }

    /// Real quarter-period `K`.
    pub fn quarter_period(&self) -> f64 {
        self.quarter_period
    }

    pub fn sn(&self, u: f64) -> f64 {
        sn_cn_dn(u, self.k, self.kp).0
    }
}

/// Elliptic context for the rectangle of half-width `t` and half-height `b`:
/// nome `exp(-pi b / t)`, `K = (pi/2) theta3^2`, `k = theta2^2 / theta3^2`.
pub fn make_elliptic_context(t: f64, b: f64) -> Result<EllipticContext> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(
            "make_elliptic_context",
            format!("T = {t} must be positive"),
        ));
    }
    if !(b > 0.0) {
        return Err(Error::domain(
            "make_elliptic_context",
            format!("B = {b} must be positive"),
        ));
    }
    EllipticContext::from_nome((-PI * b / t).exp())
}

/// `theta_3(0, q) = 1 + 2 sum_{n>=1} q^{n^2}`.
pub fn theta3_zero(q: f64) -> f64 {
    if q == 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    for n in 1..MAX_SERIES_TERMS {
        let term = q.powi((n * n) as i32);
        if term < THETA_TRUNC * (1.0 + 2.0 * sum) {
            break;
        }
        sum += term;
    }
    1.0 + 2.0 * sum
}

/// `theta_2(0, q) = 2 q^{1/4} sum_{n>=0} q^{n(n+1)}`.
pub fn theta2_zero(q: f64) -> f64 {
    if q == 0.0 {
        return 0.0;
    }
    let mut sum = 1.0;
    for n in 1..MAX_SERIES_TERMS {
        let term = q.powi((n * (n + 1)) as i32);
        if term < THETA_TRUNC * sum {
            break;
        }
        sum += term;
    }
    2.0 * q.powf(0.25) * sum
}

/// `theta_4(0, q) = 1 + 2 sum_{n>=1} (-1)^n q^{n^2}`; only used for small `q`
/// where the alternating sum does not cancel.
fn theta4_zero_direct(q: f64) -> f64 {
    let mut sum = 0.0;
    for n in 1..MAX_SERIES_TERMS {
        let term = q.powi((n * n) as i32);
        if term < THETA_TRUNC {
            break;
        }
        sum += if n % 2 == 0 { term } else { -term };
    }
    1.0 + 2.0 * sum
}

// k' = theta4^2 / theta3^2. For q above e^{-pi} the alternating series loses
// digits, so use the imaginary transformation k'(q) = k(q~) with
// ln q * ln q~ = pi^2.
fn complementary_modulus(q: f64, t3: f64) -> f64 {
    if q == 0.0 {
        return 1.0;
    }
    if q <= (-PI).exp() {
        let t4 = theta4_zero_direct(q);
        (t4 / t3).powi(2)
    } else {
        let dual = (PI * PI / q.ln()).exp();
        (theta2_zero(dual) / theta3_zero(dual)).powi(2)
    }
}

/// Arithmetic-geometric mean of two non-negative numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX_ITER {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= 4.0 * f64::EPSILON * an {
            return an;
        }
        a = an;
        b = bn;
    }
    a
}

/// Complete elliptic integral of the first kind `K(k)` from the complementary
/// modulus: `K = pi / (2 AGM(1, k'))`.
pub fn complete_elliptic_k_from_complement(kp: f64) -> f64 {
    if kp <= 0.0 {
        return f64::INFINITY;
    }
    PI / (2.0 * agm(1.0, kp))
}

/// Complete elliptic integral of the first kind `K(k)`, `0 <= k < 1`.
pub fn complete_elliptic_k(k: f64) -> f64 {
    complete_elliptic_k_from_complement(((1.0 - k) * (1.0 + k)).sqrt())
}

/// Classical nome `exp(-pi K'/K)` of the modulus pair `(k, k')`.
pub fn nome_of_modulus(k: f64, kp: f64) -> f64 {
    let kk = complete_elliptic_k_from_complement(kp);
    let kk_prime = complete_elliptic_k_from_complement(k);
    (-PI * kk_prime / kk).exp()
}

/// Jacobi `sn`, `cn`, `dn` on the real line. `kp` must be the complementary
/// modulus of `k`.
///
/// For `k <= k'` this is the AGM (descending Landen) method. Closer to
/// `k = 1` the Landen amplitude loses relative accuracy in `cn`, so the
/// functions are summed instead from the hyperbolic theta series in the
/// complementary nome, which is at most `e^{-pi}` there.
pub fn sn_cn_dn(u: f64, k: f64, kp: f64) -> (f64, f64, f64) {
    if k == 0.0 {
        return (u.sin(), u.cos(), 1.0);
    }
    if kp == 0.0 {
        let sech = 1.0 / u.cosh();
        return (u.tanh(), sech, sech);
    }
    if kp < k {
        return sn_cn_dn_dual(u, k, kp);
    }
    let mut a = [0.0f64; AGM_MAX_ITER + 1];
    let mut c = [0.0f64; AGM_MAX_ITER + 1];
    a[0] = 1.0;
    c[0] = k;
    let mut b = kp;
    let mut n = 0;
    while n < AGM_MAX_ITER && c[n].abs() > f64::EPSILON * a[n] {
        let an = 0.5 * (a[n] + b);
        let bn = (a[n] * b).sqrt();
        c[n + 1] = c[n] * c[n] / (4.0 * an);
        a[n + 1] = an;
        b = bn;
        n += 1;
    }
    let mut phi = 2f64.powi(n as i32) * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] * phi.sin() / a[j]).asin());
    }
    let (sn, cn) = phi.sin_cos();
    let dn = (kp * kp + k * k * cn * cn).sqrt();
    (sn, cn, dn)
}

// With y = pi u / (2 K') and dual nome p = exp(-pi K / K'):
//   sn = theta3(p)/theta4(p) * N(y)/S(y)
//   cn = S(0)/theta4(p) * T(y)/S(y)
// where S = sum p^{n(n+1)} cosh((2n+1)y), N the alternating sinh analogue and
// T = theta4(iy, p). All three are divided by cosh(y) to keep them bounded.
fn sn_cn_dn_dual(u: f64, k: f64, kp: f64) -> (f64, f64, f64) {
    let (agm_k, agm_kp) = (agm(1.0, k), agm(1.0, kp));
    let kk = PI / (2.0 * agm_kp);
    // reduce to [-K, K]; sn(2K - r) = sn(r), cn(2K - r) = -cn(r)
    let mut r = u.rem_euclid(4.0 * kk);
    if r >= 2.0 * kk {
        r -= 4.0 * kk;
    }
    let mut cn_sign = 1.0;
    if r > kk {
        r = 2.0 * kk - r;
        cn_sign = -1.0;
    } else if r < -kk {
        r = -2.0 * kk - r;
        cn_sign = -1.0;
    }
    let ln_p = -PI * agm_k / agm_kp;
    let y = (r * agm_k).abs();
    let e2 = (-2.0 * y).exp();
    let denom = 1.0 + e2;

    let mut s_sum = 1.0;
    let mut n_sum = -(-2.0 * y).exp_m1() / denom;
    let mut s0 = 1.0;
    let mut t_sum = 2.0 * (-y).exp() / denom;
    let (mut theta3, mut theta4) = (1.0, 1.0);
    for n in 1..MAX_SERIES_TERMS {
        let nf = n as f64;
        let lead = (nf * (nf + 1.0) * ln_p + 2.0 * nf * y).exp();
        let odd = (-2.0 * (2.0 * nf + 1.0) * y).exp();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        s_sum += lead * (1.0 + odd) / denom;
        n_sum += sign * lead * (1.0 - odd) / denom;
        let lead4 = (nf * nf * ln_p + (2.0 * nf - 1.0) * y).exp();
        t_sum += sign * 2.0 * lead4 * (1.0 + (-4.0 * nf * y).exp()) / denom;
        let pn = (nf * nf * ln_p).exp();
        s0 += (nf * (nf + 1.0) * ln_p).exp();
        theta3 += 2.0 * pn;
        theta4 += sign * 2.0 * pn;
        if lead < THETA_TRUNC * s_sum && lead4 < THETA_TRUNC && pn < THETA_TRUNC {
            break;
        }
    }
    let sn = (theta3 / theta4 * n_sum / s_sum).min(1.0).copysign(r);
    let cn = cn_sign * (s0 / theta4 * t_sum / s_sum).clamp(0.0, 1.0);
    let dn = (kp * kp + k * k * cn * cn).sqrt();
    (sn, cn, dn)
}

/// Jacobi elliptic function `sn(u, k)` for real `u`.
pub fn jacobi_sn(u: f64, k: f64) -> Result<f64> {
    check_modulus("jacobi_sn", k)?;
    Ok(sn_cn_dn(u, k, ((1.0 - k) * (1.0 + k)).sqrt()).0)
}

/// Jacobi `cn(u, k)` for real `u`.
pub fn jacobi_cn(u: f64, k: f64) -> Result<f64> {
    check_modulus("jacobi_cn", k)?;
    Ok(sn_cn_dn(u, k, ((1.0 - k) * (1.0 + k)).sqrt()).1)
}

fn check_modulus(op: &'static str, k: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::domain(op, format!("modulus {k} not in [0,1]")));
    }
    Ok(())
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    const ERRTOL: f64 = 1e-3;
    let (mut x, mut y, mut z) = (x, y, z);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let mean = (x + y + z) / 3.0;
        let dx = (mean - x) / mean;
        let dy = (mean - y) / mean;
        let dz = (mean - z) / mean;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / mean.sqrt();
        }
    }
}

// F(arcsin s | k) with 1 - s^2 supplied separately so callers can form it
// without cancellation near |s| = 1.
fn incomplete_f_parts(s: f64, one_minus_s2: f64, k: f64, kp: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let y = kp * kp + k * k * one_minus_s2;
    s * carlson_rf(one_minus_s2, y, 1.0)
}

/// Inverse of `sn` on `(-1, 1)`: `int_0^s dt / sqrt((1-t^2)(1-k^2 t^2))`.
pub fn incomplete_f(s: f64, k: f64) -> Result<f64> {
    if !(s.abs() < 1.0) {
        return Err(Error::domain(
            "incomplete_f",
            format!("|s| = {} must be < 1", s.abs()),
        ));
    }
    if !(0.0..1.0).contains(&k) {
        return Err(Error::domain(
            "incomplete_f",
            format!("modulus {k} not in [0,1)"),
        ));
    }
    let kp = ((1.0 - k) * (1.0 + k)).sqrt();
    Ok(incomplete_f_parts(s, (1.0 - s) * (1.0 + s), k, kp))
}

/// `sn^{-1}(s)` for the modulus of `ctx`, accurate even when `k` rounds to 1.
pub fn sn_inverse(s: f64, ctx: &EllipticContext) -> Result<f64> {
    if !(s.abs() < 1.0) {
        return Err(Error::domain(
            "sn_inverse",
            format!("|s| = {} must be < 1", s.abs()),
        ));
    }
    Ok(incomplete_f_parts(
        s,
        (1.0 - s) * (1.0 + s),
        ctx.k(),
        ctx.kp(),
    ))
}

/// `eta(z) = 2 sn(z) / (1 - sn(z))`, a bijection of `(-K, K)` onto `(-1, inf)`.
pub fn eta(z: f64, ctx: &EllipticContext) -> Result<f64> {
    let kk = ctx.quarter_period();
    if !(z.abs() < kk) {
        return Err(Error::domain(
            "eta",
            format!("|z| = {} must be < K = {kk}", z.abs()),
        ));
    }
    let (sn, cn, _) = sn_cn_dn(z, ctx.k(), ctx.kp());
    if sn > 0.0 {
        // 1 - sn = cn^2 / (1 + sn) keeps relative accuracy near z = K
        Ok(2.0 * sn * (1.0 + sn) / (cn * cn))
    } else {
        Ok(2.0 * sn / (1.0 - sn))
    }
}

/// Inverse of [`eta`]: `F(y / (2 + y) | k)`, valid for every `y > -1`.
pub fn eta_inv(y: f64, ctx: &EllipticContext) -> Result<f64> {
    if !(y > -1.0) {
        return Err(Error::domain("eta_inv", format!("y = {y} must exceed -1")));
    }
    if y.is_infinite() {
        return Ok(ctx.quarter_period());
    }
    let s = y / (2.0 + y);
    let one_minus_s2 = 4.0 * (1.0 + y) / ((2.0 + y) * (2.0 + y));
    Ok(incomplete_f_parts(s, one_minus_s2, ctx.k(), ctx.kp()))
}
