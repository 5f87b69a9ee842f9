//! Test oracles that avoid the library's series machinery: complex-valued
//! evaluation of a synthesized function and Taylor coefficients by a
//! discrete Cauchy integral.

#![allow(dead_code)]

use std::f64::consts::PI;

use gbound::special_fn::sn_cn_dn;
use gbound::{DomainKind, DomainSpec, GFraction};
use num_complex::Complex64;
use rand::Rng;

pub type C = Complex64;

/// `sn` and `cn` at `x + iy` from the real functions and the addition
/// formulas with the complementary modulus.
pub fn complex_sn_cn(z: C, k: f64, kp: f64) -> (C, C) {
    let (s, c, d) = sn_cn_dn(z.re, k, kp);
    let (s1, c1, d1) = sn_cn_dn(z.im, kp, k);
    let den = c1 * c1 + k * k * s * s * s1 * s1;
    let sn = C::new(s * d1, c * d * s1 * c1) / den;
    let cn = C::new(c * c1, -s * d * s1 * d1) / den;
    (sn, cn)
}

/// Canonical coordinate `w` and the branch of `sqrt(1 + w)` that is 1 at 0.
pub fn complex_canonical(z: C, spec: &DomainSpec) -> (C, C) {
    match *spec.kind() {
        DomainKind::Rectangle { ctx, .. } => {
            let x = z / spec.length_scale();
            let (sn, cn) = complex_sn_cn(x, ctx.k(), ctx.kp());
            let one = C::new(1.0, 0.0);
            (2.0 * sn / (one - sn), (one + sn) / cn)
        }
        DomainKind::Strip { b } => {
            let x = z * PI / b;
            (x.exp() - 1.0, (0.5 * x).exp())
        }
        DomainKind::SemiStrip { t, b } => {
            let a = PI * t / b;
            let x = z * PI / b;
            let h = (0.5 * a).sinh();
            let w = (0.5 * x + a).sinh() * (0.5 * x).sinh() / (h * h);
            let root = (0.5 * (x + a)).sinh() / h;
            (w, root)
        }
    }
}

/// `{g | w}` by backward recurrence.
pub fn complex_gfraction(g: &[f64], w: C) -> C {
    let mut t = C::new(1.0, 0.0);
    for i in (0..g.len()).rev() {
        let a = if i == 0 {
            g[0]
        } else {
            (1.0 - g[i - 1]) * g[i]
        };
        t = 1.0 + a * w / t;
    }
    1.0 / t
}

/// `f(z) = m^{-1}(mu0 sqrt(1 + w) {g | w})` at complex `z`.
pub fn oracle_f(frac: &GFraction, spec: &DomainSpec, z: C) -> C {
    let (w, root) = complex_canonical(z, spec);
    let v = frac.mu0() * root * complex_gfraction(frac.coeffs(), w);
    spec.bound() * (1.0 - 2.0 / (v + 1.0))
}

/// Distance from 0 to the boundary of the domain.
pub fn inradius(spec: &DomainSpec) -> f64 {
    match *spec.kind() {
        DomainKind::Rectangle { t, b, .. } => t.min(b),
        DomainKind::Strip { b } => b,
        DomainKind::SemiStrip { t, b } => t.min(b),
    }
}

/// `f(0), f'(0), ..., f^(n)(0)` from `N` samples on a circle.
pub fn cauchy_derivatives(f: impl Fn(C) -> C, radius: f64, n: usize, samples: usize) -> Vec<f64> {
    let vals: Vec<C> = (0..samples)
        .map(|j| f(C::from_polar(radius, 2.0 * PI * j as f64 / samples as f64)))
        .collect();
    let mut fact = 1.0;
    (0..=n)
        .map(|m| {
            if m > 0 {
                fact *= m as f64;
            }
            let sum: C = vals
                .iter()
                .enumerate()
                .map(|(j, v)| v * C::from_polar(1.0, -2.0 * PI * (m * j) as f64 / samples as f64))
                .sum();
            fact * sum.re / (samples as f64 * radius.powi(m as i32))
        })
        .collect()
}

/// Taylor data of a synthesized function, up to the `n`-th derivative.
pub fn oracle_taylor(frac: &GFraction, spec: &DomainSpec, n: usize) -> Vec<f64> {
    cauchy_derivatives(|z| oracle_f(frac, spec, z), 0.4 * inradius(spec), n, 128)
}

/// Real `f` along the real axis.
pub fn oracle_real(frac: &GFraction, spec: &DomainSpec, x: f64) -> f64 {
    oracle_f(frac, spec, C::new(x, 0.0)).re
}

pub fn random_spec<R: Rng>(rng: &mut R, kind: usize) -> DomainSpec {
    let m = rng.gen_range(0.5..2.0);
    let t = rng.gen_range(0.5..2.0);
    let b = rng.gen_range(0.5..2.0);
    match kind {
        0 => DomainSpec::rectangle(m, t, b).unwrap(),
        1 => DomainSpec::strip(m, b).unwrap(),
        _ => DomainSpec::semi_strip(m, t, b).unwrap(),
    }
}

/// Random fraction of length 1..=max_len with coefficients away from 0 and 1.
pub fn random_fraction<R: Rng>(rng: &mut R, max_len: usize) -> GFraction {
    let len = rng.gen_range(1..=max_len);
    let g = (0..len).map(|_| rng.gen_range(0.05..0.95)).collect();
    GFraction::new(rng.gen_range(0.3..3.0), g).unwrap()
}

/// First `x` on the side `dir` (+1 or -1) of 0 with `f(x) = f(0)`, scanning
/// `steps` equal steps up to `extent`, then bisecting. Tangential touches
/// are not detected.
pub fn first_return(f: impl Fn(f64) -> f64, dir: f64, extent: f64, steps: usize) -> Option<f64> {
    let f0 = f(0.0);
    let h = extent / steps as f64;
    let mut prev_x = dir * h;
    let sign0 = (f(prev_x) - f0).signum();
    for n in 2..=steps {
        let x = dir * h * n as f64;
        let v = f(x) - f0;
        if v.signum() != sign0 || v == 0.0 {
            let (mut lo, mut hi) = (prev_x, x);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if (f(mid) - f0).signum() == sign0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev_x = x;
    }
    None
}
