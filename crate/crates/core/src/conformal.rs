//! Maps between the physical domain of a bounded function and the canonical
//! coordinate `w` on the slit plane, plus rescaling of Taylor data.
//!
//! Each domain kind fixes a length scale `s` and a map `w(x)` of the
//! dimensionless variable `x = z / s`:
//!
//! | kind       | `s`     | `w(x)`                                           |
//! |------------|---------|--------------------------------------------------|
//! | rectangle  | `T / K` | `2 sn(x) / (1 - sn(x))`                          |
//! | strip      | `B / pi`| `e^x - 1`                                        |
//! | semi-strip | `B / pi`| `(cosh(x + a) - cosh a) / (cosh a - 1)`, `a = pi T / B` |
//!
//! All three send `0` to `0` and the real interval of the domain
//! increasingly onto `(-1, inf)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::Series;
use crate::special_fn::{self, make_elliptic_context, sn_cn_dn, EllipticContext};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind {
    /// Rectangle `(-T, T) x (-B, B)`.
    Rectangle {
        t: f64,
        b: f64,
        ctx: EllipticContext,
    },
    /// Strip `|Im z| < B`.
    Strip { b: f64 },
    /// Semi-infinite strip `Re z > -T`, `|Im z| < B`.
    SemiStrip { t: f64, b: f64 },
}

/// A domain together with the bound `|f| < M` on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    kind: DomainKind,
    m: f64,
}

fn positive(op: &'static str, name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            op,
            format!("{name} = {v} must be positive and finite"),
        ))
    }
}

impl DomainSpec {
    pub fn rectangle(m: f64, t: f64, b: f64) -> Result<Self> {
        positive("rectangle", "M", m)?;
        positive("rectangle", "T", t)?;
        positive("rectangle", "B", b)?;
        let ctx = make_elliptic_context(t, b)?;
        Ok(DomainSpec {
            kind: DomainKind::Rectangle { t, b, ctx },
            m,
        })
    }

    pub fn strip(m: f64, b: f64) -> Result<Self> {
        positive("strip", "M", m)?;
        positive("strip", "B", b)?;
        Ok(DomainSpec {
            kind: DomainKind::Strip { b },
            m,
        })
    }

    pub fn semi_strip(m: f64, t: f64, b: f64) -> Result<Self> {
        positive("semi_strip", "M", m)?;
        positive("semi_strip", "T", t)?;
        positive("semi_strip", "B", b)?;
        Ok(DomainSpec {
            kind: DomainKind::SemiStrip { t, b },
            m,
        })
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    /// The amplitude bound `M`.
    pub fn bound(&self) -> f64 {
        self.m
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            DomainKind::Rectangle { .. } => "rectangle",
            DomainKind::Strip { .. } => "strip",
            DomainKind::SemiStrip { .. } => "semi-strip",
        }
    }

    /// Open real interval on which the function is real-valued.
    pub fn interval(&self) -> (f64, f64) {
        match self.kind {
            DomainKind::Rectangle { t, .. } => (-t, t),
            DomainKind::Strip { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            DomainKind::SemiStrip { t, .. } => (-t, f64::INFINITY),
        }
    }

    pub fn contains(&self, z: f64) -> bool {
        let (lo, hi) = self.interval();
        z > lo && z < hi
    }

    /// Length `s` with `z = s x`, `x` the variable of the canonical map.
    pub fn length_scale(&self) -> f64 {
        match self.kind {
            DomainKind::Rectangle { t, ctx, .. } => t / ctx.quarter_period(),
            DomainKind::Strip { b } | DomainKind::SemiStrip { b, .. } => b / PI,
        }
    }

    /// Taylor series of `w(x)` at `x = 0` to the given order.
    pub fn coordinate_series(&self, order: usize) -> Series {
        match self.kind {
            DomainKind::Rectangle { ctx, .. } => {
                let sn = sn_series(ctx.k(), order);
                sn.scale(2.0).div(&Series::constant(1.0, order).sub(&sn))
            }
            DomainKind::Strip { .. } => {
                let mut c = vec![0.0; order + 1];
                let mut fact = 1.0;
                for (n, cn) in c.iter_mut().enumerate().skip(1) {
                    fact *= n as f64;
                    *cn = 1.0 / fact;
                }
                Series::new(c)
            }
            DomainKind::SemiStrip { t, b } => {
                let a = PI * t / b;
                let half_sinh = (0.5 * a).sinh();
                let odd = 1.0 / (0.5 * a).tanh();
                let even = 1.0 + 0.5 / (half_sinh * half_sinh);
                let mut c = vec![0.0; order + 1];
                let mut fact = 1.0;
                for (n, cn) in c.iter_mut().enumerate().skip(1) {
                    fact *= n as f64;
                    *cn = if n % 2 == 1 { odd } else { even } / fact;
                }
                Series::new(c)
            }
        }
    }
}

/// Taylor series of `sn(x, k)` from `sn'' = -(1+k^2) sn + 2 k^2 sn^3`.
pub(crate) fn sn_series(k: f64, order: usize) -> Series {
    let k2 = k * k;
    let mut c = vec![0.0; order + 1];
    if order >= 1 {
        c[1] = 1.0;
    }
    for n in 0..order.saturating_sub(1) {
        let s = Series::new(c[..=n].to_vec());
        let cube = s.mul(&s).mul(&s).coeff(n);
        c[n + 2] = (-(1.0 + k2) * c[n] + 2.0 * k2 * cube) / ((n + 2) as f64 * (n + 1) as f64);
    }
    Series::new(c)
}

/// Moebius map `m(w) = (M + w) / (M - w)` of the disk `|w| < M` onto the
/// right half-plane.
pub fn mobius_m(m: f64, w: f64) -> Result<f64> {
    if w == m {
        return Err(Error::domain("mobius_m", format!("pole at w = M = {m}")));
    }
    Ok((m + w) / (m - w))
}

/// Inverse of [`mobius_m`]: `M (v - 1) / (v + 1) = M (1 - 2 / (v + 1))`.
pub fn mobius_m_inv(m: f64, v: f64) -> Result<f64> {
    if v == -1.0 {
        return Err(Error::domain("mobius_m_inv", "pole at v = -1"));
    }
    Ok(m * (1.0 - 2.0 / (v + 1.0)))
}

/// Canonical coordinate `w(z)` of a point of the real interval.
pub fn canonical_coordinate(z: f64, spec: &DomainSpec) -> Result<f64> {
    canonical_with_root(z, spec).map(|(w, _)| w)
}

/// `(w(z), sqrt(1 + w(z)))`, the root formed without cancellation near
/// `w = -1`.
pub(crate) fn canonical_with_root(z: f64, spec: &DomainSpec) -> Result<(f64, f64)> {
    if !spec.contains(z) || z.is_nan() {
        let (lo, hi) = spec.interval();
        return Err(Error::domain(
            "canonical_coordinate",
            format!("z = {z} outside ({lo}, {hi})"),
        ));
    }
    match spec.kind {
        DomainKind::Rectangle { ctx, .. } => {
            let x = z / spec.length_scale();
            rectangle_coordinate(x, &ctx)
        }
        DomainKind::Strip { b } => {
            let x = PI * z / b;
            Ok((x.exp_m1(), (0.5 * x).exp()))
        }
        DomainKind::SemiStrip { t, b } => {
            let a = PI * t / b;
            let x = PI * z / b;
            let h = (0.5 * a).sinh();
            let w = ((a + 0.5 * x).sinh() * (0.5 * x).sinh() / (h * h)).max(-1.0);
            let root = (0.5 * (a + x)).sinh() / h;
            Ok((w, root))
        }
    }
}

fn rectangle_coordinate(x: f64, ctx: &EllipticContext) -> Result<(f64, f64)> {
    let kk = ctx.quarter_period();
    if !(x.abs() < kk) {
        return Err(Error::domain(
            "canonical_coordinate",
            format!("|x| = {} >= K", x.abs()),
        ));
    }
    let (sn, cn, _) = sn_cn_dn(x, ctx.k(), ctx.kp());
    let (w, root) = if sn >= 0.0 {
        (2.0 * sn * (1.0 + sn) / (cn * cn), (1.0 + sn) / cn)
    } else {
        (2.0 * sn / (1.0 - sn), cn / (1.0 - sn))
    };
    Ok((w, root))
}

/// Raw derivatives `f(0), f'(0), ..., f^(n)(0)` of the function under study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorData(Vec<f64>);

impl TaylorData {
    pub fn new(derivs: Vec<f64>) -> Result<Self> {
        if derivs.is_empty() {
            return Err(Error::InsufficientData(
                "Taylor data needs at least f(0)".into(),
            ));
        }
        if let Some(bad) = derivs.iter().find(|d| !d.is_finite()) {
            return Err(Error::domain(
                "TaylorData",
                format!("non-finite derivative {bad}"),
            ));
        }
        Ok(TaylorData(derivs))
    }

    pub fn derivatives(&self) -> &[f64] {
        &self.0
    }
}

/// Dimensionless derivatives `s^n f^(n)(0) / M` of the normalized function
/// `x -> f(s x) / M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledTaylor {
    coeffs: Vec<f64>,
}

impl ScaledTaylor {
    /// Wraps already scaled derivatives; `|phi_0| < 1` and at least two terms.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InsufficientData(
                "scaled Taylor data needs phi_0 and phi_1".into(),
            ));
        }
        if !(coeffs[0].abs() < 1.0) {
            return Err(Error::ClassViolation(format!(
                "|phi_0| = {} must be < 1",
                coeffs[0].abs()
            )));
        }
        Ok(ScaledTaylor { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Highest derivative order available.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Normalizes raw Taylor data to the canonical variable of `spec`.
pub fn scale_taylor(raw: &TaylorData, spec: &DomainSpec) -> Result<ScaledTaylor> {
    let derivs = raw.derivatives();
    let m = spec.bound();
    if !(derivs[0].abs() < m) {
        return Err(Error::ClassViolation(format!(
            "|f(0)| = {} must be < M = {m}",
            derivs[0].abs()
        )));
    }
    let s = spec.length_scale();
    let mut pow = 1.0;
    let coeffs = derivs
        .iter()
        .map(|d| {
            let v = pow * d / m;
            pow *= s;
            v
        })
        .collect();
    ScaledTaylor::new(coeffs)
}

/// Quarter period of a rectangle domain, for callers that need `K`.
pub fn rectangle_context(spec: &DomainSpec) -> Option<&EllipticContext> {
    match &spec.kind {
        DomainKind::Rectangle { ctx, .. } => Some(ctx),
        _ => None,
    }
}

/// Inverse of the canonical coordinate on the real interval.
pub fn canonical_inverse(w: f64, spec: &DomainSpec) -> Result<f64> {
    if !(w > -1.0) {
        return Err(Error::domain(
            "canonical_inverse",
            format!("w = {w} must exceed -1"),
        ));
    }
    match spec.kind {
        DomainKind::Rectangle { ctx, .. } => {
            Ok(spec.length_scale() * special_fn::eta_inv(w, &ctx)?)
        }
        DomainKind::Strip { b } => Ok(b / PI * w.ln_1p()),
        DomainKind::SemiStrip { t, b } => {
            let a = PI * t / b;
            // cosh(a + x) = cosh a + w (cosh a - 1)
            let h = (0.5 * a).sinh();
            let c = a.cosh() + w * 2.0 * h * h;
            Ok(b / PI * (c.acosh() - a))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius_m(2.0, 0.0).unwrap(), 1.0);
        assert!((mobius_m(1.0, 0.5).unwrap() - 3.0).abs() < 1e-15);
        assert!((mobius_m_inv(1.0, 3.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(mobius_m_inv(1.7, 1.0).unwrap(), 0.0);
        let v = mobius_m(2.0, -0.3).unwrap();
        assert!((mobius_m_inv(2.0, v).unwrap() + 0.3).abs() < 1e-15);
        assert!(mobius_m(1.0, 1.0).is_err());
        assert!(mobius_m_inv(1.0, -1.0).is_err());
    }

    #[test]
    fn mobius_positive_on_segment() {
        for i in 1..1000 {
            let w = -2.0 + 4.0 * i as f64 / 1000.0;
            assert!(mobius_m(2.0, w).unwrap() > 0.0);
        }
        for &v in &[1e-9, 0.3, 1.0, 17.0, 1e9] {
            assert!(mobius_m_inv(3.0, v).unwrap().abs() < 3.0);
        }
    }

    fn all_kinds() -> Vec<DomainSpec> {
        vec![
            DomainSpec::rectangle(1.0, 1.0, 1.0).unwrap(),
            DomainSpec::rectangle(2.0, 3.0, 0.5).unwrap(),
            DomainSpec::strip(1.0, 0.7).unwrap(),
            DomainSpec::semi_strip(1.0, 0.4, 1.3).unwrap(),
        ]
    }

    #[test]
    fn origin_maps_to_origin() {
        for spec in all_kinds() {
            assert_eq!(canonical_coordinate(0.0, &spec).unwrap(), 0.0, "{spec:?}");
        }
    }

    #[test]
    fn strip_example() {
        let spec = DomainSpec::strip(1.0, PI).unwrap();
        let w = canonical_coordinate(PI, &spec).unwrap();
        assert!((w - 22.140_692_632_779_27).abs() < 1e-12);
    }

    #[test]
    fn semi_strip_left_end() {
        let spec = DomainSpec::semi_strip(1.0, 0.5, 1.0).unwrap();
        let w = canonical_coordinate(-0.5 + 1e-9, &spec).unwrap();
        assert!((-1.0..-1.0 + 1e-12).contains(&w), "{w}");
        let (_, root) = canonical_with_root(-0.5 + 1e-9, &spec).unwrap();
        assert!(root > 0.0 && root < 1e-7);
    }

    #[test]
    fn rectangle_delegates_to_eta() {
        let spec = DomainSpec::rectangle(1.0, 2.0, 0.8).unwrap();
        let ctx = *rectangle_context(&spec).unwrap();
        let kk = ctx.quarter_period();
        for i in 1..100 {
            let z = -2.0 + 4.0 * i as f64 / 100.0;
            let expected = special_fn::eta(kk * z / 2.0, &ctx).unwrap();
            let got = canonical_coordinate(z, &spec).unwrap();
            assert!((got - expected).abs() <= 1e-13 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn monotone_onto_slit_line() {
        for spec in all_kinds() {
            let (lo, hi) = spec.interval();
            let (a, b) = (lo.max(-20.0), hi.min(20.0));
            let mut prev = f64::NEG_INFINITY;
            for i in 1..1000 {
                let z = a + (b - a) * i as f64 / 1000.0;
                let w = canonical_coordinate(z, &spec).unwrap();
                assert!(w >= prev && w >= -1.0, "{spec:?} at z = {z}");
                prev = w;
                // the inverse is ill-conditioned where 1 + w underflows
                if 1.0 + w > 1e-6 {
                    let back = canonical_inverse(w, &spec).unwrap();
                    assert!(
                        (back - z).abs() < 1e-8 * z.abs().max(1.0),
                        "{spec:?} at z = {z}: {back}"
                    );
                }
            }
        }
    }

    #[test]
    fn interval_enforced() {
        let rect = DomainSpec::rectangle(1.0, 1.0, 1.0).unwrap();
        assert!(canonical_coordinate(1.0, &rect).is_err());
        assert!(canonical_coordinate(-1.5, &rect).is_err());
        let semi = DomainSpec::semi_strip(1.0, 1.0, 1.0).unwrap();
        assert!(canonical_coordinate(-1.0, &semi).is_err());
        assert!(canonical_coordinate(f64::NAN, &semi).is_err());
    }

    #[test]
    fn coordinate_series_matches_map() {
        for spec in all_kinds() {
            let s = spec.length_scale();
            let series = spec.coordinate_series(12);
            for &x in &[-0.05, 0.02, 0.08] {
                let w = canonical_coordinate(s * x, &spec).unwrap();
                assert!((series.eval(x) - w).abs() < 1e-12, "{spec:?} at x = {x}");
            }
        }
    }

    #[test]
    fn sn_series_known_terms() {
        let k: f64 = 0.6;
        let k2 = k * k;
        let s = sn_series(k, 5);
        assert_eq!(s.coeff(1), 1.0);
        assert!((s.coeff(3) + (1.0 + k2) / 6.0).abs() < 1e-15);
        assert!((s.coeff(5) - (1.0 + 14.0 * k2 + k2 * k2) / 120.0).abs() < 1e-15);
    }

    #[test]
    fn taylor_scaling() {
        let strip = DomainSpec::strip(1.0, PI).unwrap();
        let raw = TaylorData::new(vec![0.0, 1.0]).unwrap();
        let sc = scale_taylor(&raw, &strip).unwrap();
        assert_eq!(sc.coeffs(), &[0.0, 1.0]);

        let rect = DomainSpec::rectangle(2.0, 1.0, 1.0).unwrap();
        let kk = rectangle_context(&rect).unwrap().quarter_period();
        let sc = scale_taylor(&TaylorData::new(vec![0.5, 0.3, -0.2]).unwrap(), &rect).unwrap();
        assert!((sc.coeffs()[0] - 0.25).abs() < 1e-16);
        assert!((sc.coeffs()[1] - 0.3 / (kk * 2.0)).abs() < 1e-16);
        assert!((sc.coeffs()[2] + 0.2 / (kk * kk * 2.0)).abs() < 1e-16);

        let err = scale_taylor(&TaylorData::new(vec![2.0, 0.0]).unwrap(), &rect).unwrap_err();
        assert!(matches!(err, Error::ClassViolation(_)));
        assert!(matches!(
            scale_taylor(&TaylorData::new(vec![0.0]).unwrap(), &rect),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn invalid_domains() {
        assert!(DomainSpec::rectangle(0.0, 1.0, 1.0).is_err());
        assert!(DomainSpec::strip(1.0, -1.0).is_err());
        assert!(DomainSpec::semi_strip(1.0, 0.0, 1.0).is_err());
    }
}
