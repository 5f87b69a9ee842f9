//! First-return certificates.
//!
//! For `f` with `g_1 != 1/2` (i.e. `f'(0) != 0`) every real `tau != 0` with
//! `f(tau) = f(0)` satisfies `|tau| >= tilde_tau`. When in addition
//! `(g_1, g_2)` lies in one of the regions E, F, G, H a return is guaranteed
//! inside `(0, zeta)` or `(zeta, 0)`.
//!
//! Both bounds come from solving `sqrt(1 + w) B(w) = 1` for the low-order
//! a-priori bounds `B` of the g-fraction. With `w = t^2 - 1` the order-2
//! equations become the quadratics
//!
//! ```text
//! P1(t) = g1 (1-g2) t^2 - (1-g1) t + g1 g2
//! P2(t) = g2 (1-g1) t^2 - g1 t + (1-g1)(1-g2)
//! ```

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::conformal::{DomainKind, DomainSpec};
use crate::error::{Error, Result};
use crate::gfraction::{GFraction, MEMBERSHIP_TOL};
use crate::special_fn::{eta_inv, sn_inverse};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    E,
    F,
    G,
    H,
}

impl Region {
    /// Sign of `zeta` in this region.
    pub fn sign(self) -> f64 {
        match self {
            Region::E | Region::H => 1.0,
            Region::F | Region::G => -1.0,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Discriminants and real roots of `P1` (`t1*`) and `P2` (`t2*`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticRoots {
    pub d1: f64,
    pub d2: f64,
    pub t11: Option<f64>,
    pub t12: Option<f64>,
    pub t21: Option<f64>,
    pub t22: Option<f64>,
}

pub fn quadratic_roots(g1: f64, g2: f64) -> QuadraticRoots {
    let d1 = (1.0 - g1).powi(2) - 4.0 * g1 * g1 * g2 * (1.0 - g2);
    let d2 = g1 * g1 - 4.0 * (1.0 - g1).powi(2) * (1.0 - g2) * g2;
    let (t11, t12) = roots(g1 * (1.0 - g2), -(1.0 - g1), g1 * g2, d1);
    let (t21, t22) = roots(g2 * (1.0 - g1), -g1, (1.0 - g1) * (1.0 - g2), d2);
    QuadraticRoots {
        d1,
        d2,
        t11,
        t12,
        t21,
        t22,
    }
}

// Ordered roots of a t^2 + b t + c with b < 0 and a, c > 0; the smaller root
// is taken from Vieta to avoid cancellation.
fn roots(a: f64, b: f64, c: f64, disc: f64) -> (Option<f64>, Option<f64>) {
    if !(disc >= 0.0) || a == 0.0 {
        return (None, None);
    }
    let large = (-b + disc.sqrt()) / (2.0 * a);
    let small = if large != 0.0 { c / (a * large) } else { 0.0 };
    (Some(small), Some(large))
}

/// Membership of `(g1, g2)` in the regions E, F, G, H.
pub fn classify_region(g1: f64, g2: f64) -> Option<Region> {
    let region = threshold_region(g1, g2);
    debug_assert_eq!(
        region,
        sign_test_region(g1, g2),
        "region mismatch between g2-threshold and L-sign classification at ({g1}, {g2})"
    );
    region
}

fn threshold_region(g1: f64, g2: f64) -> Option<Region> {
    if !(g1 > 0.0 && g1 < 1.0 && g2 > 0.0 && g2 < 1.0) || g2 == 0.5 {
        return None;
    }
    let r = quadratic_roots(g1, g2);
    let low_g2 = g2 < 0.5;
    if g1 < 0.5 && r.d2 >= 0.0 {
        Some(if low_g2 { Region::E } else { Region::F })
    } else if g1 > 0.5 && r.d1 >= 0.0 {
        Some(if low_g2 { Region::G } else { Region::H })
    } else {
        None
    }
}

/// Region from the sign tests `L2 = g1 - 2(1-g1) g2` (for `g1 < 1/2`) and
/// `L1 = 1 - g1 - 2 g1 (1-g2)` (for `g1 > 1/2`).
pub fn sign_test_region(g1: f64, g2: f64) -> Option<Region> {
    if !(g1 > 0.0 && g1 < 1.0 && g2 > 0.0 && g2 < 1.0) || g2 == 0.5 {
        return None;
    }
    let r = quadratic_roots(g1, g2);
    if g1 < 0.5 && r.d2 >= 0.0 {
        let l2 = g1 - 2.0 * (1.0 - g1) * g2;
        Some(if l2 > 0.0 { Region::E } else { Region::F })
    } else if g1 > 0.5 && r.d1 >= 0.0 {
        let l1 = 1.0 - g1 - 2.0 * g1 * (1.0 - g2);
        Some(if l1 > 0.0 { Region::H } else { Region::G })
    } else {
        None
    }
}

/// Why no certificate could be issued.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Degeneracy {
    /// `g_1 = 1/2`, equivalently `f'(0) = 0`.
    FlatStart,
    /// `g_index` missing or in `{0, 1}`.
    NotInClass { index: usize },
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::FlatStart => write!(f, "g_1 = 1/2 (f'(0) = 0)"),
            Degeneracy::NotInClass { index } => write!(f, "g_{index} missing or in {{0, 1}}"),
        }
    }
}

fn length_scale_for_returns(spec: &DomainSpec) -> Result<f64> {
    match spec.kind() {
        DomainKind::Rectangle { .. } | DomainKind::Strip { .. } => Ok(spec.length_scale()),
        DomainKind::SemiStrip { .. } => Err(Error::Unsupported(
            "return-time bounds are only available for rectangles and strips".into(),
        )),
    }
}

fn usable(g: f64) -> bool {
    g > MEMBERSHIP_TOL && g < 1.0 - MEMBERSHIP_TOL
}

fn check_first(frac: &GFraction) -> std::result::Result<f64, Degeneracy> {
    let g1 = *frac
        .coeffs()
        .first()
        .ok_or(Degeneracy::NotInClass { index: 1 })?;
    if !usable(g1) {
        return Err(Degeneracy::NotInClass { index: 1 });
    }
    if (g1 - 0.5).abs() <= MEMBERSHIP_TOL {
        return Err(Degeneracy::FlatStart);
    }
    Ok(g1)
}

/// Lower bound `tilde_tau` on the distance from 0 of any return to `f(0)`.
pub fn min_return(frac: &GFraction, spec: &DomainSpec) -> Result<f64> {
    let scale = length_scale_for_returns(spec)?;
    let g1 = check_first(frac).map_err(|d| Error::Degenerate(d.to_string()))?;
    match spec.kind() {
        DomainKind::Rectangle { ctx, .. } => {
            let s = (1.0 - 2.0 * g1) / (g1 * g1 + (1.0 - g1) * (1.0 - g1));
            Ok(scale * sn_inverse(s, ctx)?.abs())
        }
        _ => Ok(2.0 * scale * ((1.0 - g1) / g1).ln().abs()),
    }
}

/// Bracket endpoint `zeta` and region, or `None` outside E, F, G, H.
pub fn max_return(frac: &GFraction, spec: &DomainSpec) -> Result<Option<(f64, Region)>> {
    let scale = length_scale_for_returns(spec)?;
    let g1 = check_first(frac).map_err(|d| Error::Degenerate(d.to_string()))?;
    let g2 = match frac.coeffs().get(1) {
        Some(&g2) if usable(g2) => g2,
        _ => {
            return Err(Error::Degenerate(
                Degeneracy::NotInClass { index: 2 }.to_string(),
            ))
        }
    };
    let Some(region) = classify_region(g1, g2) else {
        return Ok(None);
    };
    let r = quadratic_roots(g1, g2);
    let t = match region {
        Region::E => r.t21,
        Region::F => r.t22,
        Region::G => r.t12,
        Region::H => r.t11,
    }
    .expect("region implies a real root");
    let zeta = match spec.kind() {
        DomainKind::Rectangle { ctx, .. } => scale * eta_inv((t - 1.0) * (t + 1.0), ctx)?,
        _ => 2.0 * scale * t.ln(),
    };
    Ok(Some((zeta, region)))
}

/// Combined first-return certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnCertificate {
    pub tilde_tau: f64,
    pub zeta: Option<f64>,
    pub region: Option<Region>,
    pub degenerate: bool,
    pub degeneracy: Option<Degeneracy>,
}

impl ReturnCertificate {
    fn degenerate(reason: Degeneracy) -> Self {
        ReturnCertificate {
            tilde_tau: 0.0,
            zeta: None,
            region: None,
            degenerate: true,
            degeneracy: Some(reason),
        }
    }
}

/// Runs [`min_return`] and, when `g_2` is usable, [`max_return`].
pub fn certify(frac: &GFraction, spec: &DomainSpec) -> Result<ReturnCertificate> {
    length_scale_for_returns(spec)?;
    if let Err(reason) = check_first(frac) {
        return Ok(ReturnCertificate::degenerate(reason));
    }
    let tilde_tau = min_return(frac, spec)?;
    let (zeta, region) = match frac.coeffs().get(1) {
        Some(&g2) if usable(g2) => match max_return(frac, spec)? {
            Some((z, r)) => (Some(z), Some(r)),
            None => (None, None),
        },
        _ => (None, None),
    };
    Ok(ReturnCertificate {
        tilde_tau,
        zeta,
        region,
        degenerate: false,
        degeneracy: None,
    })
}

/// `tilde_tau` for a strip in closed form, `(2B/pi) |ln((1-g1)/g1)|`.
pub fn strip_min_return(g1: f64, b: f64) -> f64 {
    2.0 * b / PI * ((1.0 - g1) / g1).ln().abs()
}
