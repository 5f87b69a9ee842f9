//! Wall g-fractions
//!
//! ```text
//! {g_1, g_2, ... | z} = 1 / (1 + g_1 z / (1 + (1-g_1) g_2 z / (1 + (1-g_2) g_3 z / ...)))
//! ```
//!
//! with `g_i` in `[0, 1]`. A bounded real-analytic function `f` is written as
//! `f = m^{-1}(mu_0 sqrt(1 + w) {g | w})` in the canonical coordinate `w` of
//! its domain (see [`crate::conformal`]).

use serde::Serialize;

use crate::conformal::{self, canonical_with_root, DomainKind, DomainSpec, ScaledTaylor};
use crate::error::{Error, Result};
use crate::series::Series;

/// Tolerance for `g_i` in `[0, 1]` and for snapping to the endpoints.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Scale `mu_0 > 0` and a finite prefix `g_1..g_n` of a g-fraction. A finite
/// prefix stands for the fraction with all later coefficients zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GFraction {
    mu0: f64,
    g: Vec<f64>,
}

impl GFraction {
    pub fn new(mu0: f64, g: Vec<f64>) -> Result<Self> {
        if !(mu0 > 0.0 && mu0.is_finite()) {
            return Err(Error::domain(
                "GFraction",
                format!("mu0 = {mu0} must be positive"),
            ));
        }
        if let Some((i, gi)) = g
            .iter()
            .enumerate()
            .find(|(_, gi)| !(0.0..=1.0).contains(*gi))
        {
            return Err(Error::ClassViolation(format!(
                "g_{} = {gi} not in [0,1]",
                i + 1
            )));
        }
        Ok(GFraction { mu0, g })
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.g
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    /// `g_1..g_k` all known and strictly inside `(0, 1)`.
    pub fn in_class(&self, k: usize) -> bool {
        self.g.len() >= k
            && self.g[..k]
                .iter()
                .all(|&gi| gi > MEMBERSHIP_TOL && gi < 1.0 - MEMBERSHIP_TOL)
    }

    /// Value of the (zero-tailed) fraction at `z > -1`.
    pub fn value(&self, z: f64) -> Result<f64> {
        eval_truncated(&self.g, z)
    }
}

fn check_z(op: &'static str, z: f64) -> Result<()> {
    if z > -1.0 {
        Ok(())
    } else {
        Err(Error::domain(op, format!("z = {z} must exceed -1")))
    }
}

/// `{g_1..g_n | z}` by backward recurrence.
pub fn eval_truncated(g: &[f64], z: f64) -> Result<f64> {
    check_z("eval_truncated", z)?;
    if z.is_infinite() {
        return Err(Error::domain("eval_truncated", "z must be finite"));
    }
    Ok(1.0 / tail_denominator(g, z))
}

// 1 + g_1 z / (1 + (1-g_1) g_2 z / (...)), innermost first.
fn tail_denominator(g: &[f64], z: f64) -> f64 {
    let mut t = 1.0;
    for i in (0..g.len()).rev() {
        let num = if i == 0 {
            g[0]
        } else {
            (1.0 - g[i - 1]) * g[i]
        } * z;
        t = 1.0 + num / t;
    }
    t
}

/// A-priori bounds `lower <= {g_1, g_2, ...| z} <= upper` valid for every
/// g-fraction starting with the prefix `g` (`k = g.len()`).
///
/// Odd `k`: `[{g|z}, {g,1|z}]`. Even `k`: the same pair swapped for `z >= 0`.
pub fn apriori_bounds(g: &[f64], z: f64) -> Result<(f64, f64)> {
    check_z("apriori_bounds", z)?;
    if g.is_empty() {
        return Err(Error::InsufficientData(
            "a-priori bounds need k >= 1".into(),
        ));
    }
    let a = eval_truncated(g, z)?;
    let mut ext = g.to_vec();
    ext.push(1.0);
    let b = eval_truncated(&ext, z)?;
    let (lo, hi) = if g.len() % 2 == 1 || z < 0.0 {
        (a, b)
    } else {
        (b, a)
    };
    Ok((lo.min(hi), hi.max(lo)))
}

/// The explicit rational bounds for `k = 1, 2, 3`.
pub fn closed_form_bounds(k: usize, g: &[f64], z: f64) -> Result<(f64, f64)> {
    check_z("closed_form_bounds", z)?;
    if !(1..=3).contains(&k) {
        return Err(Error::domain(
            "closed_form_bounds",
            format!("k = {k} not in 1..=3"),
        ));
    }
    if g.len() < k {
        return Err(Error::InsufficientData(format!(
            "need {k} coefficients, got {}",
            g.len()
        )));
    }
    let g1 = g[0];
    match k {
        1 => {
            let a1 = 1.0 / (1.0 + g1 * z);
            let b1 = (1.0 + (1.0 - g1) * z) / (1.0 + z);
            Ok((a1, b1))
        }
        2 => {
            let g2 = g[1];
            let a2p = ((1.0 - g1 * g2) * z + 1.0) / ((1.0 + z) * (g1 * (1.0 - g2) * z + 1.0));
            let b2p = (g2 * (1.0 - g1) * z + 1.0) / ((g1 - g1 * g2 + g2) * z + 1.0);
            if z >= 0.0 {
                Ok((a2p, b2p))
            } else {
                Ok((b2p, a2p))
            }
        }
        _ => {
            let (g2, g3) = (g[1], g[2]);
            let a3 = ((g3 + g2 - g3 * g2 - g2 * g1) * z + 1.0)
                / (g1 * g3 * (1.0 - g2) * z * z + (g3 + g2 + g1 - g3 * g2 - g1 * g2) * z + 1.0);
            let b3 =
                (g2 * (1.0 - g3) * (1.0 - g1) * z * z + (1.0 + g2 - g3 * g2 - g1 * g2) * z + 1.0)
                    / ((1.0 + z) * ((g1 + g2 - g3 * g2 - g1 * g2) * z + 1.0));
            Ok((a3, b3))
        }
    }
}

/// Why extraction stopped before the requested order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtractionStop {
    /// `g_index` is 0 or 1: the fraction is rational and later
    /// coefficients are not determined by the function.
    RationalTail { index: usize },
    /// `g_index` would leave `[0, 1]`; the data cannot come from the class.
    ClassViolation { index: usize, value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub fraction: GFraction,
    pub stop: Option<ExtractionStop>,
}

/// `g_1` from the first two scaled derivatives, where a closed form exists.
pub fn closed_form_g1(phi: &[f64], spec: &DomainSpec) -> Option<f64> {
    let (p0, p1) = (*phi.first()?, *phi.get(1)?);
    let d = 1.0 - p0 * p0;
    match spec.kind() {
        DomainKind::Rectangle { .. } => Some(0.5 * (d - 2.0 * p1) / d),
        DomainKind::Strip { .. } => Some(0.5 * (d - 4.0 * p1) / d),
        DomainKind::SemiStrip { .. } => None,
    }
}

/// `g_2` from the first three scaled derivatives, where a closed form exists.
pub fn closed_form_g2(phi: &[f64], spec: &DomainSpec) -> Option<f64> {
    let (p0, p1, p2) = (*phi.first()?, *phi.get(1)?, *phi.get(2)?);
    let cubic = -p0 + p0 * p0 + p0 * p0 * p0 - 1.0;
    match spec.kind() {
        DomainKind::Rectangle { .. } => Some(
            0.5 * (4.0 * p1 * p1 - 2.0 * p2 + cubic - 2.0 * p2 * p0) * (1.0 - p0)
                / ((2.0 * p1 - p0 * p0 + 1.0) * (2.0 * p1 + p0 * p0 - 1.0)),
        ),
        DomainKind::Strip { .. } => Some(
            0.5 * (16.0 * p1 * p1 - 8.0 * p2 + cubic - 8.0 * p2 * p0) * (1.0 - p0)
                / ((1.0 - p0 * p0 + 4.0 * p1) * (4.0 * p1 - 1.0 + p0 * p0)),
        ),
        DomainKind::SemiStrip { .. } => None,
    }
}

/// `mu_0` and `g_1..g_order` from scaled Taylor data. `g_1`, `g_2` use the
/// closed forms where the domain has them, later coefficients come from
/// series peeling.
pub fn extract_coefficients(
    scaled: &ScaledTaylor,
    spec: &DomainSpec,
    order: usize,
) -> Result<Extraction> {
    extract(scaled, spec, order, true)
}

/// Same as [`extract_coefficients`] but every coefficient from series
/// peeling, for checking the closed forms.
pub fn recurrence_coefficients(
    scaled: &ScaledTaylor,
    spec: &DomainSpec,
    order: usize,
) -> Result<Extraction> {
    extract(scaled, spec, order, false)
}

/// Series of `{g | w}` at `w = 0` implied by the scaled Taylor data, together
/// with `mu_0`.
pub fn fraction_series(
    scaled: &ScaledTaylor,
    spec: &DomainSpec,
    order: usize,
) -> Result<(f64, Series)> {
    let phi = scaled.coeffs();
    if order == 0 {
        return Err(Error::InsufficientData(
            "extraction order must be >= 1".into(),
        ));
    }
    if phi.len() <= order {
        return Err(Error::InsufficientData(format!(
            "order {order} needs {} derivatives, got {}",
            order + 1,
            phi.len()
        )));
    }
    let p = Series::from_derivatives(&phi[..=order]);
    let one = Series::constant(1.0, order);
    // m(phi) = (1 + phi) / (1 - phi)
    let big_f = one.add(&p).div(&one.sub(&p));
    let mu0 = big_f.coeff(0);
    let x_of_w = spec.coordinate_series(order).reversion();
    let h = big_f
        .compose(&x_of_w)
        .mul(&Series::inv_sqrt_one_plus(order))
        .scale(1.0 / mu0);
    Ok((mu0, h))
}

fn extract(
    scaled: &ScaledTaylor,
    spec: &DomainSpec,
    order: usize,
    closed_forms: bool,
) -> Result<Extraction> {
    let phi = scaled.coeffs();
    let (mu0, mut h) = fraction_series(scaled, spec, order)?;
    let mut g: Vec<f64> = Vec::with_capacity(order);
    let mut stop = None;
    for p in 1..=order {
        // h = 1 / (1 + a_p w h_next)
        let r = h.recip();
        let a = r.coeff(1);
        let prev = g.last().copied().unwrap_or(0.0);
        let closed = match (closed_forms, p) {
            (true, 1) => closed_form_g1(phi, spec),
            (true, 2) => closed_form_g2(phi, spec),
            _ => None,
        };
        let gp = match closed {
            Some(v) => v,
            None if p == 1 => a,
            None => a / (1.0 - prev),
        };
        if !gp.is_finite() || !(-MEMBERSHIP_TOL..=1.0 + MEMBERSHIP_TOL).contains(&gp) {
            stop = Some(ExtractionStop::ClassViolation {
                index: p,
                value: gp,
            });
            break;
        }
        if gp <= MEMBERSHIP_TOL || gp >= 1.0 - MEMBERSHIP_TOL {
            g.push(if gp <= MEMBERSHIP_TOL { 0.0 } else { 1.0 });
            stop = Some(ExtractionStop::RationalTail { index: p });
            break;
        }
        g.push(gp);
        if p < order {
            h = r.add_const(-1.0).shift_down().scale(1.0 / a);
        }
    }
    Ok(Extraction {
        fraction: GFraction::new(mu0, g)?,
        stop,
    })
}

/// The bounded function represented by a g-fraction on a domain.
#[derive(Debug, Clone)]
pub struct Synthesized {
    fraction: GFraction,
    spec: DomainSpec,
}

impl Synthesized {
    /// `f(z) = M (1 - 2 / (mu_0 sqrt(1 + w) {g | w} + 1))`, `w = w(z)`.
    pub fn eval(&self, z: f64) -> Result<f64> {
        let (w, root) = canonical_with_root(z, &self.spec)?;
        let big_f = self.fraction.mu0() * root * self.fraction.value(w)?;
        conformal::mobius_m_inv(self.spec.bound(), big_f)
    }

    pub fn fraction(&self) -> &GFraction {
        &self.fraction
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }
}

pub fn synthesize_function(frac: &GFraction, spec: &DomainSpec) -> Synthesized {
    Synthesized {
        fraction: frac.clone(),
        spec: *spec,
    }
}
