//! Two-sided envelopes of a bounded function on its real interval.

use std::io::{self, Write};

use crate::conformal::{canonical_with_root, mobius_m_inv, DomainSpec};
use crate::error::{Error, Result};
use crate::format::sig17;
use crate::gfraction::{apriori_bounds, GFraction};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSample {
    pub z: f64,
    pub lower: f64,
    pub upper: f64,
}

/// One grid point: the sample, or the reason it could not be evaluated.
pub type EnvelopePoint = std::result::Result<EnvelopeSample, Error>;

/// Bounds on `f(z)` from the first `p` coefficients of its g-fraction.
///
/// For each `z` the canonical coordinate `w` is formed, the order-`p`
/// a-priori bounds of the fraction at `w` are pushed through
/// `F -> m^{-1}(mu_0 sqrt(1 + w) F)`, which is increasing in `F`.
pub fn envelope(
    frac: &GFraction,
    spec: &DomainSpec,
    p: usize,
    grid: &[f64],
) -> Result<Vec<EnvelopePoint>> {
    if p == 0 {
        return Err(Error::InsufficientData(
            "envelope order p must be >= 1".into(),
        ));
    }
    if p > frac.len() {
        return Err(Error::InsufficientData(format!(
            "order p = {p} exceeds the {} available coefficients",
            frac.len()
        )));
    }
    let prefix = &frac.coeffs()[..p];
    Ok(grid
        .iter()
        .map(|&z| sample(frac.mu0(), prefix, spec, z))
        .collect())
}

fn sample(mu0: f64, prefix: &[f64], spec: &DomainSpec, z: f64) -> EnvelopePoint {
    let (w, root) = canonical_with_root(z, spec)?;
    let (lo, hi) = apriori_bounds(prefix, w)?;
    let m = spec.bound();
    let lower = mobius_m_inv(m, mu0 * root * lo)?;
    let upper = mobius_m_inv(m, mu0 * root * hi)?;
    Ok(EnvelopeSample {
        z,
        lower: lower.min(upper),
        upper: upper.max(lower),
    })
}

/// Writes `z,lower,upper` rows with 17 significant digits. Points that
/// failed keep their abscissa and leave the bounds empty.
pub fn write_csv<W: Write>(out: &mut W, grid: &[f64], points: &[EnvelopePoint]) -> io::Result<()> {
    writeln!(out, "z,lower,upper")?;
    for (z, pt) in grid.iter().zip(points) {
        match pt {
            Ok(s) => writeln!(out, "{},{},{}", sig17(s.z), sig17(s.lower), sig17(s.upper))?,
            Err(_) => writeln!(out, "{},,", sig17(*z))?,
        }
    }
    Ok(())
}
