//! Collision certificate for one mutual distance.
//!
//! If no two bodies of radius `chi` ever touch, `f = 1/r_ij` is analytic and
//! bounded by `M_chi` on the strip `|Im t| < B_chi`, so its first return to
//! `f(0)` has to respect the strip return-time bounds. An observed return that
//! does not is therefore evidence of a collision.

use std::fmt;

use super::integrator::{gbs_step, integrate, IntegrationControls, Trajectory, TrajectorySample};
use super::{
    first_integrals, rinv_taylor, sundman_data, Pair, SundmanData, ThreeBodySystem, PAIRS,
};
use crate::conformal::{scale_taylor, DomainSpec, TaylorData};
use crate::error::{Error, Result};
use crate::gfraction::{extract_coefficients, Extraction, ExtractionStop};
use crate::return_time::{certify, ReturnCertificate};

const BISECTION_STEPS: usize = 60;

/// What is known about the first return on one side of `t = 0`. Times are
/// magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Side {
    Return(f64),
    /// The trajectory was followed this far without a return.
    NoReturnUpTo(f64),
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservedReturns {
    pub forward: Side,
    pub backward: Side,
}

impl ObservedReturns {
    /// A single signed first-return time, nothing known on the other side.
    pub fn from_time(tau: f64) -> Self {
        if tau >= 0.0 {
            ObservedReturns {
                forward: Side::Return(tau),
                backward: Side::Unknown,
            }
        } else {
            ObservedReturns {
                forward: Side::Unknown,
                backward: Side::Return(-tau),
            }
        }
    }

    fn side(&self, sign: f64) -> Side {
        if sign > 0.0 {
            self.forward
        } else {
            self.backward
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    CollisionCertified(String),
    Inconclusive,
    Degenerate(String),
    HypothesisViolated(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::CollisionCertified(_) => "CollisionCertified",
            Verdict::Inconclusive => "Inconclusive",
            Verdict::Degenerate(_) => "Degenerate",
            Verdict::HypothesisViolated(_) => "HypothesisViolated",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Verdict::CollisionCertified(r)
            | Verdict::Degenerate(r)
            | Verdict::HypothesisViolated(r) => Some(r),
            Verdict::Inconclusive => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reason() {
            Some(r) => write!(f, "{}: {r}", self.name()),
            None => write!(f, "{}", self.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollisionReport {
    pub pair: Pair,
    pub sundman: SundmanData,
    pub taylor: TaylorData,
    pub extraction: Option<Extraction>,
    pub certificate: Option<ReturnCertificate>,
    pub verdict: Verdict,
}

/// Runs the certificate for `1 / r_ij` and compares it with `observed`.
pub fn collision_check(
    sys: &ThreeBodySystem,
    chi: f64,
    pair: Pair,
    observed: Option<&ObservedReturns>,
) -> Result<CollisionReport> {
    let sundman = sundman_data(sys, chi)?;
    let taylor = rinv_taylor(sys, pair, 2)?;
    let mut report = CollisionReport {
        pair,
        sundman,
        taylor: taylor.clone(),
        extraction: None,
        certificate: None,
        verdict: Verdict::Inconclusive,
    };
    for (i, j) in PAIRS {
        let r = sys.distance(i, j);
        if r <= 2.0 * chi {
            report.verdict = Verdict::HypothesisViolated(format!(
                "r_{}{} = {r} <= 2 chi = {}",
                i + 1,
                j + 1,
                2.0 * chi
            ));
            return Ok(report);
        }
    }
    let spec = DomainSpec::strip(sundman.m_chi, sundman.b_chi)?;
    let scaled = match scale_taylor(&taylor, &spec) {
        Ok(s) => s,
        Err(Error::ClassViolation(msg)) => {
            report.verdict = Verdict::HypothesisViolated(msg);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let extraction = extract_coefficients(&scaled, &spec, 2)?;
    report.extraction = Some(extraction.clone());
    match extraction.stop {
        Some(ExtractionStop::ClassViolation { index, value }) => {
            report.verdict = Verdict::Degenerate(format!("g_{index} = {value} outside [0, 1]"));
            return Ok(report);
        }
        Some(ExtractionStop::RationalTail { index }) => {
            report.verdict = Verdict::Degenerate(format!("g_{index} in {{0, 1}}"));
            return Ok(report);
        }
        None => {}
    }
    let cert = certify(&extraction.fraction, &spec)?;
    report.certificate = Some(cert.clone());
    if let Some(reason) = cert.degeneracy {
        report.verdict = Verdict::Degenerate(reason.to_string());
        return Ok(report);
    }
    if let Some(obs) = observed {
        report.verdict = judge(&cert, obs);
    }
    Ok(report)
}

fn judge(cert: &ReturnCertificate, obs: &ObservedReturns) -> Verdict {
    for (label, side) in [("forward", obs.forward), ("backward", obs.backward)] {
        if let Side::Return(t) = side {
            if t < cert.tilde_tau {
                return Verdict::CollisionCertified(format!(
                    "{label} return after {t}, before the lower bound {}",
                    cert.tilde_tau
                ));
            }
        }
    }
    if let (Some(zeta), Some(region)) = (cert.zeta, cert.region) {
        let bound = zeta.abs();
        let label = if zeta > 0.0 { "forward" } else { "backward" };
        match obs.side(zeta) {
            Side::Return(t) if t > bound => {
                return Verdict::CollisionCertified(format!(
                    "region {region}: {label} return after {t}, beyond {bound}"
                ));
            }
            Side::NoReturnUpTo(h) if h >= bound => {
                return Verdict::CollisionCertified(format!(
                    "region {region}: no {label} return within {h} >= {bound}"
                ));
            }
            _ => {}
        }
    }
    Verdict::Inconclusive
}

/// First returns of `r_ij(t)` to `r_ij(0)` on both sides, found on a
/// fixed-step trajectory up to `horizon` and refined by bisection. A close
/// approach cuts the search short and is reported as "no return up to" the
/// last completed step.
pub fn observe_returns(
    sys: &ThreeBodySystem,
    pair: Pair,
    controls: &IntegrationControls,
    horizon: f64,
) -> Result<(ObservedReturns, Trajectory, Trajectory)> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::domain(
            "observe_returns",
            format!("horizon = {horizon} must be positive"),
        ));
    }
    let step = controls.dt.abs();
    let steps = (horizon / step).ceil() as usize;
    let (forward, fwd) = observe_side(sys, pair, step, controls.min_distance, steps)?;
    let (backward, bwd) = observe_side(sys, pair, -step, controls.min_distance, steps)?;
    Ok((ObservedReturns { forward, backward }, fwd, bwd))
}

fn observe_side(
    sys: &ThreeBodySystem,
    pair: Pair,
    dt: f64,
    floor: f64,
    steps: usize,
) -> Result<(Side, Trajectory)> {
    let controls = IntegrationControls::new(dt, floor)?;
    let (i, j) = (pair.first(), pair.second());
    let r0 = sys.distance(i, j);
    // step one at a time so a close approach keeps the part already seen
    let mut traj = integrate(sys, &controls, 0)?;
    let h0 = first_integrals(sys).energy;
    let mut initial_sign = 0.0;
    for n in 1..=steps {
        let prev = traj.last().system;
        let next = match gbs_step(&prev, dt, floor) {
            Ok(s) => s,
            Err(Error::Singular(_)) => {
                return Ok((Side::NoReturnUpTo(((n - 1) as f64 * dt).abs()), traj))
            }
            Err(e) => return Err(e),
        };
        let g = next.distance(i, j) - r0;
        let sign = if g > 0.0 {
            1.0
        } else if g < 0.0 {
            -1.0
        } else {
            0.0
        };
        let t = n as f64 * dt;
        traj.energy_drift = traj
            .energy_drift
            .max((first_integrals(&next).energy - h0).abs());
        traj.samples.push(TrajectorySample { t, system: next });
        if initial_sign == 0.0 {
            initial_sign = sign;
            continue;
        }
        if sign != initial_sign {
            let tau = refine(
                &prev,
                (n - 1) as f64 * dt,
                dt,
                pair,
                r0,
                initial_sign,
                floor,
            )?;
            return Ok((Side::Return(tau.abs()), traj));
        }
    }
    Ok((Side::NoReturnUpTo((steps as f64 * dt).abs()), traj))
}

fn refine(
    start: &ThreeBodySystem,
    t0: f64,
    dt: f64,
    pair: Pair,
    r0: f64,
    sign: f64,
    floor: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let s = gbs_step(start, mid * dt, floor)?;
        if (s.distance(pair.first(), pair.second()) - r0) * sign > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(t0 + 0.5 * (lo + hi) * dt)
}
