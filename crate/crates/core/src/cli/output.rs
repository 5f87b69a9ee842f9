//! JSON documents written by the commands. Field order is the output order.

use std::path::Path;

use serde::Serialize;

use crate::conformal::{DomainKind, DomainSpec};
use crate::format::Sig17;
use crate::gfraction::{Extraction, ExtractionStop};
use crate::return_time::{Degeneracy, Region, ReturnCertificate};
use crate::three_body::{FirstIntegrals, ObservedReturns, Side, SundmanData, Verdict};

pub const VERSION: &str = "gbound/1";

fn sig(xs: &[f64]) -> Vec<Sig17> {
    xs.iter().copied().map(Sig17).collect()
}

#[derive(Serialize)]
pub struct DomainOut {
    kind: &'static str,
    #[serde(rename = "M")]
    m: Sig17,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    t: Option<Sig17>,
    #[serde(rename = "B")]
    b: Sig17,
}

impl From<&DomainSpec> for DomainOut {
    fn from(spec: &DomainSpec) -> Self {
        let (t, b) = match spec.kind() {
            DomainKind::Rectangle { t, b, .. } | DomainKind::SemiStrip { t, b } => {
                (Some(Sig17(*t)), *b)
            }
            DomainKind::Strip { b } => (None, *b),
        };
        DomainOut {
            kind: spec.name(),
            m: Sig17(spec.bound()),
            t,
            b: Sig17(b),
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopOut {
    RationalTail { index: usize },
    ClassViolation { index: usize, value: Sig17 },
}

impl From<&ExtractionStop> for StopOut {
    fn from(s: &ExtractionStop) -> Self {
        match *s {
            ExtractionStop::RationalTail { index } => StopOut::RationalTail { index },
            ExtractionStop::ClassViolation { index, value } => StopOut::ClassViolation {
                index,
                value: Sig17(value),
            },
        }
    }
}

#[derive(Serialize)]
pub struct FractionOut {
    mu0: Sig17,
    g: Vec<Sig17>,
    stop: Option<StopOut>,
}

impl From<&Extraction> for FractionOut {
    fn from(e: &Extraction) -> Self {
        FractionOut {
            mu0: Sig17(e.fraction.mu0()),
            g: sig(e.fraction.coeffs()),
            stop: e.stop.as_ref().map(StopOut::from),
        }
    }
}

#[derive(Serialize)]
pub struct EnvelopeSummary {
    pub version: &'static str,
    pub command: &'static str,
    pub domain: DomainOut,
    pub fraction: FractionOut,
    pub order: usize,
    pub grid_points: usize,
    pub failed_points: usize,
    pub csv: Option<String>,
}

impl EnvelopeSummary {
    pub fn new(
        spec: &DomainSpec,
        extraction: &Extraction,
        order: usize,
        grid_points: usize,
        failed_points: usize,
        csv: Option<&Path>,
    ) -> Self {
        EnvelopeSummary {
            version: VERSION,
            command: "envelope",
            domain: spec.into(),
            fraction: extraction.into(),
            order,
            grid_points,
            failed_points,
            csv: csv.map(|p| p.display().to_string()),
        }
    }
}

#[derive(Serialize)]
pub struct CertificateOut {
    tilde_tau: Sig17,
    zeta: Option<Sig17>,
    region: Option<Region>,
    degenerate: bool,
    degeneracy: Option<Degeneracy>,
}

impl From<&ReturnCertificate> for CertificateOut {
    fn from(c: &ReturnCertificate) -> Self {
        CertificateOut {
            tilde_tau: Sig17(c.tilde_tau),
            zeta: c.zeta.map(Sig17),
            region: c.region,
            degenerate: c.degenerate,
            degeneracy: c.degeneracy,
        }
    }
}

#[derive(Serialize)]
pub struct ReturnBoundsDoc {
    pub version: &'static str,
    pub command: &'static str,
    pub domain: DomainOut,
    pub fraction: FractionOut,
    pub certificate: CertificateOut,
}

impl ReturnBoundsDoc {
    pub fn new(spec: &DomainSpec, extraction: &Extraction, cert: &ReturnCertificate) -> Self {
        ReturnBoundsDoc {
            version: VERSION,
            command: "return-bounds",
            domain: spec.into(),
            fraction: extraction.into(),
            certificate: cert.into(),
        }
    }
}

#[derive(Serialize)]
pub struct SundmanOut {
    chi: Sig17,
    gamma: Sig17,
    h: Sig17,
    #[serde(rename = "Kc")]
    kc: Sig17,
    #[serde(rename = "B_chi")]
    b_chi: Sig17,
    #[serde(rename = "M_chi")]
    m_chi: Sig17,
}

impl From<&SundmanData> for SundmanOut {
    fn from(s: &SundmanData) -> Self {
        SundmanOut {
            chi: Sig17(s.chi),
            gamma: Sig17(s.gamma),
            h: Sig17(s.h),
            kc: Sig17(s.kc),
            b_chi: Sig17(s.b_chi),
            m_chi: Sig17(s.m_chi),
        }
    }
}

#[derive(Serialize)]
pub struct IntegralsOut {
    energy: Sig17,
    momentum: Vec<Sig17>,
    angular_momentum: Vec<Sig17>,
}

impl From<&FirstIntegrals> for IntegralsOut {
    fn from(f: &FirstIntegrals) -> Self {
        IntegralsOut {
            energy: Sig17(f.energy),
            momentum: sig(&f.momentum),
            angular_momentum: sig(&f.angular_momentum),
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SideOut {
    Return { time: Sig17 },
    NoReturnUpTo { time: Sig17 },
    Unknown,
}

impl From<Side> for SideOut {
    fn from(s: Side) -> Self {
        match s {
            Side::Return(t) => SideOut::Return { time: Sig17(t) },
            Side::NoReturnUpTo(t) => SideOut::NoReturnUpTo { time: Sig17(t) },
            Side::Unknown => SideOut::Unknown,
        }
    }
}

#[derive(Serialize)]
pub struct ObservedOut {
    source: &'static str,
    forward: SideOut,
    backward: SideOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    energy_drift: Option<Sig17>,
}

impl ObservedOut {
    pub fn new(obs: &ObservedReturns, source: &'static str, energy_drift: Option<f64>) -> Self {
        ObservedOut {
            source,
            forward: obs.forward.into(),
            backward: obs.backward.into(),
            energy_drift: energy_drift.map(Sig17),
        }
    }
}

#[derive(Serialize)]
pub struct VerdictOut {
    kind: &'static str,
    reason: Option<String>,
}

impl From<&Verdict> for VerdictOut {
    fn from(v: &Verdict) -> Self {
        VerdictOut {
            kind: v.name(),
            reason: v.reason().map(str::to_owned),
        }
    }
}

#[derive(Serialize)]
pub struct ThreeBodyDoc {
    pub version: &'static str,
    pub command: &'static str,
    pub pair: [usize; 2],
    pub first_integrals: IntegralsOut,
    pub sundman: SundmanOut,
    pub taylor: Vec<Sig17>,
    pub fraction: Option<FractionOut>,
    pub certificate: Option<CertificateOut>,
    pub observed: Option<ObservedOut>,
    pub verdict: VerdictOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<String>,
}

impl ThreeBodyDoc {
    pub fn taylor(derivs: &[f64]) -> Vec<Sig17> {
        sig(derivs)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("output documents serialize");
    s.push('\n');
    s
}
