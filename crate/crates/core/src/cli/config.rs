//! Run configuration: JSON on disk, validated into library types.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::CliError;
use crate::conformal::{DomainSpec, TaylorData};
use crate::three_body::{IntegrationControls, Pair, ThreeBodySystem, Vec3};

pub const DEFAULT_GRID_POINTS: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Envelope,
    ReturnBounds,
    ThreebodyCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Envelope => "envelope",
            Command::ReturnBounds => "return-bounds",
            Command::ThreebodyCheck => "threebody-check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKindName {
    Rectangle,
    Strip,
    SemiStrip,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub kind: DomainKindName,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "T", default)]
    pub t: Option<f64>,
    #[serde(rename = "B")]
    pub b: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub points: Option<usize>,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrationConfig {
    pub dt: f64,
    pub horizon: f64,
    #[serde(default)]
    pub min_distance: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreeBodyConfig {
    pub masses: [f64; 3],
    pub positions: [Vec3; 3],
    pub velocities: [Vec3; 3],
    pub chi: f64,
    /// 1-based body indices.
    pub pair: [usize; 2],
    #[serde(default)]
    pub center_of_mass: bool,
    pub integration: Option<IntegrationConfig>,
    pub observed_return: Option<f64>,
    pub trajectory_output: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub domain: Option<DomainConfig>,
    pub taylor: Option<Vec<f64>>,
    pub order: Option<usize>,
    #[serde(default)]
    pub grid: GridConfig,
    pub output: Option<PathBuf>,
    pub three_body: Option<ThreeBodyConfig>,
}

/// Overrides from the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub grid_points: Option<usize>,
    pub order: Option<usize>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Parse {
                line,
                column,
                message,
            } => CliError::Parse {
                line,
                column,
                message: format!("{}: {message}", path.display()),
            },
            other => other,
        })
    }

    pub fn apply(&mut self, ov: &Overrides) {
        if let Some(out) = &ov.out {
            self.output = Some(out.clone());
        }
        if let Some(n) = ov.grid_points {
            self.grid.points = Some(n);
        }
        if let Some(p) = ov.order {
            self.order = Some(p);
        }
    }

    pub fn check_command(&self, cmd: Command) -> Result<(), CliError> {
        match self.command {
            Some(c) if c != cmd => Err(CliError::field(
                "command",
                format!(
                    "config is for '{}' but '{}' was requested",
                    c.name(),
                    cmd.name()
                ),
            )),
            _ => Ok(()),
        }
    }

    pub fn domain_spec(&self) -> Result<DomainSpec, CliError> {
        let d = self
            .domain
            .as_ref()
            .ok_or_else(|| CliError::field("domain", "missing"))?;
        positive("domain.M", d.m)?;
        positive("domain.B", d.b)?;
        let t = || -> Result<f64, CliError> {
            let t =
                d.t.ok_or_else(|| CliError::field("domain.T", "required for this domain kind"))?;
            positive("domain.T", t)?;
            Ok(t)
        };
        let spec = match d.kind {
            DomainKindName::Rectangle => DomainSpec::rectangle(d.m, t()?, d.b),
            DomainKindName::Strip => {
                if d.t.is_some() {
                    return Err(CliError::field("domain.T", "not used by a strip"));
                }
                DomainSpec::strip(d.m, d.b)
            }
            DomainKindName::SemiStrip => DomainSpec::semi_strip(d.m, t()?, d.b),
        };
        spec.map_err(|e| CliError::field("domain", e.to_string()))
    }

    pub fn taylor_data(&self) -> Result<TaylorData, CliError> {
        let raw = self
            .taylor
            .as_ref()
            .ok_or_else(|| CliError::field("taylor", "missing"))?;
        if raw.len() < 2 {
            return Err(CliError::field("taylor", "needs at least f(0) and f'(0)"));
        }
        TaylorData::new(raw.clone()).map_err(|e| CliError::field("taylor", e.to_string()))
    }

    /// Requested truncation order, defaulting to the most the data allows
    /// (at most 2).
    pub fn order_for(&self, taylor: &TaylorData) -> Result<usize, CliError> {
        let available = taylor.derivatives().len() - 1;
        match self.order {
            Some(0) => Err(CliError::field("order", "must be >= 1")),
            Some(p) if p > available => Err(CliError::field(
                "order",
                format!(
                    "{p} needs {} Taylor coefficients, {} given",
                    p + 1,
                    available + 1
                ),
            )),
            Some(p) => Ok(p),
            None => Ok(available.min(2)),
        }
    }

    /// Evenly spaced interior points of `[min, max]`. Defaults: the full
    /// interval for a rectangle, `[-2B, 2B]` for a strip and `[-T, T + 4B]`
    /// for a semi-strip.
    pub fn grid(&self, spec: &DomainSpec) -> Result<Vec<f64>, CliError> {
        let n = self.grid.points.unwrap_or(DEFAULT_GRID_POINTS);
        if n == 0 {
            return Err(CliError::field("grid.points", "must be >= 1"));
        }
        let d = self.domain.as_ref().expect("domain validated");
        let (lo_default, hi_default) = match d.kind {
            DomainKindName::Rectangle => spec.interval(),
            DomainKindName::Strip => (-2.0 * d.b, 2.0 * d.b),
            DomainKindName::SemiStrip => {
                let t = d.t.expect("validated");
                (-t, t + 4.0 * d.b)
            }
        };
        let lo = self.grid.min.unwrap_or(lo_default);
        let hi = self.grid.max.unwrap_or(hi_default);
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(CliError::field(
                "grid",
                format!("need finite min < max, got [{lo}, {hi}]"),
            ));
        }
        Ok((0..n)
            .map(|i| lo + (hi - lo) * (i + 1) as f64 / (n + 1) as f64)
            .collect())
    }
}

fn positive(field: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::field(field, format!("must be positive, got {x}")))
    }
}

impl ThreeBodyConfig {
    pub fn system(&self) -> Result<ThreeBodySystem, CliError> {
        for (i, m) in self.masses.iter().enumerate() {
            positive(&format!("three_body.masses[{i}]"), *m)?;
        }
        let sys = ThreeBodySystem::new(self.masses, self.positions, self.velocities)
            .map_err(|e| CliError::field("three_body.positions", e.to_string()))?;
        Ok(if self.center_of_mass {
            sys.center_of_mass()
        } else {
            sys
        })
    }

    pub fn chi(&self) -> Result<f64, CliError> {
        positive("three_body.chi", self.chi)?;
        Ok(self.chi)
    }

    pub fn pair(&self) -> Result<Pair, CliError> {
        let [a, b] = self.pair;
        if !(1..=3).contains(&a) || !(1..=3).contains(&b) || a == b {
            return Err(CliError::field(
                "three_body.pair",
                format!("need two distinct bodies in 1..=3, got [{a}, {b}]"),
            ));
        }
        Ok(Pair::new(a - 1, b - 1).expect("checked"))
    }

    pub fn controls(&self) -> Result<Option<(IntegrationControls, f64)>, CliError> {
        let Some(ic) = &self.integration else {
            return Ok(None);
        };
        positive("three_body.integration.dt", ic.dt)?;
        positive("three_body.integration.horizon", ic.horizon)?;
        if !(ic.min_distance >= 0.0 && ic.min_distance.is_finite()) {
            return Err(CliError::field(
                "three_body.integration.min_distance",
                format!("must be >= 0, got {}", ic.min_distance),
            ));
        }
        let controls = IntegrationControls::new(ic.dt, ic.min_distance)
            .map_err(|e| CliError::field("three_body.integration", e.to_string()))?;
        Ok(Some((controls, ic.horizon)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_error_has_position() {
        let err =
            RunConfig::parse("{\n  \"domain\": {\n    \"kind\": \"strip\",\n  }\n}").unwrap_err();
        let CliError::Parse { line, .. } = err else {
            panic!("{err:?}")
        };
        assert_eq!(line, 4);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(RunConfig::parse(r#"{"domian": {}}"#).is_err());
    }

    #[test]
    fn negative_bound_names_field() {
        let cfg = RunConfig::parse(
            r#"{"domain": {"kind": "rectangle", "M": -1, "T": 1, "B": 1}, "taylor": [0, 0.1]}"#,
        )
        .unwrap();
        let err = cfg.domain_spec().unwrap_err();
        assert!(err.to_string().contains("domain.M"), "{err}");
    }

    #[test]
    fn rectangle_default_grid() {
        let cfg = RunConfig::parse(r#"{"domain": {"kind": "rectangle", "M": 1, "T": 1, "B": 1}}"#)
            .unwrap();
        let spec = cfg.domain_spec().unwrap();
        let grid = cfg.grid(&spec).unwrap();
        assert_eq!(grid.len(), 101);
        assert_eq!(grid[50], 0.0);
        assert!((grid[0] + 1.0 - 2.0 / 102.0).abs() < 1e-15);
    }

    #[test]
    fn order_defaults_and_limits() {
        let mut cfg = RunConfig::parse(r#"{"taylor": [0, 0.1, 0.2, 0.3]}"#).unwrap();
        let t = cfg.taylor_data().unwrap();
        assert_eq!(cfg.order_for(&t).unwrap(), 2);
        cfg.order = Some(4);
        assert!(cfg.order_for(&t).is_err());
        cfg.order = Some(3);
        assert_eq!(cfg.order_for(&t).unwrap(), 3);
    }
}
