//! Curve configuration files and their command-line equivalent.

use std::path::Path;

use anyhow::Context;
use btq_core::curve::{CurveConfig, EllipticCurve, Point};
use btq_core::exact::{Field, Place, Poly};
use btq_core::pic::UNIT_BOUND;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, CliError, CliResult};

/// A puncture: a place name on `P¹` (`inf` or a monic irreducible in `t`),
/// `O` on a cubic, or affine coordinates of a rational point of a cubic.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Puncture {
    Name(String),
    Coordinates([u32; 2]),
}

/// Contents of a curve configuration file; see `schema/config.schema.json`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub q: u32,
    #[serde(default = "default_curve")]
    pub curve: String,
    /// `[a4, a6]` or `[a1, a2, a3, a4, a6]`.
    #[serde(default)]
    pub weierstrass: Vec<i64>,
    pub punctures: Vec<Puncture>,
    #[serde(default)]
    pub unit_bound: Option<i64>,
}

fn default_curve() -> String {
    "p1".into()
}

impl CurveSpec {
    pub fn load(path: &Path) -> CliResult<CurveSpec> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
    }

    /// Builds a spec from flag values; elliptic points are written `x:y`.
    pub fn from_flags(curve: &str, q: u32, punctures: &str, weierstrass: Option<&str>) -> CliResult<CurveSpec> {
        let punctures = punctures
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| match s.split_once(':') {
                Some((x, y)) => match (x.trim().parse(), y.trim().parse()) {
                    (Ok(x), Ok(y)) => Ok(Puncture::Coordinates([x, y])),
                    _ => invalid(format!("cannot read point {s:?}")),
                },
                None => Ok(Puncture::Name(s.to_string())),
            })
            .collect::<CliResult<Vec<_>>>()?;
        let weierstrass = match weierstrass {
            None => Vec::new(),
            Some(w) => w
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| CliError::Invalid(format!("bad coefficient {x:?}"))))
                .collect::<CliResult<Vec<_>>>()?,
        };
        Ok(CurveSpec { q, curve: curve.to_string(), weierstrass, punctures, unit_bound: None })
    }

    pub fn unit_bound(&self) -> i64 {
        self.unit_bound.unwrap_or(UNIT_BOUND)
    }

    pub fn is_projective_line(&self) -> bool {
        self.curve == "p1"
    }

    /// Validates and converts to a curve configuration.
    pub fn resolve(&self) -> CliResult<CurveConfig> {
        if self.q > 49 {
            return invalid("field order above 49 is out of scope");
        }
        if let Some(b) = self.unit_bound {
            if !(1..=64).contains(&b) {
                return invalid("unit_bound must lie in 1..=64");
            }
        }
        let k = Field::new(self.q)?;
        match self.curve.as_str() {
            "p1" => {
                if !self.weierstrass.is_empty() {
                    return invalid("weierstrass coefficients given for p1");
                }
                let names = self
                    .punctures
                    .iter()
                    .map(|p| match p {
                        Puncture::Name(s) => Ok(s.as_str()),
                        Puncture::Coordinates(_) => invalid("p1 punctures are place names"),
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(CurveConfig::projective_line(&k, &names)?)
            }
            "elliptic" => {
                let e = match self.weierstrass.as_slice() {
                    [a4, a6] => EllipticCurve::short(&k, *a4, *a6)?,
                    [a1, a2, a3, a4, a6] => {
                        EllipticCurve::new(&k, [*a1, *a2, *a3, *a4, *a6].map(|x| k.from_int(x)))?
                    }
                    _ => return invalid("weierstrass needs 2 or 5 coefficients"),
                };
                let points = self
                    .punctures
                    .iter()
                    .map(|p| match p {
                        Puncture::Name(s) if s == "O" => Ok(None),
                        Puncture::Coordinates([x, y]) if *x < self.q && *y < self.q => Ok(Some((*x, *y))),
                        other => invalid(format!("{other:?} is not a rational point")),
                    })
                    .collect::<CliResult<Vec<Point>>>()?;
                Ok(CurveConfig::elliptic(e, &points)?)
            }
            other => invalid(format!("curve {other:?}: only p1 and elliptic curves are supported")),
        }
    }
}

/// Default punctures for `s` places on `P¹`: `inf`, `t`, `t+1`, ...
pub fn default_places(q: u32, s: usize) -> CliResult<Vec<String>> {
    if s == 0 || s > q as usize + 1 {
        return invalid(format!("s must lie in 1..={} for q = {q}", q + 1));
    }
    let k = Field::new(q)?;
    let mut out = vec!["inf".to_string()];
    for c in 0..(s - 1) as u32 {
        let place = Place::finite(Poly::from_coeffs(vec![k.neg(c), 1]), &k)?;
        out.push(place.display(&k));
    }
    Ok(out)
}
