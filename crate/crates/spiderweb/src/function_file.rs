//! The JSON function-definition file.
//!
//! ```json
//! {"c": 1.0, "p0": 0,
//!  "family": {"kind": "power", "alpha": 1.0, "q": 3},
//!  "truncation": {"max_log_radius": 20.0, "tol": 1e-10}}
//! ```
//!
//! Without a `truncation` block, families with a closed form (`cosh_sqrt`,
//! `sinh_sqrt_over_sqrt`, `power` with integer `q >= 2`) are evaluated
//! through it; every other family needs one.

use std::path::Path;

use serde::{Deserialize, Serialize};
use spiderweb_core::{ClosedForm, EntireProductFunction, Error, Zero, ZeroFamily};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default)]
    pub p0: u32,
    pub family: FamilySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<Truncation>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Explicit,
    Power,
    CoshSqrt,
    SinhSqrtOverSqrt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zeros: Vec<Zero>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    pub max_log_radius: f64,
    pub tol: f64,
}

impl FunctionFile {
    pub fn closed(form: ClosedForm) -> FunctionFile {
        let family = match form {
            ClosedForm::CoshSqrt => FamilySpec::bare(Kind::CoshSqrt),
            ClosedForm::SinhSqrtOverSqrt => FamilySpec::bare(Kind::SinhSqrtOverSqrt),
            ClosedForm::PowerLaw { alpha, q } => FamilySpec {
                alpha: Some(alpha),
                q: Some(f64::from(q)),
                ..FamilySpec::bare(Kind::Power)
            },
        };
        FunctionFile {
            c: 1.0,
            p0: 0,
            family,
            truncation: None,
        }
    }

    pub fn explicit(zeros: Vec<Zero>) -> FunctionFile {
        FunctionFile {
            c: 1.0,
            p0: 0,
            family: FamilySpec {
                zeros,
                ..FamilySpec::bare(Kind::Explicit)
            },
            truncation: None,
        }
    }

    pub fn parse(text: &str) -> Result<FunctionFile, Error> {
        serde_json::from_str(text).map_err(|e| Error::InvalidFunction(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<FunctionFile, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidFunction(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn family(&self) -> Result<ZeroFamily, Error> {
        let fam = &self.family;
        Ok(match fam.kind {
            Kind::Explicit => ZeroFamily::Explicit(fam.zeros.clone()),
            Kind::CoshSqrt => ZeroFamily::CoshSqrt,
            Kind::SinhSqrtOverSqrt => ZeroFamily::SinhSqrtOverSqrt,
            Kind::Power => ZeroFamily::PowerLaw {
                alpha: fam.alpha.unwrap_or(1.0),
                q: fam
                    .q
                    .ok_or_else(|| Error::InvalidFunction("power family needs q".into()))?,
            },
        })
    }

    fn closed_form(&self) -> Option<ClosedForm> {
        let fam = &self.family;
        match fam.kind {
            Kind::CoshSqrt => Some(ClosedForm::CoshSqrt),
            Kind::SinhSqrtOverSqrt => Some(ClosedForm::SinhSqrtOverSqrt),
            Kind::Power => {
                let q = fam.q?;
                (q >= 2.0 && q.fract() == 0.0 && q <= 64.0).then(|| ClosedForm::PowerLaw {
                    alpha: fam.alpha.unwrap_or(1.0),
                    q: q as u32,
                })
            }
            Kind::Explicit => None,
        }
    }

    pub fn build(&self) -> Result<EntireProductFunction, Error> {
        if self.family.kind != Kind::Explicit && !self.family.zeros.is_empty() {
            return Err(Error::InvalidFunction(
                "zeros are only allowed for the explicit family".into(),
            ));
        }
        let family = self.family()?;
        if let ZeroFamily::Explicit(zeros) = &family {
            return EntireProductFunction::from_zeros(self.c, self.p0, zeros.clone());
        }
        let f = match (self.truncation, self.closed_form()) {
            (Some(t), _) => EntireProductFunction::truncate(&family, t.max_log_radius, t.tol)?,
            (None, Some(form)) => EntireProductFunction::closed_form(form)?,
            (None, None) => {
                return Err(Error::InvalidFunction(
                    "family has no closed form; a truncation block is required".into(),
                ))
            }
        };
        f.with_prefactor(self.c, self.p0)
    }
}

impl FamilySpec {
    fn bare(kind: Kind) -> FamilySpec {
        FamilySpec {
            kind,
            alpha: None,
            q: None,
            zeros: Vec::new(),
        }
    }
}

/// The named presets used across the test matrices and the CLI examples.
pub fn presets() -> Vec<(&'static str, FunctionFile)> {
    vec![
        ("cosh_sqrt", FunctionFile::closed(ClosedForm::CoshSqrt)),
        (
            "sinh_sqrt_over_sqrt",
            FunctionFile::closed(ClosedForm::SinhSqrtOverSqrt),
        ),
        (
            "power_q2",
            FunctionFile::closed(ClosedForm::PowerLaw { alpha: 1.0, q: 2 }),
        ),
        (
            "power_q3",
            FunctionFile::closed(ClosedForm::PowerLaw { alpha: 1.0, q: 3 }),
        ),
    ]
}
