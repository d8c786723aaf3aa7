//! JSON problem files.
//!
//! ```json
//! { "alpha": 1.5, "b": 3, "q": "t", "f": "1/(y+20)", "r1": 0.01, "r2": 1 }
//! ```
//!
//! `r1`, `r2`, `tol`, `max_iter` and `damping` are optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{PicardOptions, ProblemSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub alpha: f64,
    pub b: usize,
    pub q: String,
    pub f: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub damping: Option<f64>,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            offset: 0,
            message: format!("problem file: {e}"),
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// Captures a parsed problem (expression text as originally written) and solver settings.
    pub fn from_spec(spec: &ProblemSpec, options: Option<&PicardOptions>) -> Self {
        Self {
            alpha: spec.alpha.get(),
            b: spec.b,
            q: spec.q.source().to_string(),
            f: spec.f.source().to_string(),
            r1: spec.r1,
            r2: spec.r2,
            tol: options.map(|o| o.tol),
            max_iter: options.map(|o| o.max_iter),
            damping: options.map(|o| o.damping),
        }
    }

    pub fn to_spec(&self) -> Result<ProblemSpec> {
        let spec = ProblemSpec::new(self.alpha, self.b, &self.q, &self.f)?;
        match (self.r1, self.r2) {
            (Some(r1), Some(r2)) => spec.with_radii(r1, r2),
            (None, None) => Ok(spec),
            _ => Err(Error::Domain("r1 and r2 must be given together".into())),
        }
    }

    pub fn picard_options(&self) -> PicardOptions {
        let defaults = PicardOptions::default();
        PicardOptions {
            tol: self.tol.unwrap_or(defaults.tol),
            max_iter: self.max_iter.unwrap_or(defaults.max_iter),
            damping: self.damping.unwrap_or(defaults.damping),
            y0: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let file =
            ProblemFile::from_json(r#"{"alpha": 1.5, "b": 3, "q": "t", "f": "1/(y+20)"}"#).unwrap();
        let spec = file.to_spec().unwrap();
        assert_eq!(spec.b, 3);
        assert_eq!(spec.r1, None);
        assert_eq!(file.picard_options().tol, 1e-12);
    }

    #[test]
    fn rejects_unknown_fields_and_half_radii() {
        assert!(
            ProblemFile::from_json(r#"{"alpha": 1.5, "b": 3, "q": "t", "f": "y", "x": 1}"#)
                .is_err()
        );
        let file =
            ProblemFile::from_json(r#"{"alpha": 1.5, "b": 3, "q": "t", "f": "y", "r1": 0.1}"#)
                .unwrap();
        assert!(file.to_spec().is_err());
    }

    #[test]
    fn round_trip_through_spec() {
        let spec = ProblemSpec::new(1.25, 6, "(2*t+1)/2", "ln(2+y)/gamma(6)")
            .unwrap()
            .with_radii(1e-4, 1.0)
            .unwrap();
        let opts = PicardOptions {
            damping: 0.75,
            ..Default::default()
        };
        let text = ProblemFile::from_spec(&spec, Some(&opts)).to_json();
        let back = ProblemFile::from_json(&text).unwrap();
        assert_eq!(back.to_spec().unwrap(), spec);
        assert_eq!(back.picard_options().damping, 0.75);
        assert_eq!(back.to_json(), text);
    }
}
