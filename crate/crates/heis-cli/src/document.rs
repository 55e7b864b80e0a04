//! The profile JSON document: the canonical serialization of a candidate
//! set.
//!
//! ```json
//! {
//!   "n": 1,
//!   "r_cyl": 1.0,
//!   "grid": [0.0, 0.5, 1.0],
//!   "u_plus": [1.0, 0.8, 0.0],
//!   "u_minus": [1.0, 0.8, 0.0]
//! }
//! ```
//!
//! `grid` must increase strictly from 0 to `r_cyl`; heights must be
//! non-negative; all three arrays share one length.

use std::fs;
use std::path::Path;

use heis::group::Dimension;
use heis::radial::{validate, ProfileSamples, RadialSet};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDocument {
    pub n: usize,
    pub r_cyl: f64,
    pub grid: Vec<f64>,
    pub u_plus: Vec<f64>,
    pub u_minus: Vec<f64>,
}

impl ProfileDocument {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("malformed profile document: {e}")))
    }

    pub fn into_set(self) -> Result<RadialSet, CliError> {
        let dim = Dimension::new(self.n)
            .map_err(|_| CliError::Usage("field `n` must be a positive integer".into()))?;
        let upper = ProfileSamples::new(self.grid.clone(), self.u_plus);
        let lower = ProfileSamples::new(self.grid, self.u_minus);
        let diags = validate(self.r_cyl, &upper, &lower);
        if !diags.is_empty() {
            let msgs: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
            return Err(CliError::Usage(format!(
                "invalid profile document: {}",
                msgs.join("; ")
            )));
        }
        RadialSet::new(dim, self.r_cyl, upper, lower).map_err(CliError::from)
    }
}
