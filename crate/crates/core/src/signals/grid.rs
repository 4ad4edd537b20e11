use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommentSet {
    SubmissionsOnly,
    FirstLevel,
    KeywordAll,
}

/// One point of the indicator grid.
///
/// Spec strings: `sub_{W}` for submissions only, and
/// `com_{W}_{tau}_{weighting}_{firstlevel}` for comment specs, where
/// `weighting` is 1 when net scores weight the votes and `firstlevel` is 1
/// for first-level comments and 0 for keyword-filtered comments at all depths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    pub comment_set: CommentSet,
    pub vote_weighting: bool,
    pub threshold: f64,
    pub ma_window: u32,
}

impl SignalSpec {
    pub fn submissions_only(ma_window: u32) -> Self {
        Self {
            comment_set: CommentSet::SubmissionsOnly,
            vote_weighting: false,
            threshold: 0.0,
            ma_window,
        }
    }

    pub fn comments(comment_set: CommentSet, vote_weighting: bool, threshold: f64, ma_window: u32) -> Result<Self> {
        let spec = Self {
            comment_set,
            vote_weighting,
            threshold,
            ma_window,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ma_window == 0 {
            return Err(Error::invalid("MA window must be at least 1 day"));
        }
        if !(0.0..1.0).contains(&self.threshold) {
            return Err(Error::invalid(format!("threshold {} outside [0, 1)", self.threshold)));
        }
        Ok(())
    }

    pub fn is_submissions_only(&self) -> bool {
        self.comment_set == CommentSet::SubmissionsOnly
    }
}

impl fmt::Display for SignalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.comment_set {
            CommentSet::SubmissionsOnly => write!(f, "sub_{}", self.ma_window),
            set => write!(
                f,
                "com_{}_{}_{}_{}",
                self.ma_window,
                self.threshold,
                u8::from(self.vote_weighting),
                u8::from(set == CommentSet::FirstLevel)
            ),
        }
    }
}

impl FromStr for SignalSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed spec string {s:?}"));
        let parts: Vec<&str> = s.trim().split('_').collect();
        let flag = |p: &str| match p {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(bad()),
        };
        let spec = match parts.as_slice() {
            ["sub", w] => SignalSpec::submissions_only(w.parse().map_err(|_| bad())?),
            ["com", w, tau, weight, first] => SignalSpec {
                comment_set: if flag(first)? {
                    CommentSet::FirstLevel
                } else {
                    CommentSet::KeywordAll
                },
                vote_weighting: flag(weight)?,
                threshold: tau.parse().map_err(|_| bad())?,
                ma_window: w.parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Dimensions of the indicator grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub comment_sets: Vec<CommentSet>,
    pub vote_weighting: Vec<bool>,
    pub thresholds: Vec<f64>,
    pub windows: Vec<u32>,
    /// Also emit one submissions-only spec per window.
    pub submission_specs: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            comment_sets: vec![CommentSet::FirstLevel, CommentSet::KeywordAll],
            vote_weighting: vec![false, true],
            thresholds: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            windows: vec![30, 60, 90, 120, 180, 365],
            submission_specs: true,
        }
    }
}

/// Comment specs (cartesian product of the grid) followed by the
/// submissions-only specs.
pub fn spec_grid(config: &GridConfig) -> Result<Vec<SignalSpec>> {
    let mut out = Vec::new();
    for &set in &config.comment_sets {
        if set == CommentSet::SubmissionsOnly {
            return Err(Error::Config(
                "comment_sets lists submissions_only; use submission_specs instead".into(),
            ));
        }
        for &weighting in &config.vote_weighting {
            for &tau in &config.thresholds {
                for &w in &config.windows {
                    out.push(SignalSpec::comments(set, weighting, tau, w)?);
                }
            }
        }
    }
    if config.submission_specs {
        for &w in &config.windows {
            let spec = SignalSpec::submissions_only(w);
            spec.validate()?;
            out.push(spec);
        }
    }
    Ok(out)
}
