use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ScreenError};

/// Screening method that produced a utility vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Csirs,
    Sirs,
    Dcsis,
    Ccsis,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Csirs, Method::Sirs, Method::Dcsis, Method::Ccsis];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Csirs => "csirs",
            Method::Sirs => "sirs",
            Method::Dcsis => "dcsis",
            Method::Ccsis => "ccsis",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s
            .trim()
            .to_ascii_lowercase()
            .replace(['-', '_'], "")
            .as_str()
        {
            "csirs" => Ok(Method::Csirs),
            "sirs" => Ok(Method::Sirs),
            "dcsis" => Ok(Method::Dcsis),
            "ccsis" => Ok(Method::Ccsis),
            other => Err(format!("unknown method '{other}'")),
        }
    }
}

/// Per-predictor marginal utilities from one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityVector {
    pub method: Method,
    pub omega: Vec<f64>,
}

impl UtilityVector {
    pub fn new(method: Method, omega: Vec<f64>) -> Self {
        Self { method, omega }
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }
}

/// Utilities, their descending ranking, and the top-`d` sets.
///
/// Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreeningResult {
    pub utilities: UtilityVector,
    /// `ranking[r]` is the predictor at 0-based position `r`.
    pub ranking: Vec<usize>,
    /// `positions[k]` is the 0-based position of predictor `k`.
    positions: Vec<usize>,
    pub selected: BTreeMap<usize, Vec<usize>>,
}

impl ScreeningResult {
    pub fn p(&self) -> usize {
        self.ranking.len()
    }

    /// 1-based rank of predictor `k` (0-based index).
    pub fn rank_of(&self, k: usize) -> Result<usize> {
        self.positions
            .get(k)
            .map(|&pos| pos + 1)
            .ok_or(ScreenError::IndexOutOfRange {
                index: k,
                p: self.p(),
            })
    }

    /// Top-`d` predictors, in rank order.
    pub fn top(&self, d: usize) -> Result<&[usize]> {
        if d == 0 || d > self.p() {
            return Err(ScreenError::InvalidCutoff { d, p: self.p() });
        }
        Ok(&self.ranking[..d])
    }
}

/// Sorts predictors by descending utility and records the top-`d` set for
/// each cutoff. Ties go to the smaller index.
pub fn rank_and_select(utilities: UtilityVector, cutoffs: &[usize]) -> Result<ScreeningResult> {
    let p = utilities.len();
    for &d in cutoffs {
        if d == 0 || d > p {
            return Err(ScreenError::InvalidCutoff { d, p });
        }
    }
    let mut ranking: Vec<usize> = (0..p).collect();
    // total_cmp puts -0.0 below 0.0; normalise so tied zeros fall back to index order.
    let key = |v: f64| if v == 0.0 { 0.0 } else { v };
    ranking.sort_by(|&a, &b| {
        key(utilities.omega[b])
            .total_cmp(&key(utilities.omega[a]))
            .then(a.cmp(&b))
    });
    let mut positions = vec![0; p];
    for (pos, &k) in ranking.iter().enumerate() {
        positions[k] = pos;
    }
    let selected = cutoffs
        .iter()
        .map(|&d| (d, ranking[..d].to_vec()))
        .collect();
    Ok(ScreeningResult {
        utilities,
        ranking,
        positions,
        selected,
    })
}

/// Submodel size `nu * floor(n^(4/5) / ln(n^(4/5)))`.
pub fn submodel_size(n: usize, nu: usize) -> usize {
    let m = (n as f64).powf(0.8);
    nu * (m / m.ln()).floor() as usize
}
