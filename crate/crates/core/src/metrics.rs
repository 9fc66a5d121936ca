//! Set-level statistics: searching efficiency (SER), the Chebyshev distance
//! between attribution sets, the attribution range sum (FER) and the greedy
//! redundancy filter.

use serde::{Deserialize, Serialize};

use crate::attribution::{AttributionSet, AttributionSpace};
use crate::error::{Error, Result};

/// Which subsets an FER sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FerOrder {
    First,
    Second,
    All,
}

impl FerOrder {
    fn includes(self, order: usize) -> bool {
        match self {
            FerOrder::First => order == 1,
            FerOrder::Second => order == 2,
            FerOrder::All => true,
        }
    }
}

/// Share of searched models that landed inside the set.
pub fn ser(n_valid: usize, n_total: usize) -> Result<f64> {
    if n_total == 0 {
        return Err(Error::InvalidArgument("SER of zero searched models".into()));
    }
    if n_valid > n_total {
        return Err(Error::InvalidArgument(format!(
            "{n_valid} valid models out of {n_total} searched"
        )));
    }
    Ok(n_valid as f64 / n_total as f64)
}

/// Largest absolute score difference over the shared subsets.
pub fn chebyshev_distance(a: &AttributionSet, b: &AttributionSet) -> Result<f64> {
    if !a.same_keys(b) {
        return Err(Error::InvalidArgument(format!(
            "attribution sets '{}' and '{}' cover different subsets",
            a.model_id, b.model_id
        )));
    }
    Ok(a.scores
        .values()
        .zip(b.scores.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Sum of interval widths over the subsets of the requested order.
pub fn fer(space: &AttributionSpace, order: FerOrder) -> f64 {
    space
        .subsets
        .iter()
        .filter(|(s, _)| order.includes(s.order()))
        .map(|(_, spread)| spread.width())
        .sum()
}

/// Smallest pairwise distance, or `None` with fewer than two sets.
pub fn min_pairwise_distance(sets: &[AttributionSet]) -> Result<Option<f64>> {
    let mut best: Option<f64> = None;
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            let d = chebyshev_distance(a, b)?;
            best = Some(best.map_or(d, |m| m.min(d)));
        }
    }
    Ok(best)
}

/// Sets kept by [`redundancy_filter`] and the ids it dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtered {
    pub kept: Vec<AttributionSet>,
    pub removed: Vec<String>,
}

/// Greedy first-wins pass: a set is dropped when it lies within `tol` of a
/// set already kept.
pub fn redundancy_filter(sets: &[AttributionSet], tol: f64) -> Result<Filtered> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be >= 0, got {tol}")));
    }
    let mut kept: Vec<AttributionSet> = Vec::new();
    let mut removed = Vec::new();
    'sets: for set in sets {
        for k in &kept {
            if chebyshev_distance(set, k)? <= tol {
                removed.push(set.model_id.clone());
                continue 'sets;
            }
        }
        kept.push(set.clone());
    }
    Ok(Filtered { kept, removed })
}

/// Summary statistics of one sampled set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub ser: f64,
    pub fer_first_order: f64,
    pub fer_second_order: f64,
    pub min_pairwise_distance: Option<f64>,
    pub n_members: usize,
    pub n_searched: usize,
}

impl MetricsReport {
    pub fn compute(
        space: &AttributionSpace,
        sets: &[AttributionSet],
        n_members: usize,
        n_searched: usize,
    ) -> Result<Self> {
        Ok(Self {
            ser: ser(n_members, n_searched)?,
            fer_first_order: fer(space, FerOrder::First),
            fer_second_order: fer(space, FerOrder::Second),
            min_pairwise_distance: min_pairwise_distance(sets)?,
            n_members,
            n_searched,
        })
    }
}
