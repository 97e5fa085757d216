//! Replication-level evaluation criteria: mean rank of each active
//! predictor, quantiles of the minimum model size, and selection rates.

use std::collections::BTreeMap;

use crate::error::{Result, ScreenError};
use crate::ranking::ScreeningResult;

/// Quantile levels reported for the minimum model size.
pub const DEFAULT_QUANTILE_LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

/// 1-based rank of predictor `k` (0-based index).
pub fn rank_of(result: &ScreeningResult, k: usize) -> Result<usize> {
    result.rank_of(k)
}

/// Smallest `d` whose top-`d` set contains every active predictor.
pub fn min_model_size(result: &ScreeningResult, active: &[usize]) -> Result<usize> {
    if active.is_empty() {
        return Err(ScreenError::EmptyActiveSet);
    }
    active
        .iter()
        .try_fold(0, |acc, &k| Ok(acc.max(result.rank_of(k)?)))
}

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman–Fan type 7). `sorted` must be ascending and non-empty.
pub fn quantile_type7(sorted: &[f64], level: f64) -> f64 {
    let n = sorted.len();
    let h = (n - 1) as f64 * level.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Criteria aggregated over replications. Predictor keys are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationMetrics {
    pub replications: usize,
    pub active: Vec<usize>,
    /// Mean rank of each active predictor.
    pub rank_by_active: BTreeMap<usize, f64>,
    /// `(level, quantile)` pairs for the minimum model size.
    pub min_model_size_quantiles: Vec<(f64, f64)>,
    /// Fraction of replications with every active predictor in the top `d`.
    pub p_all: BTreeMap<usize, f64>,
    /// Fraction of replications with predictor `k` in the top `d`, keyed `(d, k)`.
    pub p_each: BTreeMap<(usize, usize), f64>,
}

pub fn aggregate(
    per_rep: &[(ScreeningResult, Vec<usize>)],
    cutoffs: &[usize],
    quantile_levels: &[f64],
) -> Result<EvaluationMetrics> {
    let (first, active) = per_rep
        .first()
        .ok_or_else(|| ScreenError::InconsistentDimensions("no replications".into()))?;
    if active.is_empty() {
        return Err(ScreenError::EmptyActiveSet);
    }
    let p = first.p();
    for &d in cutoffs {
        if d == 0 || d > p {
            return Err(ScreenError::InvalidCutoff { d, p });
        }
    }
    for (r, (res, act)) in per_rep.iter().enumerate() {
        if res.p() != p {
            return Err(ScreenError::InconsistentDimensions(format!(
                "replication {r} has p = {}, expected {p}",
                res.p()
            )));
        }
        if act != active {
            return Err(ScreenError::InconsistentDimensions(format!(
                "replication {r} has a different active set"
            )));
        }
    }

    let reps = per_rep.len() as f64;
    let mut rank_sums: BTreeMap<usize, usize> = active.iter().map(|&k| (k, 0)).collect();
    let mut sizes = Vec::with_capacity(per_rep.len());
    let mut all_hits: BTreeMap<usize, usize> = cutoffs.iter().map(|&d| (d, 0)).collect();
    let mut each_hits: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &d in cutoffs {
        for &k in active {
            each_hits.insert((d, k), 0);
        }
    }

    for (res, act) in per_rep {
        let mut worst = 0;
        for &k in act {
            let rank = res.rank_of(k)?;
            *rank_sums.get_mut(&k).expect("seeded") += rank;
            worst = worst.max(rank);
            for &d in cutoffs {
                if rank <= d {
                    *each_hits.get_mut(&(d, k)).expect("seeded") += 1;
                }
            }
        }
        sizes.push(worst as f64);
        for &d in cutoffs {
            if worst <= d {
                *all_hits.get_mut(&d).expect("seeded") += 1;
            }
        }
    }

    sizes.sort_by(f64::total_cmp);
    Ok(EvaluationMetrics {
        replications: per_rep.len(),
        active: active.clone(),
        rank_by_active: rank_sums
            .into_iter()
            .map(|(k, s)| (k, s as f64 / reps))
            .collect(),
        min_model_size_quantiles: quantile_levels
            .iter()
            .map(|&q| (q, quantile_type7(&sizes, q)))
            .collect(),
        p_all: all_hits
            .into_iter()
            .map(|(d, c)| (d, c as f64 / reps))
            .collect(),
        p_each: each_hits
            .into_iter()
            .map(|(key, c)| (key, c as f64 / reps))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ranking::{rank_and_select, Method, UtilityVector};

    fn result(omega: &[f64]) -> ScreeningResult {
        rank_and_select(UtilityVector::new(Method::Csirs, omega.to_vec()), &[]).unwrap()
    }

    #[test]
    fn ranks() {
        let r = result(&[0.1, 0.9, 0.5]);
        assert_eq!(rank_of(&r, 1).unwrap(), 1);
        assert_eq!(rank_of(&r, 0).unwrap(), 3);
        assert!(rank_of(&r, 3).is_err());
        assert_eq!(rank_of(&result(&[0.5, 0.5]), 1).unwrap(), 2);
    }

    #[test]
    fn minimum_model_sizes() {
        let r = result(&[0.9, 0.1, 0.8, 0.2, 0.7, 0.3]);
        // ranking: 0, 2, 4, 5, 3, 1
        assert_eq!(min_model_size(&r, &[0, 2, 4]).unwrap(), 3);
        assert_eq!(min_model_size(&r, &[0, 4, 3]).unwrap(), 5);
        assert_eq!(min_model_size(&r, &[1]).unwrap(), 6);
        assert_eq!(
            min_model_size(&r, &[]).unwrap_err(),
            ScreenError::EmptyActiveSet
        );
    }

    #[test]
    fn type7_quantiles() {
        assert_eq!(quantile_type7(&[10.0, 20.0], 0.5), 15.0);
        assert_eq!(quantile_type7(&[7.0], 0.95), 7.0);
        // R: quantile(1:10, 0.05) = 1.45, quantile(1:10, 0.95) = 9.55
        let v: Vec<f64> = (1..=10).map(f64::from).collect();
        assert!((quantile_type7(&v, 0.05) - 1.45).abs() < 1e-12);
        assert!((quantile_type7(&v, 0.95) - 9.55).abs() < 1e-12);
    }

    #[test]
    fn aggregate_two_replications() {
        let active = vec![0, 1];
        // S = 2 in the first, S = 4 in the second.
        let a = result(&[0.9, 0.8, 0.1, 0.2]);
        let b = result(&[0.9, 0.1, 0.5, 0.4]);
        let m = aggregate(
            &[(a, active.clone()), (b, active.clone())],
            &[2, 3, 4],
            &DEFAULT_QUANTILE_LEVELS,
        )
        .unwrap();
        assert_eq!(m.rank_by_active[&0], 1.0);
        assert_eq!(m.rank_by_active[&1], 3.0);
        assert_eq!(m.min_model_size_quantiles[2], (0.5, 3.0));
        assert_eq!(m.p_all[&2], 0.5);
        assert_eq!(m.p_all[&3], 0.5);
        assert_eq!(m.p_all[&4], 1.0);
        assert_eq!(m.p_each[&(2, 0)], 1.0);
        assert_eq!(m.p_each[&(2, 1)], 0.5);
        assert_eq!(m.p_each[&(3, 1)], 0.5);
    }

    #[test]
    fn single_replication_quantiles_collapse() {
        let r = result(&[0.3, 0.9, 0.1, 0.5]);
        let m = aggregate(&[(r, vec![0, 3])], &[4], &DEFAULT_QUANTILE_LEVELS).unwrap();
        assert!(m.min_model_size_quantiles.iter().all(|&(_, v)| v == 3.0));
        assert_eq!(m.p_all[&4], 1.0);
    }

    #[test]
    fn aggregate_errors() {
        assert!(aggregate(&[], &[1], &DEFAULT_QUANTILE_LEVELS).is_err());
        let a = result(&[0.1, 0.2, 0.3]);
        let b = result(&[0.1, 0.2]);
        assert!(matches!(
            aggregate(
                &[(a.clone(), vec![0]), (b, vec![0])],
                &[1],
                &DEFAULT_QUANTILE_LEVELS
            ),
            Err(ScreenError::InconsistentDimensions(_))
        ));
        assert!(matches!(
            aggregate(&[(a, vec![0])], &[4], &DEFAULT_QUANTILE_LEVELS),
            Err(ScreenError::InvalidCutoff { .. })
        ));
    }
}
