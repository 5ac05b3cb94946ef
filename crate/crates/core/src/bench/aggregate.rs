use std::collections::BTreeMap;

use ordered_float::OrderedFloat;

use super::sweep::TrialRecord;
use crate::error::{Error, Result};
use crate::generator::FamilyKind;
use crate::matcher::AlgorithmSpec;

/// Statistics of one `(family, n, c, algorithm)` cell.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateRecord {
    pub family: FamilyKind,
    pub n: usize,
    pub c: f64,
    pub algorithm: AlgorithmSpec,
    /// Fraction of trials whose matching was not maximum.
    pub lambda: Option<f64>,
    /// Mean shortfall over failing trials; 0 without failures.
    pub rho: Option<f64>,
    pub t_bar: f64,
    /// Unbiased sample variance of the wall time (0 for a single trial).
    pub t_var: f64,
    pub f_o1: f64,
    pub f_o2: f64,
    pub f_h: f64,
}

type CellKey = (FamilyKind, usize, OrderedFloat<f64>, AlgorithmSpec);

/// Groups records by cell. Output is sorted by family, `n`, `c` and
/// algorithm, and within a cell trials are combined in trial order, so the
/// result does not depend on the order of `records`.
///
/// Cells whose records lack oracle sizes get `lambda = rho = None`, or a
/// configuration error when `require_quality` is set.
pub fn aggregate(records: &[TrialRecord], require_quality: bool) -> Result<Vec<AggregateRecord>> {
    if records.is_empty() {
        return Err(Error::Config("no trial records to aggregate".into()));
    }
    let mut cells: BTreeMap<CellKey, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        cells
            .entry((r.family, r.n, OrderedFloat(r.c), r.algorithm))
            .or_default()
            .push(r);
    }

    let mut out = Vec::with_capacity(cells.len());
    for ((family, n, c, algorithm), mut trials) in cells {
        trials.sort_by_key(|r| r.trial_index);
        let count = trials.len() as f64;

        let lost: Option<Vec<usize>> = trials.iter().map(|r| r.lost_edges()).collect();
        let (lambda, rho) = match lost {
            Some(lost) => {
                let failing: Vec<usize> = lost.into_iter().filter(|&l| l > 0).collect();
                let rho = if failing.is_empty() {
                    0.0
                } else {
                    failing.iter().sum::<usize>() as f64 / failing.len() as f64
                };
                (Some(failing.len() as f64 / count), Some(rho))
            }
            None if require_quality => {
                return Err(Error::Config(format!(
                    "failure rate requested but cell ({family}, n={n}, c={}, {algorithm}) has no oracle sizes",
                    c.0
                )));
            }
            None => (None, None),
        };

        let t_bar = trials.iter().map(|r| r.wall_time_seconds).sum::<f64>() / count;
        let t_var = if trials.len() > 1 {
            trials
                .iter()
                .map(|r| (r.wall_time_seconds - t_bar).powi(2))
                .sum::<f64>()
                / (count - 1.0)
        } else {
            0.0
        };

        let fractions: Vec<(f64, f64, f64)> = trials
            .iter()
            .filter_map(|r| {
                let total = (r.o1 + r.o2 + r.h) as f64;
                (total > 0.0).then(|| (r.o1 as f64 / total, r.o2 as f64 / total, r.h as f64 / total))
            })
            .collect();
        let (f_o1, f_o2, f_h) = if fractions.is_empty() {
            (0.0, 0.0, 0.0)
        } else {
            let k = fractions.len() as f64;
            let sum = fractions
                .iter()
                .fold((0.0, 0.0, 0.0), |a, f| (a.0 + f.0, a.1 + f.1, a.2 + f.2));
            (sum.0 / k, sum.1 / k, sum.2 / k)
        };

        out.push(AggregateRecord {
            family,
            n,
            c: c.0,
            algorithm,
            lambda,
            rho,
            t_bar,
            t_var,
            f_o1,
            f_o2,
            f_h,
        });
    }
    Ok(out)
}
