//! External clustering metrics: accuracy under the optimal label matching,
//! normalized mutual information, adjusted Rand index, and macro-F1 computed
//! after the same matching. All are invariant to relabeling of either input.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringMetrics {
    pub accuracy: f64,
    pub nmi: f64,
    pub ari: f64,
    pub macro_f1: f64,
}

/// Computes all metrics for a predicted labeling against ground truth.
pub fn evaluate(truth: &[usize], predicted: &[usize]) -> Result<ClusteringMetrics> {
    if truth.len() != predicted.len() {
        return Err(Error::Dimension(format!(
            "truth has {} labels, prediction has {}",
            truth.len(),
            predicted.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::Argument("empty labelings".into()));
    }
    let (contingency, _, _) = contingency_table(truth, predicted);
    let assignment = hungarian_max(&contingency);
    Ok(ClusteringMetrics {
        accuracy: accuracy_from(&contingency, &assignment, truth.len()),
        nmi: nmi_from(&contingency, truth.len()),
        ari: ari_from(&contingency, truth.len()),
        macro_f1: macro_f1_from(&contingency, &assignment),
    })
}

pub fn accuracy(truth: &[usize], predicted: &[usize]) -> Result<f64> {
    Ok(evaluate(truth, predicted)?.accuracy)
}

/// Contingency counts (truth classes x predicted clusters), using compacted
/// label indices so sparse label values cost nothing.
fn contingency_table(truth: &[usize], predicted: &[usize]) -> (Vec<Vec<usize>>, Vec<usize>, Vec<usize>) {
    let t_ids = compact(truth);
    let p_ids = compact(predicted);
    let rows = t_ids.iter().copied().max().unwrap() + 1;
    let cols = p_ids.iter().copied().max().unwrap() + 1;
    let mut table = vec![vec![0usize; cols]; rows];
    for (&a, &b) in t_ids.iter().zip(&p_ids) {
        table[a][b] += 1;
    }
    (table, t_ids, p_ids)
}

fn compact(labels: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .iter()
        .map(|&l| match seen.iter().position(|&s| s == l) {
            Some(i) => i,
            None => {
                seen.push(l);
                seen.len() - 1
            }
        })
        .collect()
}

/// Maximum-weight one-to-one matching of predicted clusters (columns) to
/// truth classes (rows) via the Hungarian algorithm on the padded square
/// negated table. Returns, for each column, the matched row (or usize::MAX
/// for padding rows).
fn hungarian_max(table: &[Vec<usize>]) -> Vec<usize> {
    let rows = table.len();
    let cols = table[0].len();
    let n = rows.max(cols);
    let max_val = table.iter().flatten().copied().max().unwrap_or(0) as f64;
    // Convert to a min-cost square problem.
    let mut cost = vec![vec![0.0f64; n]; n];
    for (i, row) in cost.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            let w = if i < rows && j < cols { table[i][j] as f64 } else { 0.0 };
            *c = max_val - w;
        }
    }
    let row_of_col = hungarian_min(&cost);
    (0..cols)
        .map(|j| {
            let r = row_of_col[j];
            if r < rows {
                r
            } else {
                usize::MAX
            }
        })
        .collect()
}

/// Standard O(n^3) Hungarian algorithm (potentials form); `cost` is square.
/// Returns for each column its assigned row.
fn hungarian_min(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let inf = f64::INFINITY;
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![n; n + 1]; // p[j] = row assigned to column j (n = none)
    let mut way = vec![0usize; n + 1];
    for i in 0..n {
        p[n] = i;
        let mut j0 = n;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = n;
            for j in 0..n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0][j] - u[i0 + 1] - v[j + 1];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j] + 1] += delta;
                    v[j + 1] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == n {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == n {
                break;
            }
        }
    }
    (0..n).map(|j| p[j]).collect()
}

fn accuracy_from(table: &[Vec<usize>], col_to_row: &[usize], n: usize) -> f64 {
    let mut correct = 0usize;
    for (j, &r) in col_to_row.iter().enumerate() {
        if r != usize::MAX {
            correct += table[r][j];
        }
    }
    correct as f64 / n as f64
}

/// NMI with arithmetic-mean normalization: I(T; P) / ((H(T) + H(P)) / 2).
/// Degenerate rule when either entropy is zero: 1 if the partitions are
/// identical (both single-cluster), 0 otherwise.
fn nmi_from(table: &[Vec<usize>], n: usize) -> f64 {
    let nf = n as f64;
    let row_sums: Vec<usize> = table.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<usize> = (0..table[0].len())
        .map(|j| table.iter().map(|r| r[j]).sum())
        .collect();
    let h_t = entropy(&row_sums, nf);
    let h_p = entropy(&col_sums, nf);
    if h_t == 0.0 || h_p == 0.0 {
        return if h_t == 0.0 && h_p == 0.0 { 1.0 } else { 0.0 };
    }
    let mut mi = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let pij = c as f64 / nf;
            let pi = row_sums[i] as f64 / nf;
            let pj = col_sums[j] as f64 / nf;
            mi += pij * libm::log(pij / (pi * pj));
        }
    }
    (mi / (0.5 * (h_t + h_p))).clamp(0.0, 1.0)
}

fn entropy(counts: &[usize], n: f64) -> f64 {
    let mut h = 0.0;
    for &c in counts {
        if c == 0 {
            continue;
        }
        let p = c as f64 / n;
        h -= p * libm::log(p);
    }
    h
}

fn ari_from(table: &[Vec<usize>], n: usize) -> f64 {
    let choose2 = |x: usize| -> f64 { (x as f64) * (x as f64 - 1.0) / 2.0 };
    let row_sums: Vec<usize> = table.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<usize> = (0..table[0].len())
        .map(|j| table.iter().map(|r| r[j]).sum())
        .collect();
    let sum_ij: f64 = table.iter().flatten().map(|&c| choose2(c)).sum();
    let sum_a: f64 = row_sums.iter().map(|&c| choose2(c)).sum();
    let sum_b: f64 = col_sums.iter().map(|&c| choose2(c)).sum();
    let total = choose2(n);
    let expected = sum_a * sum_b / total;
    let max_index = 0.5 * (sum_a + sum_b);
    if (max_index - expected).abs() < 1e-15 {
        // Both partitions trivial (all-one-cluster or all-singletons).
        return 1.0;
    }
    (sum_ij - expected) / (max_index - expected)
}

/// Macro-F1 over truth classes after the one-to-one matching: a truth class
/// with no matched predicted cluster scores F1 = 0.
fn macro_f1_from(table: &[Vec<usize>], col_to_row: &[usize]) -> f64 {
    let rows = table.len();
    let col_sums: Vec<usize> = (0..table[0].len())
        .map(|j| table.iter().map(|r| r[j]).sum())
        .collect();
    let row_sums: Vec<usize> = table.iter().map(|r| r.iter().sum()).collect();
    let mut total = 0.0;
    for r in 0..rows {
        let matched_col = col_to_row.iter().position(|&x| x == r);
        let f1 = match matched_col {
            None => 0.0,
            Some(j) => {
                let tp = table[r][j] as f64;
                let prec_den = col_sums[j] as f64;
                let rec_den = row_sums[r] as f64;
                if tp == 0.0 {
                    0.0
                } else {
                    let p = tp / prec_den;
                    let rc = tp / rec_den;
                    2.0 * p * rc / (p + rc)
                }
            }
        };
        total += f1;
    }
    total / rows as f64
}
