//! Empirical stability checks: given an embedding and a set of declared
//! equal-behavior hypotheses, report the worst row distance each hypothesis
//! class attains. Cross-sectional hypotheses name node pairs whose
//! edge-probability rows coincide at one time; longitudinal hypotheses name a
//! node whose rows coincide at two times.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::spectral::EmbeddingResult;

/// Nodes i and j have identical behavior at snapshot t.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossSectionalPair {
    pub t: usize,
    pub i: usize,
    pub j: usize,
}

/// Node has identical behavior at snapshots t and u.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LongitudinalTriple {
    pub node: usize,
    pub t: usize,
    pub u: usize,
}

#[derive(Debug, Clone, Default)]
pub struct StabilityHypotheses {
    pub cross_sectional: Vec<CrossSectionalPair>,
    pub longitudinal: Vec<LongitudinalTriple>,
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    /// Max row distance over the cross-sectional pairs, absolute.
    pub cross_sectional_max: f64,
    /// Same, divided by the Frobenius norm of the snapshot the pair lives in.
    pub cross_sectional_max_relative: f64,
    /// Max row distance over the longitudinal triples, absolute.
    pub longitudinal_max: f64,
    /// Same, divided by the larger of the two snapshot norms.
    pub longitudinal_max_relative: f64,
    pub hypotheses: StabilityHypotheses,
}

/// Derives the hypothesis set directly from exact edge-probability matrices:
/// a cross-sectional pair whenever two rows of P^(t) coincide, a longitudinal
/// triple whenever a node's rows at two times coincide. Exact float equality
/// is intended — the inputs are constructed, not estimated.
pub fn hypotheses_from_probabilities(probs: &[Matrix]) -> StabilityHypotheses {
    let mut out = StabilityHypotheses::default();
    let n = probs.first().map_or(0, Matrix::rows);
    for (t, p) in probs.iter().enumerate() {
        for i in 0..n {
            for j in (i + 1)..n {
                if rows_equal(p, i, p, j) {
                    out.cross_sectional.push(CrossSectionalPair { t, i, j });
                }
            }
        }
    }
    for t in 0..probs.len() {
        for u in (t + 1)..probs.len() {
            for node in 0..n {
                if rows_equal(&probs[t], node, &probs[u], node) {
                    out.longitudinal.push(LongitudinalTriple { node, t, u });
                }
            }
        }
    }
    out
}

fn rows_equal(a: &Matrix, i: usize, b: &Matrix, j: usize) -> bool {
    (0..a.cols()).all(|c| a[(i, c)] == b[(j, c)])
}

/// Evaluates the declared hypotheses against the dynamic blocks of an
/// embedding. No alignment is applied: all rows of one result live in a
/// single coordinate system.
pub fn stability_report(emb: &EmbeddingResult, hypotheses: &StabilityHypotheses) -> Result<StabilityReport> {
    let t_count = emb.dynamic.len();
    let n = emb.dynamic.first().map_or(0, Matrix::rows);
    let norms: Vec<f64> = emb.dynamic.iter().map(Matrix::frobenius_norm).collect();
    let mut cs_abs = 0.0f64;
    let mut cs_rel = 0.0f64;
    for pair in &hypotheses.cross_sectional {
        if pair.t >= t_count || pair.i >= n || pair.j >= n {
            return Err(Error::Argument(format!(
                "cross-sectional hypothesis out of range: t={} i={} j={}",
                pair.t, pair.i, pair.j
            )));
        }
        let y = &emb.dynamic[pair.t];
        let d = row_distance(y, pair.i, y, pair.j);
        cs_abs = cs_abs.max(d);
        if norms[pair.t] > 0.0 {
            cs_rel = cs_rel.max(d / norms[pair.t]);
        }
    }
    let mut lg_abs = 0.0f64;
    let mut lg_rel = 0.0f64;
    for triple in &hypotheses.longitudinal {
        if triple.t >= t_count || triple.u >= t_count || triple.node >= n {
            return Err(Error::Argument(format!(
                "longitudinal hypothesis out of range: node={} t={} u={}",
                triple.node, triple.t, triple.u
            )));
        }
        let d = row_distance(&emb.dynamic[triple.t], triple.node, &emb.dynamic[triple.u], triple.node);
        lg_abs = lg_abs.max(d);
        let scale = norms[triple.t].max(norms[triple.u]);
        if scale > 0.0 {
            lg_rel = lg_rel.max(d / scale);
        }
    }
    Ok(StabilityReport {
        cross_sectional_max: cs_abs,
        cross_sectional_max_relative: cs_rel,
        longitudinal_max: lg_abs,
        longitudinal_max_relative: lg_rel,
        hypotheses: hypotheses.clone(),
    })
}

fn row_distance(a: &Matrix, i: usize, b: &Matrix, j: usize) -> f64 {
    let mut s = 0.0;
    for c in 0..a.cols() {
        let diff = a[(i, c)] - b[(j, c)];
        s += diff * diff;
    }
    libm::sqrt(s)
}
