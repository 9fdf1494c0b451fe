//! Seeded dynamic stochastic block model generator.
//!
//! Reproducibility contract: sampling uses ChaCha20 seeded with the model's
//! 64-bit seed. The n community labels are drawn first (one uniform draw
//! each, inverted through the cumulative distribution of pi), then edges are
//! drawn in (i, j, t) order: i outer, j in (i, n) inner, t innermost, one
//! uniform draw per (i, j, t). Identical (model, seed) therefore produces a
//! bit-identical sample on every platform.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::graph::DynamicGraph;
use crate::matrix::Matrix;

const PI_SUM_TOL: f64 = 1e-12;

/// Dynamic SBM: community probabilities pi, per-snapshot block matrices
/// B^(t), global sparsity rho, node count, and sampling seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SbmModel {
    pub k: usize,
    pub pi: Vec<f64>,
    pub b: Vec<Matrix>,
    pub rho: f64,
    pub n: usize,
    pub seed: u64,
}

impl SbmModel {
    pub fn new(pi: Vec<f64>, b: Vec<Matrix>, rho: f64, n: usize, seed: u64) -> Result<Self> {
        let k = pi.len();
        let model = SbmModel { k, pi, b, rho, n, seed };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Argument("pi is empty".into()));
        }
        let sum: f64 = self.pi.iter().sum();
        if libm::fabs(sum - 1.0) > PI_SUM_TOL {
            return Err(Error::Argument(format!("pi sums to {sum}, expected 1")));
        }
        if self.pi.iter().any(|&p| p <= 0.0) {
            return Err(Error::Argument("every pi_k must be positive".into()));
        }
        if self.b.is_empty() {
            return Err(Error::Argument("need at least one block matrix".into()));
        }
        for (t, bt) in self.b.iter().enumerate() {
            if bt.rows() != self.k || bt.cols() != self.k {
                return Err(Error::Dimension(format!(
                    "B^({t}) is {}x{}, expected {k}x{k}",
                    bt.rows(),
                    bt.cols(),
                    k = self.k
                )));
            }
            if !bt.is_symmetric(0.0) {
                return Err(Error::Argument(format!("B^({t}) is not symmetric")));
            }
            for i in 0..self.k {
                for j in 0..self.k {
                    let v = bt[(i, j)];
                    if !(v > 0.0 && v <= 1.0) {
                        return Err(Error::Argument(format!(
                            "B^({t})[{i},{j}] = {v} violates 0 < B <= 1"
                        )));
                    }
                }
            }
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::Argument(format!("rho = {} not in (0, 1]", self.rho)));
        }
        if self.n == 0 {
            return Err(Error::Argument("n must be positive".into()));
        }
        Ok(())
    }

    pub fn snapshot_count(&self) -> usize {
        self.b.len()
    }

    /// Exact edge-probability matrices for a given label assignment:
    /// P^(t)_{ij} = rho * B^(t)_{z_i z_j}.
    pub fn probability_matrices(&self, labels: &[usize]) -> Vec<Matrix> {
        let n = labels.len();
        self.b
            .iter()
            .map(|bt| {
                let mut p = Matrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        p[(i, j)] = self.rho * bt[(labels[i], labels[j])];
                    }
                }
                p
            })
            .collect()
    }

    /// Groups communities whose B^(t) rows are identical. Two communities in
    /// the same group are indistinguishable at time t (their nodes share
    /// edge-probability rows), so they form one effective community.
    pub fn effective_communities(&self, t: usize) -> Vec<usize> {
        let bt = &self.b[t];
        let mut group = vec![usize::MAX; self.k];
        let mut next = 0;
        for k in 0..self.k {
            if group[k] != usize::MAX {
                continue;
            }
            group[k] = next;
            for l in (k + 1)..self.k {
                if group[l] == usize::MAX && (0..self.k).all(|c| bt[(k, c)] == bt[(l, c)]) {
                    group[l] = next;
                }
            }
            next += 1;
        }
        group
    }

    pub fn sample(&self) -> Result<SbmSample> {
        self.validate()?;
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        let labels: Vec<usize> = (0..self.n).map(|_| draw_categorical(&self.pi, &mut rng)).collect();
        let probability_matrices = self.probability_matrices(&labels);
        let t_count = self.b.len();
        let mut snapshots = vec![Matrix::zeros(self.n, self.n); t_count];
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                for (t, p) in probability_matrices.iter().enumerate() {
                    let u: f64 = rng.gen();
                    if u < p[(i, j)] {
                        snapshots[t][(i, j)] = 1.0;
                        snapshots[t][(j, i)] = 1.0;
                    }
                }
            }
        }
        Ok(SbmSample {
            graph: DynamicGraph::new(self.n, snapshots)?,
            labels,
            probability_matrices,
        })
    }
}

fn draw_categorical(pi: &[f64], rng: &mut ChaCha20Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (k, &p) in pi.iter().enumerate() {
        acc += p;
        if u < acc {
            return k;
        }
    }
    pi.len() - 1
}

/// One draw from a dynamic SBM: the sampled graph, the community labels,
/// and the exact edge-probability matrices (the noise-free oracle input).
#[derive(Debug, Clone)]
pub struct SbmSample {
    pub graph: DynamicGraph,
    pub labels: Vec<usize>,
    pub probability_matrices: Vec<Matrix>,
}

impl SbmSample {
    /// Ground-truth labels at time t after collapsing merged communities.
    pub fn effective_labels(&self, model: &SbmModel, t: usize) -> Vec<usize> {
        let group = model.effective_communities(t);
        self.labels.iter().map(|&z| group[z]).collect()
    }
}

/// The two synthetic configurations: K = 3 communities over T = 3 steps with
/// intra-block probability p = 0.4 and inter-block q = 0.2. All blocks are
/// distinct at t = 1; blocks 1 and 2 merge at t = 2; blocks 2 and 3 merge at
/// t = 3. The presets differ only in the community size distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticPreset {
    /// pi = (0.3, 0.4, 0.3)
    Synthetic1,
    /// pi = (0.4, 0.5, 0.1)
    Synthetic2,
}

impl SyntheticPreset {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "synthetic1" => Ok(SyntheticPreset::Synthetic1),
            "synthetic2" => Ok(SyntheticPreset::Synthetic2),
            _ => Err(Error::Argument(format!("unknown preset '{name}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SyntheticPreset::Synthetic1 => "synthetic1",
            SyntheticPreset::Synthetic2 => "synthetic2",
        }
    }

    pub fn model(&self, n: usize, seed: u64) -> SbmModel {
        let (p, q) = (0.4, 0.2);
        let b1 = block_matrix(&[[p, q, q], [q, p, q], [q, q, p]]);
        let b2 = block_matrix(&[[p, p, q], [p, p, q], [q, q, p]]);
        let b3 = block_matrix(&[[p, q, q], [q, p, p], [q, p, p]]);
        let pi = match self {
            SyntheticPreset::Synthetic1 => vec![0.3, 0.4, 0.3],
            SyntheticPreset::Synthetic2 => vec![0.4, 0.5, 0.1],
        };
        SbmModel::new(pi, vec![b1, b2, b3], 1.0, n, seed).expect("preset model is valid")
    }
}

fn block_matrix(rows: &[[f64; 3]; 3]) -> Matrix {
    let mut m = Matrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = rows[i][j];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn all_ones_blocks_give_complete_graph() {
        let b = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let model = SbmModel::new(vec![0.5, 0.5], vec![b], 1.0, 6, 3).unwrap();
        let sample = model.sample().unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let expect = if i == j { 0.0 } else { 1.0 };
                assert_eq!(sample.graph.snapshot(0)[(i, j)], expect);
            }
        }
    }

    #[test]
    fn boundary_block_validation() {
        let tiny = Matrix::from_rows(&[vec![1e-9, 1e-9], vec![1e-9, 1e-9]]).unwrap();
        assert!(SbmModel::new(vec![0.5, 0.5], vec![tiny], 1.0, 4, 0).is_ok());
        let zero = Matrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert!(SbmModel::new(vec![0.5, 0.5], vec![zero], 1.0, 4, 0).is_err());
    }

    #[test]
    fn non_normalized_pi_rejected() {
        let b = Matrix::from_rows(&[vec![0.5]]).unwrap();
        assert!(SbmModel::new(vec![0.9], vec![b], 1.0, 4, 0).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let model = SyntheticPreset::Synthetic1.model(40, 7);
        let a = model.sample().unwrap();
        let b = model.sample().unwrap();
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.graph, b.graph);
    }

    #[test]
    fn different_seed_changes_sample() {
        let a = SyntheticPreset::Synthetic1.model(40, 7).sample().unwrap();
        let b = SyntheticPreset::Synthetic1.model(40, 8).sample().unwrap();
        assert_ne!(a.graph, b.graph);
    }

    #[test]
    fn probability_matrices_exact() {
        let model = SyntheticPreset::Synthetic1.model(30, 5);
        let sample = model.sample().unwrap();
        for (t, p) in sample.probability_matrices.iter().enumerate() {
            for i in 0..30 {
                for j in 0..30 {
                    assert_eq!(
                        p[(i, j)],
                        model.b[t][(sample.labels[i], sample.labels[j])]
                    );
                }
            }
        }
    }

    #[test]
    fn preset_pis_and_blocks() {
        let m1 = SyntheticPreset::Synthetic1.model(10, 0);
        assert_eq!(m1.pi, vec![0.3, 0.4, 0.3]);
        let m2 = SyntheticPreset::Synthetic2.model(10, 0);
        assert_eq!(m2.pi, vec![0.4, 0.5, 0.1]);
        // t = 1: p on the diagonal, q off.
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 0.4 } else { 0.2 };
                assert_eq!(m1.b[0][(i, j)], expect);
            }
        }
        // merge pattern: rows 0,1 of B^(2) identical; rows 1,2 of B^(3).
        for c in 0..3 {
            assert_eq!(m1.b[1][(0, c)], m1.b[1][(1, c)]);
            assert_eq!(m1.b[2][(1, c)], m1.b[2][(2, c)]);
        }
        assert_eq!(m1.effective_communities(0), vec![0, 1, 2]);
        assert_eq!(m1.effective_communities(1), vec![0, 0, 1]);
        assert_eq!(m1.effective_communities(2), vec![0, 1, 1]);
    }

    #[test]
    fn label_frequencies_follow_pi() {
        let model = SyntheticPreset::Synthetic1.model(5000, 11);
        let sample = model.sample().unwrap();
        for (k, &pk) in model.pi.iter().enumerate() {
            let freq = sample.labels.iter().filter(|&&z| z == k).count() as f64 / 5000.0;
            let se = libm::sqrt(pk * (1.0 - pk) / 5000.0);
            assert!(
                libm::fabs(freq - pk) < 4.0 * se,
                "community {k}: freq {freq} vs pi {pk}"
            );
        }
    }

    #[test]
    fn edge_frequency_matches_probability() {
        // 10,000 Bernoulli draws at a fixed (i, j, t) across seeds.
        let b = Matrix::from_rows(&[vec![0.3]]).unwrap();
        let mut hits = 0;
        let trials = 10_000;
        for seed in 0..trials {
            let model = SbmModel::new(vec![1.0], vec![b.clone()], 1.0, 2, seed).unwrap();
            let sample = model.sample().unwrap();
            if sample.graph.snapshot(0)[(0, 1)] == 1.0 {
                hits += 1;
            }
        }
        let freq = hits as f64 / trials as f64;
        let se = libm::sqrt(0.3 * 0.7 / trials as f64);
        assert!(libm::fabs(freq - 0.3) < 3.0 * se, "freq {freq}");
    }
}
