//! Exact k-way conductance by brute force at small n, and verification of
//! the dynamic spectral lower bound
//! √(max{σ_k² − min_t ‖L^{−t}‖², 0}) / 2 ≤ φ_k(𝒢),
//! where σ_k is the k-th smallest singular value of the unfolded
//! bottom-window Laplacian and L^{−t} is that operator with snapshot t
//! removed.
//!
//! Conventions: for k = 2 the conductance of a cut is cut(S)/min(vol S,
//! vol S̄); for k ≥ 3 a partition scores max_j cut(S_j)/vol(S_j) and φ_k is
//! the minimum over partitions into k nonempty parts. Dynamic conductance is
//! the max over snapshots.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::DynamicGraph;
use crate::matrix::Matrix;
use crate::operators::{self, OperatorVariant};

/// 2^n subset enumeration cap for k = 2.
pub const MAX_N_BISECTION: usize = 16;
/// Set-partition enumeration cap for k >= 3.
pub const MAX_N_PARTITION: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conductance {
    pub phi: f64,
    /// True when the graph is disconnected (phi is then exactly 0).
    pub disconnected: bool,
}

/// Exact k-way conductance of a weighted adjacency matrix.
pub fn conductance_exact(adjacency: &Matrix, k: usize) -> Result<Conductance> {
    let n = adjacency.rows();
    if n != adjacency.cols() || !adjacency.is_symmetric(0.0) {
        return Err(Error::Argument("adjacency must be square and symmetric".into()));
    }
    if k < 2 || k > n {
        return Err(Error::Argument("need 2 <= k <= n".into()));
    }
    let limit = if k == 2 { MAX_N_BISECTION } else { MAX_N_PARTITION };
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    let degrees = adjacency.row_sums();
    if !is_connected(adjacency) {
        return Ok(Conductance { phi: 0.0, disconnected: true });
    }
    let phi = if k == 2 {
        bisection_min(adjacency, &degrees)
    } else {
        partition_min(adjacency, &degrees, k)
    };
    Ok(Conductance { phi, disconnected: false })
}

fn is_connected(a: &Matrix) -> bool {
    let n = a.rows();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && a[(i, j)] > 0.0 {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn bisection_min(a: &Matrix, degrees: &[f64]) -> f64 {
    let n = a.rows();
    let total: f64 = degrees.iter().sum();
    let mut best = f64::INFINITY;
    // Node n-1 fixed outside S: each cut is visited once.
    for mask in 1u32..(1u32 << (n - 1)) {
        let mut vol = 0.0;
        let mut cut = 0.0;
        for i in 0..n {
            if mask & (1 << i) == 0 {
                continue;
            }
            vol += degrees[i];
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    cut += a[(i, j)];
                }
            }
        }
        let denom = vol.min(total - vol);
        if denom > 0.0 {
            best = best.min(cut / denom);
        }
    }
    best
}

fn partition_min(a: &Matrix, degrees: &[f64], k: usize) -> f64 {
    let n = a.rows();
    // Restricted-growth-string enumeration of set partitions into exactly
    // k blocks; node 0 is always in block 0, so each partition appears once.
    let mut assign = vec![0usize; n];
    let mut best = f64::INFINITY;
    enumerate_rgs(&mut assign, 1, 0, k, &mut |labels| {
        let mut vol = vec![0.0f64; k];
        let mut cut = vec![0.0f64; k];
        for i in 0..n {
            vol[labels[i]] += degrees[i];
            for j in 0..n {
                if labels[j] != labels[i] {
                    cut[labels[i]] += a[(i, j)];
                }
            }
        }
        let mut worst = 0.0f64;
        for p in 0..k {
            if vol[p] <= 0.0 {
                return; // a zero-volume part cannot witness the minimum
            }
            worst = worst.max(cut[p] / vol[p]);
        }
        best = best.min(worst);
    });
    best
}

fn enumerate_rgs(assign: &mut [usize], pos: usize, max_used: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    let n = assign.len();
    if pos == n {
        if max_used + 1 == k {
            f(assign);
        }
        return;
    }
    // blocks still needed must fit in the remaining positions
    let remaining = n - pos;
    let needed = k.saturating_sub(max_used + 1);
    if needed > remaining {
        return;
    }
    let cap = (max_used + 1).min(k - 1);
    for b in 0..=cap {
        assign[pos] = b;
        let nm = max_used.max(b);
        enumerate_rgs(assign, pos + 1, nm, k, f);
    }
}

#[derive(Debug, Clone)]
pub struct CheegerReport {
    pub k: usize,
    /// k-th smallest singular value of the unfolded Laplacian.
    pub sigma_k: f64,
    /// max over snapshots of the exact per-snapshot conductance.
    pub phi_dynamic: f64,
    pub per_snapshot_phi: Vec<f64>,
    /// Spectral norm of the unfolded operator with snapshot t removed; 0 at T=1.
    pub leave_one_out_norms: Vec<f64>,
    pub lower_bound: f64,
    /// max_t √(2 λ_2(L^(t))); only meaningful for k = 2.
    pub upper_bound_classical: Option<f64>,
    /// k smallest per-snapshot Laplacian eigenvalues, ascending, per t.
    pub snapshot_eigenvalues: Vec<Vec<f64>>,
    pub any_disconnected: bool,
}

/// Computes the dynamic conductance, the spectral quantities, and the lower
/// bound. `tau` should be 0 for theory verification.
pub fn dynamic_cheeger(graph: &DynamicGraph, k: usize, tau: f64) -> Result<CheegerReport> {
    let t_count = graph.snapshot_count();
    let op = operators::unfold_graph(graph, OperatorVariant::UlseN1, tau)?;
    let sigmas = ascending_singular_values(&op.matrix)?;
    let sigma_k = sigmas[k - 1];

    let laps: Vec<Matrix> = graph
        .snapshots()
        .iter()
        .map(|a| operators::laplacian_n1(a, tau))
        .collect::<Result<_>>()?;
    let mut leave_one_out_norms = Vec::with_capacity(t_count);
    for t in 0..t_count {
        if t_count == 1 {
            leave_one_out_norms.push(0.0);
            continue;
        }
        let rest: Vec<Matrix> = (0..t_count).filter(|&s| s != t).map(|s| laps[s].clone()).collect();
        let unfolded = Matrix::hconcat(&rest)?;
        leave_one_out_norms.push(unfolded.spectral_norm());
    }

    let mut per_snapshot_phi = Vec::with_capacity(t_count);
    let mut any_disconnected = false;
    for a in graph.snapshots() {
        let c = conductance_exact(a, k)?;
        any_disconnected |= c.disconnected;
        per_snapshot_phi.push(c.phi);
    }
    let phi_dynamic = per_snapshot_phi.iter().copied().fold(0.0f64, f64::max);

    let mut snapshot_eigenvalues = Vec::with_capacity(t_count);
    for lap in &laps {
        let eig = crate::eigen::symmetric_eigen(lap)?;
        snapshot_eigenvalues.push(eig.values[..k].to_vec());
    }
    let upper_bound_classical = if k == 2 {
        Some(
            snapshot_eigenvalues
                .iter()
                .map(|vals| libm::sqrt(2.0 * vals[1].max(0.0)))
                .fold(0.0f64, f64::max),
        )
    } else {
        None
    };

    let min_loo = leave_one_out_norms.iter().copied().fold(f64::INFINITY, f64::min);
    let lower_bound = libm::sqrt((sigma_k * sigma_k - min_loo * min_loo).max(0.0)) / 2.0;

    Ok(CheegerReport {
        k,
        sigma_k,
        phi_dynamic,
        per_snapshot_phi,
        leave_one_out_norms,
        lower_bound,
        upper_bound_classical,
        snapshot_eigenvalues,
        any_disconnected,
    })
}

/// All singular values of an n x m matrix (n <= m), ascending.
fn ascending_singular_values(m: &Matrix) -> Result<Vec<f64>> {
    let gram = m.gram();
    let eig = crate::eigen::symmetric_eigen(&gram)?;
    Ok(eig.values.iter().map(|&l| libm::sqrt(l.max(0.0))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn from_edges(n: usize, edges: &[(usize, usize)]) -> Matrix {
        let mut a = Matrix::zeros(n, n);
        for &(i, j) in edges {
            a[(i, j)] = 1.0;
            a[(j, i)] = 1.0;
        }
        a
    }

    #[test]
    fn path_p3_bisection() {
        let a = from_edges(3, &[(0, 1), (1, 2)]);
        let c = conductance_exact(&a, 2).unwrap();
        // All three nontrivial cuts give cut 1 or 2 over min-vol 1 or 2: min 1.
        assert!((c.phi - 1.0).abs() < 1e-12);
        assert!(!c.disconnected);
    }

    #[test]
    fn single_edge_k2() {
        let a = from_edges(2, &[(0, 1)]);
        let c = conductance_exact(&a, 2).unwrap();
        assert!((c.phi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_k2s_disconnected() {
        let a = from_edges(4, &[(0, 1), (2, 3)]);
        let c = conductance_exact(&a, 2).unwrap();
        assert_eq!(c.phi, 0.0);
        assert!(c.disconnected);
    }

    #[test]
    fn barbell_k2_oracle() {
        // Two triangles joined by one edge: the bridge cut gives 1/7.
        let a = from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]);
        let c = conductance_exact(&a, 2).unwrap();
        assert!((c.phi - 1.0 / 7.0).abs() < 1e-12, "{}", c.phi);
    }

    #[test]
    fn three_triangles_k3_oracle() {
        // Triangles 0-1-2, 3-4-5, 6-7-8 in a ring via bridges 2-3, 5-6, 8-0.
        // Natural partition: each part has cut 2, vol 8 -> max 1/4.
        let a = from_edges(
            9,
            &[
                (0, 1), (0, 2), (1, 2),
                (3, 4), (3, 5), (4, 5),
                (6, 7), (6, 8), (7, 8),
                (2, 3), (5, 6), (8, 0),
            ],
        );
        let c = conductance_exact(&a, 3).unwrap();
        assert!((c.phi - 0.25).abs() < 1e-12, "{}", c.phi);
    }

    #[test]
    fn size_limits_enforced() {
        let a = Matrix::identity(17);
        assert!(matches!(conductance_exact(&a, 2), Err(Error::TooLarge { .. })));
        let a = Matrix::identity(13);
        assert!(matches!(conductance_exact(&a, 3), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn single_snapshot_reduction() {
        // T=1: sigma_k equals the k-th smallest Laplacian eigenvalue, the
        // leave-one-out norm is 0, and the bound becomes lambda_k / 2.
        let g = DynamicGraph::from_edge_lists(4, &[vec![(0, 1), (1, 2), (2, 3), (3, 0)]]).unwrap();
        let rep = dynamic_cheeger(&g, 2, 0.0).unwrap();
        assert_eq!(rep.leave_one_out_norms, vec![0.0]);
        assert!((rep.sigma_k - rep.snapshot_eigenvalues[0][1]).abs() < 1e-10);
        assert!((rep.lower_bound - rep.sigma_k / 2.0).abs() < 1e-12);
        assert!(rep.lower_bound <= rep.phi_dynamic + 1e-12);
    }

    #[test]
    fn identical_snapshots_scale_by_sqrt2() {
        let edges = vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)];
        let g = DynamicGraph::from_edge_lists(4, &[edges.clone(), edges]).unwrap();
        let rep = dynamic_cheeger(&g, 2, 0.0).unwrap();
        let lambda2 = rep.snapshot_eigenvalues[0][1];
        assert!((rep.sigma_k - libm::sqrt(2.0) * lambda2).abs() < 1e-9, "{} vs {}", rep.sigma_k, lambda2);
    }

    fn random_connected_snapshot(n: usize, rng: &mut ChaCha20Rng) -> Vec<(usize, usize)> {
        loop {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.gen::<f64>() < 0.5 {
                        edges.push((i, j));
                    }
                }
            }
            let a = from_edges(n, &edges);
            if a.row_sums().iter().all(|&d| d > 0.0) && is_connected(&a) {
                return edges;
            }
        }
    }

    #[test]
    fn lower_bound_and_sandwich_on_random_corpus() {
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        for trial in 0..30 {
            let n = 4 + (trial % 5);
            let t_count = 2 + (trial % 2);
            let lists: Vec<_> = (0..t_count).map(|_| random_connected_snapshot(n, &mut rng)).collect();
            let g = DynamicGraph::from_edge_lists(n, &lists).unwrap();
            for k in [2usize, 3] {
                let rep = dynamic_cheeger(&g, k, 0.0).unwrap();
                assert!(
                    rep.lower_bound <= rep.phi_dynamic + 1e-10,
                    "trial {trial} k={k}: bound {} > phi {}",
                    rep.lower_bound,
                    rep.phi_dynamic
                );
                if k == 2 {
                    for (t, phi) in rep.per_snapshot_phi.iter().enumerate() {
                        let l2 = rep.snapshot_eigenvalues[t][1];
                        assert!(l2 / 2.0 <= phi + 1e-10, "trial {trial} t={t}");
                        assert!(*phi <= libm::sqrt(2.0 * l2) + 1e-10, "trial {trial} t={t}");
                    }
                }
                // sigma monotone in k; triangle-inequality sanity for the
                // leave-one-out norms.
                let op = operators::unfold_graph(&g, OperatorVariant::UlseN1, 0.0).unwrap();
                let sigmas = ascending_singular_values(&op.matrix).unwrap();
                for w in sigmas.windows(2) {
                    assert!(w[0] <= w[1] + 1e-12);
                }
                let per_norm: Vec<f64> = g
                    .snapshots()
                    .iter()
                    .map(|a| operators::laplacian_n1(a, 0.0).unwrap().spectral_norm())
                    .collect();
                for (t, loo) in rep.leave_one_out_norms.iter().enumerate() {
                    let sum: f64 = per_norm
                        .iter()
                        .enumerate()
                        .filter(|(s, _)| *s != t)
                        .map(|(_, x)| x)
                        .sum();
                    assert!(*loo <= sum + 1e-9);
                }
            }
        }
    }
}
