//! Dynamic-graph data types and degree computations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// T symmetric binary adjacency snapshots over a shared node set [0, n).
///
/// Immutable after construction; safe to share read-only across workers.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicGraph {
    n: usize,
    snapshots: Vec<Matrix>,
}

impl DynamicGraph {
    /// Validates that every snapshot is n x n, symmetric, binary, with a
    /// zero diagonal.
    pub fn new(n: usize, snapshots: Vec<Matrix>) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::Argument("a dynamic graph needs at least one snapshot".into()));
        }
        for (t, a) in snapshots.iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                return Err(Error::Dimension(format!(
                    "snapshot {t} is {}x{}, expected {n}x{n}",
                    a.rows(),
                    a.cols()
                )));
            }
            for i in 0..n {
                if a[(i, i)] != 0.0 {
                    return Err(Error::Argument(format!(
                        "snapshot {t} has a self-loop at node {i}"
                    )));
                }
                for j in 0..n {
                    let v = a[(i, j)];
                    if v != 0.0 && v != 1.0 {
                        return Err(Error::Argument(format!(
                            "snapshot {t} entry ({i},{j}) = {v} is not binary"
                        )));
                    }
                }
                for j in (i + 1)..n {
                    if a[(i, j)] != a[(j, i)] {
                        return Err(Error::Argument(format!(
                            "snapshot {t} is asymmetric at ({i},{j})"
                        )));
                    }
                }
            }
        }
        Ok(DynamicGraph { n, snapshots })
    }

    /// Builds snapshots from per-snapshot edge lists. Duplicate edges are
    /// deduplicated; self-loops and out-of-range endpoints are rejected.
    pub fn from_edge_lists(n: usize, edge_lists: &[Vec<(usize, usize)>]) -> Result<Self> {
        if edge_lists.is_empty() {
            return Err(Error::Argument("a dynamic graph needs at least one snapshot".into()));
        }
        let mut snapshots = Vec::with_capacity(edge_lists.len());
        for (t, edges) in edge_lists.iter().enumerate() {
            let mut a = Matrix::zeros(n, n);
            for &(u, v) in edges {
                if u >= n || v >= n {
                    return Err(Error::Argument(format!(
                        "snapshot {t} edge ({u},{v}) out of range for n = {n}"
                    )));
                }
                if u == v {
                    return Err(Error::Argument(format!(
                        "snapshot {t} has a self-loop at node {u}"
                    )));
                }
                a[(u, v)] = 1.0;
                a[(v, u)] = 1.0;
            }
            snapshots.push(a);
        }
        Ok(DynamicGraph { n, snapshots })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn snapshot_count(&self) -> usize {
        self.snapshots.len()
    }

    pub fn snapshot(&self, t: usize) -> &Matrix {
        &self.snapshots[t]
    }

    pub fn snapshots(&self) -> &[Matrix] {
        &self.snapshots
    }

    /// Sorted edge list (u < v) of one snapshot.
    pub fn edges(&self, t: usize) -> Vec<(usize, usize)> {
        let a = &self.snapshots[t];
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if a[(u, v)] != 0.0 {
                    edges.push((u, v));
                }
            }
        }
        edges
    }

    /// Adjacency-list view of one snapshot, for conductance enumeration.
    pub fn adjacency_list(&self, t: usize) -> Vec<Vec<usize>> {
        let a = &self.snapshots[t];
        (0..self.n)
            .map(|u| (0..self.n).filter(|&v| a[(u, v)] != 0.0).collect())
            .collect()
    }

    pub fn degrees(&self) -> DegreeSummary {
        DegreeSummary::from_matrices(&self.snapshots)
    }
}

/// Per-snapshot and aggregated degree vectors. Exact row sums: for binary
/// snapshots these are integer counts represented exactly in f64, and the
/// same code path serves real-valued probability matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSummary {
    pub per_snapshot: Vec<Vec<f64>>,
    pub aggregated: Vec<f64>,
    pub per_snapshot_min: Vec<f64>,
}

impl DegreeSummary {
    pub fn from_matrices(snapshots: &[Matrix]) -> Self {
        let n = snapshots.first().map_or(0, |m| m.rows());
        let per_snapshot: Vec<Vec<f64>> = snapshots.iter().map(|a| a.row_sums()).collect();
        let mut aggregated = vec![0.0; n];
        for degrees in &per_snapshot {
            for (agg, d) in aggregated.iter_mut().zip(degrees) {
                *agg += d;
            }
        }
        let per_snapshot_min = per_snapshot
            .iter()
            .map(|d| d.iter().copied().fold(f64::INFINITY, f64::min))
            .collect();
        DegreeSummary {
            per_snapshot,
            aggregated,
            per_snapshot_min,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn k2_single_snapshot_degrees() {
        let g = DynamicGraph::from_edge_lists(2, &[vec![(0, 1)]]).unwrap();
        let deg = g.degrees();
        assert_eq!(deg.per_snapshot[0], vec![1.0, 1.0]);
        assert_eq!(deg.aggregated, vec![1.0, 1.0]);
    }

    #[test]
    fn path_graph_degrees() {
        let g = DynamicGraph::from_edge_lists(3, &[vec![(0, 1), (1, 2)]]).unwrap();
        assert_eq!(g.degrees().per_snapshot[0], vec![1.0, 2.0, 1.0]);
    }

    #[test]
    fn aggregated_degrees_sum_over_snapshots() {
        let g = DynamicGraph::from_edge_lists(2, &[vec![(0, 1)], vec![(0, 1)]]).unwrap();
        assert_eq!(g.degrees().aggregated, vec![2.0, 2.0]);
    }

    #[test]
    fn duplicate_and_reversed_edges_deduplicate() {
        let g = DynamicGraph::from_edge_lists(2, &[vec![(0, 1), (1, 0), (0, 1)]]).unwrap();
        assert_eq!(g.snapshot(0)[(0, 1)], 1.0);
        assert_eq!(g.snapshot(0)[(1, 0)], 1.0);
        assert_eq!(g.edges(0), vec![(0, 1)]);
    }

    #[test]
    fn self_loop_rejected() {
        assert!(DynamicGraph::from_edge_lists(3, &[vec![(1, 1)]]).is_err());
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(DynamicGraph::from_edge_lists(3, &[vec![(0, 3)]]).is_err());
    }

    #[test]
    fn empty_edge_list_gives_zero_matrix() {
        let g = DynamicGraph::from_edge_lists(3, &[vec![]]).unwrap();
        assert_eq!(g.snapshot(0), &Matrix::zeros(3, 3));
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let mut a = Matrix::zeros(2, 2);
        a[(0, 1)] = 1.0;
        assert!(DynamicGraph::new(2, vec![a]).is_err());
    }

    #[test]
    fn degrees_match_independent_row_count() {
        let g = DynamicGraph::from_edge_lists(4, &[vec![(0, 1), (0, 2), (2, 3)]]).unwrap();
        let deg = g.degrees();
        for i in 0..4 {
            let count = (0..4).filter(|&j| g.snapshot(0)[(i, j)] == 1.0).count();
            assert_eq!(deg.per_snapshot[0][i], count as f64);
        }
    }
}
