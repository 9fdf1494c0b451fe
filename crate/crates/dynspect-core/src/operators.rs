//! Per-snapshot normalized Laplacian variants and the unfolded n x nT
//! operators used by every embedding method.
//!
//! Two Laplacian normalizations are supported. The first replaces each
//! adjacency with I - (D + tau I)^{-1/2} A (D + tau I)^{-1/2}. The second
//! uses a partially time-aggregated normalization
//! -(D^(1:T) + tau I)^{-1/2} A^(t) (D^(t) + tau I)^{-1/2}, stored exactly as
//! defined including the leading minus sign.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{DegreeSummary, DynamicGraph};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorVariant {
    /// Raw adjacency blocks.
    Uase,
    /// Per-snapshot normalized Laplacian blocks.
    UlseN1,
    /// Partially time-aggregated normalization blocks.
    UlseN2,
}

impl OperatorVariant {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorVariant::Uase => "uase",
            OperatorVariant::UlseN1 => "ulse-n1",
            OperatorVariant::UlseN2 => "ulse-n2",
        }
    }
}

/// The n x nT horizontal concatenation of per-snapshot matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct UnfoldedOperator {
    pub variant: OperatorVariant,
    pub matrix: Matrix,
    pub n: usize,
    pub t: usize,
    pub regularization_tau: f64,
}

impl UnfoldedOperator {
    /// Block t, i.e. columns [t*n, (t+1)*n).
    pub fn block(&self, t: usize) -> Matrix {
        self.matrix.column_block(t * self.n, self.n)
    }
}

/// I - (D + tau I)^{-1/2} A (D + tau I)^{-1/2} with D = diag(row sums).
/// Accepts real-valued (probability) matrices for the noise-free path.
pub fn laplacian_n1(adjacency: &Matrix, tau: f64) -> Result<Matrix> {
    let n = square_dim(adjacency)?;
    let inv_sqrt = inv_sqrt_degrees(&adjacency.row_sums(), tau, 0)?;
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let normed = inv_sqrt[i] * adjacency[(i, j)] * inv_sqrt[j];
            l[(i, j)] = if i == j { 1.0 - normed } else { -normed };
        }
    }
    Ok(l)
}

/// -(D^(1:T) + tau I)^{-1/2} A^(t) (D^(t) + tau I)^{-1/2}. Not symmetric in
/// general because the two degree scalings differ.
pub fn laplacian_n2(adjacency_t: &Matrix, aggregated_degrees: &[f64], tau: f64) -> Result<Matrix> {
    let n = square_dim(adjacency_t)?;
    if aggregated_degrees.len() != n {
        return Err(Error::Dimension(format!(
            "{} aggregated degrees for an {n}x{n} snapshot",
            aggregated_degrees.len()
        )));
    }
    let left = inv_sqrt_degrees(aggregated_degrees, tau, 0)?;
    let right = inv_sqrt_degrees(&adjacency_t.row_sums(), tau, 0)?;
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            l[(i, j)] = -left[i] * adjacency_t[(i, j)] * right[j];
        }
    }
    Ok(l)
}

/// Unfolds a snapshot sequence into the n x nT operator for the chosen
/// variant. Works on observed adjacencies and on probability matrices alike.
pub fn unfold(snapshots: &[Matrix], variant: OperatorVariant, tau: f64) -> Result<UnfoldedOperator> {
    if snapshots.is_empty() {
        return Err(Error::Argument("unfold of zero snapshots".into()));
    }
    let n = square_dim(&snapshots[0])?;
    let blocks: Vec<Matrix> = match variant {
        OperatorVariant::Uase => snapshots.to_vec(),
        OperatorVariant::UlseN1 => snapshots
            .iter()
            .enumerate()
            .map(|(t, a)| laplacian_n1(a, tau).map_err(|e| tag_snapshot(e, t)))
            .collect::<Result<_>>()?,
        OperatorVariant::UlseN2 => {
            let degrees = DegreeSummary::from_matrices(snapshots);
            snapshots
                .iter()
                .enumerate()
                .map(|(t, a)| {
                    laplacian_n2(a, &degrees.aggregated, tau).map_err(|e| tag_snapshot(e, t))
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(UnfoldedOperator {
        variant,
        matrix: Matrix::hconcat(&blocks)?,
        n,
        t: snapshots.len(),
        regularization_tau: tau,
    })
}

pub fn unfold_graph(graph: &DynamicGraph, variant: OperatorVariant, tau: f64) -> Result<UnfoldedOperator> {
    unfold(graph.snapshots(), variant, tau)
}

fn square_dim(m: &Matrix) -> Result<usize> {
    if m.rows() != m.cols() {
        return Err(Error::Dimension(format!(
            "expected a square snapshot, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m.rows())
}

fn inv_sqrt_degrees(degrees: &[f64], tau: f64, snapshot: usize) -> Result<Vec<f64>> {
    degrees
        .iter()
        .enumerate()
        .map(|(node, &d)| {
            let reg = d + tau;
            if reg <= 0.0 {
                Err(Error::SingularDegree { snapshot, node })
            } else {
                Ok(1.0 / libm::sqrt(reg))
            }
        })
        .collect()
}

fn tag_snapshot(e: Error, t: usize) -> Error {
    match e {
        Error::SingularDegree { node, .. } => Error::SingularDegree { snapshot: t, node },
        other => other,
    }
}
