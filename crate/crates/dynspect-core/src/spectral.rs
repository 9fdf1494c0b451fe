//! Truncated SVD of unfolded operators, embedding assembly for each method,
//! the noise-free oracle path, orthogonal alignment, and the context-aware
//! perturbation baseline.
//!
//! The SVD runs a symmetric eigendecomposition of the n x n Gram matrix
//! L Lᵀ (the smaller side) and recovers right vectors as v_k = Lᵀ u_k / σ_k.
//! Each retained left singular vector is sign-fixed so that its entry of
//! largest absolute value is positive (ties broken by lowest index), which
//! makes embeddings bit-reproducible.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::graph::DynamicGraph;
use crate::matrix::Matrix;
use crate::operators::{self, OperatorVariant, UnfoldedOperator};

/// Gap threshold below which a singular-value selection boundary is flagged
/// as degenerate (a warning, not an error).
pub const DEGENERACY_GAP: f64 = 1e-10;

/// Smallest singular value for which a right singular vector is recovered.
pub const MIN_RETAINED_SIGMA: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// The d largest singular values, descending.
    TopD(usize),
    /// Ascending window: skip the `skip` smallest, take the next `take`.
    BottomWindow { skip: usize, take: usize },
}

impl Selection {
    fn count(&self) -> usize {
        match self {
            Selection::TopD(d) => *d,
            Selection::BottomWindow { take, .. } => *take,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SvdResult {
    /// n x r, orthonormal columns.
    pub u: Matrix,
    /// Length r; descending for TopD, ascending for BottomWindow.
    pub singular_values: Vec<f64>,
    /// nT x r, orthonormal columns.
    pub v: Matrix,
    pub selection: Selection,
    /// Set when the gap at a selection boundary is below [`DEGENERACY_GAP`].
    pub degenerate_boundary: bool,
}

impl SvdResult {
    /// Block t of V, i.e. rows [t*n, (t+1)*n).
    pub fn v_block(&self, t: usize, n: usize) -> Matrix {
        self.v.row_block(t * n, n)
    }
}

/// Singular triplets of the unfolded operator for the selected window.
pub fn svd_unfolded(op: &UnfoldedOperator, selection: Selection) -> Result<SvdResult> {
    let n = op.n;
    let r = selection.count();
    if r == 0 {
        return Err(Error::Argument("selection of zero singular values".into()));
    }
    let (lo, hi) = match selection {
        Selection::TopD(d) => {
            if d > n {
                return Err(Error::Argument(format!("d = {d} exceeds n = {n}")));
            }
            (n - d, n)
        }
        Selection::BottomWindow { skip, take } => {
            if skip + take > n {
                return Err(Error::Argument(format!(
                    "bottom window skip {skip} + take {take} exceeds n = {n}"
                )));
            }
            (skip, skip + take)
        }
    };
    let gram = op.matrix.gram();
    let eig = symmetric_eigen(&gram)?;
    // Gram eigenvalues ascending; sigma_k = sqrt(lambda_k).
    let sigmas: Vec<f64> = eig.values.iter().map(|&l| libm::sqrt(l.max(0.0))).collect();
    let mut degenerate = false;
    if lo > 0 && sigmas[lo] - sigmas[lo - 1] < DEGENERACY_GAP {
        degenerate = true;
    }
    if hi < n && sigmas[hi] - sigmas[hi - 1] < DEGENERACY_GAP {
        degenerate = true;
    }
    // Ascending within the window; reversed for TopD.
    let order: Vec<usize> = match selection {
        Selection::TopD(_) => (lo..hi).rev().collect(),
        Selection::BottomWindow { .. } => (lo..hi).collect(),
    };
    let mut u = Matrix::zeros(n, r);
    let mut v = Matrix::zeros(n * op.t, r);
    let mut retained = Vec::with_capacity(r);
    for (col, &idx) in order.iter().enumerate() {
        let sigma = sigmas[idx];
        if sigma <= MIN_RETAINED_SIGMA {
            return Err(Error::Argument(format!(
                "retained singular value {sigma:.3e} below {MIN_RETAINED_SIGMA:.0e}; right vector undefined"
            )));
        }
        let mut u_col: Vec<f64> = (0..n).map(|i| eig.vectors[(i, idx)]).collect();
        let sign = sign_convention(&u_col);
        if sign < 0.0 {
            for x in &mut u_col {
                *x = -*x;
            }
        }
        let v_col = op.matrix.transpose_apply(&u_col);
        for i in 0..n {
            u[(i, col)] = u_col[i];
        }
        for (i, &x) in v_col.iter().enumerate() {
            v[(i, col)] = x / sigma;
        }
        retained.push(sigma);
    }
    Ok(SvdResult {
        u,
        singular_values: retained,
        v,
        selection,
        degenerate_boundary: degenerate,
    })
}

fn sign_convention(col: &[f64]) -> f64 {
    let mut best = 0usize;
    let mut best_abs = -1.0;
    for (i, &x) in col.iter().enumerate() {
        let a = libm::fabs(x);
        if a > best_abs {
            best_abs = a;
            best = i;
        }
    }
    if col[best] < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmbeddingMethod {
    Uase,
    UlseN1,
    UlseN2,
    ContextAware,
}

impl EmbeddingMethod {
    pub fn name(&self) -> &'static str {
        match self {
            EmbeddingMethod::Uase => "uase",
            EmbeddingMethod::UlseN1 => "ulse-n1",
            EmbeddingMethod::UlseN2 => "ulse-n2",
            EmbeddingMethod::ContextAware => "context-aware",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "uase" => Ok(EmbeddingMethod::Uase),
            "ulse-n1" => Ok(EmbeddingMethod::UlseN1),
            "ulse-n2" => Ok(EmbeddingMethod::UlseN2),
            "context-aware" => Ok(EmbeddingMethod::ContextAware),
            _ => Err(Error::Argument(format!("unknown method '{name}'"))),
        }
    }

    /// Default embedding dimension for K communities: K - 1 for the
    /// bottom-window Laplacian variant, K otherwise.
    pub fn default_dimension(&self, k: usize) -> usize {
        match self {
            EmbeddingMethod::UlseN1 => k.saturating_sub(1).max(1),
            _ => k,
        }
    }

    fn operator_variant(&self) -> Option<OperatorVariant> {
        match self {
            EmbeddingMethod::Uase => Some(OperatorVariant::Uase),
            EmbeddingMethod::UlseN1 => Some(OperatorVariant::UlseN1),
            EmbeddingMethod::UlseN2 => Some(OperatorVariant::UlseN2),
            EmbeddingMethod::ContextAware => None,
        }
    }

    fn selection(&self, d: usize) -> Selection {
        match self {
            EmbeddingMethod::UlseN1 => Selection::BottomWindow { skip: 1, take: d },
            _ => Selection::TopD(d),
        }
    }
}

/// Anchor embedding X (n x d) and dynamic embeddings Y^(t) (n x d each).
#[derive(Debug, Clone)]
pub struct EmbeddingResult {
    pub method: EmbeddingMethod,
    pub anchor: Matrix,
    pub dynamic: Vec<Matrix>,
    pub singular_values: Vec<f64>,
    pub d: usize,
    pub degenerate_boundary: bool,
}

impl EmbeddingResult {
    /// All dynamic blocks stacked vertically, nT x d.
    pub fn stacked_dynamic(&self) -> Matrix {
        Matrix::vconcat(&self.dynamic).expect("blocks share dimensions")
    }
}

/// Embeds an observed dynamic graph with the given method.
pub fn embed(graph: &DynamicGraph, method: EmbeddingMethod, d: usize, tau: f64) -> Result<EmbeddingResult> {
    embed_snapshots(graph.snapshots(), method, d, tau)
}

/// Same pipeline applied to exact probability matrices P^(t) with tau = 0:
/// the noise-free oracle used by the stability theorems.
pub fn noise_free_embed(probs: &[Matrix], method: EmbeddingMethod, d: usize) -> Result<EmbeddingResult> {
    for (t, p) in probs.iter().enumerate() {
        if !p.is_symmetric(0.0) {
            return Err(Error::Argument(format!("P^({t}) is not symmetric")));
        }
        if p.data().iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::Argument(format!("P^({t}) has entries outside [0, 1]")));
        }
    }
    embed_snapshots(probs, method, d, 0.0)
}

fn embed_snapshots(snapshots: &[Matrix], method: EmbeddingMethod, d: usize, tau: f64) -> Result<EmbeddingResult> {
    if d == 0 {
        return Err(Error::Argument("embedding dimension must be at least 1".into()));
    }
    let variant = method
        .operator_variant()
        .ok_or_else(|| Error::Argument("context-aware embedding uses context_aware_embed".into()))?;
    let n = snapshots
        .first()
        .ok_or_else(|| Error::Argument("no snapshots".into()))?
        .rows();
    if method == EmbeddingMethod::UlseN1 && d + 1 > n {
        return Err(Error::Argument(format!("bottom window needs d <= n - 1, got d = {d}, n = {n}")));
    }
    let op = operators::unfold(snapshots, variant, tau)?;
    let svd = svd_unfolded(&op, method.selection(d))?;
    Ok(assemble(method, &svd, n, snapshots.len(), d))
}

fn assemble(method: EmbeddingMethod, svd: &SvdResult, n: usize, t_count: usize, d: usize) -> EmbeddingResult {
    let sqrt_sigma: Vec<f64> = svd.singular_values.iter().map(|&s| libm::sqrt(s)).collect();
    let mut anchor = Matrix::zeros(n, d);
    for i in 0..n {
        for j in 0..d {
            anchor[(i, j)] = svd.u[(i, j)] * sqrt_sigma[j];
        }
    }
    let mut dynamic = Vec::with_capacity(t_count);
    for t in 0..t_count {
        let vt = svd.v_block(t, n);
        let mut y = Matrix::zeros(n, d);
        for i in 0..n {
            for j in 0..d {
                y[(i, j)] = vt[(i, j)] * sqrt_sigma[j];
                if method == EmbeddingMethod::UlseN1 {
                    // Correction term U Σ^{-1/2}: with it, the noise-free
                    // Y^(t) reduces to -D^{-1/2} P^(t) D^{-1/2} U Σ^{-1/2},
                    // whose row i depends on P^(t) only through row i —
                    // exact cross-sectional and longitudinal stability.
                    // Subtracting the anchor U Σ^{1/2} instead would leave a
                    // residual (Σ - Σ^{-1}) term and break that collapse.
                    y[(i, j)] -= svd.u[(i, j)] / sqrt_sigma[j];
                }
            }
        }
        dynamic.push(y);
    }
    EmbeddingResult {
        method,
        anchor,
        dynamic,
        singular_values: svd.singular_values.clone(),
        d,
        degenerate_boundary: svd.degenerate_boundary,
    }
}

/// Independent closed-form route for the noise-free bottom-window Laplacian
/// embedding: row i of Y^(t) equals
/// -(P^(t)_{i:} 1)^{-1/2} P^(t)_{i:} D^(t)^{-1/2} U Σ^{-1/2}.
/// Shares only the SVD of the unfolded operator with the pipeline; the
/// block-V extraction and correction subtraction are bypassed.
pub fn ulse_n1_closed_form(probs: &[Matrix], d: usize) -> Result<Vec<Matrix>> {
    let n = probs
        .first()
        .ok_or_else(|| Error::Argument("no probability matrices".into()))?
        .rows();
    let op = operators::unfold(probs, OperatorVariant::UlseN1, 0.0)?;
    let svd = svd_unfolded(&op, Selection::BottomWindow { skip: 1, take: d })?;
    let sqrt_sigma: Vec<f64> = svd.singular_values.iter().map(|&s| libm::sqrt(s)).collect();
    let mut out = Vec::with_capacity(probs.len());
    for p in probs {
        let degrees = p.row_sums();
        let inv_sqrt: Vec<f64> = degrees
            .iter()
            .enumerate()
            .map(|(node, &dg)| {
                if dg <= 0.0 {
                    Err(Error::SingularDegree { snapshot: 0, node })
                } else {
                    Ok(1.0 / libm::sqrt(dg))
                }
            })
            .collect::<Result<_>>()?;
        // Row-wise: y_i = -(d_i)^{-1/2} sum_j P_ij d_j^{-1/2} U_j Σ^{-1/2}.
        let mut y = Matrix::zeros(n, d);
        for i in 0..n {
            for j in 0..n {
                let w = p[(i, j)] * inv_sqrt[j];
                if w == 0.0 {
                    continue;
                }
                for c in 0..d {
                    y[(i, c)] += w * svd.u[(j, c)];
                }
            }
            for c in 0..d {
                y[(i, c)] *= -inv_sqrt[i] / sqrt_sigma[c];
            }
        }
        out.push(y);
    }
    Ok(out)
}

/// Orthogonal Procrustes: W = argmin over orthogonal matrices of
/// ‖a W - b‖_F, obtained from the SVD of aᵀ b. Returns W and the residual.
pub fn align(a: &Matrix, b: &Matrix) -> Result<(Matrix, f64)> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Dimension(format!(
            "align of {}x{} against {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let m = a.transpose().matmul(b);
    let (u, _sigma, v) = jacobi_svd(&m);
    let w = u.matmul(&v.transpose());
    let residual = a.matmul(&w).sub(b).frobenius_norm();
    Ok((w, residual))
}

/// One-sided Jacobi SVD for small square matrices. Returns (U, sigma, V)
/// with M = U diag(sigma) Vᵀ; zero singular directions are completed to a
/// full orthonormal basis so U Vᵀ is always orthogonal.
fn jacobi_svd(m: &Matrix) -> (Matrix, Vec<f64>, Matrix) {
    let d = m.rows();
    debug_assert_eq!(d, m.cols());
    let mut a = m.clone();
    let mut v = Matrix::identity(d);
    let eps = 1e-14;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..d {
                    app += a[(i, p)] * a[(i, p)];
                    aqq += a[(i, q)] * a[(i, q)];
                    apq += a[(i, p)] * a[(i, q)];
                }
                off = off.max(libm::fabs(apq));
                if libm::fabs(apq) <= eps * libm::sqrt(app * aqq) || apq == 0.0 {
                    continue;
                }
                let zeta = (aqq - app) / (2.0 * apq);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + libm::sqrt(1.0 + zeta * zeta))
                } else {
                    -1.0 / (-zeta + libm::sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                for i in 0..d {
                    let (ap, aq) = (a[(i, p)], a[(i, q)]);
                    a[(i, p)] = c * ap - s * aq;
                    a[(i, q)] = s * ap + c * aq;
                    let (vp, vq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if off < eps {
            break;
        }
    }
    let mut sigma = vec![0.0; d];
    let mut u = Matrix::zeros(d, d);
    for j in 0..d {
        let norm: f64 = libm::sqrt((0..d).map(|i| a[(i, j)] * a[(i, j)]).sum());
        sigma[j] = norm;
        if norm > 1e-13 {
            for i in 0..d {
                u[(i, j)] = a[(i, j)] / norm;
            }
        }
    }
    complete_basis(&mut u, &sigma);
    (u, sigma, v)
}

/// Replaces zero columns of `u` by orthonormal completion against the rest.
fn complete_basis(u: &mut Matrix, sigma: &[f64]) {
    let d = sigma.len();
    for j in 0..d {
        if sigma[j] > 1e-13 {
            continue;
        }
        // Gram-Schmidt a standard basis vector against all nonzero columns.
        'candidates: for e in 0..d {
            let mut col = vec![0.0; d];
            col[e] = 1.0;
            for other in 0..d {
                if other == j {
                    continue;
                }
                let dot: f64 = (0..d).map(|i| col[i] * u[(i, other)]).sum();
                for i in 0..d {
                    col[i] -= dot * u[(i, other)];
                }
            }
            let norm: f64 = libm::sqrt(col.iter().map(|x| x * x).sum());
            if norm > 1e-6 {
                for i in 0..d {
                    u[(i, j)] = col[i] / norm;
                }
                break 'candidates;
            }
        }
    }
}

/// Context-aware perturbation baseline internals: context spectrum plus the
/// first-order perturbed eigenpairs for every snapshot.
#[derive(Debug, Clone)]
pub struct ContextAwareReport {
    /// Ascending context eigenvalues.
    pub context_eigenvalues: Vec<f64>,
    /// Context eigenvectors as columns, matching the eigenvalue order.
    pub context_vectors: Matrix,
    /// Perturbed eigenvalues per snapshot (T x n).
    pub perturbed_eigenvalues: Vec<Vec<f64>>,
    /// Perturbed eigenvectors per snapshot, first k columns (T matrices n x k).
    pub perturbed_vectors: Vec<Matrix>,
}

/// First-order eigen perturbation around the edge-averaged context graph.
/// Errors when context eigenvalues repeat within [`DEGENERACY_GAP`], because
/// the eigenvector correction divides by their differences.
pub fn context_aware_detail(graph: &DynamicGraph, k: usize) -> Result<ContextAwareReport> {
    let n = graph.node_count();
    let t_count = graph.snapshot_count();
    if k == 0 || k > n {
        return Err(Error::Argument(format!("k = {k} out of range for n = {n}")));
    }
    // Context graph by edge-wise averaging.
    let mut context = Matrix::zeros(n, n);
    for a in graph.snapshots() {
        context = context.add(a);
    }
    context = context.scale(1.0 / t_count as f64);
    let context_lap = operators::laplacian_n1(&context, 0.0)?;
    let eig = symmetric_eigen(&context_lap)?;
    for w in eig.values.windows(2) {
        if w[1] - w[0] < DEGENERACY_GAP {
            return Err(Error::DegenerateSpectrum { gap: w[1] - w[0] });
        }
    }
    let mut perturbed_eigenvalues = Vec::with_capacity(t_count);
    let mut perturbed_vectors = Vec::with_capacity(t_count);
    for t in 0..t_count {
        let snapshot_lap = operators::laplacian_n1(graph.snapshot(t), 0.0)?;
        let delta = snapshot_lap.sub(&context_lap);
        // q[(i, j)] = u_iᵀ Δ u_j
        let q = eig.vectors.transpose().matmul(&delta).matmul(&eig.vectors);
        let values: Vec<f64> = (0..n).map(|i| eig.values[i] + q[(i, i)]).collect();
        let mut vectors = Matrix::zeros(n, k);
        for i in 0..k {
            for row in 0..n {
                vectors[(row, i)] = eig.vectors[(row, i)];
            }
            for j in 0..n {
                if j == i {
                    continue;
                }
                let coeff = q[(j, i)] / (eig.values[i] - eig.values[j]);
                for row in 0..n {
                    vectors[(row, i)] += coeff * eig.vectors[(row, j)];
                }
            }
        }
        perturbed_eigenvalues.push(values);
        perturbed_vectors.push(vectors);
    }
    Ok(ContextAwareReport {
        context_eigenvalues: eig.values,
        context_vectors: eig.vectors,
        perturbed_eigenvalues,
        perturbed_vectors,
    })
}

/// Context-aware embedding: per snapshot, the first k perturbed eigenvectors.
pub fn context_aware_embed(graph: &DynamicGraph, k: usize) -> Result<EmbeddingResult> {
    let report = context_aware_detail(graph, k)?;
    let n = graph.node_count();
    let mut anchor = Matrix::zeros(n, k);
    for i in 0..n {
        for j in 0..k {
            anchor[(i, j)] = report.context_vectors[(i, j)];
        }
    }
    Ok(EmbeddingResult {
        method: EmbeddingMethod::ContextAware,
        anchor,
        dynamic: report.perturbed_vectors,
        singular_values: report.context_eigenvalues[..k].to_vec(),
        d: k,
        degenerate_boundary: false,
    })
}

/// The supplementary 3-node pair: a star centered at node 2 and the path
/// 0-1-2. Non-isomorphic, yet their first-order context-aware perturbations
/// coincide exactly.
pub fn isospectral_counterexample() -> DynamicGraph {
    DynamicGraph::from_edge_lists(3, &[vec![(0, 2), (1, 2)], vec![(0, 1), (1, 2)]])
        .expect("fixture is valid")
}
