//! Symmetric eigendecomposition via Householder tridiagonalization followed
//! by the implicit-shift QL iteration. Single-threaded and deterministic,
//! which is what the reproducibility contract needs at desk scale.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

const MAX_QL_ITERS: usize = 64;

pub struct SymmetricEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, ordered to match `values`.
    pub vectors: Matrix,
}

pub fn symmetric_eigen(a: &Matrix) -> Result<SymmetricEigen> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Dimension("eigendecomposition of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(SymmetricEigen {
            values: Vec::new(),
            vectors: Matrix::zeros(0, 0),
        });
    }
    let mut z = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut z, &mut d, &mut e);
    ql_implicit(&mut d, &mut e, &mut z)?;
    sort_ascending(&mut d, &mut z);
    Ok(SymmetricEigen { values: d, vectors: z })
}

/// Householder reduction to tridiagonal form, accumulating the orthogonal
/// transformation in `z` (input matrix is overwritten).
fn tridiagonalize(z: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| libm::fabs(z[(i, k)])).sum();
            if scale == 0.0 {
                e[i] = z[(i, l)];
            } else {
                for k in 0..=l {
                    z[(i, k)] /= scale;
                    h += z[(i, k)] * z[(i, k)];
                }
                let f = z[(i, l)];
                let g = if f >= 0.0 { -libm::sqrt(h) } else { libm::sqrt(h) };
                e[i] = scale * g;
                h -= f * g;
                z[(i, l)] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    z[(j, i)] = z[(i, j)] / h;
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += z[(j, k)] * z[(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g_acc += z[(k, j)] * z[(i, k)];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * z[(i, j)];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = z[(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        z[(j, k)] -= f * e[k] + g * z[(i, k)];
                    }
                }
            }
        } else {
            e[i] = z[(i, l)];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += z[(i, k)] * z[(k, j)];
                }
                for k in 0..i {
                    let delta = g * z[(k, i)];
                    z[(k, j)] -= delta;
                }
            }
        }
        d[i] = z[(i, i)];
        z[(i, i)] = 1.0;
        for j in 0..i {
            z[(j, i)] = 0.0;
            z[(i, j)] = 0.0;
        }
    }
}

/// QL iteration with implicit shifts on the tridiagonal (d, e), rotating the
/// eigenvector columns of `z` alongside.
fn ql_implicit(d: &mut [f64], e: &mut [f64], z: &mut Matrix) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = libm::fabs(d[m]) + libm::fabs(d[m + 1]);
                if libm::fabs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERS {
                return Err(Error::NoConvergence { iterations: MAX_QL_ITERS });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + copysign(r, g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[(k, i + 1)];
                    z[(k, i + 1)] = s * z[(k, i)] + c * f;
                    z[(k, i)] = c * z[(k, i)] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn sort_ascending(d: &mut [f64], z: &mut Matrix) {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap().then(a.cmp(&b)));
    let old_d = d.to_vec();
    let old_z = z.clone();
    for (new_col, &old_col) in order.iter().enumerate() {
        d[new_col] = old_d[old_col];
        for k in 0..n {
            z[(k, new_col)] = old_z[(k, old_col)];
        }
    }
}

fn hypot(a: f64, b: f64) -> f64 {
    libm::sqrt(a * a + b * b)
}

fn copysign(mag: f64, sign: f64) -> f64 {
    if sign >= 0.0 {
        libm::fabs(mag)
    } else {
        -libm::fabs(mag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn check(a: &Matrix, tol: f64) {
        let eig = symmetric_eigen(a).unwrap();
        let n = a.rows();
        // ascending
        for w in eig.values.windows(2) {
            assert!(w[0] <= w[1] + 1e-12);
        }
        // orthonormal columns
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n)
                    .map(|k| eig.vectors[(k, i)] * eig.vectors[(k, j)])
                    .sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < tol, "orthonormality {i},{j}: {dot}");
            }
        }
        // residual A v = lambda v
        for j in 0..n {
            for i in 0..n {
                let av: f64 = (0..n).map(|k| a[(i, k)] * eig.vectors[(k, j)]).sum();
                let lv = eig.values[j] * eig.vectors[(i, j)];
                assert!((av - lv).abs() < tol * (1.0 + eig.values[n - 1].abs()));
            }
        }
    }

    #[test]
    fn diagonal_matrix() {
        let a = Matrix::from_rows(&[
            vec![3.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ])
        .unwrap();
        let eig = symmetric_eigen(&a).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-12);
        assert!((eig.values[1] - 2.0).abs() < 1e-12);
        assert!((eig.values[2] - 3.0).abs() < 1e-12);
        check(&a, 1e-10);
    }

    #[test]
    fn path_graph_laplacian_spectrum() {
        // Normalized Laplacian of the 3-path has eigenvalues {0, 1, 2}.
        let s = 1.0 / libm::sqrt(2.0);
        let a = Matrix::from_rows(&[
            vec![1.0, -s, 0.0],
            vec![-s, 1.0, -s],
            vec![0.0, -s, 1.0],
        ])
        .unwrap();
        let eig = symmetric_eigen(&a).unwrap();
        assert!(eig.values[0].abs() < 1e-12);
        assert!((eig.values[1] - 1.0).abs() < 1e-12);
        assert!((eig.values[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn random_symmetric_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(11);
        for n in [1usize, 2, 3, 5, 8, 17, 40] {
            let mut a = Matrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let v = rng.gen_range(-1.0..1.0);
                    a[(i, j)] = v;
                    a[(j, i)] = v;
                }
            }
            check(&a, 1e-9);
        }
    }

    #[test]
    fn repeated_eigenvalues() {
        // I + rank-one: eigenvalue 1 with multiplicity n-1.
        let n = 6;
        let mut a = Matrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] += 0.5;
            }
        }
        let eig = symmetric_eigen(&a).unwrap();
        for j in 0..n - 1 {
            assert!((eig.values[j] - 1.0).abs() < 1e-10);
        }
        assert!((eig.values[n - 1] - (1.0 + 0.5 * n as f64)).abs() < 1e-10);
        check(&a, 1e-9);
    }
}
