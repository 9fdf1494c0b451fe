//! Lloyd's k-means with k-means++ seeding, deterministic restarts, and
//! empty-cluster repair (an empty cluster is re-seeded at the point farthest
//! from its assigned centroid).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const DEFAULT_RESTARTS: usize = 10;
pub const MAX_ITERS: usize = 300;
const COST_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    pub centroids: Matrix,
    /// Sum of squared distances to assigned centroids.
    pub cost: f64,
    pub iterations: usize,
}

/// Clusters the rows of `points` into `k` groups. Runs `restarts`
/// independent k-means++ initialisations from a ChaCha20 stream seeded with
/// `seed` and keeps the lowest-cost run, so results are reproducible.
pub fn kmeans(points: &Matrix, k: usize, restarts: usize, seed: u64) -> Result<KMeansResult> {
    let n = points.rows();
    if k == 0 || k > n {
        return Err(Error::Argument(format!("k = {k} out of range for {n} points")));
    }
    if restarts == 0 {
        return Err(Error::Argument("restarts must be at least 1".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut best: Option<KMeansResult> = None;
    for _ in 0..restarts {
        let run = lloyd(points, k, &mut rng)?;
        if best.as_ref().map_or(true, |b| run.cost < b.cost) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn lloyd(points: &Matrix, k: usize, rng: &mut ChaCha20Rng) -> Result<KMeansResult> {
    let (n, d) = (points.rows(), points.cols());
    let mut centroids = plus_plus_seed(points, k, rng);
    let mut labels = vec![0usize; n];
    let mut prev_cost = f64::INFINITY;
    let mut iterations = 0;
    loop {
        iterations += 1;
        // Assignment step.
        let mut cost = 0.0;
        for i in 0..n {
            let (best_c, best_d) = nearest(points, i, &centroids);
            labels[i] = best_c;
            cost += best_d;
        }
        // Cost is non-increasing across Lloyd iterations; a rise would mean
        // an implementation bug, not data trouble.
        debug_assert!(cost <= prev_cost + COST_TOL * (1.0 + prev_cost.abs()));
        // Update step.
        let mut counts = vec![0usize; k];
        let mut next = Matrix::zeros(k, d);
        for i in 0..n {
            counts[labels[i]] += 1;
            for j in 0..d {
                next[(labels[i], j)] += points[(i, j)];
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                // Repair: move the empty centroid onto the point currently
                // farthest from its own centroid.
                let far = (0..n)
                    .max_by(|&a, &b| {
                        let da = sq_dist(points, a, &centroids, labels[a]);
                        let db = sq_dist(points, b, &centroids, labels[b]);
                        da.partial_cmp(&db).expect("finite distances")
                    })
                    .expect("n >= 1");
                for j in 0..d {
                    next[(c, j)] = points[(far, j)];
                }
            } else {
                for j in 0..d {
                    next[(c, j)] /= counts[c] as f64;
                }
            }
        }
        let moved = next.sub(&centroids).frobenius_norm();
        centroids = next;
        let converged = moved <= COST_TOL || (prev_cost - cost).abs() <= COST_TOL * (1.0 + cost);
        prev_cost = cost;
        if converged || iterations >= MAX_ITERS {
            // One last assignment so labels match the final centroids.
            let mut final_cost = 0.0;
            for i in 0..n {
                let (best_c, best_d) = nearest(points, i, &centroids);
                labels[i] = best_c;
                final_cost += best_d;
            }
            return Ok(KMeansResult {
                labels,
                centroids,
                cost: final_cost,
                iterations,
            });
        }
    }
}

fn plus_plus_seed(points: &Matrix, k: usize, rng: &mut ChaCha20Rng) -> Matrix {
    let (n, d) = (points.rows(), points.cols());
    let mut centroids = Matrix::zeros(k, d);
    let first = rng.gen_range(0..n);
    for j in 0..d {
        centroids[(0, j)] = points[(first, j)];
    }
    let mut dist = vec![0.0f64; n];
    for i in 0..n {
        dist[i] = sq_dist(points, i, &centroids, 0);
    }
    for c in 1..k {
        let total: f64 = dist.iter().sum();
        let pick = if total <= 0.0 {
            // All remaining points coincide with chosen centroids.
            rng.gen_range(0..n)
        } else {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &w) in dist.iter().enumerate() {
                acc += w;
                if acc >= target {
                    chosen = i;
                    break;
                }
            }
            chosen
        };
        for j in 0..d {
            centroids[(c, j)] = points[(pick, j)];
        }
        for i in 0..n {
            let nd = sq_dist(points, i, &centroids, c);
            if nd < dist[i] {
                dist[i] = nd;
            }
        }
    }
    centroids
}

fn nearest(points: &Matrix, i: usize, centroids: &Matrix) -> (usize, f64) {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for c in 0..centroids.rows() {
        let d = sq_dist(points, i, centroids, c);
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    (best, best_d)
}

fn sq_dist(points: &Matrix, i: usize, centroids: &Matrix, c: usize) -> f64 {
    let mut s = 0.0;
    for j in 0..points.cols() {
        let diff = points[(i, j)] - centroids[(c, j)];
        s += diff * diff;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn blob_points() -> (Matrix, Vec<usize>) {
        // Three tight, well-separated blobs on a line.
        let mut rows = Vec::new();
        let mut truth = Vec::new();
        for (c, center) in [0.0f64, 10.0, 20.0].iter().enumerate() {
            for off in [-0.1, 0.0, 0.1, 0.05, -0.05] {
                rows.push(vec![center + off, center * 0.5]);
                truth.push(c);
            }
        }
        (Matrix::from_rows(&rows).unwrap(), truth)
    }

    #[test]
    fn separated_blobs_recovered() {
        let (pts, truth) = blob_points();
        let res = kmeans(&pts, 3, DEFAULT_RESTARTS, 7).unwrap();
        // Same-blob points share a label, cross-blob points do not.
        for i in 0..truth.len() {
            for j in 0..truth.len() {
                assert_eq!(truth[i] == truth[j], res.labels[i] == res.labels[j]);
            }
        }
        assert!(res.cost < 1.0);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let (pts, _) = blob_points();
        let a = kmeans(&pts, 3, 4, 42).unwrap();
        let b = kmeans(&pts, 3, 4, 42).unwrap();
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.cost.to_bits(), b.cost.to_bits());
    }

    #[test]
    fn k_equals_n_gives_zero_cost() {
        let pts = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![5.0]]).unwrap();
        let res = kmeans(&pts, 3, 3, 1).unwrap();
        assert!(res.cost <= 1e-20);
        let mut sorted = res.labels.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
    }

    #[test]
    fn duplicate_points_do_not_panic() {
        let pts = Matrix::from_rows(&[vec![1.0, 1.0]; 6]).unwrap();
        let res = kmeans(&pts, 3, 2, 3).unwrap();
        assert!(res.cost <= 1e-18);
    }

    #[test]
    fn rejects_bad_k() {
        let pts = Matrix::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        assert!(kmeans(&pts, 0, 1, 0).is_err());
        assert!(kmeans(&pts, 3, 1, 0).is_err());
    }
}
