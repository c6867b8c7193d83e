//! Principal component analysis via cyclic Jacobi eigendecomposition.
//!
//! Components are the top-k eigenvectors of the sample covariance matrix
//! (divide by n−1), orthonormal and sorted by descending eigenvalue. When
//! there are fewer rows than columns the n×n Gram matrix is decomposed
//! instead and mapped back — the same fit at a fraction of the cost.

use crate::error::{ConfigError, Error, NumericError, Result};

const JACOBI_OFFDIAG_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Fitted PCA basis.
#[derive(Debug, Clone)]
pub struct PcaFit {
    pub dim: usize,
    pub k: usize,
    /// Column means of the training data, length `dim`.
    pub mean: Vec<f64>,
    /// Row-major `[k, dim]`; rows are orthonormal components.
    pub components: Vec<f64>,
    /// Eigenvalues matching the components, non-increasing.
    pub explained_variance: Vec<f64>,
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix (row-major n×n).
/// Returns (eigenvalues, eigenvectors as rows), sorted by descending value.
fn jacobi_eigen_sym(mut a: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    // v starts as identity; accumulated rotations leave eigenvectors in its
    // columns (v[i*n + j] = component i of eigenvector j).
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n == 1 {
        return Ok((vec![a[0]], v));
    }

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q].abs())
            .sum();
        if off < JACOBI_OFFDIAG_TOL {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < JACOBI_OFFDIAG_TOL / (n * n) as f64 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta.abs() > 1e140 {
                    // Degenerate angle; rotation is effectively zero.
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    if i != p && i != q {
                        let aip = a[i * n + p];
                        let aiq = a[i * n + q];
                        a[i * n + p] = aip - s * (aiq + tau * aip);
                        a[i * n + q] = aiq + s * (aip - tau * aiq);
                        a[p * n + i] = a[i * n + p];
                        a[q * n + i] = a[i * n + q];
                    }
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = vip - s * (viq + tau * vip);
                    v[i * n + q] = viq + s * (vip - tau * viq);
                }
            }
        }
    }
    if !converged {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q].abs())
            .sum();
        if off >= JACOBI_OFFDIAG_TOL {
            return Err(Error::Numeric(NumericError::NoConvergence {
                what: "Jacobi eigendecomposition".into(),
                detail: format!("off-diagonal sum {off:e} after {JACOBI_MAX_SWEEPS} sweeps"),
            }));
        }
    }

    // Sort eigenpairs by descending eigenvalue; emit eigenvectors as rows.
    let mut order: Vec<usize> = (0..n).collect();
    let eigvals: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    order.sort_by(|&x, &y| eigvals[y].partial_cmp(&eigvals[x]).expect("finite"));
    let sorted_vals: Vec<f64> = order.iter().map(|&i| eigvals[i]).collect();
    let mut rows = vec![0.0; n * n];
    for (r, &col) in order.iter().enumerate() {
        for i in 0..n {
            rows[r * n + i] = v[i * n + col];
        }
    }
    Ok((sorted_vals, rows))
}

/// Fit a k-component PCA on row-major `[n, dim]` data.
pub fn fit(data: &[f64], n: usize, dim: usize, k: usize) -> Result<PcaFit> {
    if n < 2 {
        return Err(Error::Config(ConfigError::Invalid {
            reason: format!("pca requires at least 2 rows, got {n}"),
        }));
    }
    if k == 0 || k > dim {
        return Err(Error::Config(ConfigError::Invalid {
            reason: format!("pca component count {k} out of range 1..={dim}"),
        }));
    }
    assert_eq!(data.len(), n * dim, "data length mismatch");

    let mut mean = vec![0.0; dim];
    for row in data.chunks_exact(dim) {
        for (m, x) in mean.iter_mut().zip(row) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let centered: Vec<f64> = data
        .chunks_exact(dim)
        .flat_map(|row| row.iter().zip(&mean).map(|(x, m)| x - m))
        .collect();

    let denom = (n - 1) as f64;
    if n > dim {
        // Covariance route: dim × dim.
        let mut cov = vec![0.0; dim * dim];
        for row in centered.chunks_exact(dim) {
            for i in 0..dim {
                let ri = row[i];
                if ri == 0.0 {
                    continue;
                }
                for j in i..dim {
                    cov[i * dim + j] += ri * row[j];
                }
            }
        }
        for i in 0..dim {
            for j in i..dim {
                cov[i * dim + j] /= denom;
                cov[j * dim + i] = cov[i * dim + j];
            }
        }
        let (vals, vecs) = jacobi_eigen_sym(cov, dim)?;
        Ok(PcaFit {
            dim,
            k,
            mean,
            components: vecs[..k * dim].to_vec(),
            explained_variance: vals[..k].to_vec(),
        })
    } else {
        // Gram route: eigenvectors u of X·Xᵀ/(n−1) map to components
        // Xᵀ·u / √(λ·(n−1)). Only rank(X) eigenvalues are meaningful.
        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            let ri = &centered[i * dim..(i + 1) * dim];
            for j in i..n {
                let rj = &centered[j * dim..(j + 1) * dim];
                let dot: f64 = ri.iter().zip(rj).map(|(a, b)| a * b).sum();
                gram[i * n + j] = dot / denom;
                gram[j * n + i] = gram[i * n + j];
            }
        }
        let (vals, vecs) = jacobi_eigen_sym(gram, n)?;
        let rank_tol = vals.first().copied().unwrap_or(0.0).max(1.0) * 1e-12;
        let usable = vals.iter().take_while(|&&v| v > rank_tol).count();
        if k > usable {
            return Err(Error::Config(ConfigError::Invalid {
                reason: format!(
                    "pca component count {k} exceeds data rank {usable} (n={n}, dim={dim})"
                ),
            }));
        }
        let mut components = vec![0.0; k * dim];
        for r in 0..k {
            let u = &vecs[r * n..(r + 1) * n];
            let comp = &mut components[r * dim..(r + 1) * dim];
            for (i, &ui) in u.iter().enumerate() {
                if ui == 0.0 {
                    continue;
                }
                let row = &centered[i * dim..(i + 1) * dim];
                for (c, x) in comp.iter_mut().zip(row) {
                    *c += ui * x;
                }
            }
            let norm = (vals[r] * denom).sqrt();
            for c in comp.iter_mut() {
                *c /= norm;
            }
        }
        Ok(PcaFit {
            dim,
            k,
            mean,
            components,
            explained_variance: vals[..k].to_vec(),
        })
    }
}

/// Project row-major `[n, dim]` data: (x − mean)·componentsᵀ → `[n, k]`.
pub fn transform(fit: &PcaFit, data: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(data.len(), n * fit.dim, "data length mismatch");
    let mut out = vec![0.0; n * fit.k];
    for (r, row) in data.chunks_exact(fit.dim).enumerate() {
        for c in 0..fit.k {
            let comp = &fit.components[c * fit.dim..(c + 1) * fit.dim];
            let mut acc = 0.0;
            for ((x, m), w) in row.iter().zip(&fit.mean).zip(comp) {
                acc += (x - m) * w;
            }
            out[r * fit.k + c] = acc;
        }
    }
    out
}

/// Reconstruct from the projected space: z·components + mean.
pub fn inverse_transform(fit: &PcaFit, projected: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(projected.len(), n * fit.k, "projected length mismatch");
    let mut out = vec![0.0; n * fit.dim];
    for r in 0..n {
        let row = &mut out[r * fit.dim..(r + 1) * fit.dim];
        row.copy_from_slice(&fit.mean);
        for c in 0..fit.k {
            let z = projected[r * fit.k + c];
            if z == 0.0 {
                continue;
            }
            let comp = &fit.components[c * fit.dim..(c + 1) * fit.dim];
            for (o, w) in row.iter_mut().zip(comp) {
                *o += z * w;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rng::Prng;

    fn random_data(n: usize, d: usize, rng: &mut Prng) -> Vec<f64> {
        (0..n * d).map(|_| rng.gaussian()).collect()
    }

    fn column_sample_variance(data: &[f64], n: usize, k: usize, col: usize) -> f64 {
        let mean: f64 = (0..n).map(|i| data[i * k + col]).sum::<f64>() / n as f64;
        (0..n)
            .map(|i| (data[i * k + col] - mean).powi(2))
            .sum::<f64>()
            / (n - 1) as f64
    }

    #[test]
    fn axis_aligned_variances_recover_axes() {
        // Columns with variances 4 and 1: first component must be ±e1.
        let mut rng = Prng::new(0);
        let n = 400;
        let mut data = Vec::with_capacity(n * 2);
        for _ in 0..n {
            data.push(2.0 * rng.gaussian());
            data.push(rng.gaussian());
        }
        let fit = fit(&data, n, 2, 2).unwrap();
        assert!(fit.components[0].abs() > 0.99, "{:?}", &fit.components[..2]);
        assert!(fit.components[1].abs() < 0.15);
        assert!((fit.explained_variance[0] - 4.0).abs() < 0.6);
        assert!((fit.explained_variance[1] - 1.0).abs() < 0.2);
    }

    #[test]
    fn full_basis_reconstructs_data() {
        let mut rng = Prng::new(1);
        let (n, d) = (50, 5);
        let data = random_data(n, d, &mut rng);
        let fit = fit(&data, n, d, d).unwrap();
        let z = transform(&fit, &data, n);
        let back = inverse_transform(&fit, &z, n);
        for (a, b) in data.iter().zip(&back) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn components_are_orthonormal() {
        let mut rng = Prng::new(2);
        let (n, d) = (80, 7);
        let data = random_data(n, d, &mut rng);
        let fit = fit(&data, n, d, d).unwrap();
        for i in 0..d {
            for j in 0..d {
                let dot: f64 = (0..d)
                    .map(|t| fit.components[i * d + t] * fit.components[j * d + t])
                    .sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-9, "({i},{j}) dot = {dot}");
            }
        }
    }

    #[test]
    fn explained_variance_non_increasing_and_matches_projection() {
        let mut rng = Prng::new(3);
        let (n, d, k) = (120, 6, 4);
        let data = random_data(n, d, &mut rng);
        let fit = fit(&data, n, d, k).unwrap();
        for w in fit.explained_variance.windows(2) {
            assert!(w[0] >= w[1] - 1e-12);
        }
        let z = transform(&fit, &data, n);
        for j in 0..k {
            let var = column_sample_variance(&z, n, k, j);
            assert!(
                (var - fit.explained_variance[j]).abs() < 1e-6,
                "col {j}: {var} vs {}",
                fit.explained_variance[j]
            );
        }
    }

    #[test]
    fn transforming_the_mean_gives_zero() {
        let mut rng = Prng::new(4);
        let (n, d) = (30, 4);
        let data = random_data(n, d, &mut rng);
        let fit = fit(&data, n, d, 3).unwrap();
        let z = transform(&fit, &fit.mean.clone(), 1);
        for v in z {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn gram_route_agrees_with_covariance_route() {
        // n < d triggers the Gram path; compare projected variances and
        // reconstruction against a wide slice of the same data run tall.
        let mut rng = Prng::new(5);
        let (n, d, k) = (12, 30, 5);
        let data = random_data(n, d, &mut rng);
        let fit = fit(&data, n, d, k).unwrap();
        // Orthonormal rows.
        for i in 0..k {
            for j in 0..k {
                let dot: f64 = (0..d)
                    .map(|t| fit.components[i * d + t] * fit.components[j * d + t])
                    .sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-9);
            }
        }
        let z = transform(&fit, &data, n);
        for j in 0..k {
            let var = column_sample_variance(&z, n, k, j);
            assert!((var - fit.explained_variance[j]).abs() < 1e-8);
        }
    }

    #[test]
    fn argument_errors() {
        let data = vec![0.0; 4];
        assert!(fit(&data, 1, 4, 1).is_err()); // n < 2
        let data = vec![0.0; 8];
        assert!(fit(&data, 2, 4, 5).is_err()); // k > d
        assert!(fit(&data, 2, 4, 0).is_err()); // k == 0
    }
}
