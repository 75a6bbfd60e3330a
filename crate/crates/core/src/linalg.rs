//! Small dense-matrix helpers shared across the crate.
//!
//! Everything here operates on `DMatrix<Complex64>` Hermitian matrices. The
//! eigenvalue-based square root and PSD clip implement the documented
//! tolerance policy: eigenvalues below `-1e-10 * ||A||` are rejected, values
//! in `[-1e-10 * ||A||, 0]` are clipped to zero (quadrature noise).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative eigenvalue tolerance for accepting a noisy PSD matrix.
pub const PSD_EIG_TOL: f64 = 1e-10;

pub fn identity(n: usize) -> DMatrix<Complex64> {
    DMatrix::identity(n, n)
}

pub fn zeros(n: usize) -> DMatrix<Complex64> {
    DMatrix::zeros(n, n)
}

/// Max absolute deviation from Hermitian symmetry.
pub fn hermitian_deviation(a: &DMatrix<Complex64>) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

/// (A + A^H)/2, discarding antisymmetric rounding noise.
pub fn hermitianize(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut out = a.clone();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            out[(i, j)] = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
        }
    }
    out
}

fn check_square(a: &DMatrix<Complex64>, what: &str) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{what}: expected square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix (real eigenvalues ascending is
/// not guaranteed by nalgebra; callers must not rely on ordering).
fn hermitian_eigen(a: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = hermitianize(a).symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Clip a noisy Hermitian matrix to the nearest PSD matrix.
///
/// Eigenvalues below `-PSD_EIG_TOL * ||A||` indicate a genuinely indefinite
/// input and are rejected; small negatives are set to zero.
pub fn psd_clip(a: &DMatrix<Complex64>, what: &str) -> Result<DMatrix<Complex64>> {
    check_square(a, what)?;
    let (vals, vecs) = hermitian_eigen(a);
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = -PSD_EIG_TOL * scale.max(1e-300);
    for &v in &vals {
        if v < floor {
            return Err(Error::NotPsd(format!(
                "{what}: eigenvalue {v:.3e} below tolerance {floor:.3e}"
            )));
        }
    }
    let clipped: Vec<f64> = vals.iter().map(|&v| v.max(0.0)).collect();
    Ok(reassemble(&clipped, &vecs))
}

/// Hermitian PSD square root via eigendecomposition, with the same clip
/// policy as [`psd_clip`].
pub fn sqrt_psd(a: &DMatrix<Complex64>, what: &str) -> Result<DMatrix<Complex64>> {
    check_square(a, what)?;
    let (vals, vecs) = hermitian_eigen(a);
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = -PSD_EIG_TOL * scale.max(1e-300);
    for &v in &vals {
        if v < floor {
            return Err(Error::NotPsd(format!(
                "{what}: eigenvalue {v:.3e} below tolerance {floor:.3e}"
            )));
        }
    }
    let roots: Vec<f64> = vals.iter().map(|&v| v.max(0.0).sqrt()).collect();
    Ok(reassemble(&roots, &vecs))
}

fn reassemble(vals: &[f64], vecs: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = vecs.nrows();
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        for i in 0..n {
            scaled[(i, j)] *= Complex64::new(v, 0.0);
        }
    }
    let out = &scaled * vecs.adjoint();
    hermitianize(&out)
}

/// log det of a Hermitian positive definite matrix, via Cholesky.
pub fn logdet_hermitian_pd(a: &DMatrix<Complex64>, what: &str) -> Result<f64> {
    let chol = hermitianize(a)
        .cholesky()
        .ok_or_else(|| Error::NotPsd(format!("{what}: Cholesky failed (not positive definite)")))?;
    let l = chol.l();
    let mut acc = 0.0;
    for i in 0..l.nrows() {
        acc += l[(i, i)].re.ln();
    }
    Ok(2.0 * acc)
}

/// Re Tr(A B) without forming the product.
pub fn trace_product_re(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(b.ncols(), a.nrows());
    let mut acc = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

pub fn trace_re(a: &DMatrix<Complex64>) -> f64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)].re).sum()
}

/// Deterministic pairwise summation; independent of thread count because it
/// runs over an index-ordered slice.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    pairwise_sum(xs) / xs.len() as f64
}

/// Unbiased sample variance (pairwise-summed).
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let sq: Vec<f64> = xs.iter().map(|&x| (x - m) * (x - m)).collect();
    pairwise_sum(&sq) / (xs.len() - 1) as f64
}

/// Load a complex matrix from CSV text: one matrix row per line, cells are
/// alternating re,im pairs (so a G-column matrix has 2G numbers per line).
pub fn parse_complex_csv(text: &str) -> Result<DMatrix<Complex64>> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums: Vec<f64> = line
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
            })
            .collect::<Result<_>>()?;
        if nums.len() % 2 != 0 {
            return Err(Error::Parse(format!(
                "line {}: odd number of values; expected re,im pairs",
                lineno + 1
            )));
        }
        rows.push(nums.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect());
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse("ragged rows in matrix CSV".into()));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sqrt_of_psd_matrix_squares_back() {
        let a = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.5, 0.5), c(0.5, -0.5), c(1.0, 0.0)]);
        let r = sqrt_psd(&a, "a").unwrap();
        let sq = &r * &r;
        for i in 0..2 {
            for j in 0..2 {
                assert_relative_eq!(sq[(i, j)].re, a[(i, j)].re, epsilon = 1e-12);
                assert_relative_eq!(sq[(i, j)].im, a[(i, j)].im, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!(matches!(sqrt_psd(&a, "a"), Err(Error::NotPsd(_))));
    }

    #[test]
    fn psd_clip_zeroes_tiny_negatives() {
        let mut a = identity(3);
        a[(2, 2)] = c(-1e-14, 0.0);
        let clipped = psd_clip(&a, "a").unwrap();
        let eig = clipped.symmetric_eigen();
        assert!(eig.eigenvalues.iter().all(|&v| v >= -1e-16));
    }

    #[test]
    fn logdet_matches_known_value() {
        let a = DMatrix::from_row_slice(2, 2, &[c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(9.0, 0.0)]);
        assert_relative_eq!(logdet_hermitian_pd(&a, "a").unwrap(), (36.0f64).ln(), epsilon = 1e-12);
    }

    #[test]
    fn trace_product_agrees_with_full_product() {
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 0.5)]);
        let b = DMatrix::from_row_slice(2, 2, &[c(0.5, -0.2), c(1.0, 0.0), c(2.0, 2.0), c(-1.0, 0.0)]);
        let full = (&a * &b).trace().re;
        assert_relative_eq!(trace_product_re(&a, &b), full, epsilon = 1e-12);
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<f64> = (0..1001).map(|i| (i as f64) * 0.1).collect();
        let naive: f64 = xs.iter().sum();
        assert_relative_eq!(pairwise_sum(&xs), naive, epsilon = 1e-9);
    }

    #[test]
    fn csv_roundtrip() {
        let text = "1.0,0.0,0.5,-0.25\n0.5,0.25,2.0,0.0\n";
        let m = parse_complex_csv(text).unwrap();
        assert_eq!(m.nrows(), 2);
        assert_eq!(m.ncols(), 2);
        assert_eq!(m[(0, 1)], c(0.5, -0.25));
        assert_eq!(m[(1, 0)], c(0.5, 0.25));
    }

    #[test]
    fn csv_rejects_ragged() {
        assert!(parse_complex_csv("1,0\n1,0,2,0\n").is_err());
        assert!(parse_complex_csv("1,0,2\n").is_err());
    }
}
