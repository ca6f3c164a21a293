//! Small dense spectral routines.

use nalgebra::{Complex, DMatrix};

/// Coefficients `[1, c1, …, cn]` of `det(λI − M) = λⁿ + c1 λⁿ⁻¹ + … + cn`,
/// by the Faddeev–LeVerrier recurrence.
pub fn characteristic_polynomial(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix must be square");
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1.0);
    let mut mk = DMatrix::<f64>::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I
        mk = m * &mk;
        for i in 0..n {
            mk[(i, i)] += coeffs[k - 1];
        }
        let c = -(m * &mk).trace() / k as f64;
        coeffs.push(c);
    }
    coeffs
}

/// Relative threshold below which a coefficient counts as zero.
pub const COEFF_ZERO_REL: f64 = 1e-9;

/// Multiplicity of the root 0: the number of trailing coefficients that are
/// zero relative to the largest coefficient.
pub fn zero_root_multiplicity(coeffs: &[f64]) -> usize {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    coeffs
        .iter()
        .rev()
        .take_while(|c| c.abs() < COEFF_ZERO_REL * scale)
        .count()
}

/// A Gershgorin disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub center: f64,
    pub radius: f64,
}

/// Column Gershgorin discs: center `M[k][k]`, radius `Σ_{j≠k} |M[j][k]|`.
pub fn column_gershgorin_discs(m: &DMatrix<f64>) -> Vec<Disc> {
    (0..m.ncols())
        .map(|k| Disc {
            center: m[(k, k)],
            radius: (0..m.nrows()).filter(|&j| j != k).map(|j| m[(j, k)].abs()).sum(),
        })
        .collect()
}

/// Eigenvalues by the Schur (shifted QR) decomposition. Used as an
/// independent cross-check of the characteristic-polynomial route.
pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<Complex<f64>> {
    m.clone().complex_eigenvalues().iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faddeev_leverrier_small_cases() {
        // [[2,1],[1,2]]: λ² − 4λ + 3
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        assert_eq!(characteristic_polynomial(&m), vec![1.0, -4.0, 3.0]);
        // upper triangular with diagonal 1,2,3: (λ−1)(λ−2)(λ−3)
        let t = DMatrix::from_row_slice(3, 3, &[1.0, 5.0, 7.0, 0.0, 2.0, 4.0, 0.0, 0.0, 3.0]);
        let c = characteristic_polynomial(&t);
        for (a, b) in c.iter().zip([1.0, -6.0, 11.0, -6.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(zero_root_multiplicity(&[1.0, 2.0, 0.0, 0.0]), 2);
        assert_eq!(zero_root_multiplicity(&[1.0, -3.0, 2.0]), 0);
    }

    #[test]
    fn eigen_oracle_agrees_with_polynomial() {
        let m = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        let mut ev = eigenvalues(&m);
        ev.sort_by(|a, b| b.re.total_cmp(&a.re));
        assert!((ev[0].re - 1.0).abs() < 1e-12 && ev[0].im.abs() < 1e-12);
        assert!((ev[1].re + 0.5).abs() < 1e-12);
        assert!((ev[1].im.abs() - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn gershgorin_columns() {
        let m = DMatrix::from_row_slice(2, 2, &[-1.0, 2.0, 1.0, -2.0]);
        let d = column_gershgorin_discs(&m);
        assert_eq!(d[0], Disc { center: -1.0, radius: 1.0 });
        assert_eq!(d[1], Disc { center: -2.0, radius: 2.0 });
    }
}
