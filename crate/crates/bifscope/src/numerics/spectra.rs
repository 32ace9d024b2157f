//! Eigenvalues of small dense nonsymmetric matrices.

use num_complex::Complex64;

use super::{check_square, ComplexList, RealMatrix};
use crate::error::Result;

/// All `N` eigenvalues of a real square matrix, sorted by real part then
/// imaginary part. Delegates to nalgebra's real Schur reduction (Hessenberg +
/// Francis double-shift QR), which is robust for the defective matrices that
/// canonical-form compensators produce.
pub fn eigenvalues(m: &RealMatrix) -> Result<ComplexList> {
    check_square(m, "eigenvalues input")?;
    let mut eigs: ComplexList = m.complex_eigenvalues().iter().copied().collect();
    eigs.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(eigs)
}

/// Checks that a spectrum is closed under conjugation within `tol`.
pub fn conjugate_paired(eigs: &[Complex64], tol: f64) -> bool {
    eigs.iter().all(|z| {
        z.im.abs() <= tol
            || eigs
                .iter()
                .any(|w| (w - z.conj()).norm() <= tol * (1.0 + z.norm()))
    })
}

/// Number of eigenvalues strictly outside the unit circle (|z| > 1 + tol).
pub fn count_outside_unit_circle(eigs: &[Complex64], tol: f64) -> usize {
    eigs.iter().filter(|z| z.norm() > 1.0 + tol).count()
}
