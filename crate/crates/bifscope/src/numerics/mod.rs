//! Small dense linear-algebra and complex-analysis kernels.
//!
//! Everything here operates on `nalgebra` dynamic matrices. System dimensions
//! in this crate are tiny (N <= 16), so O(N^3) algorithms are used throughout
//! without apology.

mod expm;
mod roots;
mod spectra;
mod winding;

pub use expm::{expm, expm_integral};
pub use roots::find_bracketed_roots;
pub use spectra::{conjugate_paired, count_outside_unit_circle, eigenvalues};
pub use winding::{winding_number, winding_number_adaptive, ComplexCurve};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Dense real matrix, row-major semantics, N <= 16 per side.
pub type RealMatrix = DMatrix<f64>;
/// Dense real column vector.
pub type RealVector = DVector<f64>;
/// Ordered list of complex values (e.g. the sampled-data poles).
pub type ComplexList = Vec<num_complex::Complex64>;

/// Hard cap on matrix dimensions accepted by the kernels in this module.
pub const MAX_DIM: usize = 16;

pub(crate) fn check_square(m: &RealMatrix, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() > MAX_DIM {
        return Err(Error::Dimension(format!(
            "{what} is {}x{}, larger than the supported {MAX_DIM}x{MAX_DIM}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Solve A x = b by LU with partial pivoting.
pub(crate) fn solve_real(a: &RealMatrix, b: &RealVector, what: &str) -> Result<RealVector> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Singular(what.to_string()))
}
