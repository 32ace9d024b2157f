//! Matrix exponential by scaling-and-squaring with a degree-13 Pade
//! approximant (Higham 2005), plus the augmented-block trick for the
//! convolution integral that shows up in every periodic-orbit formula.

use nalgebra::DMatrix;

use super::{check_square, RealMatrix};
use crate::error::{Error, Result};

/// 1-norm bound under which the [13/13] Pade approximant is accurate to
/// machine precision.
const THETA_13: f64 = 5.371920351148152;

const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn one_norm(m: &RealMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Computes `exp(A t)`.
///
/// Uses eigendecomposition-free scaling and squaring, so defective matrices
/// (canonical-form compensators produce them) are handled without fuss.
pub fn expm(a: &RealMatrix, t: f64) -> Result<RealMatrix> {
    check_square(a, "expm input")?;
    if !t.is_finite() || a.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidModel("non-finite input to expm".into()));
    }
    let n = a.nrows();
    let at = a * t;

    let norm = one_norm(&at);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = &at / 2f64.powi(s);

    let b = &PADE_13;
    let ident = DMatrix::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    // U = A [A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I]
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9])
        + &a6 * b[7]
        + &a4 * b[5]
        + &a2 * b[3]
        + &ident * b[1];
    let u = &scaled * u_inner;
    // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8])
        + &a6 * b[6]
        + &a4 * b[4]
        + &a2 * b[2]
        + &ident * b[0];

    let mut r = (&v - &u)
        .lu()
        .solve(&(&v + &u))
        .ok_or_else(|| Error::Singular("Pade denominator in expm".into()))?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}

/// Computes `int_0^t exp(A s) ds * B` without inverting `A`.
///
/// The integral is read off the top-right block of the exponential of the
/// augmented matrix `[[A, B], [0, 0]]`, so a singular `A` (integrator pole at
/// zero) is handled exactly rather than by nudging the pole.
pub fn expm_integral(a: &RealMatrix, t: f64, b: &RealMatrix) -> Result<RealMatrix> {
    check_square(a, "expm_integral input")?;
    let n = a.nrows();
    let m = b.ncols();
    if b.nrows() != n {
        return Err(Error::Dimension(format!(
            "expm_integral: A is {n}x{n} but B is {}x{}",
            b.nrows(),
            b.ncols()
        )));
    }
    let mut aug = DMatrix::zeros(n + m, n + m);
    aug.view_mut((0, 0), (n, n)).copy_from(a);
    aug.view_mut((0, n), (n, m)).copy_from(b);
    let e = expm(&aug, t)?;
    Ok(e.view((0, n), (n, m)).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Plain truncated Taylor series; fine for ||At|| <= 2 and 30 terms.
    fn expm_taylor(a: &RealMatrix, t: f64, terms: usize) -> RealMatrix {
        let n = a.nrows();
        let at = a * t;
        let mut sum = DMatrix::identity(n, n);
        let mut term = DMatrix::<f64>::identity(n, n);
        for k in 1..=terms {
            term = &term * &at / k as f64;
            sum += &term;
        }
        sum
    }

    #[test]
    fn zero_matrix_gives_identity() {
        let a = RealMatrix::zeros(2, 2);
        let e = expm(&a, 1.0).unwrap();
        assert_relative_eq!(e, DMatrix::identity(2, 2), epsilon = 1e-15);
    }

    #[test]
    fn nilpotent_series_terminates() {
        let a = RealMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let e = expm(&a, 1.0).unwrap();
        let want = RealMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert_relative_eq!(e, want, epsilon = 1e-15);
    }

    #[test]
    fn matches_taylor_oracle_on_random_3x3() {
        // Fixed pseudo-random matrices with ||At|| <= 2.
        let cases = [
            [0.3, -0.7, 0.2, 0.5, 0.1, -0.4, -0.2, 0.6, 0.05],
            [-0.5, 0.25, 0.8, 0.0, -0.3, 0.45, 0.6, -0.1, -0.2],
            [0.11, 0.52, -0.33, -0.44, 0.05, 0.61, 0.27, -0.58, 0.19],
        ];
        for c in cases {
            let a = RealMatrix::from_row_slice(3, 3, &c);
            let got = expm(&a, 1.3).unwrap();
            let want = expm_taylor(&a, 1.3, 30);
            assert_relative_eq!(got, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn large_norm_scaling_path() {
        // ||At|| >> theta_13 exercises the squaring loop; check against the
        // semigroup property instead of Taylor (which would need many terms).
        let a = RealMatrix::from_row_slice(2, 2, &[0.0, 40.0, -40.0, -2.0]);
        let full = expm(&a, 1.0).unwrap();
        let half = expm(&a, 0.5).unwrap();
        assert_relative_eq!(full, &half * &half, epsilon = 1e-9, max_relative = 1e-9);
    }

    #[test]
    fn integral_with_zero_a_is_t_b() {
        let a = RealMatrix::zeros(2, 2);
        let b = DMatrix::identity(2, 2);
        let i = expm_integral(&a, 2.0, &b).unwrap();
        assert_relative_eq!(i, &b * 2.0, epsilon = 1e-14);
    }

    #[test]
    fn integral_scalar_closed_form() {
        let a = RealMatrix::from_row_slice(1, 1, &[-1.0]);
        let b = RealMatrix::from_row_slice(1, 1, &[1.0]);
        let i = expm_integral(&a, 1.0, &b).unwrap();
        assert_relative_eq!(i[(0, 0)], 1.0 - (-1.0f64).exp(), epsilon = 1e-14);
    }

    /// Adaptive Simpson quadrature of exp(A s) B, entrywise.
    fn quad_oracle(a: &RealMatrix, t: f64, b: &RealMatrix) -> RealMatrix {
        fn simpson(
            f: &dyn Fn(f64) -> RealMatrix,
            lo: f64,
            hi: f64,
            flo: &RealMatrix,
            fmid: &RealMatrix,
            fhi: &RealMatrix,
            depth: u32,
        ) -> RealMatrix {
            let mid = 0.5 * (lo + hi);
            let lm = f(0.5 * (lo + mid));
            let mh = f(0.5 * (mid + hi));
            let whole = (flo + fmid * 4.0 + fhi) * ((hi - lo) / 6.0);
            let left = (flo + &lm * 4.0 + fmid) * ((mid - lo) / 6.0);
            let right = (fmid + &mh * 4.0 + fhi) * ((hi - mid) / 6.0);
            let refined = &left + &right;
            let err = (&refined - &whole).abs().max();
            if depth == 0 || err < 1e-12 {
                refined
            } else {
                simpson(f, lo, mid, flo, &lm, fmid, depth - 1)
                    + simpson(f, mid, hi, fmid, &mh, fhi, depth - 1)
            }
        }
        let f = |s: f64| expm(a, s).unwrap() * b;
        let flo = f(0.0);
        let fmid = f(0.5 * t);
        let fhi = f(t);
        simpson(&f, 0.0, t, &flo, &fmid, &fhi, 20)
    }

    #[test]
    fn integral_matches_quadrature_on_singular_a() {
        // Rank-deficient A: rows 2 and 3 are multiples of row 1.
        let a = RealMatrix::from_row_slice(3, 3, &[0.4, -0.2, 0.6, 0.8, -0.4, 1.2, -0.4, 0.2, -0.6]);
        assert!(a.clone().lu().is_invertible() == false || a.determinant().abs() < 1e-12);
        let b = RealMatrix::from_row_slice(3, 1, &[1.0, -0.5, 0.25]);
        let got = expm_integral(&a, 0.9, &b).unwrap();
        let want = quad_oracle(&a, 0.9, &b);
        assert_relative_eq!(got, want, epsilon = 1e-10, max_relative = 1e-10);
    }

    #[test]
    fn rejects_non_square() {
        let a = RealMatrix::zeros(2, 3);
        assert!(expm(&a, 1.0).is_err());
    }

    #[test]
    fn rejects_mismatched_b() {
        let a = RealMatrix::zeros(2, 2);
        let b = RealMatrix::zeros(3, 1);
        assert!(expm_integral(&a, 1.0, &b).is_err());
    }
}
