//! Compensator transfer functions and their state-space realizations.

use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SwitchedSystem;
use crate::error::{Error, Result};
use crate::numerics::{RealMatrix, RealVector};

/// Factored compensator transfer function
///
/// ```text
///            gain * prod_i (1 + s/z_i)
/// G(s) = ------------------------------------
///        (s + delta)? * prod_j (1 + s/p_j)
/// ```
///
/// `zeros`/`poles` are corner frequencies in rad/s; `integrator_offset`
/// contributes the `(s + delta)` factor used for the quasi-integrator pole.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferFunction {
    pub gain: f64,
    pub zeros: Vec<f64>,
    pub poles: Vec<f64>,
    pub integrator_offset: Option<f64>,
}

impl TransferFunction {
    pub fn constant(k: f64) -> Self {
        Self {
            gain: k,
            zeros: vec![],
            poles: vec![],
            integrator_offset: None,
        }
    }

    pub fn num_degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn den_degree(&self) -> usize {
        self.poles.len() + usize::from(self.integrator_offset.is_some())
    }

    /// Numerator coefficients, ascending powers of s.
    pub fn num_coeffs(&self) -> Vec<f64> {
        let mut c = vec![self.gain];
        for &z in &self.zeros {
            c = poly_mul(&c, &[1.0, 1.0 / z]);
        }
        c
    }

    /// Denominator coefficients, ascending powers of s.
    pub fn den_coeffs(&self) -> Vec<f64> {
        let mut c = vec![1.0];
        if let Some(delta) = self.integrator_offset {
            c = poly_mul(&c, &[delta, 1.0]);
        }
        for &p in &self.poles {
            c = poly_mul(&c, &[1.0, 1.0 / p]);
        }
        c
    }

    /// Direct rational evaluation at a complex frequency.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut num = Complex64::new(self.gain, 0.0);
        for &z in &self.zeros {
            num *= 1.0 + s / z;
        }
        let mut den = Complex64::new(1.0, 0.0);
        if let Some(delta) = self.integrator_offset {
            den *= s + delta;
        }
        for &p in &self.poles {
            den *= 1.0 + s / p;
        }
        num / den
    }
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Single-input single-output state-space realization.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub a: RealMatrix,
    pub b: RealVector,
    pub c: RowDVector<f64>,
    pub d: f64,
}

impl Realization {
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// Transfer function value `C (sI - A)^{-1} B + D`.
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let n = self.order();
        if n == 0 {
            return Ok(Complex64::new(self.d, 0.0));
        }
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex64::new(-self.a[(i, j)], 0.0);
            }
            m[(i, i)] += s;
        }
        let rhs = DVector::from_iterator(n, self.b.iter().map(|&x| Complex64::new(x, 0.0)));
        let sol = m
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Singular("resolvent in Realization::eval".into()))?;
        let mut acc = Complex64::new(self.d, 0.0);
        for i in 0..n {
            acc += Complex64::new(self.c[i], 0.0) * sol[i];
        }
        Ok(acc)
    }
}

/// Controllable-canonical-form realization of a proper transfer function.
pub fn tf_to_state_space(tf: &TransferFunction) -> Result<Realization> {
    let num = tf.num_coeffs();
    let den = tf.den_coeffs();
    let n = den.len() - 1;
    if num.len() - 1 > n {
        return Err(Error::ImproperTransferFunction {
            num: num.len() - 1,
            den: n,
        });
    }
    // Normalize to a monic denominator.
    let lead = den[n];
    if lead == 0.0 || !lead.is_finite() {
        return Err(Error::InvalidModel("degenerate denominator".into()));
    }
    let a_coeff: Vec<f64> = den.iter().map(|c| c / lead).collect();
    let mut b_coeff = vec![0.0; n + 1];
    for (i, c) in num.iter().enumerate() {
        b_coeff[i] = c / lead;
    }

    if n == 0 {
        return Ok(Realization {
            a: DMatrix::zeros(0, 0),
            b: DVector::zeros(0),
            c: RowDVector::zeros(0),
            d: b_coeff[0],
        });
    }

    let mut a = DMatrix::zeros(n, n);
    for i in 0..n - 1 {
        a[(i, i + 1)] = 1.0;
    }
    for j in 0..n {
        a[(n - 1, j)] = -a_coeff[j];
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let d = b_coeff[n];
    let mut c = RowDVector::zeros(n);
    for j in 0..n {
        c[j] = b_coeff[j] - a_coeff[j] * d;
    }
    Ok(Realization { a, b, c, d })
}

/// Appends compensator states to a switched plant, wiring the error
/// `e = u_2 - y_plant` into the compensator input and taking the compensator
/// output as the new comparator signal `y`.
///
/// The plant's `c`/`d` rows define what the compensator senses; its output
/// rows `e1`/`e2` are preserved.
pub fn compose_plant_compensator(
    plant: &SwitchedSystem,
    comp: &Realization,
) -> Result<SwitchedSystem> {
    plant.validate()?;
    let np = plant.dim();
    let m = comp.order();
    let n = np + m;
    if n > crate::numerics::MAX_DIM {
        return Err(Error::Dimension(format!(
            "composed system dimension {n} exceeds {}",
            crate::numerics::MAX_DIM
        )));
    }

    // Error feedthrough row: e = u2 - (C_p x + D_p u)  ->  de/du = e2' - D_p.
    let mut e_row_u = RowDVector::zeros(2);
    e_row_u[1] = 1.0;
    e_row_u -= &plant.d;

    let build_a = |ap: &RealMatrix| {
        let mut a = DMatrix::zeros(n, n);
        a.view_mut((0, 0), (np, np)).copy_from(ap);
        if m > 0 {
            a.view_mut((np, np), (m, m)).copy_from(&comp.a);
            // Compensator driven by -B_c C_p x.
            let coupling = &comp.b * &plant.c * -1.0;
            a.view_mut((np, 0), (m, np)).copy_from(&coupling);
        }
        a
    };
    let build_b = |bp: &RealMatrix| {
        let mut b = DMatrix::zeros(n, 2);
        b.view_mut((0, 0), (np, 2)).copy_from(bp);
        if m > 0 {
            let drive = &comp.b * &e_row_u;
            b.view_mut((np, 0), (m, 2)).copy_from(&drive);
        }
        b
    };
    let extend = |v: &RealVector| {
        let mut g = DVector::zeros(n);
        g.view_mut((0, 0), (np, 1)).copy_from(v);
        g
    };
    let extend_row = |r: &RowDVector<f64>| {
        let mut out = RowDVector::zeros(n);
        out.view_mut((0, 0), (1, np)).copy_from(r);
        out
    };

    // y = C_c x_c + D_c e = -D_c C_p x + C_c x_c + D_c (e2' - D_p) u
    let mut c = RowDVector::zeros(n);
    c.view_mut((0, 0), (1, np)).copy_from(&(&plant.c * -comp.d));
    if m > 0 {
        c.view_mut((0, np), (1, m)).copy_from(&comp.c);
    }
    let d = &e_row_u * comp.d;

    let sys = SwitchedSystem {
        a1: build_a(&plant.a1),
        a2: build_a(&plant.a2),
        b1: build_b(&plant.b1),
        b2: build_b(&plant.b2),
        g1: extend(&plant.g1),
        g2: extend(&plant.g2),
        c,
        d,
        e1: extend_row(&plant.e1),
        e2: extend_row(&plant.e2),
        e_offset: plant.e_offset,
    };
    sys.validate()?;
    Ok(sys)
}
