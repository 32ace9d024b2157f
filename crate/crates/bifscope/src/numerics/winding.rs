//! Winding numbers of closed complex curves via accumulated argument change.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampled curve in the complex plane, parameterized by strictly increasing
/// angles. Houses F-plots and discrete Nyquist plots.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexCurve {
    pub thetas: Vec<f64>,
    pub points: Vec<Complex64>,
}

impl ComplexCurve {
    pub fn new(thetas: Vec<f64>, points: Vec<Complex64>) -> Result<Self> {
        if thetas.len() != points.len() {
            return Err(Error::Dimension(format!(
                "curve has {} angles but {} points",
                thetas.len(),
                points.len()
            )));
        }
        if thetas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidModel(
                "curve angles must be strictly increasing".into(),
            ));
        }
        if points.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) {
            return Err(Error::InvalidModel("curve contains non-finite points".into()));
        }
        Ok(Self { thetas, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest pairwise extent of the sample points; scale for on-curve tests.
    pub fn diameter(&self) -> f64 {
        let (mut re_min, mut re_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut im_min, mut im_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in &self.points {
            re_min = re_min.min(p.re);
            re_max = re_max.max(p.re);
            im_min = im_min.min(p.im);
            im_max = im_max.max(p.im);
        }
        ((re_max - re_min).powi(2) + (im_max - im_min).powi(2)).sqrt()
    }

    /// Whether first and last point agree within a relative tolerance.
    pub fn is_closed(&self, tol: f64) -> bool {
        match (self.points.first(), self.points.last()) {
            (Some(a), Some(b)) => (a - b).norm() <= tol * (1.0 + self.diameter()),
            _ => false,
        }
    }
}

/// Relative on-boundary tolerance: distinguishes marginal stability from
/// rounding.
const ON_CURVE_REL_TOL: f64 = 1e-9;

fn wrap_to_pi(x: f64) -> f64 {
    let mut y = x % std::f64::consts::TAU;
    if y > std::f64::consts::PI {
        y -= std::f64::consts::TAU;
    } else if y < -std::f64::consts::PI {
        y += std::f64::consts::TAU;
    }
    y
}

/// Signed count of counter-clockwise encirclements of `point` by a closed
/// sampled curve.
///
/// Fails with [`Error::PointOnCurve`] when the point sits on the curve
/// (critical condition) and with [`Error::NeedsRefinement`] when a sampled
/// argument step exceeds pi/2 — with only samples in hand there is no safe
/// way to interpolate across such a jump. Use [`winding_number_adaptive`]
/// when the curve can be re-evaluated.
pub fn winding_number(curve: &ComplexCurve, point: Complex64) -> Result<i32> {
    if curve.len() < 3 {
        return Err(Error::NeedsRefinement);
    }
    if !curve.is_closed(1e-6) {
        return Err(Error::InvalidModel(
            "winding_number requires a closed curve".into(),
        ));
    }
    let scale = curve.diameter().max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    let mut prev = curve.points[0] - point;
    if prev.norm() <= ON_CURVE_REL_TOL * scale {
        return Err(Error::PointOnCurve);
    }
    for p in &curve.points[1..] {
        let cur = p - point;
        if cur.norm() <= ON_CURVE_REL_TOL * scale {
            return Err(Error::PointOnCurve);
        }
        let step = wrap_to_pi(cur.arg() - prev.arg());
        if step.abs() > std::f64::consts::FRAC_PI_2 {
            return Err(Error::NeedsRefinement);
        }
        total += step;
        prev = cur;
    }
    Ok((total / std::f64::consts::TAU).round() as i32)
}

/// Adaptive winding count for a curve given as an evaluation callback over a
/// closed parameter range. Starts from `initial` uniform samples and bisects
/// every step whose argument change exceeds pi/2, up to `2^20` evaluations.
pub fn winding_number_adaptive<F>(
    eval: F,
    t_lo: f64,
    t_hi: f64,
    point: Complex64,
    initial: usize,
) -> Result<i32>
where
    F: Fn(f64) -> Result<Complex64>,
{
    const MAX_EVALS: usize = 1 << 20;
    let n = initial.max(16);
    let mut evals = 0usize;

    let mut sample = |t: f64| -> Result<Complex64> {
        evals += 1;
        if evals > MAX_EVALS {
            return Err(Error::NeedsRefinement);
        }
        eval(t)
    };

    // First pass: uniform samples and a curve scale estimate.
    let ts: Vec<f64> = (0..=n)
        .map(|i| t_lo + (t_hi - t_lo) * i as f64 / n as f64)
        .collect();
    let mut pts = Vec::with_capacity(n + 1);
    for &t in &ts {
        pts.push(sample(t)?);
    }
    let scale = {
        let (mut re_min, mut re_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut im_min, mut im_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in &pts {
            re_min = re_min.min(p.re);
            re_max = re_max.max(p.re);
            im_min = im_min.min(p.im);
            im_max = im_max.max(p.im);
        }
        ((re_max - re_min).powi(2) + (im_max - im_min).powi(2))
            .sqrt()
            .max(f64::MIN_POSITIVE)
    };

    let mut total = 0.0;
    for i in 0..n {
        total += segment_arg(
            &mut sample,
            ts[i],
            pts[i] - point,
            ts[i + 1],
            pts[i + 1] - point,
            point,
            scale,
            0,
        )?;
    }
    Ok((total / std::f64::consts::TAU).round() as i32)
}

#[allow(clippy::too_many_arguments)]
fn segment_arg<F>(
    sample: &mut F,
    t0: f64,
    v0: Complex64,
    t1: f64,
    v1: Complex64,
    point: Complex64,
    scale: f64,
    depth: u32,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if v0.norm() <= ON_CURVE_REL_TOL * scale || v1.norm() <= ON_CURVE_REL_TOL * scale {
        return Err(Error::PointOnCurve);
    }
    let step = wrap_to_pi(v1.arg() - v0.arg());
    if step.abs() <= std::f64::consts::FRAC_PI_2 && depth > 0 {
        return Ok(step);
    }
    if step.abs() <= std::f64::consts::FRAC_PI_2 && depth == 0 {
        // Even an innocent-looking first-pass step gets one split so that a
        // near-miss of the point cannot alias a full turn into a small step.
        if v0.norm().min(v1.norm()) > 0.25 * scale {
            return Ok(step);
        }
    }
    if depth >= 40 {
        return Err(Error::NeedsRefinement);
    }
    let tm = 0.5 * (t0 + t1);
    let vm = sample(tm)? - point;
    Ok(segment_arg(sample, t0, v0, tm, vm, point, scale, depth + 1)?
        + segment_arg(sample, tm, vm, t1, v1, point, scale, depth + 1)?)
}
