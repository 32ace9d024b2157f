//! Scalar root bracketing: uniform scan for sign changes, bisection to a
//! tight bracket, then a short Newton polish with a secant derivative.

/// Finds every sign-change root of `f` on `[lo, hi]` using `grid` scan
/// points, refined to `|f| <= 1e-10 * scale`. Roots are returned sorted;
/// an empty vector simply means no sign change was seen.
pub fn find_bracketed_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, grid: usize) -> Vec<f64> {
    assert!(grid >= 2, "grid must have at least 2 points");
    assert!(hi > lo, "empty interval");

    let n = grid;
    let xs: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();

    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let mut roots = Vec::new();

    for i in 0..n - 1 {
        let (a, b) = (xs[i], xs[i + 1]);
        let (fa, fb) = (vals[i], vals[i + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
            continue;
        }
        roots.push(refine(&f, a, b, fa, fb, scale));
    }
    if let Some(&last) = vals.last() {
        if last == 0.0 {
            roots.push(hi);
        }
    }

    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (hi - lo));
    roots
}

fn refine<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, scale: f64) -> f64 {
    // Bisection down to a narrow bracket.
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs() + b.abs()) {
            break;
        }
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    // Newton polish with a secant slope; fall back to the bracket midpoint
    // whenever a step would leave [a, b].
    let mut x = if fa.abs() < fb.abs() { a } else { b };
    let mut fx = f(x);
    for _ in 0..4 {
        if fx.abs() <= 1e-10 * scale {
            break;
        }
        let h = 1e-7 * (1.0 + x.abs());
        let slope = (f(x + h) - fx) / h;
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let next = x - fx / slope;
        if next < a || next > b || !next.is_finite() {
            break;
        }
        x = next;
        fx = f(x);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn linear_root() {
        let roots = find_bracketed_roots(|x| x - 0.5, 0.0, 1.0, 11);
        assert_eq!(roots.len(), 1);
        assert_relative_eq!(roots[0], 0.5, epsilon = 1e-10);
    }

    #[test]
    fn sine_roots() {
        let roots = find_bracketed_roots(|x| (std::f64::consts::PI * x).sin(), 0.1, 2.9, 61);
        assert_eq!(roots.len(), 2);
        assert_relative_eq!(roots[0], 1.0, epsilon = 1e-10);
        assert_relative_eq!(roots[1], 2.0, epsilon = 1e-10);
    }

    #[test]
    fn no_sign_change_is_empty() {
        let roots = find_bracketed_roots(|x| x * x + 1.0, -1.0, 1.0, 21);
        assert!(roots.is_empty());
    }

    #[test]
    fn grid_point_exactly_on_root() {
        let roots = find_bracketed_roots(|x| x, -1.0, 1.0, 21);
        assert_eq!(roots.len(), 1);
        assert_relative_eq!(roots[0], 0.0, epsilon = 1e-12);
    }
}
