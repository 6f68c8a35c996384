//! Bracketed scalar root finding: grid scan, bisection, secant polish.

/// Sign-change brackets of `f` on `[lo, hi]` sampled every `step`. A bracket
/// is skipped when `accept(f(a), f(b))` is false (e.g. a branch-cut jump).
pub fn scan<F, A>(f: F, lo: f64, hi: f64, step: f64, accept: A) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> f64,
    A: Fn(f64, f64) -> bool,
{
    let n = ((hi - lo) / step).round() as usize;
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0);
    for k in 1..=n {
        let x1 = lo + (hi - lo) * k as f64 / n as f64;
        let f1 = f(x1);
        if f0 == 0.0 {
            out.push((x0, x0));
        } else if f0 * f1 < 0.0 && accept(f0, f1) {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        out.push((x0, x0));
    }
    out
}

/// Refines a sign-change bracket to a root. Bisection narrows the bracket,
/// then secant steps polish while they stay inside it.
pub fn refine<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    if a == b {
        return a;
    }
    let mut fa = f(a);
    let mut fb = f(b);
    for _ in 0..200 {
        if (b - a).abs() < 1e-7 {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    let mut best = if fa.abs() < fb.abs() { a } else { b };
    let mut fbest = f(best);
    for _ in 0..60 {
        if fbest == 0.0 || fb == fa {
            break;
        }
        let x = b - fb * (b - a) / (fb - fa);
        if !(x >= a.min(b) && x <= a.max(b)) {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fa * fm < 0.0 {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
            continue;
        }
        let fx = f(x);
        if fx.abs() < fbest.abs() {
            best = x;
            fbest = fx;
        }
        if fx == 0.0 || (b - a).abs() < 1e-15 {
            break;
        }
        if fa * fx < 0.0 {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
    }
    best
}

/// Plain secant iteration from `x0`; `None` unless `|f| < tol` is reached.
pub fn secant<F: Fn(f64) -> f64>(f: F, x0: f64, tol: f64) -> Option<f64> {
    let mut a = x0;
    let mut b = x0 + 1e-3;
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..100 {
        if fb.abs() < tol {
            return Some(b);
        }
        if fb == fa || !fb.is_finite() {
            return None;
        }
        let x = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = x;
        fb = f(b);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_polynomial_roots() {
        let f = |x: f64| (x - 0.3) * (x - 1.7) * (x + 2.0);
        let br = scan(f, -3.0, 3.0, 0.01, |_, _| true);
        assert_eq!(br.len(), 3);
        let roots: Vec<f64> = br.iter().map(|&(a, b)| refine(f, a, b)).collect();
        for (r, want) in roots.iter().zip([-2.0, 0.3, 1.7]) {
            assert!((r - want).abs() < 1e-12, "{r} vs {want}");
        }
    }

    #[test]
    fn exact_grid_zero() {
        let f = |x: f64| x;
        let br = scan(f, 0.0, 1.0, 0.1, |_, _| true);
        assert_eq!(br[0], (0.0, 0.0));
    }

    #[test]
    fn secant_converges() {
        let r = secant(|x: f64| x.cos() - x, 0.5, 1e-12).unwrap();
        assert!((r - 0.739_085_133_215_160_6).abs() < 1e-10);
    }
}
