//! Bracketed scalar minimization: Brent's method with a golden-section
//! fallback step, plus a plain golden-section refiner.

const GOLDEN: f64 = 0.381_966_011_250_105_1; // (3 - sqrt(5)) / 2

#[derive(Debug, Clone, Copy)]
pub(crate) struct MinResult {
    #[cfg_attr(not(test), allow(dead_code))]
    pub x: f64,
    pub fx: f64,
}

/// Minimizes `f` over `[lo, hi]` with Brent's method. `xtol` is an absolute
/// tolerance on the abscissa; the iteration count is capped at `max_iter`.
pub(crate) fn brent_min<F>(mut f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> MinResult
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    if a == b {
        return MinResult { x: a, fx: f(a) };
    }

    let mut x = a + GOLDEN * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = f(x);
    let mut fw = fx;
    let mut fv = fx;

    let mut d = 0.0_f64;
    let mut e = 0.0_f64;
    let eps = f64::EPSILON.sqrt();

    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        let tol1 = eps * x.abs() + xtol;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }

        let mut use_golden = true;
        if e.abs() > tol1 {
            // Trial parabolic fit through (x, w, v).
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x < m { b - x } else { a - x };
            d = GOLDEN * e;
        }

        let u = if d.abs() >= tol1 {
            x + d
        } else if d >= 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u);

        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }

    MinResult { x, fx }
}

/// Golden-section search over `[lo, hi]`. For a convex objective this
/// converges to the global minimum; used to refine past Brent's stopping
/// tolerance where acceptance tolerances demand it.
pub(crate) fn golden_min<F>(mut f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> MinResult
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    if a == b {
        return MinResult { x: a, fx: f(a) };
    }
    let mut x1 = a + GOLDEN * (b - a);
    let mut x2 = b - GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if b - a <= xtol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        MinResult { x: x1, fx: f1 }
    } else {
        MinResult { x: x2, fx: f2 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_parabola_minimum() {
        let r = brent_min(|x| (x - 1.25) * (x - 1.25) + 3.0, -10.0, 10.0, 1e-8, 200);
        assert!((r.x - 1.25).abs() < 1e-6);
        assert!((r.fx - 3.0).abs() < 1e-10);
    }

    #[test]
    fn brent_handles_kinked_convex_objective() {
        let r = brent_min(|x: f64| (x - 0.3).abs() + 1.0, -4.0, 2.0, 1e-7, 200);
        assert!((r.x - 0.3).abs() < 1e-5);
    }

    #[test]
    fn golden_refines_to_tight_tolerance() {
        let r = golden_min(|x: f64| (x + 2.0).abs(), -7.0, 5.0, 1e-11, 128);
        assert!((r.x + 2.0).abs() < 1e-9);
        assert!(r.fx < 1e-9);
    }

    #[test]
    fn degenerate_bracket_evaluates_endpoint() {
        let r = brent_min(|x| x * x, 2.0, 2.0, 1e-8, 100);
        assert_eq!(r.x, 2.0);
        assert_eq!(r.fx, 4.0);
    }
}
