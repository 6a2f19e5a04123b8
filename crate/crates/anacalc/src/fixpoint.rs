//! Contraction fixed-point iteration with the a-priori and a-posteriori
//! error bounds from the contraction-mapping theorem.

use crate::error::{Error, Result};

/// A self-map declared to contract distances by `alpha < 1`, together with
/// the metric and the starting point. The state type is anything cloneable:
/// scalars, vectors, or sampled functions.
pub struct ContractionProblem<S, M, D>
where
    M: Fn(&S) -> S,
    D: Fn(&S, &S) -> f64,
{
    pub map: M,
    pub metric: D,
    /// Declared contraction constant in (0, 1).
    pub alpha: f64,
    pub x0: S,
}

/// Result of a converged fixed-point iteration.
#[derive(Debug, Clone)]
pub struct FixedPoint<S> {
    pub point: S,
    pub iterations: usize,
    /// `alpha^n d(x1, x0) / (1 - alpha)`: the bound available before
    /// iterating, evaluated at the final `n`.
    pub apriori_bound: f64,
    /// `alpha d(x_n, x_{n-1}) / (1 - alpha)`: the bound from the last step.
    pub aposteriori_bound: f64,
}

/// Iterates `x -> map(x)` until `metric(x_n, x_{n+1}) <= tol`, reporting
/// both error bounds. Fails with `NotContracting` if consecutive step
/// distances ever grow, and with `MaxIter` if the budget runs out.
pub fn solve_contraction<S: Clone, M, D>(
    p: &ContractionProblem<S, M, D>,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPoint<S>>
where
    M: Fn(&S) -> S,
    D: Fn(&S, &S) -> f64,
{
    assert!(p.alpha > 0.0 && p.alpha < 1.0, "alpha must lie in (0, 1)");
    let mut prev = p.x0.clone();
    let mut cur = (p.map)(&prev);
    let d0 = (p.metric)(&cur, &prev);
    let mut step = d0;
    let mut alpha_pow = p.alpha;
    for n in 1..=max_iter {
        if step <= tol {
            return Ok(FixedPoint {
                point: cur,
                iterations: n,
                apriori_bound: alpha_pow * d0 / (1.0 - p.alpha),
                aposteriori_bound: p.alpha * step / (1.0 - p.alpha),
            });
        }
        let next = (p.map)(&cur);
        let d = (p.metric)(&next, &cur);
        if step > 0.0 {
            let ratio = d / step;
            if ratio > 1.0 + 1e-12 {
                return Err(Error::NotContracting { ratio, iteration: n });
            }
        }
        prev = cur;
        cur = next;
        step = d;
        alpha_pow *= p.alpha;
        let _ = &prev;
    }
    Err(Error::MaxIter(max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::cumulative_integral;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear_halving_map() {
        let p = ContractionProblem {
            map: |x: &f64| x / 2.0,
            metric: |x: &f64, y: &f64| (x - y).abs(),
            alpha: 0.5,
            x0: 1.0,
        };
        let fp = solve_contraction(&p, 1e-12, 100).unwrap();
        assert!(fp.point.abs() < 1e-11);
        assert!(fp.iterations <= 41);
        assert!(fp.aposteriori_bound >= 0.0);
    }

    #[test]
    fn dottie_point_of_cosine() {
        let p = ContractionProblem {
            map: |x: &f64| x.cos(),
            metric: |x: &f64, y: &f64| (x - y).abs(),
            alpha: 0.85,
            x0: 0.0,
        };
        let fp = solve_contraction(&p, 1e-13, 1000).unwrap();
        // oracle: bisection on cos x - x
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid.cos() - mid > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_abs_diff_eq!(fp.point, 0.5 * (lo + hi), epsilon = 1e-11);
        assert_abs_diff_eq!(fp.point, 0.7390851332, epsilon = 1e-9);
    }

    #[test]
    fn bound_dominates_true_error_at_every_step() {
        let alpha = 0.7;
        let map = |x: &f64| alpha * x + 1.0; // fixed point 1/(1-alpha)
        let metric = |x: &f64, y: &f64| (x - y).abs();
        let star = 1.0 / (1.0 - alpha);
        let mut x = 0.0f64;
        let x1 = map(&x);
        let d0 = metric(&x1, &x);
        let mut apriori = d0 / (1.0 - alpha);
        x = x1;
        for _ in 0..60 {
            apriori *= alpha;
            x = map(&x);
            assert!(metric(&x, &star) <= apriori + 1e-12);
        }
    }

    #[test]
    fn expanding_map_is_rejected() {
        let p = ContractionProblem {
            map: |x: &f64| 2.0 * x + 1.0,
            metric: |x: &f64, y: &f64| (x - y).abs(),
            alpha: 0.9,
            x0: 1.0,
        };
        assert!(matches!(
            solve_contraction(&p, 1e-12, 50),
            Err(Error::NotContracting { .. })
        ));
    }

    #[test]
    fn max_iter_is_reported() {
        let p = ContractionProblem {
            map: |x: &f64| 0.999 * x,
            metric: |x: &f64, y: &f64| (x - y).abs(),
            alpha: 0.999,
            x0: 1.0,
        };
        assert!(matches!(
            solve_contraction(&p, 1e-14, 5),
            Err(Error::MaxIter(5))
        ));
    }

    #[test]
    fn volterra_map_on_sampled_functions() {
        // Tf(s) = c + int_0^s tau(f(t)) dt with tau(x) = alpha x contracts in
        // the sup metric; the fixed point is c * e^(alpha s).
        let alpha = 0.5;
        let c = 1.0;
        let n = 400usize;
        let h = 1.0 / n as f64;
        let map = move |f: &Vec<f64>| {
            let tau: Vec<f64> = f.iter().map(|&v| alpha * v).collect();
            let cum = cumulative_integral(&tau, h);
            cum.iter().map(|&v| c + v).collect::<Vec<f64>>()
        };
        let metric = |f: &Vec<f64>, g: &Vec<f64>| {
            f.iter()
                .zip(g)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max)
        };
        let p = ContractionProblem {
            map,
            metric,
            alpha,
            x0: vec![0.0; n + 1],
        };
        let fp = solve_contraction(&p, 1e-13, 200).unwrap();
        for (i, v) in fp.point.iter().enumerate() {
            let s = i as f64 * h;
            assert_abs_diff_eq!(*v, (alpha * s).exp(), epsilon = 1e-9);
        }
    }
}
