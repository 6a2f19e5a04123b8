//! Lp norms, the Holder/Jensen inequality checkers, and elementary measure
//! computations on finite interval unions.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::quad::integrate_grid;

/// Both sides of a checked inequality. `slack = rhs - lhs`, so the
/// inequality holds (up to quadrature error) when `slack >= -tol`.
#[derive(Debug, Clone, Copy)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl InequalityReport {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            slack: rhs - lhs,
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }
}

/// Lp norm of a grid function. `p = infinity` is the maximum absolute
/// sample (the essential sup is unobservable on a finite grid; supplying a
/// grid dense enough for the intended function is the caller's job).
/// Finite `p` evaluates `(int |f|^p)^(1/p)` by composite Simpson.
pub fn lp_norm(f: &GridFunction, p: f64) -> Result<f64> {
    if p.is_infinite() && p > 0.0 {
        return Ok(f.sup_norm());
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidP { p });
    }
    let powed = f.map(|v| v.abs().powf(p));
    Ok(integrate_grid(&powed)?.powf(1.0 / p))
}

/// Holder inequality report: `int |fg| <= ||f||_p ||g||_q` with `q` the
/// conjugate exponent of `p in (1, inf)`.
pub fn check_holder(f: &GridFunction, g: &GridFunction, p: f64) -> Result<InequalityReport> {
    if !(p > 1.0) || p.is_infinite() {
        return Err(Error::InvalidP { p });
    }
    let q = p / (p - 1.0);
    let prod = f.try_mul(g)?.map(f64::abs);
    let lhs = integrate_grid(&prod)?;
    let rhs = lp_norm(f, p)? * lp_norm(g, q)?;
    Ok(InequalityReport::new(lhs, rhs))
}

/// Jensen inequality report on the probability interval `[0, 1]`:
/// `phi(int f) <= int phi(f)` for convex `phi`.
pub fn check_jensen(
    f: &GridFunction,
    phi: impl Fn(f64) -> f64,
) -> Result<InequalityReport> {
    if f.a().abs() > 1e-12 || (f.b() - 1.0).abs() > 1e-12 {
        return Err(Error::NotProbabilityDomain { a: f.a(), b: f.b() });
    }
    let mean = integrate_grid(f)?;
    let lhs = phi(mean);
    let rhs = integrate_grid(&f.map(&phi))?;
    Ok(InequalityReport::new(lhs, rhs))
}

/// A finite union of open intervals, kept normalized: sorted, and with
/// overlapping or touching intervals merged (touching at a point does not
/// change the measure).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    /// Builds a union from raw `(left, right)` pairs; pairs with
    /// `left >= right` are rejected.
    pub fn new(intervals: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut raw: Vec<(f64, f64)> = intervals.into_iter().collect();
        for &(l, r) in &raw {
            if !(l < r) {
                return Err(Error::Parse(format!("interval ({l}, {r}) has left >= right")));
            }
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (l, r) in raw {
            match merged.last_mut() {
                Some(last) if l <= last.1 => last.1 = last.1.max(r),
                _ => merged.push((l, r)),
            }
        }
        Ok(Self { intervals: merged })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn translate(&self, dx: f64) -> Self {
        Self {
            intervals: self.intervals.iter().map(|&(l, r)| (l + dx, r + dx)).collect(),
        }
    }
}

/// Outer measure of a finite interval union: the total length of its
/// disjoint normalization (the infimum over open covers is attained there).
/// An empty union has measure zero.
pub fn outer_measure(cover: &IntervalUnion) -> f64 {
    cover.intervals.iter().map(|(l, r)| r - l).sum()
}

/// Measure of the generalized Cantor set with removal parameter
/// `theta in (0, 1/3]`: the closed form `(1 - 3 theta) / (1 - 2 theta)`.
pub fn cantor_measure(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok((1.0 - 3.0 * theta) / (1.0 - 2.0 * theta))
}

/// Measure remaining after `k` removal steps of the Cantor construction:
/// `1 - sum_{j=1..k} 2^(j-1) theta^j`. Converges to [`cantor_measure`].
pub fn cantor_partial_measure(theta: f64, steps: u32) -> Result<f64> {
    check_theta(theta)?;
    let mut removed = 0.0;
    let mut term = theta; // 2^(j-1) theta^j at j = 1
    for _ in 0..steps {
        removed += term;
        term *= 2.0 * theta;
    }
    Ok(1.0 - removed)
}

/// The first `k` levels of removed middle intervals, as an interval union.
/// Cross-checks the partial measure against [`outer_measure`].
pub fn cantor_removed_intervals(theta: f64, steps: u32) -> Result<IntervalUnion> {
    check_theta(theta)?;
    let mut kept = vec![(0.0f64, 1.0f64)];
    let mut removed = Vec::new();
    let mut len = theta;
    for _ in 0..steps {
        let mut next = Vec::with_capacity(kept.len() * 2);
        for (l, r) in kept {
            let mid = 0.5 * (l + r);
            let (rl, rr) = (mid - 0.5 * len, mid + 0.5 * len);
            removed.push((rl, rr));
            next.push((l, rl));
            next.push((rr, r));
        }
        kept = next;
        len *= theta;
    }
    IntervalUnion::new(removed)
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta <= 1.0 / 3.0 {
        Ok(())
    } else {
        Err(Error::ThetaOutOfRange { theta })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn grid(f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction::from_fn(0.0, 1.0, 512, f)
    }

    #[test]
    fn lp_norm_constant_one() {
        assert_abs_diff_eq!(lp_norm(&grid(|_| 1.0), 2.0).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn lp_norm_linear() {
        // ||x||_2 on [0,1] = 1/sqrt(3); oracle: int x^2 = 1/3
        let expect = (1.0f64 / 3.0).sqrt();
        assert_abs_diff_eq!(lp_norm(&grid(|x| x), 2.0).unwrap(), expect, epsilon = 1e-10);
        assert_abs_diff_eq!(lp_norm(&grid(|x| x), f64::INFINITY).unwrap(), 1.0);
    }

    #[test]
    fn lp_norm_rejects_small_p() {
        assert!(matches!(
            lp_norm(&grid(|x| x), 0.5),
            Err(Error::InvalidP { .. })
        ));
    }

    #[test]
    fn holder_equality_case() {
        let one = grid(|_| 1.0);
        let rep = check_holder(&one, &one, 2.0).unwrap();
        assert_abs_diff_eq!(rep.lhs, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.slack, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn holder_strict_case() {
        // f = x, g = 1 - x: both sides computed independently by quadrature
        let rep = check_holder(&grid(|x| x), &grid(|x| 1.0 - x), 2.0).unwrap();
        assert!(rep.slack > 0.01);
        assert!(rep.holds(1e-12));
    }

    #[test]
    fn holder_zero_function() {
        let rep = check_holder(&grid(|_| 0.0), &grid(|x| x), 2.0).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert!(rep.holds(0.0));
    }

    #[test]
    fn holder_rejects_mismatched_grids() {
        let f = grid(|x| x);
        let g = GridFunction::from_fn(0.0, 2.0, 512, |x| x);
        assert!(matches!(
            check_holder(&f, &g, 2.0),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn jensen_constant_is_tight() {
        let rep = check_jensen(&grid(|_| 0.7), |t| t.exp()).unwrap();
        assert_abs_diff_eq!(rep.slack, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn jensen_exponential_example() {
        // e^(1/2) <= e - 1; both sides derived from the quadrature oracle
        let rep = check_jensen(&grid(|x| x), |t| t.exp()).unwrap();
        assert_abs_diff_eq!(rep.lhs, 0.5f64.exp(), epsilon = 1e-9);
        assert_abs_diff_eq!(rep.rhs, 1.0f64.exp() - 1.0, epsilon = 1e-9);
        assert!(rep.holds(0.0));
    }

    #[test]
    fn jensen_square() {
        let rep = check_jensen(&grid(|x| x), |t| t * t).unwrap();
        assert_abs_diff_eq!(rep.lhs, 0.25, epsilon = 1e-10);
        assert_abs_diff_eq!(rep.rhs, 1.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn jensen_requires_unit_interval() {
        let f = GridFunction::from_fn(0.0, 2.0, 64, |x| x);
        assert!(matches!(
            check_jensen(&f, |t| t * t),
            Err(Error::NotProbabilityDomain { .. })
        ));
    }

    #[test]
    fn outer_measure_basics() {
        let single = IntervalUnion::new([(0.0, 1.0)]).unwrap();
        assert_abs_diff_eq!(outer_measure(&single), 1.0);
        // brute-force merge oracle: (0,1) and (0.5,2) overlap into (0,2)
        let overlapping = IntervalUnion::new([(0.0, 1.0), (0.5, 2.0)]).unwrap();
        assert_eq!(overlapping.intervals().len(), 1);
        assert_abs_diff_eq!(outer_measure(&overlapping), 2.0);
        let disjoint = IntervalUnion::new([(0.0, 1.0), (2.0, 3.0)]).unwrap();
        assert_abs_diff_eq!(outer_measure(&disjoint), 2.0);
        assert_eq!(outer_measure(&IntervalUnion::default()), 0.0);
    }

    #[test]
    fn touching_intervals_merge_without_measure_change() {
        let touching = IntervalUnion::new([(0.0, 1.0), (1.0, 2.0)]).unwrap();
        assert_eq!(touching.intervals().len(), 1);
        assert_abs_diff_eq!(outer_measure(&touching), 2.0);
    }

    #[test]
    fn cantor_closed_form() {
        assert_abs_diff_eq!(cantor_measure(1.0 / 3.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cantor_measure(0.25).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(cantor_measure(0.3).unwrap(), 0.25, epsilon = 1e-15);
        assert!(matches!(
            cantor_measure(0.4),
            Err(Error::ThetaOutOfRange { .. })
        ));
        assert!(matches!(
            cantor_measure(0.0),
            Err(Error::ThetaOutOfRange { .. })
        ));
    }

    #[test]
    fn cantor_partial_tracks_interval_construction() {
        // the removed-interval union must account for exactly the measure
        // the partial sum says is gone
        for theta in [0.2, 0.3, 1.0 / 3.0] {
            for steps in [1u32, 3, 7] {
                let partial = cantor_partial_measure(theta, steps).unwrap();
                let removed = cantor_removed_intervals(theta, steps).unwrap();
                assert_abs_diff_eq!(
                    1.0 - outer_measure(&removed),
                    partial,
                    epsilon = 1e-12
                );
            }
        }
    }

    proptest! {
        #[test]
        fn outer_measure_monotone_and_translation_invariant(
            base in proptest::collection::vec((0.0f64..10.0, 0.01f64..3.0), 1..8),
            extra_l in 0.0f64..10.0,
            extra_w in 0.01f64..3.0,
            dx in -100.0f64..100.0,
        ) {
            let ints: Vec<(f64, f64)> = base.iter().map(|&(l, w)| (l, l + w)).collect();
            let u = IntervalUnion::new(ints.clone()).unwrap();
            let mu = outer_measure(&u);

            let mut bigger = ints.clone();
            bigger.push((extra_l, extra_l + extra_w));
            let mu_big = outer_measure(&IntervalUnion::new(bigger).unwrap());
            prop_assert!(mu_big >= mu - 1e-12);

            let shifted = outer_measure(&u.translate(dx));
            prop_assert!((shifted - mu).abs() < 1e-9);
        }

        #[test]
        fn minkowski_triangle_inequality(
            c1 in -2.0f64..2.0,
            c2 in -2.0f64..2.0,
            k1 in 1.0f64..4.0,
            k2 in 1.0f64..4.0,
        ) {
            let f = GridFunction::from_fn(0.0, 1.0, 256, |x| c1 * (k1 * x).sin() + 0.3);
            let g = GridFunction::from_fn(0.0, 1.0, 256, |x| c2 * (k2 * x).cos() - 0.1);
            let sum = f.try_add(&g).unwrap();
            for p in [1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
                let lhs = lp_norm(&sum, p).unwrap();
                let rhs = lp_norm(&f, p).unwrap() + lp_norm(&g, p).unwrap();
                prop_assert!(lhs <= rhs + 1e-10, "p = {}: {} > {}", p, lhs, rhs);
            }
        }
    }

    #[test]
    fn lp_norm_approaches_sup_norm() {
        let f = GridFunction::from_fn(0.0, 1.0, 2048, |x| 1.0 + (3.0 * x).sin());
        let sup = lp_norm(&f, f64::INFINITY).unwrap();
        let mut last = lp_norm(&f, 2.0).unwrap();
        for p in [8.0, 32.0, 128.0] {
            let np = lp_norm(&f, p).unwrap();
            assert!(np + 1e-9 >= last, "norms should grow toward sup");
            last = np;
        }
        assert!((last - sup).abs() / sup < 0.05);
    }
}
