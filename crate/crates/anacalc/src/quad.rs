//! Quadrature rules: adaptive Simpson with a subdivision budget,
//! fixed Gauss-Legendre panels, composite Simpson on grid samples, and a
//! cumulative fourth-order rule used by the Picard iteration.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use num_complex::Complex64;

/// Which rule [`integrate`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    AdaptiveSimpson,
    /// Single Gauss-Legendre panel with the given node count. Intended for
    /// smooth integrands; `abs_tol` is not consulted.
    GaussLegendre(usize),
}

/// Tolerance and budget for a quadrature call.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub rule: QuadRule,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn adaptive(abs_tol: f64) -> Self {
        assert!(abs_tol > 0.0, "abs_tol must be positive");
        Self {
            rule: QuadRule::AdaptiveSimpson,
            abs_tol,
            max_subdivisions: 1 << 20,
        }
    }

    pub fn gauss(k: usize) -> Self {
        Self {
            rule: QuadRule::GaussLegendre(k),
            abs_tol: 1e-10,
            max_subdivisions: 1,
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::adaptive(1e-10)
    }
}

fn check_finite(v: f64, x: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            context: format!("x = {x}"),
        })
    }
}

fn check_finite_c(v: Complex64, x: f64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            context: format!("t = {x}"),
        })
    }
}

/// Integrates a callable over `[a, b]` with the requested rule.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, q: &QuadratureSpec) -> Result<f64> {
    match q.rule {
        QuadRule::AdaptiveSimpson => {
            let c = integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, q)?;
            Ok(c.re)
        }
        QuadRule::GaussLegendre(k) => {
            let (nodes, weights) = gauss_legendre(k);
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let mut sum = 0.0;
            for (t, w) in nodes.iter().zip(&weights) {
                let x = mid + half * t;
                sum += w * check_finite(f(x), x)?;
            }
            Ok(half * sum)
        }
    }
}

/// Adaptive Simpson for a complex-valued integrand of a real parameter.
/// The real [`integrate`] delegates here so both share one refinement loop.
pub fn integrate_complex(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    q: &QuadratureSpec,
) -> Result<Complex64> {
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let m = 0.5 * (a + b);
    let fa = check_finite_c(f(a), a)?;
    let fm = check_finite_c(f(m), m)?;
    let fb = check_finite_c(f(b), b)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut budget = q.max_subdivisions;
    adaptive_step(&f, a, b, fa, fm, fb, whole, q.abs_tol, &mut budget, q, 0)
}

/// Oscillatory integrands whose period divides the interval alias to a
/// constant on dyadic sample points; refining this many levels before
/// trusting the error estimate breaks the symmetry.
const MIN_DEPTH: u32 = 5;

#[allow(clippy::too_many_arguments)]
fn adaptive_step(
    f: &impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    budget: &mut usize,
    q: &QuadratureSpec,
    depth: u32,
) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = check_finite_c(f(lm), lm)?;
    let frm = check_finite_c(f(rm), rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let refined = left + right;
    let delta = refined - whole;
    // Rounding floor: with heavy cancellation the error estimate cannot
    // drop below the noise of the samples themselves.
    let noise = 32.0 * f64::EPSILON * (b - a) / 6.0
        * (fa.norm() + 4.0 * (flm.norm() + frm.norm()) + 2.0 * fm.norm() + fb.norm());
    let converged = delta.norm() <= 15.0 * tol || delta.norm() <= noise;
    if (converged && depth >= MIN_DEPTH) || m <= a || b <= m {
        return Ok(refined + delta / 15.0);
    }
    if *budget < 2 {
        return Err(Error::BudgetExceeded {
            subdivisions: q.max_subdivisions,
            tol: q.abs_tol,
        });
    }
    *budget -= 2;
    let half_tol = 0.5 * tol;
    let l = adaptive_step(f, a, m, fa, flm, fm, left, half_tol, budget, q, depth + 1)?;
    let r = adaptive_step(f, m, b, fm, frm, fb, right, half_tol, budget, q, depth + 1)?;
    Ok(l + r)
}

/// Composite Simpson over the fixed grid of a [`GridFunction`].
pub fn integrate_grid(f: &GridFunction) -> Result<f64> {
    if !f.is_finite() {
        return Err(Error::NonFinite {
            context: "grid sample".into(),
        });
    }
    Ok(simpson_samples(f.values(), f.h()))
}

/// Composite Simpson on equispaced samples. An odd interval count is closed
/// with a 3/8 panel at the right end.
pub fn simpson_samples(values: &[f64], h: f64) -> f64 {
    let n = values.len() - 1;
    match n {
        0 => 0.0,
        1 => 0.5 * h * (values[0] + values[1]),
        _ => {
            let even_end = if n % 2 == 0 { n } else { n - 3 };
            let mut sum = 0.0;
            if even_end >= 2 {
                sum += values[0] + values[even_end];
                let mut i = 1;
                while i < even_end {
                    sum += 4.0 * values[i];
                    if i + 1 < even_end {
                        sum += 2.0 * values[i + 1];
                    }
                    i += 2;
                }
                sum *= h / 3.0;
            }
            if n % 2 == 1 {
                let v = &values[even_end..];
                sum += 3.0 * h / 8.0 * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3]);
            }
            sum
        }
    }
}

/// Complex counterpart of [`simpson_samples`].
pub fn simpson_samples_complex(values: &[Complex64], h: f64) -> Complex64 {
    let re: Vec<f64> = values.iter().map(|v| v.re).collect();
    let im: Vec<f64> = values.iter().map(|v| v.im).collect();
    Complex64::new(simpson_samples(&re, h), simpson_samples(&im, h))
}

/// Running integral `I[k] = int_{x_0}^{x_k}` from equispaced samples, using
/// cubic (four-point) panels; fourth-order accurate, which the Picard
/// iteration needs to meet its stated error targets.
pub fn cumulative_integral(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len() - 1;
    let mut out = vec![0.0; values.len()];
    if n == 0 {
        return out;
    }
    if n == 1 {
        out[1] = 0.5 * h * (values[0] + values[1]);
        return out;
    }
    if n == 2 {
        out[1] = h / 12.0 * (5.0 * values[0] + 8.0 * values[1] - values[2]);
        out[2] = out[1] + h / 12.0 * (-values[0] + 8.0 * values[1] + 5.0 * values[2]);
        return out;
    }
    for j in 0..n {
        let inc = if j == 0 {
            h / 24.0
                * (9.0 * values[0] + 19.0 * values[1] - 5.0 * values[2] + values[3])
        } else if j == n - 1 {
            h / 24.0
                * (values[n - 3] - 5.0 * values[n - 2] + 19.0 * values[n - 1]
                    + 9.0 * values[n])
        } else {
            h / 24.0
                * (-values[j - 1] + 13.0 * values[j] + 13.0 * values[j + 1] - values[j + 2])
        };
        out[j + 1] = out[j] + inc;
    }
    out
}

/// Nodes and weights of the `k`-point Gauss-Legendre rule on `[-1, 1]`,
/// by Newton iteration on the Legendre polynomial.
pub fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(k >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    let m = k.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(k, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[k - 1 - i] = x;
        weights[k - 1 - i] = w;
    }
    if k % 2 == 1 {
        nodes[k / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss-Legendre nodes and weights mapped onto `[a, b]`.
pub fn gauss_legendre_on(k: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (t, w) = gauss_legendre(k);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        t.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|w| half * w).collect(),
    )
}

fn legendre(k: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = k as f64 * (p0 - x * p1) / (1.0 - x * x);
    (p1, d)
}

/// Truncated improper integral over `[0, inf)`: integrates on `[0, R]` and
/// doubles `R` until two successive values differ by less than `abs_tol`,
/// capping at `r0 * 2^16`. Returns the value and the `R` actually used.
pub fn integrate_truncated(
    f: impl Fn(f64) -> f64,
    r0: f64,
    q: &QuadratureSpec,
) -> Result<(f64, f64)> {
    assert!(r0 > 0.0, "initial truncation radius must be positive");
    let mut r = r0;
    let mut value = integrate(&f, 0.0, r, q)?;
    for _ in 0..16 {
        let tail = integrate(&f, r, 2.0 * r, q)?;
        let next = value + tail;
        r *= 2.0;
        if (next - value).abs() < q.abs_tol {
            return Ok((next, r));
        }
        value = next;
    }
    Err(Error::BudgetExceeded {
        subdivisions: 1 << 16,
        tol: q.abs_tol,
    })
}
