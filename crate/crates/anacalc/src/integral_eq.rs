//! Second-kind integral equations: Nystrom discretization with the
//! Fredholm-alternative branch, the homogeneous Volterra eigen-residual,
//! Picard iteration for Uryshon equations, and spectral bounds from the
//! minimax principle.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::par;
use crate::quad::gauss_legendre_on;
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

type Kernel = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A kernel `K` with a coupling constant and a quadrature rule on `[a, b]`.
/// The discretized operator is `T[i][j] = w_j K(x_i, x_j)`: the first
/// kernel argument is the evaluation point, the second the integration
/// variable.
#[derive(Clone)]
pub struct KernelOperator {
    kernel: Kernel,
    pub lambda: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl KernelOperator {
    /// Gauss-Legendre quadrature with `n` nodes (the default choice).
    pub fn gauss(
        kernel: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        lambda: f64,
        a: f64,
        b: f64,
        n: usize,
    ) -> Self {
        let (nodes, weights) = gauss_legendre_on(n, a, b);
        Self {
            kernel: Arc::new(kernel),
            lambda,
            nodes,
            weights,
        }
    }

    /// Uniform nodes with trapezoid weights, matching the node layout of a
    /// [`GridFunction`] with `n` intervals.
    pub fn trapezoid(
        kernel: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        lambda: f64,
        a: f64,
        b: f64,
        n: usize,
    ) -> Self {
        let h = (b - a) / n as f64;
        let nodes = (0..=n).map(|i| a + i as f64 * h).collect();
        let weights = (0..=n)
            .map(|i| if i == 0 || i == n { 0.5 * h } else { h })
            .collect();
        Self {
            kernel: Arc::new(kernel),
            lambda,
            nodes,
            weights,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn kernel_at(&self, x: f64, y: f64) -> f64 {
        (self.kernel)(x, y)
    }

    /// Samples a function at the quadrature nodes.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }

    /// `(T u)(x_i) = sum_j w_j K(x_i, x_j) u_j`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.nodes.len());
        par::map_range(self.nodes.len(), |i| {
            self.nodes
                .iter()
                .zip(&self.weights)
                .zip(u)
                .map(|((&xj, &wj), &uj)| wj * (self.kernel)(self.nodes[i], xj) * uj)
                .sum()
        })
    }

    fn matrix(&self) -> DMatrix<f64> {
        let n = self.nodes.len();
        let rows = par::map_range(n, |i| {
            (0..n)
                .map(|j| self.weights[j] * (self.kernel)(self.nodes[i], self.nodes[j]))
                .collect::<Vec<f64>>()
        });
        DMatrix::from_fn(n, n, |i, j| rows[i][j])
    }

    fn kernel_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for &x in &self.nodes {
            for &y in &self.nodes {
                worst = worst.max(((self.kernel)(x, y) - (self.kernel)(y, x)).abs());
            }
        }
        worst
    }

    /// `D^(1/2) K D^(1/2)` with `D = diag(w)`: shares the spectrum of the
    /// weighted operator but is symmetric, which the spectral bounds need.
    fn symmetrized(&self) -> DMatrix<f64> {
        let n = self.nodes.len();
        let sq: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        DMatrix::from_fn(n, n, |i, j| {
            sq[i] * (self.kernel)(self.nodes[i], self.nodes[j]) * sq[j]
        })
    }
}

const ALTERNATIVE_CONDITION: f64 = 1e12;

/// Solves `(I - lambda T) u = f` for the node values of `u`. When the
/// discrete system is singular to working precision (condition estimate
/// above `1e12`) the Fredholm alternative applies: the error carries an
/// orthonormal basis estimate of the discrete null space instead of a
/// solution.
pub fn nystrom_solve(op: &KernelOperator, f: &[f64]) -> Result<Vec<f64>> {
    let n = op.nodes.len();
    assert_eq!(f.len(), n, "right-hand side must live on the nodes");
    if op.lambda == 0.0 {
        return Ok(f.to_vec());
    }
    let a = DMatrix::identity(n, n) - op.matrix() * op.lambda;
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin == 0.0 { f64::INFINITY } else { smax / smin };
    if condition > ALTERNATIVE_CONDITION {
        let vt = svd.v_t.as_ref().expect("svd computed with vectors");
        let kernel_basis: Vec<Vec<f64>> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, s)| **s <= smax / ALTERNATIVE_CONDITION)
            .map(|(i, _)| vt.row(i).iter().copied().collect())
            .collect();
        return Err(Error::Alternative {
            condition,
            kernel_basis,
        });
    }
    let lu = a.lu();
    let sol = lu
        .solve(&DVector::from_column_slice(f))
        .ok_or_else(|| Error::SingularSystem("LU solve failed".into()))?;
    Ok(sol.iter().copied().collect())
}

/// Nystrom interpolation of a solved node vector:
/// `u(x) = f(x) + lambda sum_j w_j K(x, x_j) u_j`, valid between nodes.
pub fn nystrom_interpolate(
    op: &KernelOperator,
    f: impl Fn(f64) -> f64,
    u: &[f64],
    x: f64,
) -> f64 {
    let quad: f64 = op
        .nodes
        .iter()
        .zip(&op.weights)
        .zip(u)
        .map(|((&xj, &wj), &uj)| wj * (op.kernel)(x, xj) * uj)
        .sum();
    f(x) + op.lambda * quad
}

/// Eigen-residual `||lambda u - T u||_inf / ||u||_inf` of the homogeneous
/// second-kind Volterra equation, for `u` given at the nodes.
pub fn volterra_eigencheck(op: &KernelOperator, lambda: f64, u: &[f64]) -> Result<f64> {
    let sup = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if sup == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let tu = op.apply(u);
    let res = u
        .iter()
        .zip(&tu)
        .map(|(&ui, &ti)| (lambda * ui - ti).abs())
        .fold(0.0f64, f64::max);
    Ok(res / sup)
}

/// Picard iteration for the Uryshon equation
/// `u(t) = lambda int_a^b phi(t, s, u(s)) ds`, started from `u = 0` on a
/// uniform trapezoid grid. Requires the smallness condition
/// `|lambda| <= r / (sup|phi| (b - a))`, with `sup|phi|` sampled over
/// `[a,b]^2 x [-r,r]`; the converged iterate satisfies `||u||_inf <= r`.
#[allow(clippy::too_many_arguments)]
pub fn uryshon_fixed_point(
    phi: impl Fn(f64, f64, f64) -> f64,
    lambda: f64,
    r: f64,
    a: f64,
    b: f64,
    n: usize,
    tol: f64,
    max_iter: usize,
) -> Result<GridFunction> {
    assert!(r > 0.0 && b > a && n >= 2 && tol > 0.0);
    let h = (b - a) / n as f64;
    let nodes: Vec<f64> = (0..=n).map(|i| a + i as f64 * h).collect();

    let mut sup_phi = 0.0f64;
    for &t in &nodes {
        for &s in &nodes {
            for k in 0..=16 {
                let u = -r + 2.0 * r * k as f64 / 16.0;
                sup_phi = sup_phi.max(phi(t, s, u).abs());
            }
        }
    }
    let bound = if sup_phi > 0.0 {
        r / (sup_phi * (b - a))
    } else {
        f64::INFINITY
    };
    if lambda.abs() > bound + 1e-12 {
        return Err(Error::BoundViolated {
            lambda: lambda.abs(),
            bound,
        });
    }

    let weight = |j: usize| if j == 0 || j == n { 0.5 * h } else { h };
    let mut u = vec![0.0; n + 1];
    for _ in 0..max_iter {
        let next: Vec<f64> = nodes
            .iter()
            .map(|&t| {
                lambda
                    * nodes
                        .iter()
                        .enumerate()
                        .map(|(j, &s)| weight(j) * phi(t, s, u[j]))
                        .sum::<f64>()
            })
            .collect();
        let change = next
            .iter()
            .zip(&u)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        u = next;
        if change < tol {
            debug_assert!(u.iter().all(|v| v.abs() <= r + tol));
            return Ok(GridFunction::new(a, b, u));
        }
    }
    Err(Error::MaxIter(max_iter))
}

const POWER_ITERATIONS: usize = 500;
const POWER_TOL: f64 = 1e-12;

fn power_iterate(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    // deterministic non-degenerate start
    let mut v = DVector::from_fn(n, |i, _| 1.0 + ((i * 2654435761) % 1000) as f64 / 1000.0);
    v /= v.norm();
    let mut rq = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w = m * &v;
        let norm = w.norm();
        if norm < 1e-300 {
            return 0.0;
        }
        let next = w / norm;
        let new_rq = next.dot(&(m * &next));
        let done = (new_rq - rq).abs() < POWER_TOL * new_rq.abs().max(1e-300);
        rq = new_rq;
        v = next;
        if done {
            break;
        }
    }
    rq
}

/// Extreme Rayleigh quotients `(lambda_minus, lambda_plus)` of the
/// symmetrized discretized operator: every eigenvalue, and every Rayleigh
/// quotient, lies between them. The dominant eigenvalue comes from power
/// iteration on `T`; shifting by it and iterating again lands on the
/// opposite end of the spectrum.
pub fn minimax_bounds(op: &KernelOperator) -> Result<(f64, f64)> {
    let asym = op.kernel_asymmetry();
    if asym > 1e-12 {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let b = op.symmetrized();
    if b.amax() == 0.0 {
        return Ok((0.0, 0.0));
    }
    let mu1 = power_iterate(&b);
    let n = b.nrows();
    let shifted = &b - DMatrix::identity(n, n) * mu1;
    let nu = power_iterate(&shifted);
    let mu2 = mu1 + nu;
    Ok((mu1.min(mu2), mu1.max(mu2)))
}

/// Rayleigh quotient of `v` for the symmetrized operator.
pub fn rayleigh_quotient(op: &KernelOperator, v: &[f64]) -> f64 {
    let b = op.symmetrized();
    let v = DVector::from_column_slice(v);
    v.dot(&(&b * &v)) / v.dot(&v)
}

/// Singular values of the discretized operator, largest first; the decay
/// rate is the compactness proxy for smooth kernels.
pub fn singular_values(op: &KernelOperator) -> Vec<f64> {
    let svd = op.matrix().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Bilinear interpolation over tabulated kernel samples, for kernels
/// supplied as CSV rather than code.
pub struct KernelTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl KernelTable {
    /// Parses `x,y,k` triples covering a full lattice (any row order).
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut triples = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with('x')) {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected x,y,k", lineno + 1)));
            }
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
            };
            triples.push((parse(fields[0])?, parse(fields[1])?, parse(fields[2])?));
        }
        let mut xs: Vec<f64> = triples.iter().map(|t| t.0).collect();
        let mut ys: Vec<f64> = triples.iter().map(|t| t.1).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        ys.sort_by(f64::total_cmp);
        ys.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        if xs.len() < 2 || ys.len() < 2 || triples.len() != xs.len() * ys.len() {
            return Err(Error::Parse(format!(
                "kernel table must cover a full lattice: {} x {} vs {} rows",
                xs.len(),
                ys.len(),
                triples.len()
            )));
        }
        let mut values = vec![vec![0.0; ys.len()]; xs.len()];
        for (x, y, k) in triples {
            let i = xs.partition_point(|&v| v < x - 1e-12);
            let j = ys.partition_point(|&v| v < y - 1e-12);
            values[i][j] = k;
        }
        Ok(Self { xs, ys, values })
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let locate = |grid: &[f64], v: f64| -> (usize, f64) {
            if v <= grid[0] {
                return (0, 0.0);
            }
            if v >= *grid.last().unwrap() {
                return (grid.len() - 2, 1.0);
            }
            let i = grid.partition_point(|&g| g <= v) - 1;
            (i, (v - grid[i]) / (grid[i + 1] - grid[i]))
        };
        let (i, tx) = locate(&self.xs, x);
        let (j, ty) = locate(&self.ys, y);
        let v = &self.values;
        (1.0 - tx) * ((1.0 - ty) * v[i][j] + ty * v[i][j + 1])
            + tx * ((1.0 - ty) * v[i + 1][j] + ty * v[i + 1][j + 1])
    }
}
