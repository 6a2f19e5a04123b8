//! 1D piecewise-linear Galerkin solver for the Dirichlet, Sturm-Liouville
//! and Neumann weak problems, with weak-derivative verification, discrete
//! coercivity reports, the Poincare inequality checker, and the affine
//! minimizer of the quadratic Dirichlet energy.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::quad::{gauss_legendre, integrate_grid};
use serde::Serialize;
use std::fmt::Write as _;
use std::sync::Arc;

/// Sorted node coordinates of a 1D mesh; elements are the gaps.
#[derive(Debug, Clone)]
pub struct Mesh1D {
    nodes: Vec<f64>,
}

impl Mesh1D {
    pub fn uniform(a: f64, b: f64, elements: usize) -> Self {
        assert!(b > a && elements >= 2);
        let h = (b - a) / elements as f64;
        Self {
            nodes: (0..=elements).map(|i| a + i as f64 * h).collect(),
        }
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 || nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Parse(
                "mesh nodes must be strictly increasing, at least three of them".into(),
            ));
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn a(&self) -> f64 {
        self.nodes[0]
    }

    pub fn b(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Number of elements `M`; there are `M + 1` nodes.
    pub fn elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn max_spacing(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }
}

type Coefficient = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    /// `-u'' + u = f` with zero boundary values.
    Dirichlet,
    /// `-(p u')' + q u = f` with zero boundary values; needs `p >= alpha > 0`
    /// and `q >= 0` on the quadrature points.
    SturmLiouville,
    /// `-u'' + u = f` with natural boundary conditions `u'(a) = u'(b) = 0`.
    Neumann,
}

/// The bilinear form `A(u, v) = int (p u'v' + q u v)` plus which weak
/// problem it belongs to.
#[derive(Clone)]
pub struct BilinearFormSpec {
    pub p: Coefficient,
    pub q: Coefficient,
    pub kind: FormKind,
}

impl BilinearFormSpec {
    pub fn dirichlet() -> Self {
        Self {
            p: Arc::new(|_| 1.0),
            q: Arc::new(|_| 1.0),
            kind: FormKind::Dirichlet,
        }
    }

    pub fn neumann() -> Self {
        Self {
            p: Arc::new(|_| 1.0),
            q: Arc::new(|_| 1.0),
            kind: FormKind::Neumann,
        }
    }

    pub fn sturm_liouville(
        p: impl Fn(f64) -> f64 + Send + Sync + 'static,
        q: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            p: Arc::new(p),
            q: Arc::new(q),
            kind: FormKind::SturmLiouville,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BoundaryCondition {
    Dirichlet0,
    Neumann,
    Dirichlet { g_a: f64, g_b: f64 },
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolveReport {
    /// `min_i A(phi_i, phi_i) / ||phi_i||_(H1)^2` over the basis hats: the
    /// discrete coercivity constant (a lower-dimensional surrogate for the
    /// continuous one).
    pub coercivity_alpha: f64,
    /// `||A u - F||_inf` of the solved linear system.
    pub residual: f64,
    /// `A(u, u)/2 - int f u`, the minimized energy.
    pub energy: f64,
    pub h: f64,
}

/// Nodal Galerkin solution with its solve diagnostics.
#[derive(Debug, Clone)]
pub struct FemSolution {
    pub mesh: Mesh1D,
    pub nodal: Vec<f64>,
    pub bc: BoundaryCondition,
    pub report: SolveReport,
}

impl FemSolution {
    /// Piecewise-linear evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let nodes = self.mesh.nodes();
        if x <= nodes[0] {
            return self.nodal[0];
        }
        if x >= *nodes.last().unwrap() {
            return *self.nodal.last().unwrap();
        }
        let i = nodes.partition_point(|&n| n <= x) - 1;
        let t = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
        self.nodal[i] * (1.0 - t) + self.nodal[i + 1] * t
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,u\n");
        for (x, u) in self.mesh.nodes().iter().zip(&self.nodal) {
            let _ = writeln!(out, "{x:.16e},{u:.16e}");
        }
        out
    }

    pub fn report_json(&self) -> serde_json::Value {
        serde_json::json!({
            "alpha": self.report.coercivity_alpha,
            "residual": self.report.residual,
            "energy": self.report.energy,
            "h": self.report.h,
            "bc": self.bc,
        })
    }
}

/// Hat-function integrals on one element, by 3-point Gauss.
struct ElementMatrices {
    /// `int p phi_left' phi_right'` etc: [ll, lr, rr]
    stiff: [f64; 3],
    mass: [f64; 3],
    load: [f64; 2],
}

fn element_matrices(
    xl: f64,
    xr: f64,
    p: &Coefficient,
    q: &Coefficient,
    f: &impl Fn(f64) -> f64,
) -> ElementMatrices {
    let (nodes, weights) = gauss_legendre(3);
    let h = xr - xl;
    let mid = 0.5 * (xl + xr);
    let half = 0.5 * h;
    let mut stiff = [0.0; 3];
    let mut mass = [0.0; 3];
    let mut load = [0.0; 2];
    for (t, w) in nodes.iter().zip(&weights) {
        let x = mid + half * t;
        let wx = w * half;
        let bl = (xr - x) / h; // left hat on this element
        let br = (x - xl) / h;
        let pv = p(x);
        let qv = q(x);
        let fv = f(x);
        // hat slopes are -1/h and 1/h
        stiff[0] += wx * pv / (h * h);
        stiff[1] -= wx * pv / (h * h);
        stiff[2] += wx * pv / (h * h);
        mass[0] += wx * qv * bl * bl;
        mass[1] += wx * qv * bl * br;
        mass[2] += wx * qv * br * br;
        load[0] += wx * fv * bl;
        load[1] += wx * fv * br;
    }
    ElementMatrices { stiff, mass, load }
}

struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>, // symmetric: off[i] couples i and i+1
}

impl Tridiagonal {
    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = v.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Thomas elimination; the form's coercivity makes pivoting unnecessary,
    /// but a vanishing pivot is still reported.
    fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = rhs.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diag[0];
        if denom.abs() < 1e-300 {
            return Err(Error::SingularSystem("zero pivot".into()));
        }
        c[0] = if n > 1 { self.off[0] / denom } else { 0.0 };
        d[0] = rhs[0] / denom;
        for i in 1..n {
            denom = self.diag[i] - self.off[i - 1] * c[i - 1];
            if denom.abs() < 1e-300 {
                return Err(Error::SingularSystem(format!("zero pivot at row {i}")));
            }
            if i + 1 < n {
                c[i] = self.off[i] / denom;
            }
            d[i] = (rhs[i] - self.off[i - 1] * d[i - 1]) / denom;
        }
        let mut x = d;
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] -= c[i] * next;
        }
        Ok(x)
    }
}

struct Assembled {
    full: Tridiagonal,
    h1_diag: Vec<f64>, // ||phi_i||_(H1)^2 per node
    load: Vec<f64>,
}

fn assemble(
    mesh: &Mesh1D,
    form: &BilinearFormSpec,
    f: &impl Fn(f64) -> f64,
) -> Assembled {
    let n = mesh.nodes().len();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    let mut h1_diag = vec![0.0; n];
    let mut load = vec![0.0; n];
    let one: Coefficient = Arc::new(|_| 1.0);
    for e in 0..mesh.elements() {
        let (xl, xr) = (mesh.nodes()[e], mesh.nodes()[e + 1]);
        let em = element_matrices(xl, xr, &form.p, &form.q, f);
        diag[e] += em.stiff[0] + em.mass[0];
        off[e] += em.stiff[1] + em.mass[1];
        diag[e + 1] += em.stiff[2] + em.mass[2];
        load[e] += em.load[0];
        load[e + 1] += em.load[1];
        let unit = element_matrices(xl, xr, &one, &one, &|_| 0.0);
        h1_diag[e] += unit.stiff[0] + unit.mass[0];
        h1_diag[e + 1] += unit.stiff[2] + unit.mass[2];
    }
    Assembled {
        full: Tridiagonal { diag, off },
        h1_diag,
        load,
    }
}

/// Solves the weak problem of `form` on `mesh` with right-hand side `f`.
/// The boundary condition follows the form kind: zero Dirichlet values for
/// the Dirichlet and Sturm-Liouville problems, natural conditions for the
/// Neumann problem (whose `+u` mass term removes any compatibility
/// constraint).
pub fn solve_weak(
    f: impl Fn(f64) -> f64,
    form: &BilinearFormSpec,
    mesh: &Mesh1D,
) -> Result<FemSolution> {
    if form.kind == FormKind::SturmLiouville {
        check_sturm_liouville(form, mesh)?;
    }
    let bc = match form.kind {
        FormKind::Neumann => BoundaryCondition::Neumann,
        _ => BoundaryCondition::Dirichlet0,
    };
    solve_assembled(f, form, mesh, bc, 0.0, 0.0)
}

/// Nonhomogeneous Dirichlet data by lifting: solves for `w = u - g` with
/// `g` affine through `(a, g_a)` and `(b, g_b)`, then adds `g` back.
pub fn solve_weak_lifted(
    f: impl Fn(f64) -> f64,
    form: &BilinearFormSpec,
    mesh: &Mesh1D,
    g_a: f64,
    g_b: f64,
) -> Result<FemSolution> {
    if form.kind == FormKind::Neumann {
        return Err(Error::Parse(
            "lifted boundary data applies to the Dirichlet problems".into(),
        ));
    }
    if form.kind == FormKind::SturmLiouville {
        check_sturm_liouville(form, mesh)?;
    }
    solve_assembled(f, form, mesh, BoundaryCondition::Dirichlet { g_a, g_b }, g_a, g_b)
}

fn check_sturm_liouville(form: &BilinearFormSpec, mesh: &Mesh1D) -> Result<()> {
    let (nodes, _) = gauss_legendre(3);
    let mut min_p = f64::INFINITY;
    let mut min_q = f64::INFINITY;
    for e in 0..mesh.elements() {
        let (xl, xr) = (mesh.nodes()[e], mesh.nodes()[e + 1]);
        for t in &nodes {
            let x = 0.5 * (xl + xr) + 0.5 * (xr - xl) * t;
            min_p = min_p.min((form.p)(x));
            min_q = min_q.min((form.q)(x));
        }
    }
    if min_p <= 0.0 || min_q < 0.0 {
        return Err(Error::NotCoercive {
            alpha: min_p.min(min_q),
        });
    }
    Ok(())
}

fn solve_assembled(
    f: impl Fn(f64) -> f64,
    form: &BilinearFormSpec,
    mesh: &Mesh1D,
    bc: BoundaryCondition,
    g_a: f64,
    g_b: f64,
) -> Result<FemSolution> {
    let asm = assemble(mesh, form, &f);
    let n = mesh.nodes().len();
    let dirichlet = !matches!(bc, BoundaryCondition::Neumann);

    // lifting contribution A(g, phi_i) moved to the right-hand side
    let lift: Vec<f64> = if g_a != 0.0 || g_b != 0.0 {
        let (a, b) = (mesh.a(), mesh.b());
        let g: Vec<f64> = mesh
            .nodes()
            .iter()
            .map(|&x| g_a + (g_b - g_a) * (x - a) / (b - a))
            .collect();
        asm.full.apply(&g)
    } else {
        vec![0.0; n]
    };

    let (matrix, rhs, offset): (Tridiagonal, Vec<f64>, usize) = if dirichlet {
        let m = Tridiagonal {
            diag: asm.full.diag[1..n - 1].to_vec(),
            off: asm.full.off[1..n - 2].to_vec(),
        };
        let r: Vec<f64> = (1..n - 1).map(|i| asm.load[i] - lift[i]).collect();
        (m, r, 1)
    } else {
        let m = Tridiagonal {
            diag: asm.full.diag.clone(),
            off: asm.full.off.clone(),
        };
        (m, asm.load.clone(), 0)
    };

    let w = matrix.solve(&rhs)?;
    let residual = matrix
        .apply(&w)
        .iter()
        .zip(&rhs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);

    let mut nodal = vec![0.0; n];
    for (i, v) in w.iter().enumerate() {
        nodal[offset + i] = *v;
    }
    if let BoundaryCondition::Dirichlet { g_a, g_b } = bc {
        let (a, b) = (mesh.a(), mesh.b());
        for (i, x) in mesh.nodes().iter().enumerate() {
            nodal[i] += g_a + (g_b - g_a) * (x - a) / (b - a);
        }
    }

    // discrete coercivity over the basis actually used
    let range = if dirichlet { 1..n - 1 } else { 0..n };
    let mut alpha = f64::INFINITY;
    for i in range {
        alpha = alpha.min(asm.full.diag[i] / asm.h1_diag[i]);
    }
    if alpha <= 0.0 {
        return Err(Error::NotCoercive { alpha });
    }

    // energy A(u,u)/2 - int f u on the full space
    let au = asm.full.apply(&nodal);
    let a_uu: f64 = au.iter().zip(&nodal).map(|(x, y)| x * y).sum();
    let f_u: f64 = asm.load.iter().zip(&nodal).map(|(x, y)| x * y).sum();
    let energy = 0.5 * a_uu - f_u;

    Ok(FemSolution {
        mesh: mesh.clone(),
        nodal,
        bc,
        report: SolveReport {
            coercivity_alpha: alpha,
            residual,
            energy,
            h: mesh.max_spacing(),
        },
    })
}

/// Galerkin defect `max_i |A(u_h, phi_i) - int f phi_i|` over the interior
/// hats, for verifying orthogonality of a computed solution.
pub fn galerkin_defect(
    sol: &FemSolution,
    form: &BilinearFormSpec,
    f: impl Fn(f64) -> f64,
) -> f64 {
    let asm = assemble(&sol.mesh, form, &f);
    let au = asm.full.apply(&sol.nodal);
    let n = sol.nodal.len();
    (1..n - 1)
        .map(|i| (au[i] - asm.load[i]).abs())
        .fold(0.0, f64::max)
}

/// Exact `int |v|^p` for the piecewise-linear function with the given
/// nodal values (the antiderivative of `|v|^p` along a linear segment is
/// in closed form, sign changes included).
fn lp_power_piecewise_linear(nodes: &[f64], values: &[f64], p: f64) -> f64 {
    let g = |v: f64| v.signum() * v.abs().powf(p + 1.0) / (p + 1.0);
    nodes
        .windows(2)
        .zip(values.windows(2))
        .map(|(xs, vs)| {
            let h = xs[1] - xs[0];
            let s = (vs[1] - vs[0]) / h;
            if s.abs() < 1e-14 {
                h * vs[0].abs().powf(p)
            } else {
                (g(vs[1]) - g(vs[0])) / s
            }
        })
        .sum()
}

/// Poincare inequality `int |u|^p <= (b-a)^p int |u'|^p` for a solution
/// vanishing at both endpoints; both sides are exact for
/// piecewise-linear `u`.
pub fn poincare_check(sol: &FemSolution, p: f64) -> Result<crate::realfun::InequalityReport> {
    if !(p >= 1.0) {
        return Err(Error::InvalidP { p });
    }
    let first = sol.nodal[0];
    let last = *sol.nodal.last().unwrap();
    if first.abs() > 1e-12 || last.abs() > 1e-12 {
        return Err(Error::NotZeroBoundary {
            left: first,
            right: last,
        });
    }
    let nodes = sol.mesh.nodes();
    let lhs = lp_power_piecewise_linear(nodes, &sol.nodal, p);
    let width = sol.mesh.b() - sol.mesh.a();
    let rhs: f64 = nodes
        .windows(2)
        .zip(sol.nodal.windows(2))
        .map(|(xs, vs)| {
            let h = xs[1] - xs[0];
            let slope = (vs[1] - vs[0]) / h;
            h * slope.abs().powf(p)
        })
        .sum::<f64>()
        * width.powf(p);
    Ok(crate::realfun::InequalityReport::new(lhs, rhs))
}

/// The affine minimizer `u(t) = L (t - a)/(b - a)` of the Dirichlet energy
/// `F(u) = int u'^2` among functions with `u(a) = 0`, `u(b) = L`.
#[derive(Debug, Clone, Copy)]
pub struct AffineMinimizer {
    pub a: f64,
    pub b: f64,
    pub l: f64,
}

impl AffineMinimizer {
    pub fn eval(&self, t: f64) -> f64 {
        self.l * (t - self.a) / (self.b - self.a)
    }

    /// `F(u) = L^2/(b - a)` for the affine minimizer.
    pub fn energy(&self) -> f64 {
        self.l * self.l / (self.b - self.a)
    }
}

pub fn euler_lagrange_quadratic(l_target: f64, a: f64, b: f64) -> Result<AffineMinimizer> {
    if b <= a {
        return Err(Error::DegenerateInterval { a, b });
    }
    Ok(AffineMinimizer { a, b, l: l_target })
}

/// Outcome of the random-test-function check of `-int v phi = int u phi'`.
#[derive(Debug, Clone, Copy)]
pub struct WeakDerivativeReport {
    /// Largest `|int du phi + int u phi'|` over the test functions.
    pub max_defect: f64,
    /// `||u||_2 + ||du||_2`, the scale the defect is judged against.
    pub scale: f64,
}

impl WeakDerivativeReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_defect <= tol * self.scale
    }
}

/// Tests whether `du` is the weak derivative of `u` by integrating against
/// `test_count` random smooth bumps vanishing at the window endpoints.
pub fn weak_derivative_check(
    u: &GridFunction,
    du: &GridFunction,
    test_count: usize,
    seed: u64,
) -> Result<WeakDerivativeReport> {
    use rand::{Rng, SeedableRng};
    if !u.same_grid(du) {
        return Err(Error::GridMismatch(
            "u and du must share one grid".into(),
        ));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = (u.a(), u.b());
    let width = b - a;
    let mut max_defect = 0.0f64;
    for _ in 0..test_count {
        let r = rng.gen_range(0.15..0.45) * width;
        let c = rng.gen_range(a + r..b - r);
        let phi = |x: f64| {
            let t = (x - c) / r;
            if t.abs() < 1.0 {
                (1.0 / (t * t - 1.0)).exp()
            } else {
                0.0
            }
        };
        let dphi = |x: f64| {
            let t = (x - c) / r;
            if t.abs() < 1.0 {
                let d = t * t - 1.0;
                (-2.0 * t / (d * d)) * (1.0 / d).exp() / r
            } else {
                0.0
            }
        };
        let n = u.n();
        let phi_g = GridFunction::from_fn(a, b, n, phi);
        let dphi_g = GridFunction::from_fn(a, b, n, dphi);
        let defect = integrate_grid(&du.try_mul(&phi_g)?)?
            + integrate_grid(&u.try_mul(&dphi_g)?)?;
        max_defect = max_defect.max(defect.abs());
    }
    let scale = crate::realfun::lp_norm(u, 2.0)? + crate::realfun::lp_norm(du, 2.0)?;
    Ok(WeakDerivativeReport { max_defect, scale })
}
