//! Initial-value problem solvers: Picard iteration on a fixed grid,
//! the explicit-Euler polygon, step-limited maximal continuation with
//! blow-up detection, and the Gronwall/continuous-dependence certificates.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::quad::cumulative_integral;
use serde::Serialize;
use std::fmt::Write as _;

/// A first-order system `u' = f(t, u)` with initial datum `u(t0) = u0`,
/// to be solved on `horizon = (t_min, t_max)` with `t_min <= t0 <= t_max`.
/// `lipschitz` and `sup_bound` are optional caller-supplied constants `L`
/// and `eps` with `|f(t, u)| <= eps + L |u|`; when both are present the
/// continuation solver reports the no-blow-up certificate they imply.
pub struct IvpSpec<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    pub rhs: F,
    pub t0: f64,
    pub u0: Vec<f64>,
    pub horizon: (f64, f64),
    pub lipschitz: Option<f64>,
    pub sup_bound: Option<f64>,
}

impl<F> IvpSpec<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    pub fn new(rhs: F, t0: f64, u0: Vec<f64>, horizon: (f64, f64)) -> Self {
        assert!(
            horizon.0 <= t0 && t0 <= horizon.1,
            "horizon must contain t0"
        );
        assert!(!u0.is_empty(), "state dimension must be at least 1");
        Self {
            rhs,
            t0,
            u0,
            horizon,
            lipschitz: None,
            sup_bound: None,
        }
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        assert!(l >= 0.0);
        self.lipschitz = Some(l);
        self
    }

    pub fn with_sup_bound(mut self, m: f64) -> Self {
        assert!(m >= 0.0);
        self.sup_bound = Some(m);
        self
    }

    fn dim(&self) -> usize {
        self.u0.len()
    }

    fn eval(&self, t: f64, u: &[f64], out: &mut [f64]) -> Result<()> {
        (self.rhs)(t, u, out);
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("f(t, u) at t = {t}"),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum OdeStatus {
    /// Reached the horizon end(s).
    Completed,
    /// `|u|` exceeded the blow-up threshold inside the horizon; `t_escape`
    /// is the midpoint of the offending step.
    BlewUp { t_escape: f64 },
    /// The step budget ran out before the horizon end.
    Budget,
}

/// Certificate from the linear-growth lemma `|u'| <= eps + L |u|`:
/// the trajectory must stay under `(eps/L + |u(t0)|) e^(L |t - t0|)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GrowthBound {
    pub eps: f64,
    pub lipschitz: f64,
    /// Bound evaluated at the farthest time reached.
    pub sup: f64,
    /// Whether the computed trajectory stayed below the bound everywhere.
    pub satisfied: bool,
}

/// A solved trajectory: one grid function per state component on a shared
/// uniform time grid, plus the solve diagnostics.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub components: Vec<GridFunction>,
    pub status: OdeStatus,
    /// Picard: sup distance between the last two iterates. Euler marchers:
    /// largest local-error estimate `h/2 max|f_(k+1) - f_k|`.
    pub max_step_error: f64,
    pub growth_bound: Option<GrowthBound>,
}

#[derive(Debug, Serialize)]
pub struct OdeReport {
    pub status: OdeStatus,
    pub max_step_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<GrowthBound>,
}

impl OdeSolution {
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Value of component `c` at the node nearest to `t`.
    pub fn value_near(&self, c: usize, t: f64) -> f64 {
        let g = &self.components[c];
        let i = ((t - g.a()) / g.h()).round().clamp(0.0, g.n() as f64) as usize;
        g.values()[i]
    }

    /// CSV export `t,u1,...,un`.
    pub fn to_csv(&self) -> String {
        let mut header = String::from("t");
        for c in 1..=self.dim() {
            let _ = write!(header, ",u{c}");
        }
        header.push('\n');
        let g0 = &self.components[0];
        for i in 0..=g0.n() {
            let _ = write!(header, "{:.16e}", g0.x(i));
            for comp in &self.components {
                let _ = write!(header, ",{:.16e}", comp.values()[i]);
            }
            header.push('\n');
        }
        header
    }

    pub fn report(&self) -> OdeReport {
        OdeReport {
            status: self.status,
            max_step_error: self.max_step_error,
            bounds: self.growth_bound,
        }
    }
}

/// Splits the horizon into a uniform grid of `n` intervals anchored so that
/// `t0` falls on a node (the window shifts by less than half a step when
/// `t0` is off the lattice). Returns `(h, nodes_before_t0)`.
fn anchored_grid(horizon: (f64, f64), t0: f64, n: usize) -> (f64, usize) {
    let h = (horizon.1 - horizon.0) / n as f64;
    let k_minus = ((t0 - horizon.0) / h).round() as usize;
    (h, k_minus.min(n))
}

/// Peano-Picard iteration: `y_(k+1)(t) = u0 + int_(t0)^t f(s, y_k(s)) ds`
/// sampled on `grid_n + 1` nodes of the horizon, with the integral taken by
/// the grid's cumulative quadrature. Reports the sup distance between the
/// final two iterates in `max_step_error`.
pub fn picard_solve<F>(ivp: &IvpSpec<F>, n_iter: usize, grid_n: usize) -> Result<OdeSolution>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    assert!(grid_n >= 2, "need at least two grid intervals");
    if let Some(l) = ivp.lipschitz {
        let window = (ivp.horizon.1 - ivp.t0).max(ivp.t0 - ivp.horizon.0);
        if l * window >= 1.0 {
            return Err(Error::WindowTooLarge { product: l * window });
        }
    }
    let dim = ivp.dim();
    let (h, k_minus) = anchored_grid(ivp.horizon, ivp.t0, grid_n);
    let t_at = |i: usize| ivp.t0 + (i as f64 - k_minus as f64) * h;

    // state laid out per component for the cumulative quadrature
    let mut y: Vec<Vec<f64>> = (0..dim).map(|c| vec![ivp.u0[c]; grid_n + 1]).collect();
    let mut sup_change = f64::INFINITY;
    let mut fbuf = vec![0.0; dim];
    let mut ubuf = vec![0.0; dim];
    for _ in 0..n_iter {
        // sample f along the current iterate
        let mut fvals: Vec<Vec<f64>> = (0..dim).map(|_| vec![0.0; grid_n + 1]).collect();
        for i in 0..=grid_n {
            for (c, u) in ubuf.iter_mut().enumerate() {
                *u = y[c][i];
            }
            ivp.eval(t_at(i), &ubuf, &mut fbuf)?;
            for c in 0..dim {
                fvals[c][i] = fbuf[c];
            }
        }
        sup_change = 0.0;
        for c in 0..dim {
            let integral = cumulative_from_anchor(&fvals[c], h, k_minus);
            for i in 0..=grid_n {
                let next = ivp.u0[c] + integral[i];
                sup_change = sup_change.max((next - y[c][i]).abs());
                y[c][i] = next;
            }
        }
    }
    if y.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "Picard iterate".into(),
        });
    }
    let a = t_at(0);
    let b = t_at(grid_n);
    Ok(OdeSolution {
        components: y.into_iter().map(|v| GridFunction::new(a, b, v)).collect(),
        status: OdeStatus::Completed,
        max_step_error: sup_change,
        growth_bound: None,
    })
}

/// `int_(t_anchor)^(t_i) f` for every node, where the anchor is node index
/// `k`. Negative for nodes left of the anchor.
fn cumulative_from_anchor(values: &[f64], h: f64, k: usize) -> Vec<f64> {
    let n = values.len() - 1;
    let mut out = vec![0.0; values.len()];
    if k < n {
        let fwd = cumulative_integral(&values[k..], h);
        for (j, v) in fwd.iter().enumerate() {
            out[k + j] = *v;
        }
    }
    if k > 0 {
        let mut rev: Vec<f64> = values[..=k].to_vec();
        rev.reverse();
        let bwd = cumulative_integral(&rev, h);
        for (j, v) in bwd.iter().enumerate() {
            out[k - j] = -v;
        }
    }
    out
}

/// The Euler polygon on `m` steps spanning the horizon, marched in both
/// directions from `t0` when the horizon extends both ways.
pub fn peano_polygon<F>(ivp: &IvpSpec<F>, m: usize) -> Result<OdeSolution>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    assert!(m >= 1, "need at least one step");
    let (h, k_minus) = anchored_grid(ivp.horizon, ivp.t0, m);
    let k_plus = m - k_minus;
    let dim = ivp.dim();

    let forward = euler_march(ivp, h, k_plus, None)?;
    let backward = euler_march(ivp, -h, k_minus, None)?;
    let max_step_error = forward.max_step_error.max(backward.max_step_error);

    let mut components = Vec::with_capacity(dim);
    let a = ivp.t0 - k_minus as f64 * h;
    let b = ivp.t0 + k_plus as f64 * h;
    for c in 0..dim {
        let mut vals = Vec::with_capacity(m + 1);
        vals.extend(backward.states.iter().rev().map(|s| s[c]));
        vals.extend(forward.states.iter().skip(1).map(|s| s[c]));
        components.push(GridFunction::new(a, b, vals));
    }
    Ok(OdeSolution {
        components,
        status: OdeStatus::Completed,
        max_step_error,
        growth_bound: None,
    })
}

struct March {
    states: Vec<Vec<f64>>,
    max_step_error: f64,
    escaped_after: Option<usize>,
}

/// Explicit Euler for `steps` steps of signed size `h`. With a threshold,
/// stops early once the Euclidean norm exceeds it.
fn euler_march<F>(
    ivp: &IvpSpec<F>,
    h: f64,
    steps: usize,
    blowup_threshold: Option<f64>,
) -> Result<March>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let dim = ivp.dim();
    let mut states = Vec::with_capacity(steps + 1);
    states.push(ivp.u0.clone());
    let mut f_prev = vec![0.0; dim];
    let mut f_cur = vec![0.0; dim];
    ivp.eval(ivp.t0, &ivp.u0, &mut f_prev)?;
    let mut max_step_error = 0.0f64;
    for k in 0..steps {
        let t = ivp.t0 + k as f64 * h;
        let prev = states.last().unwrap();
        let next: Vec<f64> = prev
            .iter()
            .zip(&f_prev)
            .map(|(u, f)| u + h * f)
            .collect();
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("Euler state at t = {}", t + h),
            });
        }
        if let Some(thr) = blowup_threshold {
            if norm2(&next) > thr {
                states.push(next);
                return Ok(March {
                    states,
                    max_step_error,
                    escaped_after: Some(k),
                });
            }
        }
        ivp.eval(t + h, &next, &mut f_cur)?;
        let df = f_cur
            .iter()
            .zip(&f_prev)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        max_step_error = max_step_error.max(0.5 * h.abs() * df);
        f_prev.copy_from_slice(&f_cur);
        states.push(next);
    }
    Ok(March {
        states,
        max_step_error,
        escaped_after: None,
    })
}

fn norm2(u: &[f64]) -> f64 {
    u.iter().map(|v| v * v).sum::<f64>().sqrt()
}

const CONTINUATION_STEP_CAP: usize = 50_000_000;

/// Marches with explicit Euler until the horizon ends or the solution
/// escapes past `blowup_threshold`; `t_escape` is reported as the midpoint
/// of the last step taken. When the spec carries both `sup_bound` (the
/// `eps` of the linear-growth lemma) and `lipschitz`, the implied
/// exponential bound is evaluated along the trajectory and reported.
pub fn continue_maximal<F>(
    ivp: &IvpSpec<F>,
    step: f64,
    blowup_threshold: f64,
) -> Result<OdeSolution>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    if step <= 0.0 {
        return Err(Error::StepNonPositive(step));
    }
    assert!(blowup_threshold > 0.0, "blow-up threshold must be positive");
    let fwd_steps = ((ivp.horizon.1 - ivp.t0) / step).floor() as usize;
    let bwd_steps = ((ivp.t0 - ivp.horizon.0) / step).floor() as usize;
    let budget_hit = fwd_steps + bwd_steps > CONTINUATION_STEP_CAP;
    let (fwd_steps, bwd_steps) = if budget_hit {
        let half = CONTINUATION_STEP_CAP / 2;
        (fwd_steps.min(half), bwd_steps.min(half))
    } else {
        (fwd_steps, bwd_steps)
    };

    let forward = euler_march(ivp, step, fwd_steps, Some(blowup_threshold))?;
    let backward = euler_march(ivp, -step, bwd_steps, Some(blowup_threshold))?;

    let status = if let Some(k) = forward.escaped_after {
        OdeStatus::BlewUp {
            t_escape: ivp.t0 + (k as f64 + 0.5) * step,
        }
    } else if let Some(k) = backward.escaped_after {
        OdeStatus::BlewUp {
            t_escape: ivp.t0 - (k as f64 + 0.5) * step,
        }
    } else if budget_hit {
        OdeStatus::Budget
    } else {
        OdeStatus::Completed
    };

    let n_b = backward.states.len() - 1;
    let n_f = forward.states.len() - 1;
    let a = ivp.t0 - n_b as f64 * step;
    let b = ivp.t0 + n_f as f64 * step;
    let dim = ivp.dim();
    let mut components = Vec::with_capacity(dim);
    for c in 0..dim {
        let mut vals = Vec::with_capacity(n_b + n_f + 1);
        vals.extend(backward.states.iter().rev().map(|s| s[c]));
        vals.extend(forward.states.iter().skip(1).map(|s| s[c]));
        components.push(GridFunction::new(a, b, vals));
    }

    let growth_bound = match (ivp.lipschitz, ivp.sup_bound) {
        (Some(l), Some(eps)) if l > 0.0 => {
            let base = eps / l + norm2(&ivp.u0);
            let bound_at = |t: f64| base * (l * (t - ivp.t0).abs()).exp();
            let mut satisfied = true;
            let n = components[0].n();
            for i in 0..=n {
                let t = components[0].x(i);
                let u: Vec<f64> = components.iter().map(|g| g.values()[i]).collect();
                if norm2(&u) > bound_at(t) + 1e-9 {
                    satisfied = false;
                    break;
                }
            }
            Some(GrowthBound {
                eps,
                lipschitz: l,
                sup: bound_at(a).max(bound_at(b)),
                satisfied,
            })
        }
        _ => None,
    };

    Ok(OdeSolution {
        components,
        status,
        max_step_error: forward.max_step_error.max(backward.max_step_error),
        growth_bound,
    })
}

/// The Gronwall bound `alpha e^(beta t) + gamma/beta (e^(beta t) - 1)`
/// sampled on `[0, t_end]`.
pub fn gronwall_bound(
    alpha: f64,
    beta: f64,
    gamma: f64,
    t_end: f64,
    n: usize,
) -> Result<GridFunction> {
    if beta <= 0.0 {
        return Err(Error::BetaNonPositive(beta));
    }
    assert!(t_end > 0.0 && n >= 1);
    Ok(GridFunction::from_fn(0.0, t_end, n, |t| {
        gronwall_bound_at(alpha, beta, gamma, t)
    }))
}

/// Pointwise Gronwall bound at `t >= 0`.
pub fn gronwall_bound_at(alpha: f64, beta: f64, gamma: f64, t: f64) -> f64 {
    let e = (beta * t).exp();
    alpha * e + gamma / beta * (e - 1.0)
}

/// Checks a trajectory on `[0, T]` against the Gronwall bound; returns the
/// largest excess `u(t) - bound(t)` over the nodes (non-positive when the
/// bound holds).
pub fn gronwall_check(
    trajectory: &GridFunction,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<f64> {
    if beta <= 0.0 {
        return Err(Error::BetaNonPositive(beta));
    }
    let mut excess = f64::NEG_INFINITY;
    for i in 0..=trajectory.n() {
        let t = trajectory.x(i);
        excess = excess.max(trajectory.values()[i] - gronwall_bound_at(alpha, beta, gamma, t));
    }
    Ok(excess)
}

/// The continuous-dependence bound
/// `|x - y| e^(L (t - t0)) + M/L (e^(L (t - t0)) - 1)` on `[t0, t_end]`,
/// where `x`, `y` are the two initial data and `M` dominates `sup |f - g|`.
pub fn dependence_certificate(
    u0_x: &[f64],
    u0_y: &[f64],
    t0: f64,
    l: f64,
    m_sup: f64,
    t_end: f64,
    n: usize,
) -> Result<GridFunction> {
    if l <= 0.0 {
        return Err(Error::LNonPositive(l));
    }
    assert_eq!(u0_x.len(), u0_y.len(), "initial data dimensions differ");
    assert!(t_end > t0 && n >= 1);
    let d0 = u0_x
        .iter()
        .zip(u0_y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(GridFunction::from_fn(t0, t_end, n, |t| {
        let e = (l * (t - t0)).exp();
        d0 * e + m_sup / l * (e - 1.0)
    }))
}

/// Outcome of integrating two problems and comparing their separation with
/// the certificate.
#[derive(Debug)]
pub struct DependenceCheck {
    pub bound: GridFunction,
    pub separation: GridFunction,
    /// Largest `separation - bound` over the grid; non-positive means the
    /// certificate held everywhere.
    pub max_excess: f64,
}

/// Integrates both problems with Euler on a shared grid of `n` steps over
/// `[t0, t_end]` and checks the separation against the certificate.
/// Both specs must share `t0`.
pub fn dependence_check<F, G>(
    ivp_x: &IvpSpec<F>,
    ivp_y: &IvpSpec<G>,
    l: f64,
    m_sup: f64,
    t_end: f64,
    n: usize,
) -> Result<DependenceCheck>
where
    F: Fn(f64, &[f64], &mut [f64]),
    G: Fn(f64, &[f64], &mut [f64]),
{
    if l <= 0.0 {
        return Err(Error::LNonPositive(l));
    }
    if (ivp_x.t0 - ivp_y.t0).abs() > 1e-12 {
        return Err(Error::GridMismatch(format!(
            "initial times differ: {} vs {}",
            ivp_x.t0, ivp_y.t0
        )));
    }
    let h = (t_end - ivp_x.t0) / n as f64;
    let mx = euler_march(ivp_x, h, n, None)?;
    let my = euler_march(ivp_y, h, n, None)?;
    let bound = dependence_certificate(&ivp_x.u0, &ivp_y.u0, ivp_x.t0, l, m_sup, t_end, n)?;
    let sep: Vec<f64> = mx
        .states
        .iter()
        .zip(&my.states)
        .map(|(a, b)| {
            a.iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let separation = GridFunction::new(ivp_x.t0, t_end, sep);
    let max_excess = separation
        .values()
        .iter()
        .zip(bound.values())
        .map(|(s, b)| s - b)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(DependenceCheck {
        bound,
        separation,
        max_excess,
    })
}

/// Samples `|f(t,u) - f(t,v)| / |u - v|` over random pairs in the box
/// `[lo, hi]^dim` and times in the horizon; an estimate only, never a
/// proof of uniqueness.
pub fn estimate_lipschitz<F>(
    ivp: &IvpSpec<F>,
    lo: f64,
    hi: f64,
    samples: usize,
    seed: u64,
) -> Result<f64>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let dim = ivp.dim();
    let mut fu = vec![0.0; dim];
    let mut fv = vec![0.0; dim];
    let mut best = 0.0f64;
    for _ in 0..samples {
        let t = rng.gen_range(ivp.horizon.0..=ivp.horizon.1);
        let u: Vec<f64> = (0..dim).map(|_| rng.gen_range(lo..=hi)).collect();
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(lo..=hi)).collect();
        let du = u
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if du < 1e-12 {
            continue;
        }
        ivp.eval(t, &u, &mut fu)?;
        ivp.eval(t, &v, &mut fv)?;
        let df = fu
            .iter()
            .zip(&fv)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        best = best.max(df / du);
    }
    Ok(best)
}

/// The Lorenz right-hand side with parameters `(sigma, rho, beta)`.
pub fn lorenz_rhs(sigma: f64, rho: f64, beta: f64) -> impl Fn(f64, &[f64], &mut [f64]) {
    move |_t, u, out| {
        out[0] = -sigma * (u[0] - u[1]);
        out[1] = rho * u[0] - u[1] - u[0] * u[2];
        out[2] = u[0] * u[1] - beta * u[2];
    }
}
