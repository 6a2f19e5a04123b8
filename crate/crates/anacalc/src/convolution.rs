//! Discrete convolution on grid functions, mollifier families, and
//! approximate-identity smoothing.
//!
//! Convolution uses direct summation with trapezoid weights over the second
//! factor; an FFT path (off by default) computes the identical sum and is
//! validated against the direct one in the tests. The result lives on the
//! extended window `[a_f + a_g, b_f + b_g]`, treating the inputs as zero
//! outside their windows.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::par;
use crate::quad::{integrate, simpson_samples, QuadratureSpec};
use crate::realfun::{lp_norm, InequalityReport};
use num_complex::Complex64;
use std::sync::OnceLock;

/// The two kernel families: the Gaussian density scaled as `n rho(nx)`,
/// and the compactly supported smooth bump `exp(1/(x^2 - 1))` normalized to
/// unit mass and scaled to support `[-1/n, 1/n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MollifierFamily {
    Gaussian,
    Bump,
}

/// Index `n >= 1` within a mollifier family.
#[derive(Debug, Clone, Copy)]
pub struct Mollifier {
    pub family: MollifierFamily,
    pub n: u32,
}

impl Mollifier {
    pub fn new(family: MollifierFamily, n: u32) -> Self {
        assert!(n >= 1, "mollifier index must be at least 1");
        Self { family, n }
    }

    /// Radius outside which the kernel is (numerically) zero.
    pub fn support_radius(&self) -> f64 {
        match self.family {
            // 10 standard deviations: the density is ~ 8e-23 there
            MollifierFamily::Gaussian => 10.0 / self.n as f64,
            MollifierFamily::Bump => 1.0 / self.n as f64,
        }
    }
}

fn gaussian_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn bump_raw(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (1.0 / (x * x - 1.0)).exp()
    } else {
        0.0
    }
}

/// `int_-1^1 exp(1/(x^2-1)) dx`, computed once per process.
pub fn bump_l1_norm() -> f64 {
    static NORM: OnceLock<f64> = OnceLock::new();
    *NORM.get_or_init(|| {
        integrate(bump_raw, -1.0, 1.0, &QuadratureSpec::adaptive(1e-13))
            .expect("bump kernel is finite")
    })
}

/// Samples the mollifier on the grid `(a, b, n_grid)`. The window must
/// cover the support (bump) or eight standard deviations (Gaussian), with
/// at least four samples per unit of kernel width; the bump family is
/// renormalized against the sampling grid so its discrete integral is
/// exactly one.
pub fn mollifier_samples(m: &Mollifier, a: f64, b: f64, n_grid: usize) -> Result<GridFunction> {
    let nf = m.n as f64;
    let needed = match m.family {
        MollifierFamily::Gaussian => 8.0 / nf,
        MollifierFamily::Bump => 1.0 / nf,
    };
    if a > -needed || b < needed {
        return Err(Error::GridTooNarrow(format!(
            "window [{a}, {b}] does not cover [-{needed}, {needed}]"
        )));
    }
    let h = (b - a) / n_grid as f64;
    if h > 0.25 / nf {
        return Err(Error::GridTooNarrow(format!(
            "spacing {h} too coarse for kernel width 1/{nf}"
        )));
    }
    let g = match m.family {
        MollifierFamily::Gaussian => {
            GridFunction::from_fn(a, b, n_grid, |x| nf * gaussian_density(nf * x))
        }
        MollifierFamily::Bump => {
            let c = 1.0 / bump_l1_norm();
            let raw = GridFunction::from_fn(a, b, n_grid, |x| c * nf * bump_raw(nf * x));
            let mass = simpson_samples(raw.values(), raw.h());
            raw.scale(1.0 / mass)
        }
    };
    debug_assert!((simpson_samples(g.values(), g.h()) - 1.0).abs() < 1e-6);
    Ok(g)
}

/// How [`convolve_with`] evaluates the sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConvolveOptions {
    /// Evaluate through FFTs instead of direct summation. Same result up to
    /// rounding; off by default.
    pub use_fft: bool,
}

/// `f * g` by direct summation; see [`convolve_with`].
pub fn convolve(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    convolve_with(f, g, &ConvolveOptions::default())
}

/// Discrete convolution of two grid functions with equal spacing. Node `k`
/// of the result carries `h * sum_j w_j f[k-j] g[j]` with trapezoid weights
/// `w_j` over `g`'s window and out-of-range samples read as zero.
pub fn convolve_with(
    f: &GridFunction,
    g: &GridFunction,
    opts: &ConvolveOptions,
) -> Result<GridFunction> {
    let h = f.h();
    if ((h - g.h()) / h).abs() > 1e-9 {
        return Err(Error::SpacingMismatch(h, g.h()));
    }
    let values = if opts.use_fft {
        convolve_fft(f.values(), g.values(), h)
    } else {
        convolve_direct(f.values(), g.values(), h)
    };
    Ok(GridFunction::new(f.a() + g.a(), f.b() + g.b(), values))
}

fn trapezoid_weight(j: usize, n: usize) -> f64 {
    if j == 0 || j == n {
        0.5
    } else {
        1.0
    }
}

fn convolve_direct(f: &[f64], g: &[f64], h: f64) -> Vec<f64> {
    let nf = f.len() - 1;
    let ng = g.len() - 1;
    par::map_range(nf + ng + 1, |k| {
        let j_lo = k.saturating_sub(nf);
        let j_hi = ng.min(k);
        let mut acc = 0.0;
        for j in j_lo..=j_hi {
            acc += trapezoid_weight(j, ng) * f[k - j] * g[j];
        }
        h * acc
    })
}

fn convolve_fft(f: &[f64], g: &[f64], h: f64) -> Vec<f64> {
    let nf = f.len() - 1;
    let ng = g.len() - 1;
    let out_len = nf + ng + 1;
    let size = out_len.next_power_of_two();
    let mut planner = rustfft::FftPlanner::new();
    let fft = planner.plan_fft_forward(size);
    let ifft = planner.plan_fft_inverse(size);

    let mut fa: Vec<Complex64> = f
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .chain(std::iter::repeat(Complex64::ZERO))
        .take(size)
        .collect();
    let mut gb: Vec<Complex64> = g
        .iter()
        .enumerate()
        .map(|(j, &v)| Complex64::new(trapezoid_weight(j, ng) * v, 0.0))
        .chain(std::iter::repeat(Complex64::ZERO))
        .take(size)
        .collect();
    fft.process(&mut fa);
    fft.process(&mut gb);
    for (a, b) in fa.iter_mut().zip(&gb) {
        *a *= b;
    }
    ifft.process(&mut fa);
    let scale = h / size as f64;
    fa.iter().take(out_len).map(|v| scale * v.re).collect()
}

/// Young's inequality report `||f*g||_p <= ||f||_1 ||g||_p`.
pub fn young_report(f: &GridFunction, g: &GridFunction, p: f64) -> Result<InequalityReport> {
    let conv = convolve(f, g)?;
    let lhs = lp_norm(&conv, p)?;
    let rhs = lp_norm(f, 1.0)? * lp_norm(g, p)?;
    Ok(InequalityReport::new(lhs, rhs))
}

/// Table of `||rho_n * g - g||_p` over the supplied kernel indices. `g`
/// should be continuous with compact support strictly inside its window;
/// `p` must be finite (the sup-norm statement fails for merely integrable
/// functions, so it is not offered).
pub fn mollify_convergence(
    g: &GridFunction,
    family: MollifierFamily,
    p: f64,
    n_list: &[u32],
) -> Result<Vec<f64>> {
    if p.is_infinite() {
        return Err(Error::UnsupportedP(
            "mollifier convergence is only asserted for finite p".into(),
        ));
    }
    let h = g.h();
    n_list
        .iter()
        .map(|&n| {
            let m = Mollifier::new(family, n);
            // kernel radius rounded up to a whole number of grid steps so
            // the convolution window stays node-aligned with g's window
            let steps = (m.support_radius() / h).ceil() as usize;
            let r = steps as f64 * h;
            let rho = mollifier_samples(&m, -r, r, 2 * steps)?;
            let conv = convolve(&rho, g)?;
            let diff = conv.restrict(g.a(), g.b())?.try_sub(g)?;
            lp_norm(&diff, p)
        })
        .collect()
}

/// Total variation of the samples, used by the smoothing checks.
pub fn total_variation(f: &GridFunction) -> f64 {
    f.values().windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}
