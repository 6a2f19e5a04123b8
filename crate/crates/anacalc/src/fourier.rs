//! Fourier series on `[-pi, pi]`, the spectral heat-equation solver, the
//! continuous Fourier transform with its inverse, and the Laplace
//! transform. All integrals are composite Simpson on the sample grid;
//! there is no FFT binning behind these operations.

use crate::error::{Error, Result};
use crate::grid::{ComplexGrid, GridFunction};
use crate::par;
use crate::quad::simpson_samples;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const SQRT_2PI: f64 = 2.5066282746310002;

/// Trigonometric coefficients `a0, a_k, b_k` of a function on `[-pi, pi]`,
/// through order `N = a.len()`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourierSeries {
    pub a0: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl FourierSeries {
    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// Partial sum `S_n(x) = a0/2 + sum_(k<=n) a_k cos kx + b_k sin kx`.
    /// At a jump of the generating function the sums converge to the
    /// midpoint of the one-sided limits.
    pub fn partial_sum(&self, x: f64, n: usize) -> Result<f64> {
        if n > self.order() {
            return Err(Error::OrderExceeded {
                requested: n,
                max: self.order(),
            });
        }
        let mut s = 0.5 * self.a0;
        // cos/sin of kx by recurrence; one sincos instead of 2n of them
        let (sin_x, cos_x) = x.sin_cos();
        let (mut sk, mut ck) = (0.0f64, 1.0f64);
        for k in 0..n {
            let c = ck * cos_x - sk * sin_x;
            let s_ = sk * cos_x + ck * sin_x;
            ck = c;
            sk = s_;
            s += self.a[k] * ck + self.b[k] * sk;
        }
        Ok(s)
    }
}

fn require_pi_window(f: &GridFunction) -> Result<()> {
    if (f.a() + PI).abs() > 1e-9 || (f.b() - PI).abs() > 1e-9 {
        return Err(Error::GridMismatch(format!(
            "expected the window [-pi, pi], got [{}, {}]",
            f.a(),
            f.b()
        )));
    }
    Ok(())
}

/// Coefficients of `f` on `[-pi, pi]` through order `n_order`, by composite
/// Simpson on the sample grid. The grid must carry at least `16 n_order`
/// intervals so the top mode stays well clear of the aliasing limit. The
/// Bessel inequality against `f` is verified before returning.
pub fn fourier_coefficients(f: &GridFunction, n_order: usize) -> Result<FourierSeries> {
    assert!(n_order >= 1, "order must be at least 1");
    require_pi_window(f)?;
    if f.n() < 16 * n_order {
        return Err(Error::GridTooCoarse {
            order: n_order,
            needed: 16 * n_order,
            actual: f.n(),
        });
    }
    let h = f.h();
    let vals = f.values();
    let n = f.n();
    let a0 = simpson_samples(vals, h) / PI;
    let pairs = par::map_range(n_order, |ki| {
        let k = (ki + 1) as f64;
        let mut cos_w = Vec::with_capacity(n + 1);
        let mut sin_w = Vec::with_capacity(n + 1);
        for (i, &v) in vals.iter().enumerate() {
            let x = f.a() + i as f64 * h;
            let (s, c) = (k * x).sin_cos();
            cos_w.push(v * c);
            sin_w.push(v * s);
        }
        (
            simpson_samples(&cos_w, h) / PI,
            simpson_samples(&sin_w, h) / PI,
        )
    });
    let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();

    let energy = simpson_samples(f.map(|v| v * v).values(), h) / PI;
    let bessel = 0.5 * a0 * a0
        + a.iter().zip(&b).map(|(x, y)| x * x + y * y).sum::<f64>();
    if bessel > energy + 1e-8 * (1.0 + energy.abs()) {
        return Err(Error::GridTooCoarse {
            order: n_order,
            needed: 16 * n_order,
            actual: f.n(),
        });
    }
    Ok(FourierSeries { a0, a, b })
}

/// The closed-form Dirichlet kernel `sin((n + 1/2) y) / (2 sin(y/2))`,
/// with the removable singularity at `y = 0 (mod 2 pi)` filled by its
/// limit `n + 1/2`.
pub fn dirichlet_kernel(n: usize, y: f64) -> f64 {
    let half = y / 2.0;
    let denom = half.sin();
    if denom.abs() < 1e-7 {
        // fall back to the defining cosine sum, exact at the singularity
        return 0.5 + (1..=n).map(|k| (k as f64 * y).cos()).sum::<f64>();
    }
    ((n as f64 + 0.5) * y).sin() / (2.0 * denom)
}

/// Fourier-mode solution of the heat equation on `[-pi, pi]`: the mode-`k`
/// coefficients of the initial datum decay by `exp(-k^2 omega^2 t)`.
#[derive(Debug, Clone)]
pub struct HeatSolution {
    pub series: FourierSeries,
    pub omega: f64,
}

impl HeatSolution {
    /// `u(x, t)` as the damped partial sum of the initial series.
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        let w2 = self.omega * self.omega;
        let mut s = 0.5 * self.series.a0;
        for k in 1..=self.series.order() {
            let kf = k as f64;
            let damp = (-kf * kf * w2 * t).exp();
            let (sin_kx, cos_kx) = (kf * x).sin_cos();
            s += damp * (self.series.a[k - 1] * cos_kx + self.series.b[k - 1] * sin_kx);
        }
        s
    }
}

/// Expands the initial datum through order `n_order` and returns the
/// spectral heat solution for diffusivity `omega != 0`.
pub fn heat_solve(f: &GridFunction, omega: f64, n_order: usize) -> Result<HeatSolution> {
    if omega == 0.0 {
        return Err(Error::OmegaZero);
    }
    let series = fourier_coefficients(f, n_order)?;
    Ok(HeatSolution { series, omega })
}

const DECAY_THRESHOLD: f64 = 1e-12;

fn require_decayed(first: f64, last: f64) -> Result<()> {
    let edge = first.abs().max(last.abs());
    if edge > DECAY_THRESHOLD {
        return Err(Error::NotDecayed {
            edge,
            threshold: DECAY_THRESHOLD,
        });
    }
    Ok(())
}

/// `F f(x) = (2 pi)^(-1/2) int f(t) e^(ixt) dt` sampled on the uniform
/// grid `(x_a, x_b, x_n)`. `f` must be (numerically) compactly supported:
/// its samples at the window edges may not exceed `1e-12`.
pub fn fourier_transform(
    f: &GridFunction,
    x_a: f64,
    x_b: f64,
    x_n: usize,
) -> Result<ComplexGrid> {
    require_decayed(f.values()[0], *f.values().last().unwrap())?;
    if !f.is_finite() {
        return Err(Error::NonFinite {
            context: "transform input sample".into(),
        });
    }
    let h = f.h();
    let hx = (x_b - x_a) / x_n as f64;
    let vals = f.values();
    let out = par::map_range(x_n + 1, |i| {
        let x = x_a + i as f64 * hx;
        let samples: Vec<Complex64> = vals
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let t = f.a() + j as f64 * h;
                v * Complex64::new(0.0, x * t).exp()
            })
            .collect();
        crate::quad::simpson_samples_complex(&samples, h) / SQRT_2PI
    });
    Ok(ComplexGrid::new(x_a, x_b, out))
}

/// Inverse transform `(2 pi)^(-1/2) int fhat(x) e^(-ixt) dx` sampled on
/// `(t_a, t_b, t_n)`; returns the real part (the imaginary residue of a
/// transform of real data is rounding noise).
pub fn inverse_transform(
    fhat: &ComplexGrid,
    t_a: f64,
    t_b: f64,
    t_n: usize,
) -> Result<GridFunction> {
    require_decayed(fhat.values()[0].norm(), fhat.values().last().unwrap().norm())?;
    let h = fhat.h();
    let vals = fhat.values();
    let out = par::map_range(t_n + 1, |i| {
        let t = t_a + i as f64 * (t_b - t_a) / t_n as f64;
        let samples: Vec<Complex64> = vals
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let x = fhat.a() + j as f64 * h;
                v * Complex64::new(0.0, -x * t).exp()
            })
            .collect();
        (crate::quad::simpson_samples_complex(&samples, h) / SQRT_2PI).re
    });
    Ok(GridFunction::new(t_a, t_b, out))
}

/// `L f(x) = int_0^R e^(-xt) f(t) dt` for `f` sampled on `[0, R]`,
/// returned on the uniform grid `(x_a, x_b, x_n)` with `x_a >= 0`.
pub fn laplace_transform(
    f: &GridFunction,
    x_a: f64,
    x_b: f64,
    x_n: usize,
) -> Result<GridFunction> {
    if x_a < 0.0 {
        return Err(Error::NegativeX(x_a));
    }
    if f.a().abs() > 1e-9 {
        return Err(Error::GridMismatch(format!(
            "Laplace input must be sampled on [0, R], got left endpoint {}",
            f.a()
        )));
    }
    let h = f.h();
    let vals = f.values();
    let out = par::map_range(x_n + 1, |i| {
        let x = x_a + i as f64 * (x_b - x_a) / x_n as f64;
        let samples: Vec<f64> = vals
            .iter()
            .enumerate()
            .map(|(j, &v)| v * (-x * (j as f64 * h)).exp())
            .collect();
        simpson_samples(&samples, h)
    });
    Ok(GridFunction::new(x_a.max(0.0), x_b, out))
}

/// Pointwise Laplace transform at a single `x >= 0`.
pub fn laplace_at(f: &GridFunction, x: f64) -> Result<f64> {
    let g = laplace_transform(f, x, x + 1.0, 1)?;
    Ok(g.values()[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::convolve;
    use crate::realfun::lp_norm;
    use approx::assert_abs_diff_eq;

    fn pi_grid(n: usize, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction::from_fn(-PI, PI, n, f)
    }

    #[test]
    fn sawtooth_series_matches_alternating_coefficients() {
        let f = pi_grid(1 << 12, |x| x);
        let s = fourier_coefficients(&f, 32).unwrap();
        for k in 1..=32usize {
            let expect = if k % 2 == 1 { 2.0 } else { -2.0 } / k as f64;
            assert_abs_diff_eq!(s.b[k - 1], expect, epsilon = 1e-6);
            assert!(s.a[k - 1].abs() < 1e-8, "a_{k} = {}", s.a[k - 1]);
        }
        assert!(s.a0.abs() < 1e-10);
    }

    #[test]
    fn parabola_series_coefficients() {
        let f = pi_grid(1 << 12, |x| x * x);
        let s = fourier_coefficients(&f, 16).unwrap();
        assert_abs_diff_eq!(0.5 * s.a0, PI * PI / 3.0, epsilon = 1e-8);
        for k in 1..=16usize {
            let expect = 4.0 * if k % 2 == 0 { 1.0 } else { -1.0 } / (k * k) as f64;
            assert_abs_diff_eq!(s.a[k - 1], expect, epsilon = 1e-7);
            assert!(s.b[k - 1].abs() < 1e-9);
        }
    }

    #[test]
    fn zero_function_has_zero_series() {
        let s = fourier_coefficients(&pi_grid(256, |_| 0.0), 4).unwrap();
        assert_eq!(s.a0, 0.0);
        assert!(s.a.iter().chain(&s.b).all(|&c| c == 0.0));
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let f = pi_grid(128, |x| x);
        assert!(matches!(
            fourier_coefficients(&f, 32),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn partial_sum_at_zero_order_is_mean() {
        let s = fourier_coefficients(&pi_grid(512, |x| x * x), 4).unwrap();
        assert_abs_diff_eq!(s.partial_sum(0.3, 0).unwrap(), 0.5 * s.a0);
        assert!(matches!(
            s.partial_sum(0.0, 5),
            Err(Error::OrderExceeded { .. })
        ));
    }

    #[test]
    fn sawtooth_partial_sum_against_leibniz_oracle() {
        let n_order = 2000;
        let f = pi_grid(1 << 15, |x| x);
        let s = fourier_coefficients(&f, n_order).unwrap();
        let x = PI / 2.0;
        let computed = s.partial_sum(x, n_order).unwrap();
        // oracle: 2 sum (-1)^(k+1) sin(k pi/2) / k, same truncation
        let oracle: f64 = (1..=n_order)
            .map(|k| {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                2.0 * sign * (k as f64 * x).sin() / k as f64
            })
            .sum();
        assert_abs_diff_eq!(computed, oracle, epsilon = 1e-5);
        assert_abs_diff_eq!(computed, x, epsilon = 2e-3);
    }

    #[test]
    fn bessel_inequality_holds_for_computed_series() {
        for (n, f) in [
            pi_grid(2048, |x| x.exp().sin()),
            pi_grid(2048, |x| x * x - 0.3 * x),
            pi_grid(2048, |x| (3.0 * x).cos().abs()),
        ]
        .into_iter()
        .enumerate()
        {
            let s = fourier_coefficients(&f, 64).unwrap();
            let energy = simpson_samples(f.map(|v| v * v).values(), f.h()) / PI;
            let sum = 0.5 * s.a0 * s.a0
                + s.a.iter().zip(&s.b).map(|(a, b)| a * a + b * b).sum::<f64>();
            assert!(sum <= energy + 1e-9, "case {n}: {sum} vs {energy}");
        }
    }

    #[test]
    fn riemann_lebesgue_decay() {
        let f = pi_grid(4096, |x| (x.sin()).exp());
        let s = fourier_coefficients(&f, 64).unwrap();
        let first = s.a[0].abs() + s.b[0].abs();
        let last = s.a[63].abs() + s.b[63].abs();
        assert!(last < 0.1 * first, "no decay: {last} vs {first}");
    }

    #[test]
    fn dirichlet_kernel_values() {
        assert_abs_diff_eq!(dirichlet_kernel(0, PI), 0.5, epsilon = 1e-15);
        // near the removable singularity the limit is n + 1/2
        for n in [0usize, 1, 5, 40] {
            assert_abs_diff_eq!(dirichlet_kernel(n, 0.0), n as f64 + 0.5);
            assert_abs_diff_eq!(
                dirichlet_kernel(n, 1e-9),
                n as f64 + 0.5,
                epsilon = 1e-6
            );
            assert_abs_diff_eq!(dirichlet_kernel(n, 2.0 * PI), n as f64 + 0.5, epsilon = 1e-6);
        }
        // brute-force cosine-sum oracle
        for n in [1usize, 3, 7] {
            for y in [0.7, 1.9, -2.4] {
                let oracle: f64 =
                    0.5 + (1..=n).map(|k| (k as f64 * y).cos()).sum::<f64>();
                assert_abs_diff_eq!(dirichlet_kernel(n, y), oracle, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn dirichlet_kernel_integral_identity() {
        // (1/pi) int_0^pi D_n = 1/2
        let q = crate::quad::QuadratureSpec::adaptive(1e-12);
        for n in [0usize, 1, 4, 9] {
            let v = crate::quad::integrate(|y| dirichlet_kernel(n, y), 0.0, PI, &q).unwrap();
            assert_abs_diff_eq!(v / PI, 0.5, epsilon = 1e-10);
        }
    }

    #[test]
    fn heat_mode_damping() {
        let f = pi_grid(1024, |x| x.cos());
        let u = heat_solve(&f, 1.0, 8).unwrap();
        assert_abs_diff_eq!(u.eval(0.0, 1.0), (-1.0f64).exp(), epsilon = 1e-9);
        // t = 0 reproduces the partial sum of the datum
        let s0 = u.series.partial_sum(0.7, 8).unwrap();
        assert_abs_diff_eq!(u.eval(0.7, 0.0), s0, epsilon = 1e-12);
    }

    #[test]
    fn heat_constant_datum_is_stationary() {
        let f = pi_grid(512, |_| 1.0);
        let u = heat_solve(&f, 2.0, 4).unwrap();
        for (x, t) in [(0.0, 0.0), (1.0, 0.5), (-2.0, 3.0)] {
            assert_abs_diff_eq!(u.eval(x, t), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn heat_second_mode() {
        let f = pi_grid(1024, |x| (2.0 * x).sin());
        let u = heat_solve(&f, 0.5, 8).unwrap();
        for x in [0.3, -1.1] {
            assert_abs_diff_eq!(
                u.eval(x, 1.0),
                (-1.0f64).exp() * (2.0 * x).sin(),
                epsilon = 1e-9
            );
        }
        assert!(matches!(heat_solve(&f, 0.0, 8), Err(Error::OmegaZero)));
    }

    #[test]
    fn heat_solution_satisfies_discrete_pde() {
        let f = pi_grid(1024, |x| x.cos());
        let u = heat_solve(&f, 1.0, 8).unwrap();
        let (dx, dt) = (1e-2, 1e-2);
        let mut worst = 0.0f64;
        for i in -10..=10 {
            let x = 0.25 * i as f64;
            for j in 1..=5 {
                let t = 0.2 * j as f64;
                let ut = (u.eval(x, t + dt) - u.eval(x, t - dt)) / (2.0 * dt);
                let uxx =
                    (u.eval(x + dx, t) - 2.0 * u.eval(x, t) + u.eval(x - dx, t)) / (dx * dx);
                worst = worst.max((ut - uxx).abs());
            }
        }
        assert!(worst <= 10.0 * (dx + dt), "residual {worst}");
    }

    #[test]
    fn gaussian_is_its_own_transform() {
        let rho = |x: f64| (-0.5 * x * x).exp() / SQRT_2PI;
        let f = GridFunction::from_fn(-8.0, 8.0, 4096, rho);
        let hat = fourier_transform(&f, -8.0, 8.0, 512).unwrap();
        let mut worst = 0.0f64;
        for i in 0..=hat.n() {
            let x = hat.x(i);
            worst = worst.max((hat.values()[i] - Complex64::new(rho(x), 0.0)).norm());
        }
        assert!(worst < 1e-6, "sup deviation {worst}");
    }

    #[test]
    fn zero_transforms_to_zero() {
        let f = GridFunction::from_fn(-1.0, 1.0, 64, |_| 0.0);
        let hat = fourier_transform(&f, -4.0, 4.0, 32).unwrap();
        assert_eq!(hat.abs().sup_norm(), 0.0);
    }

    #[test]
    fn undecayed_input_is_rejected() {
        let f = GridFunction::from_fn(-1.0, 1.0, 64, |_| 1.0);
        assert!(matches!(
            fourier_transform(&f, -1.0, 1.0, 16),
            Err(Error::NotDecayed { .. })
        ));
    }

    #[test]
    fn indicator_transform_matches_sinc() {
        let f = GridFunction::from_fn(-2.0, 2.0, 4096, |x| {
            if x.abs() < 1.0 {
                1.0
            } else if (x.abs() - 1.0).abs() < 1e-12 {
                0.5
            } else {
                0.0
            }
        });
        let hat = fourier_transform(&f, -6.0, 6.0, 240).unwrap();
        for i in 0..=hat.n() {
            let x = hat.x(i);
            let expect = if x.abs() < 1e-12 {
                (2.0 / PI).sqrt()
            } else {
                (2.0 / PI).sqrt() * x.sin() / x
            };
            assert_abs_diff_eq!(hat.values()[i].re, expect, epsilon = 1e-4);
            assert!(hat.values()[i].im.abs() < 1e-10);
        }
    }

    #[test]
    fn transform_round_trip_on_gaussian() {
        let rho = |x: f64| (-0.5 * x * x).exp() / SQRT_2PI;
        let f = GridFunction::from_fn(-8.0, 8.0, 2048, rho);
        let hat = fourier_transform(&f, -8.0, 8.0, 2048).unwrap();
        let back = inverse_transform(&hat, -4.0, 4.0, 256).unwrap();
        for i in 0..=back.n() {
            assert_abs_diff_eq!(back.values()[i], rho(back.x(i)), epsilon = 1e-6);
        }
    }

    #[test]
    fn round_trip_on_sech_profile() {
        let sech = |x: f64| 1.0 / (0.5 * x).cosh().powi(2);
        let f = GridFunction::from_fn(-40.0, 40.0, 4096, sech);
        let hat = fourier_transform(&f, -12.0, 12.0, 2048).unwrap();
        let back = inverse_transform(&hat, -5.0, 5.0, 100).unwrap();
        for i in 0..=back.n() {
            assert_abs_diff_eq!(back.values()[i], sech(back.x(i)), epsilon = 1e-5);
        }
    }

    #[test]
    fn parseval_on_a_bump() {
        let f = GridFunction::from_fn(-2.0, 2.0, 2048, |x| {
            let t = x / 1.2;
            if t.abs() < 1.0 {
                1.7 * (1.0 / (t * t - 1.0)).exp()
            } else {
                0.0
            }
        });
        let hat = fourier_transform(&f, -48.0, 48.0, 3072).unwrap();
        let n2_time = lp_norm(&f, 2.0).unwrap();
        let n2_freq = lp_norm(&hat.abs(), 2.0).unwrap();
        assert!((n2_time - n2_freq).abs() < 1e-5, "{n2_time} vs {n2_freq}");
    }

    #[test]
    fn convolution_theorem_pointwise() {
        let bump = |c: f64, w: f64| {
            move |x: f64| {
                let t = (x - c) / w;
                if t.abs() < 1.0 {
                    (1.0 / (t * t - 1.0)).exp()
                } else {
                    0.0
                }
            }
        };
        let f = GridFunction::from_fn(-2.0, 2.0, 1024, bump(0.2, 0.9));
        let g = GridFunction::from_fn(-2.0, 2.0, 1024, bump(-0.4, 1.1));
        let conv = convolve(&f, &g).unwrap();
        let lhs = fourier_transform(&conv, -4.0, 4.0, 64).unwrap();
        let fh = fourier_transform(&f, -4.0, 4.0, 64).unwrap();
        let gh = fourier_transform(&g, -4.0, 4.0, 64).unwrap();
        for i in 0..=lhs.n() {
            // (2 pi)^(-1/2) (f*g)^ = f^ g^
            let diff = lhs.values()[i] / SQRT_2PI - fh.values()[i] * gh.values()[i];
            assert!(diff.norm() < 1e-5, "node {i}: |diff| = {}", diff.norm());
        }
    }

    #[test]
    fn laplace_of_one_and_exponential() {
        let one = GridFunction::from_fn(0.0, 20.0, 4096, |_| 1.0);
        // oracle (1 - e^(-xR))/x at x = 2
        assert_abs_diff_eq!(laplace_at(&one, 2.0).unwrap(), 0.5, epsilon = 1e-8);
        let decay = GridFunction::from_fn(0.0, 40.0, 8192, |t| (-t).exp());
        // oracle 1/(x+1) at x = 1
        assert_abs_diff_eq!(laplace_at(&decay, 1.0).unwrap(), 0.5, epsilon = 1e-8);
        let zero = GridFunction::from_fn(0.0, 5.0, 64, |_| 0.0);
        assert_eq!(laplace_at(&zero, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn laplace_rejects_negative_x_and_shifted_support() {
        let f = GridFunction::from_fn(0.0, 1.0, 64, |t| t);
        assert!(matches!(
            laplace_transform(&f, -1.0, 1.0, 8),
            Err(Error::NegativeX(_))
        ));
        let shifted = GridFunction::from_fn(1.0, 2.0, 64, |t| t);
        assert!(matches!(
            laplace_transform(&shifted, 0.0, 1.0, 8),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn laplace_multiplicativity_on_convolution() {
        let hump = |t: f64| {
            let s = (t - 1.0) / 0.8;
            if s.abs() < 1.0 {
                (1.0 / (s * s - 1.0)).exp()
            } else {
                0.0
            }
        };
        let f = GridFunction::from_fn(0.0, 2.0, 1024, hump);
        let g = GridFunction::from_fn(0.0, 2.0, 1024, |t| hump(t) * (0.4 * t).cos());
        let conv = convolve(&f, &g).unwrap();
        for x in [0.0, 0.5, 1.5, 3.0] {
            let lhs = laplace_at(&conv, x).unwrap();
            let rhs = laplace_at(&f, x).unwrap() * laplace_at(&g, x).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-7);
        }
    }
}
