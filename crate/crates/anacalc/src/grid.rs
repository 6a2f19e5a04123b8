//! Uniform-grid function samples, the carrier type for quadrature,
//! convolution and transforms.
//!
//! A [`GridFunction`] holds `n + 1` equispaced real samples on `[a, b]`;
//! [`ComplexGrid`] is the complex-valued counterpart. Arithmetic is only
//! defined between functions sampled on the identical grid.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt::Write as _;

/// Real samples of a function at the `n + 1` equispaced nodes of `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    a: f64,
    b: f64,
    values: Vec<f64>,
}

/// Complex samples on a uniform grid, used by the Fourier transforms.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid {
    a: f64,
    b: f64,
    values: Vec<Complex64>,
}

/// Tolerance used when deciding whether two grids coincide.
const GRID_EPS: f64 = 1e-9;

impl GridFunction {
    /// Builds a grid function from explicit samples. Panics on a degenerate
    /// window or fewer than two samples; those are construction bugs, not
    /// data errors.
    pub fn new(a: f64, b: f64, values: Vec<f64>) -> Self {
        assert!(b > a, "grid window must satisfy b > a (got [{a}, {b}])");
        assert!(values.len() >= 2, "grid needs at least two samples");
        Self { a, b, values }
    }

    /// Samples `f` at the `n + 1` nodes of `[a, b]`.
    pub fn from_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        assert!(n >= 1, "grid needs at least one interval");
        let h = (b - a) / n as f64;
        let values = (0..=n).map(|i| f(a + i as f64 * h)).collect();
        Self::new(a, b, values)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of grid intervals (one less than the sample count).
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    /// Node spacing `(b - a) / n`.
    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n() as f64
    }

    /// Coordinate of node `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.a + i as f64 * self.h()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Largest absolute sample, the discrete stand-in for the sup norm.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.values.len() == other.values.len()
            && (self.a - other.a).abs() <= GRID_EPS
            && (self.b - other.b).abs() <= GRID_EPS
    }

    fn require_same_grid(&self, other: &Self) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "[{}, {}] with {} samples vs [{}, {}] with {} samples",
                self.a,
                self.b,
                self.values.len(),
                other.a,
                other.b,
                other.values.len()
            )))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.require_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x + y)
            .collect();
        Ok(Self::new(self.a, self.b, values))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.require_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x - y)
            .collect();
        Ok(Self::new(self.a, self.b, values))
    }

    /// Pointwise product on the shared grid.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.require_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x * y)
            .collect();
        Ok(Self::new(self.a, self.b, values))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(self.a, self.b, self.values.iter().map(|v| c * v).collect())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::new(self.a, self.b, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Extracts the samples on `[a2, b2]`, which must be node-aligned with
    /// this grid.
    pub fn restrict(&self, a2: f64, b2: f64) -> Result<Self> {
        let h = self.h();
        let i0 = (a2 - self.a) / h;
        let i1 = (b2 - self.a) / h;
        let j0 = i0.round() as isize;
        let j1 = i1.round() as isize;
        let aligned = (i0 - j0 as f64).abs() < 1e-6 && (i1 - j1 as f64).abs() < 1e-6;
        if !aligned || j0 < 0 || j1 as usize > self.n() || j1 <= j0 {
            return Err(Error::GridMismatch(format!(
                "window [{a2}, {b2}] is not node-aligned inside [{}, {}]",
                self.a, self.b
            )));
        }
        let (j0, j1) = (j0 as usize, j1 as usize);
        Ok(Self::new(
            self.x(j0),
            self.x(j1),
            self.values[j0..=j1].to_vec(),
        ))
    }

    /// CSV with header `x,value`, one row per node, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{:.16e},{:.16e}", self.x(i), v);
        }
        out
    }

    /// Parses the `x,value` CSV format written by [`Self::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with('x')) {
                continue;
            }
            let mut fields = line.split(',');
            let (x, v) = match (fields.next(), fields.next()) {
                (Some(x), Some(v)) => (x, v),
                _ => return Err(Error::Parse(format!("line {}: expected x,value", lineno + 1))),
            };
            xs.push(parse_f64(x, lineno)?);
            vs.push(parse_f64(v, lineno)?);
        }
        if xs.len() < 2 {
            return Err(Error::Parse("need at least two sample rows".into()));
        }
        let (a, b) = (xs[0], *xs.last().unwrap());
        if b <= a {
            return Err(Error::Parse("x column must increase".into()));
        }
        Ok(Self::new(a, b, vs))
    }

    pub fn to_complex(&self) -> ComplexGrid {
        ComplexGrid::new(
            self.a,
            self.b,
            self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }
}

fn parse_f64(s: &str, lineno: usize) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
}

impl ComplexGrid {
    pub fn new(a: f64, b: f64, values: Vec<Complex64>) -> Self {
        assert!(b > a, "grid window must satisfy b > a (got [{a}, {b}])");
        assert!(values.len() >= 2, "grid needs at least two samples");
        Self { a, b, values }
    }

    pub fn from_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Self {
        assert!(n >= 1, "grid needs at least one interval");
        let h = (b - a) / n as f64;
        let values = (0..=n).map(|i| f(a + i as f64 * h)).collect();
        Self::new(a, b, values)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n() as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.a + i as f64 * self.h()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Pointwise modulus as a real grid function.
    pub fn abs(&self) -> GridFunction {
        GridFunction::new(self.a, self.b, self.values.iter().map(|v| v.norm()).collect())
    }

    pub fn re(&self) -> GridFunction {
        GridFunction::new(self.a, self.b, self.values.iter().map(|v| v.re).collect())
    }

    pub fn im(&self) -> GridFunction {
        GridFunction::new(self.a, self.b, self.values.iter().map(|v| v.im).collect())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// CSV with header `x,re,im`, 17 significant digits per column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,re,im\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", self.x(i), v.re, v.im);
        }
        out
    }
}
