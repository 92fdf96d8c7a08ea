//! Continuous-time analogues of the discrete systems: the exact
//! characteristics propagator `f(x) -> v(x)/v(x-t) f(x-t)` on gridded
//! profiles, the formal generator of each weight case, and their mutual
//! consistency.
//!
//! Profiles are grid-sampled with linear interpolation. Points whose source
//! position leaves the grid, or that sit at a kink of the weight function,
//! are marked out-of-domain rather than extrapolated; all residual
//! computations run over the commonly valid points only.

use crate::error::{Error, Result};

/// The continuous weight cases. Everything is evaluated through `ln v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightFunction {
    /// `ln v(x) = |x| sin(ln(1+|x|))`.
    OscillatoryExp,
    /// `ln v(x) = -|x|`.
    SymmetricDecay,
    /// `ln v(x) = x` for `x < 0`, `-ln(x+1)` for `x > 0`.
    HybridContinuum,
    /// `ln v = 0`: free transport, the constant-weight baseline.
    Uniform,
}

impl WeightFunction {
    pub fn log_v(&self, x: f64) -> f64 {
        match self {
            Self::OscillatoryExp => {
                let a = x.abs();
                a * (1.0 + a).ln().sin()
            }
            Self::SymmetricDecay => -x.abs(),
            Self::HybridContinuum => {
                if x < 0.0 {
                    x
                } else {
                    -(x + 1.0).ln()
                }
            }
            Self::Uniform => 0.0,
        }
    }

    /// `d/dx ln v(x)` from the closed one-sided formulas. At the kink
    /// `x = 0` of the non-uniform cases the one-sided derivatives disagree;
    /// callers exclude a neighbourhood of the kink before using this.
    pub fn dlog_v(&self, x: f64) -> f64 {
        match self {
            Self::OscillatoryExp => {
                let a = x.abs();
                let inner = (1.0 + a).ln();
                (inner.sin() + a / (1.0 + a) * inner.cos()) * sgn(x)
            }
            Self::SymmetricDecay => -sgn(x),
            Self::HybridContinuum => {
                if x < 0.0 {
                    1.0
                } else if x > 0.0 {
                    -1.0 / (x + 1.0)
                } else {
                    0.0
                }
            }
            Self::Uniform => 0.0,
        }
    }

    /// Whether the weight has a kink at the origin that generator checks
    /// must stay away from.
    pub fn has_kink(&self) -> bool {
        !matches!(self, Self::Uniform)
    }

    pub fn case_name(&self) -> &'static str {
        match self {
            Self::OscillatoryExp => "a",
            Self::SymmetricDecay => "b",
            Self::HybridContinuum => "c",
            Self::Uniform => "uniform",
        }
    }

    pub fn from_case_name(name: &str) -> Result<Self> {
        match name {
            "a" | "oscillatory" => Ok(Self::OscillatoryExp),
            "b" | "decay" => Ok(Self::SymmetricDecay),
            "c" | "hybrid" => Ok(Self::HybridContinuum),
            "uniform" | "free" => Ok(Self::Uniform),
            other => Err(Error::InvalidParameter(format!(
                "unknown continuum case {other:?} (expected a, b, c or uniform)"
            ))),
        }
    }
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// A uniform real grid `x_i = x0 + i * step`, `i = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x0: f64,
    pub step: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(x0: f64, step: f64, count: usize) -> Result<Self> {
        if !step.is_finite() || step <= 0.0 || !x0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid needs finite x0 and step > 0, got x0={x0}, step={step}"
            )));
        }
        if count < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2 points, got {count}"
            )));
        }
        Ok(Self { x0, step, count })
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.step
    }

    pub fn x_end(&self) -> f64 {
        self.point(self.count - 1)
    }
}

/// Grid samples of a profile with a validity mask. Invalid points hold 0.0
/// and are excluded from every comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub grid: Grid,
    values: Vec<f64>,
    valid: Vec<bool>,
}

impl Profile {
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.count);
        let mut valid = Vec::with_capacity(grid.count);
        for i in 0..grid.count {
            let y = f(grid.point(i));
            if y.is_finite() {
                values.push(y);
                valid.push(true);
            } else {
                values.push(0.0);
                valid.push(false);
            }
        }
        Self {
            grid,
            values,
            valid,
        }
    }

    pub fn gaussian(grid: Grid) -> Self {
        Self::from_fn(grid, |x| (-x * x).exp())
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self::from_fn(grid, |_| c)
    }

    pub fn zero(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    /// All points out of domain; operations fill in what they can compute.
    fn all_masked(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.count],
            valid: vec![false; grid.count],
        }
    }

    pub fn len(&self) -> usize {
        self.grid.count
    }

    pub fn is_empty(&self) -> bool {
        self.grid.count == 0
    }

    /// The value at node `i`, or `None` when the node is out of domain.
    pub fn value(&self, i: usize) -> Option<f64> {
        if self.valid[i] {
            Some(self.values[i])
        } else {
            None
        }
    }

    pub fn is_valid(&self, i: usize) -> bool {
        self.valid[i]
    }

    /// Linear interpolation at `x`; `None` outside the grid or when either
    /// bounding node is out of domain. A relative slack of 1e-9 grid steps
    /// absorbs roundoff at the boundary.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let pos = (x - self.grid.x0) / self.grid.step;
        let max_pos = (self.grid.count - 1) as f64;
        if pos < -1e-9 || pos > max_pos + 1e-9 {
            return None;
        }
        let pos = pos.clamp(0.0, max_pos);
        let mut j = pos.floor() as usize;
        if j >= self.grid.count - 1 {
            j = self.grid.count - 2;
        }
        let theta = pos - j as f64;
        if !(self.valid[j] && self.valid[j + 1]) {
            return None;
        }
        Some((1.0 - theta) * self.values[j] + theta * self.values[j + 1])
    }

    /// CSV rows `x,value`, valid points only.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value\n");
        for i in 0..self.grid.count {
            if self.valid[i] {
                out.push_str(&format!("{},{}\n", self.grid.point(i), self.values[i]));
            }
        }
        out
    }

    /// Parses `x,value` rows (header optional) into a profile, inferring the
    /// uniform grid from the abscissae.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("x,") {
                continue;
            }
            let (a, b) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `x,value`", lineno + 1)))?;
            let x: f64 = a
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad abscissa {a:?}", lineno + 1)))?;
            let y: f64 = b
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad value {b:?}", lineno + 1)))?;
            xs.push(x);
            ys.push(y);
        }
        if xs.len() < 2 {
            return Err(Error::Parse("profile needs at least 2 rows".into()));
        }
        let step = xs[1] - xs[0];
        if step.is_nan() || step <= 0.0 {
            return Err(Error::Parse("abscissae must be strictly increasing".into()));
        }
        for w in xs.windows(2) {
            if ((w[1] - w[0]) - step).abs() > 1e-9 * step.abs() {
                return Err(Error::Parse("abscissae must form a uniform grid".into()));
            }
        }
        let grid = Grid::new(xs[0], step, xs.len())?;
        let mut p = Profile::zero(grid);
        for (i, y) in ys.into_iter().enumerate() {
            p.values[i] = y;
            p.valid[i] = y.is_finite();
        }
        Ok(p)
    }
}

/// The exact propagator `(V(t) f)(x) = v(x)/v(x-t) * f(x-t)` sampled on the
/// grid of `p`. Output points whose source `x - t` leaves the interpolable
/// range are marked out of domain.
pub fn propagate(w: WeightFunction, t: f64, p: &Profile) -> Profile {
    let grid = p.grid;
    let mut out = Profile::all_masked(grid);
    for i in 0..grid.count {
        let x = grid.point(i);
        let source = x - t;
        match p.interpolate(source) {
            Some(f) => {
                let scale = (w.log_v(x) - w.log_v(source)).exp();
                out.values[i] = scale * f;
                out.valid[i] = true;
            }
            None => {
                out.values[i] = 0.0;
                out.valid[i] = false;
            }
        }
    }
    out
}

/// The formal generator `(Hf)(x) = -f'(x) + (ln v)'(x) f(x)` with a central
/// difference for `f'` and the analytic case formula for `(ln v)'`.
///
/// Boundary nodes, nodes with out-of-domain neighbours and nodes within
/// `kink_radius` of the origin (for the kinked cases) are masked out.
pub fn generator_apply(w: WeightFunction, p: &Profile, kink_radius: f64) -> Profile {
    let grid = p.grid;
    let mut out = Profile::all_masked(grid);
    for i in 1..grid.count.saturating_sub(1) {
        let x = grid.point(i);
        if w.has_kink() && x.abs() <= kink_radius {
            continue;
        }
        let (left, mid, right) = (p.value(i - 1), p.value(i), p.value(i + 1));
        if let (Some(l), Some(m), Some(r)) = (left, mid, right) {
            let derivative = (r - l) / (2.0 * grid.step);
            out.values[i] = -derivative + w.dlog_v(x) * m;
            out.valid[i] = true;
        }
    }
    out
}

/// Max over commonly valid interior points of
/// `| (V(h)f - f)/h - (Hf) |`, the defect between the finite-time quotient
/// of the exact propagator and the formal generator.
///
/// The defect is `O(h)` in the quotient plus a grid term from the central
/// difference and the interpolation of `f(x-h)`; refining `h` and the grid
/// step together halves it.
pub fn generator_consistency(w: WeightFunction, p: &Profile, h: f64) -> Result<f64> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::InvalidParameter(format!("h must be > 0, got {h}")));
    }
    let advanced = propagate(w, h, p);
    let generated = generator_apply(w, p, p.grid.step);
    let mut worst: Option<f64> = None;
    for i in 0..p.len() {
        if let (Some(a), Some(f), Some(g)) = (advanced.value(i), p.value(i), generated.value(i)) {
            let quotient = (a - f) / h;
            let residual = (quotient - g).abs();
            worst = Some(worst.map_or(residual, |w: f64| w.max(residual)));
        }
    }
    worst.ok_or_else(|| {
        Error::InvalidParameter("no commonly valid grid points for the consistency check".into())
    })
}

/// Max over commonly valid points of `| V(t) V(-tau) f - V(t - tau) f |`:
/// the two-parameter group property of the exact propagator.
pub fn group_residual(w: WeightFunction, t: f64, tau: f64, p: &Profile) -> Result<f64> {
    let composed = propagate(w, t, &propagate(w, -tau, p));
    let direct = propagate(w, t - tau, p);
    let mut worst: Option<f64> = None;
    for i in 0..p.len() {
        if let (Some(a), Some(b)) = (composed.value(i), direct.value(i)) {
            let residual = (a - b).abs();
            worst = Some(worst.map_or(residual, |w: f64| w.max(residual)));
        }
    }
    worst.ok_or_else(|| {
        Error::InvalidParameter("no commonly valid grid points for the group check".into())
    })
}
