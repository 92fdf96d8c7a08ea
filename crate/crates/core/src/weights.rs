//! Bilateral weight sequences, evaluated exclusively in the log domain.
//!
//! Raw weights like `3^8191` overflow double precision far inside the
//! horizons this crate works at, so every evaluation returns `ln u_n`
//! directly from the closed form; nothing is ever exponentiated here.

use std::f64::consts::{FRAC_PI_2, LN_2};
use std::ops::RangeInclusive;

use crate::error::{Error, Result};

/// A bilateral positive weight family `u: Z -> R_+`, addressed in log domain.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSequence {
    /// `ln u_n = |n| * sin((pi/2) * log2(1+|n|)) * ln(c+2)`, `c > 0`.
    ///
    /// Oscillates between full exponential growth and full exponential decay
    /// along the dyadic subsequences `n_k = 2^{1+4k}-1` and `m_k = 2^{3+4k}-1`.
    KreinOscillatory { c: f64 },
    /// `ln v_n = -|n| * ln(2c)`, `c >= 1`. Symmetric geometric decay away
    /// from the origin.
    GeometricValley { c: f64 },
    /// `ln w_n = n * ln 2` for `n <= 0`, `-ln(n+1)` for `n > 0`.
    /// Geometric on the left ray, harmonic on the right.
    HybridDecayHarmonic,
    /// Finite table of log-weights over an explicit contiguous index range.
    Tabulated(TabulatedWeights),
}

/// Explicit log-weight table over `lo..=hi`. Queries off the range are hard
/// errors; the table never extrapolates.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedWeights {
    lo: i64,
    log_weights: Vec<f64>,
}

impl TabulatedWeights {
    /// Builds a table from `(index, log_weight)` pairs. The indices must
    /// form a contiguous range with no duplicates and every log-weight must
    /// be finite (weights are strictly positive by construction).
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        let mut pairs: Vec<(i64, f64)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(Error::InvalidParameter(
                "tabulated sequence needs at least one entry".into(),
            ));
        }
        pairs.sort_by_key(|&(n, _)| n);
        let lo = pairs[0].0;
        let mut log_weights = Vec::with_capacity(pairs.len());
        for (offset, &(n, lw)) in pairs.iter().enumerate() {
            let expected = lo + offset as i64;
            if n != expected {
                return Err(Error::InvalidParameter(format!(
                    "tabulated indices must be contiguous: expected {expected}, found {n}"
                )));
            }
            if !lw.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "log-weight at index {n} is not finite"
                )));
            }
            log_weights.push(lw);
        }
        Ok(Self { lo, log_weights })
    }

    /// Parses the two-column text format: integer index and decimal
    /// log-weight per line, `#` starting a comment, blank lines ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::Parse(format!(
                    "line {}: expected `index log-weight`, got {raw:?}",
                    lineno + 1
                )));
            };
            let n: i64 = a
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad index {a:?}", lineno + 1)))?;
            let lw: f64 = b
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad log-weight {b:?}", lineno + 1)))?;
            pairs.push((n, lw));
        }
        Self::from_pairs(pairs)
    }

    pub fn range(&self) -> RangeInclusive<i64> {
        self.lo..=self.lo + self.log_weights.len() as i64 - 1
    }

    fn get(&self, n: i64) -> Result<f64> {
        let hi = self.lo + self.log_weights.len() as i64 - 1;
        if n < self.lo || n > hi {
            return Err(Error::IndexOutOfTable {
                index: n,
                lo: self.lo,
                hi,
            });
        }
        Ok(self.log_weights[(n - self.lo) as usize])
    }
}

impl WeightSequence {
    pub fn krein_oscillatory(c: f64) -> Result<Self> {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "KreinOscillatory requires c > 0, got {c}"
            )));
        }
        Ok(Self::KreinOscillatory { c })
    }

    pub fn geometric_valley(c: f64) -> Result<Self> {
        if !c.is_finite() || c < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "GeometricValley requires c >= 1, got {c}"
            )));
        }
        Ok(Self::GeometricValley { c })
    }

    pub fn hybrid_decay_harmonic() -> Self {
        Self::HybridDecayHarmonic
    }

    pub fn tabulated(table: TabulatedWeights) -> Self {
        Self::Tabulated(table)
    }

    /// Short family tag for provenance records and reports.
    pub fn family_name(&self) -> &'static str {
        match self {
            Self::KreinOscillatory { .. } => "krein-oscillatory",
            Self::GeometricValley { .. } => "geometric-valley",
            Self::HybridDecayHarmonic => "hybrid-decay-harmonic",
            Self::Tabulated(_) => "tabulated",
        }
    }

    /// Human-readable descriptor including parameters.
    pub fn describe(&self) -> String {
        match self {
            Self::KreinOscillatory { c } => format!("krein-oscillatory(c={c})"),
            Self::GeometricValley { c } => format!("geometric-valley(c={c})"),
            Self::HybridDecayHarmonic => "hybrid-decay-harmonic".into(),
            Self::Tabulated(t) => {
                let r = t.range();
                format!("tabulated({}..={})", r.start(), r.end())
            }
        }
    }

    /// `ln u_n`, evaluated from the closed form with no intermediate
    /// exponentiation.
    pub fn log_weight(&self, n: i64) -> Result<f64> {
        match self {
            Self::KreinOscillatory { c } => {
                let a = n.unsigned_abs() as f64;
                if a == 0.0 {
                    return Ok(0.0);
                }
                let log2_arg = (1.0 + a).ln() / LN_2;
                Ok(a * (FRAC_PI_2 * log2_arg).sin() * (c + 2.0).ln())
            }
            Self::GeometricValley { c } => {
                let a = n.unsigned_abs() as f64;
                Ok(-a * (2.0 * c).ln())
            }
            Self::HybridDecayHarmonic => {
                if n <= 0 {
                    Ok(n as f64 * LN_2)
                } else {
                    Ok(-((n as f64) + 1.0).ln())
                }
            }
            Self::Tabulated(t) => t.get(n),
        }
    }

    /// `ln u_{n+shift} - ln u_n`.
    pub fn log_ratio(&self, n: i64, shift: i64) -> Result<f64> {
        if shift == 0 {
            // Identity power: exactly zero, independent of evaluability noise.
            self.log_weight(n)?;
            return Ok(0.0);
        }
        Ok(self.log_weight(n + shift)? - self.log_weight(n)?)
    }

    /// `sup_{n in window} |ln u_{n+1} - ln u_n|`.
    ///
    /// Certifies boundedness of the shift and of its inverse over the window;
    /// for the three closed-form families the value is bounded independently
    /// of the window.
    pub fn one_step_ratio_bound(&self, window: RangeInclusive<i64>) -> Result<f64> {
        if window.is_empty() {
            return Err(Error::EmptyWindow);
        }
        let mut sup = f64::NEG_INFINITY;
        for n in window {
            let r = self.log_ratio(n, 1)?.abs();
            if r > sup {
                sup = r;
            }
        }
        Ok(sup)
    }
}
