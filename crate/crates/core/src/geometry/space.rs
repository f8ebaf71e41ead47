use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use super::rng::Rng;
use crate::error::{Error, Result};

/// Default metric weight of an angular dimension relative to one meter.
pub const ANGULAR_WEIGHT: f64 = 0.5;

/// A point in configuration space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration(Vec<f64>);

impl Configuration {
    pub fn new(values: Vec<f64>) -> Self {
        Configuration(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Base position (first two coordinates).
    pub fn base(&self) -> (f64, f64) {
        (self.0[0], self.0[1])
    }

    /// Bitwise equality, used where vertex identity must be exact.
    pub fn same_bits(&self, other: &Configuration) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl From<Vec<f64>> for Configuration {
    fn from(v: Vec<f64>) -> Self {
        Configuration(v)
    }
}

impl Index<usize> for Configuration {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Signed shortest angular difference `b - a`, in `[-π, π)`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = b - a;
    d - TAU * ((d + PI) / TAU).floor()
}

/// One dimension of a configuration space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dim {
    pub lower: f64,
    pub upper: f64,
    pub wraps: bool,
    pub weight: f64,
}

impl Dim {
    pub fn linear(lower: f64, upper: f64) -> Self {
        Dim {
            lower,
            upper,
            wraps: false,
            weight: 1.0,
        }
    }

    pub fn angle() -> Self {
        Dim {
            lower: -PI,
            upper: PI,
            wraps: true,
            weight: ANGULAR_WEIGHT,
        }
    }

    fn normalize(&self, v: f64) -> f64 {
        if !self.wraps {
            return v;
        }
        let mut w = self.lower + (v - self.lower).rem_euclid(TAU);
        if w >= self.upper {
            w = self.lower;
        }
        w
    }
}

/// Bounded configuration space with per-dimension wrap flags and metric weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CSpace {
    dims: Vec<Dim>,
}

impl CSpace {
    pub fn new(dims: Vec<Dim>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSpace("no dimensions".into()));
        }
        for (i, d) in dims.iter().enumerate() {
            if !(d.lower.is_finite() && d.upper.is_finite() && d.lower < d.upper) {
                return Err(Error::InvalidSpace(format!(
                    "dimension {i}: bounds [{}, {}] are not increasing",
                    d.lower, d.upper
                )));
            }
            if !(d.weight > 0.0 && d.weight.is_finite()) {
                return Err(Error::InvalidSpace(format!(
                    "dimension {i}: weight {} must be positive",
                    d.weight
                )));
            }
            if d.wraps && ((d.upper - d.lower) - TAU).abs() > 1e-9 {
                return Err(Error::InvalidSpace(format!(
                    "dimension {i}: wrapped dimension must span 2π"
                )));
            }
        }
        Ok(CSpace { dims })
    }

    pub fn dims(&self) -> &[Dim] {
        &self.dims
    }

    pub fn dim_count(&self) -> usize {
        self.dims.len()
    }

    /// Builds a configuration, normalizing wrapped coordinates.
    pub fn config(&self, values: Vec<f64>) -> Result<Configuration> {
        self.check(values.len())?;
        Ok(Configuration(
            values.iter().zip(&self.dims).map(|(&v, d)| d.normalize(v)).collect(),
        ))
    }

    /// True when every non-wrapped coordinate lies inside its bounds.
    pub fn contains(&self, q: &Configuration) -> bool {
        q.len() == self.dims.len()
            && q.0
                .iter()
                .zip(&self.dims)
                .all(|(&v, d)| d.wraps || (v >= d.lower && v <= d.upper))
    }

    fn check(&self, actual: usize) -> Result<()> {
        if actual != self.dims.len() {
            return Err(Error::DimensionMismatch {
                expected: self.dims.len(),
                actual,
            });
        }
        Ok(())
    }

    pub fn sample_uniform(&self, rng: &mut Rng) -> Configuration {
        Configuration(
            self.dims
                .iter()
                .map(|d| d.normalize(rng.uniform(d.lower, d.upper)))
                .collect(),
        )
    }

    /// Weighted Euclidean distance with shortest-arc angular terms.
    pub fn distance(&self, a: &Configuration, b: &Configuration) -> Result<f64> {
        self.check(a.len())?;
        self.check(b.len())?;
        Ok(self.dist(a, b))
    }

    /// Unchecked [`CSpace::distance`] for hot loops.
    pub(crate) fn dist(&self, a: &Configuration, b: &Configuration) -> f64 {
        self.dist_sq(a, b).sqrt()
    }

    pub(crate) fn dist_sq(&self, a: &Configuration, b: &Configuration) -> f64 {
        let mut acc = 0.0;
        for ((&x, &y), d) in a.0.iter().zip(&b.0).zip(&self.dims) {
            let diff = if d.wraps { angle_diff(x, y) } else { y - x };
            let w = d.weight * diff;
            acc += w * w;
        }
        acc
    }

    pub fn interpolate(&self, a: &Configuration, b: &Configuration, t: f64) -> Result<Configuration> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidInterpolation(t));
        }
        self.check(a.len())?;
        self.check(b.len())?;
        Ok(self.interp(a, b, t))
    }

    pub(crate) fn interp(&self, a: &Configuration, b: &Configuration, t: f64) -> Configuration {
        if t == 0.0 {
            return a.clone();
        }
        if t == 1.0 {
            return b.clone();
        }
        Configuration(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.dims)
                .map(|((&x, &y), d)| {
                    if d.wraps {
                        d.normalize(x + t * angle_diff(x, y))
                    } else {
                        x + t * (y - x)
                    }
                })
                .collect(),
        )
    }
}
