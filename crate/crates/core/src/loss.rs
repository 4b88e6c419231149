//! Time-indexed bounded loss functions.
//!
//! Every loss evaluates to a value in `[0, 1]`. Squared and affine losses
//! clamp any residual overflow; environments are expected to pick their
//! normalizers so the clamp never engages on the declared domain.

use crate::belief::Belief;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum LossShape {
    /// `min(1, |x - target|^2 / scale)`.
    Squared { target: Vec<f64>, scale: f64 },
    /// Piecewise-linear interpolation of `values` placed on an even grid over
    /// `[lo, hi]` along the first coordinate.
    Tabulated { lo: f64, hi: f64, values: Vec<f64> },
    /// `clamp(intercept + <slope, x>, 0, 1)`.
    Affine { intercept: f64, slope: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossFunction {
    time_index: u64,
    shape: LossShape,
}

impl LossFunction {
    pub fn new(time_index: u64, shape: LossShape) -> Result<Self> {
        match &shape {
            LossShape::Squared { scale, target } => {
                if !(*scale > 0.0) || target.iter().any(|y| !y.is_finite()) {
                    return Err(Error::InvalidConfig("squared loss needs a positive scale".into()));
                }
            }
            LossShape::Tabulated { lo, hi, values } => {
                if values.len() < 2 || !(lo < hi) {
                    return Err(Error::InvalidConfig(
                        "tabulated loss needs at least two knots on a nonempty interval".into(),
                    ));
                }
                if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                    return Err(Error::UnboundedLoss { value: *v });
                }
            }
            LossShape::Affine { intercept, slope } => {
                if !intercept.is_finite() || slope.iter().any(|s| !s.is_finite()) {
                    return Err(Error::InvalidConfig("affine loss coefficients must be finite".into()));
                }
            }
        }
        Ok(LossFunction { time_index, shape })
    }

    pub fn squared(time_index: u64, target: Vec<f64>, scale: f64) -> Result<Self> {
        Self::new(time_index, LossShape::Squared { target, scale })
    }

    pub fn tabulated(time_index: u64, lo: f64, hi: f64, values: Vec<f64>) -> Result<Self> {
        Self::new(time_index, LossShape::Tabulated { lo, hi, values })
    }

    pub fn affine(time_index: u64, intercept: f64, slope: Vec<f64>) -> Result<Self> {
        Self::new(time_index, LossShape::Affine { intercept, slope })
    }

    /// Loss that is identically `value` (clamped into `[0, 1]`).
    pub fn constant(time_index: u64, value: f64, dim: usize) -> Self {
        LossFunction {
            time_index,
            shape: LossShape::Affine { intercept: value.clamp(0.0, 1.0), slope: vec![0.0; dim] },
        }
    }

    pub fn time_index(&self) -> u64 {
        self.time_index
    }

    pub fn shape(&self) -> &LossShape {
        &self.shape
    }

    /// Same loss presented at a different time index. Wrappers use this to
    /// feed restarted learners on their own local clock.
    pub fn with_time(&self, time_index: u64) -> Self {
        LossFunction { time_index, shape: self.shape.clone() }
    }

    pub fn evaluate(&self, b: &Belief) -> f64 {
        match &self.shape {
            LossShape::Squared { target, scale } => {
                let d2: f64 = b.0.iter().zip(target).map(|(x, y)| (x - y) * (x - y)).sum();
                (d2 / scale).min(1.0)
            }
            LossShape::Tabulated { lo, hi, values } => {
                let (k, frac) = locate(*lo, *hi, values.len(), b.x());
                values[k] + frac * (values[k + 1] - values[k])
            }
            LossShape::Affine { intercept, slope } => {
                let v = intercept + slope.iter().zip(&b.0).map(|(s, x)| s * x).sum::<f64>();
                v.clamp(0.0, 1.0)
            }
        }
    }

    /// (Sub)gradient at `b`, the auxiliary information first-order learners use.
    pub fn gradient(&self, b: &Belief) -> Option<Vec<f64>> {
        match &self.shape {
            LossShape::Squared { target, scale } => {
                Some(b.0.iter().zip(target).map(|(x, y)| 2.0 * (x - y) / scale).collect())
            }
            LossShape::Tabulated { lo, hi, values } => {
                let (k, _) = locate(*lo, *hi, values.len(), b.x());
                let width = (hi - lo) / (values.len() - 1) as f64;
                let mut g = vec![0.0; b.dim()];
                g[0] = (values[k + 1] - values[k]) / width;
                Some(g)
            }
            LossShape::Affine { slope, .. } => Some(slope.clone()),
        }
    }

    /// Unconstrained minimizer, when the loss has a closed-form one.
    pub fn minimizer(&self) -> Option<&[f64]> {
        match &self.shape {
            LossShape::Squared { target, .. } => Some(target),
            _ => None,
        }
    }
}

/// Segment index and fractional position of `x` on an even knot grid.
fn locate(lo: f64, hi: f64, knots: usize, x: f64) -> (usize, f64) {
    let segments = knots - 1;
    let pos = ((x - lo) / (hi - lo)).clamp(0.0, 1.0) * segments as f64;
    let k = (pos.floor() as usize).min(segments - 1);
    (k, pos - k as f64)
}
