//! Functions known only through pointwise evaluation.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

pub const DEFAULT_FD_STEP: f64 = 1e-5;

type Callback = dyn Fn(&[f64]) -> Result<f64> + Send + Sync;

/// A scalar function on ℝⁿ given by a callback, differentiated by central
/// finite differences.
#[derive(Clone)]
pub struct NumericField {
    dim: usize,
    step: f64,
    label: String,
    f: Arc<Callback>,
}

impl NumericField {
    pub fn new<F>(dim: usize, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[f64]) -> Result<f64> + Send + Sync + 'static,
    {
        NumericField {
            dim,
            step: DEFAULT_FD_STEP,
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn with_step(mut self, h: f64) -> Self {
        self.step = h;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Evaluates, turning non-finite values into errors.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let v = (self.f)(x)?;
        if !v.is_finite() {
            return Err(Error::Evaluation(format!(
                "{} is not finite at {x:?}",
                self.label
            )));
        }
        Ok(v)
    }

    /// Five-point central difference gradient, exact on quartics up to
    /// rounding.
    pub fn fd_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let h = self.step;
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Precondition(format!(
                "finite-difference step {h} must be positive"
            )));
        }
        // The stencil skips the center, so a singular point itself would
        // otherwise go unnoticed.
        self.eval(x)?;
        let mut g = Vec::with_capacity(self.dim);
        let mut y = x.to_vec();
        for i in 0..self.dim {
            let mut at = |t: f64| {
                y[i] = x[i] + t;
                self.eval(&y)
            };
            let (p2, p1, m1, m2) = (at(2.0 * h)?, at(h)?, at(-h)?, at(-2.0 * h)?);
            y[i] = x[i];
            g.push((-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h));
        }
        Ok(g)
    }
}

impl fmt::Debug for NumericField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "NumericField({}, dim={}, h={})",
            self.label, self.dim, self.step
        )
    }
}
