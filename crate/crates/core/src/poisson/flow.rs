//! Fixed-step RK4 integration of Hamiltonian vector fields.

use super::{hamiltonian_field, rank_at, PolyBivector};
use crate::poly::{F64Poly, MultiPoly};
use crate::scalar::{rational_from_f64, Scalar};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct FlowOptions {
    pub dt: f64,
    pub steps: usize,
    /// Keep every `record_every`-th state (the first and last are always kept).
    pub record_every: usize,
    /// Stop once any coordinate exceeds this magnitude.
    pub bound: f64,
    /// Exact rank is computed on every recorded state when set.
    pub track_rank: bool,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            dt: 1e-3,
            steps: 10_000,
            record_every: 100,
            bound: 1e12,
            track_rank: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FlowSample {
    pub step: usize,
    pub t: f64,
    pub x: Vec<f64>,
    pub f: f64,
    pub casimirs: Vec<f64>,
    /// Exact rank of `π` at the recorded float point, read as a rational.
    pub rank: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<FlowSample>,
    /// Largest `|f(x_t) − f(x_0)|`, divided by `|f(x_0)|` when that is nonzero.
    pub f_drift: f64,
    pub casimir_drift: Vec<f64>,
    pub rank_constant: bool,
    pub truncated: bool,
    pub steps_taken: usize,
}

fn rel(delta: f64, base: f64) -> f64 {
    if base != 0.0 {
        delta.abs() / base.abs()
    } else {
        delta.abs()
    }
}

pub fn hamiltonian_flow(
    pi: &PolyBivector,
    f: &MultiPoly,
    casimirs: &[MultiPoly],
    x0: &[f64],
    opts: &FlowOptions,
) -> Result<Trajectory> {
    let n = pi.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(Error::Precondition(format!(
            "time step {} must be positive",
            opts.dt
        )));
    }
    let field: Vec<F64Poly> = hamiltonian_field(pi, f)?
        .comps()
        .iter()
        .map(MultiPoly::to_f64)
        .collect::<Result<_>>()?;
    let fv = f.with_vars(pi.vars())?.to_f64()?;
    let cs: Vec<F64Poly> = casimirs
        .iter()
        .map(|c| c.with_vars(pi.vars())?.to_f64())
        .collect::<Result<_>>()?;
    let rhs = |x: &[f64]| -> Vec<f64> { field.iter().map(|p| p.eval(x)).collect() };
    let rank = |x: &[f64]| -> Result<Option<usize>> {
        if !opts.track_rank {
            return Ok(None);
        }
        let p: Vec<Scalar> = x
            .iter()
            .map(|&v| rational_from_f64(v).map(Scalar::real))
            .collect::<Result<_>>()?;
        Ok(Some(rank_at(pi, &p)?))
    };
    let record = |step: usize, x: &[f64]| -> Result<FlowSample> {
        Ok(FlowSample {
            step,
            t: step as f64 * opts.dt,
            x: x.to_vec(),
            f: fv.eval(x),
            casimirs: cs.iter().map(|c| c.eval(x)).collect(),
            rank: rank(x)?,
        })
    };

    let f0 = fv.eval(x0);
    let c0: Vec<f64> = cs.iter().map(|c| c.eval(x0)).collect();
    let mut f_drift = 0.0f64;
    let mut casimir_drift = vec![0.0f64; cs.len()];
    let mut x = x0.to_vec();
    let mut samples = vec![record(0, &x)?];
    let mut truncated = false;
    let mut steps_taken = 0;
    let every = opts.record_every.max(1);
    let h = opts.dt;
    for step in 1..=opts.steps {
        let k1 = rhs(&x);
        let y: Vec<f64> = (0..n).map(|i| x[i] + 0.5 * h * k1[i]).collect();
        let k2 = rhs(&y);
        let y: Vec<f64> = (0..n).map(|i| x[i] + 0.5 * h * k2[i]).collect();
        let k3 = rhs(&y);
        let y: Vec<f64> = (0..n).map(|i| x[i] + h * k3[i]).collect();
        let k4 = rhs(&y);
        for i in 0..n {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        steps_taken = step;
        if x.iter().any(|v| !v.is_finite() || v.abs() > opts.bound) {
            truncated = true;
            break;
        }
        f_drift = f_drift.max(rel(fv.eval(&x) - f0, f0));
        for (d, (c, b)) in casimir_drift.iter_mut().zip(cs.iter().zip(&c0)) {
            *d = d.max(rel(c.eval(&x) - b, *b));
        }
        if step % every == 0 || step == opts.steps {
            samples.push(record(step, &x)?);
        }
    }
    if truncated {
        samples.push(FlowSample {
            step: steps_taken,
            t: steps_taken as f64 * h,
            x: x.clone(),
            f: fv.eval(&x),
            casimirs: cs.iter().map(|c| c.eval(&x)).collect(),
            rank: None,
        });
    }
    let ranks: Vec<usize> = samples.iter().filter_map(|s| s.rank).collect();
    let rank_constant = ranks.windows(2).all(|w| w[0] == w[1]);
    Ok(Trajectory {
        samples,
        f_drift,
        casimir_drift,
        rank_constant,
        truncated,
        steps_taken,
    })
}
