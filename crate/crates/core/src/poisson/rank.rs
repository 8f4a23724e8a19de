//! Pointwise rank and its stratification.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::PolyBivector;
use crate::exterior::subsets;
use crate::sampling::{Sampler, SamplerConfig};
use crate::scalar::{Rational, Scalar};
use crate::{Error, Result};

/// Exact rank of `π(p)`.
pub fn rank_at(pi: &PolyBivector, p: &[Scalar]) -> Result<usize> {
    Ok(pi.eval(p)?.rank())
}

/// `r_k(p) = Σ |det π^{ρδ}(p)|²` over all pairs of `k`-element row and
/// column sets.
pub fn r_k(pi: &PolyBivector, p: &[Scalar], k: usize) -> Result<Rational> {
    let n = pi.dim();
    if k == 0 || k > n {
        return Err(Error::Precondition(format!(
            "minor order {k} outside 1..={n}"
        )));
    }
    let m = pi.eval(p)?;
    let sets = subsets(n, k);
    let mut acc = Rational::zero();
    for r in &sets {
        for c in &sets {
            let d = m.submatrix(r, c).det()?;
            acc += d.norm_sqr();
        }
    }
    Ok(acc)
}

/// `max{2k : r_{2k}(p) ≠ 0}`, or 0.
pub fn rank_from_minors(pi: &PolyBivector, p: &[Scalar]) -> Result<usize> {
    let mut best = 0;
    for k in (2..=pi.dim()).step_by(2) {
        if !r_k(pi, p, k)?.is_zero() {
            best = k;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, Default)]
pub struct StratifyOptions {
    /// Points always included ahead of the random ones.
    pub pinned: Vec<Vec<Rational>>,
    /// Resample lattice points that are exactly the origin.
    pub exclude_origin: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratificationReport {
    pub samples: usize,
    pub histogram: BTreeMap<usize, usize>,
    /// First point seen in each rank stratum, rendered as rationals.
    pub witnesses: BTreeMap<usize, Vec<String>>,
    pub max_rank: usize,
    /// Points where the rank disagreed with `max{2k : r_{2k} ≠ 0}`.
    pub minor_mismatches: Vec<Vec<String>>,
    /// The top stratum holds at least half the samples.
    pub max_rank_dominates: bool,
}

impl StratificationReport {
    pub fn consistent(&self) -> bool {
        self.minor_mismatches.is_empty() && self.histogram.keys().all(|r| r % 2 == 0)
    }
}

pub fn stratify_sample(
    pi: &PolyBivector,
    cfg: &SamplerConfig,
    opts: &StratifyOptions,
) -> Result<StratificationReport> {
    if cfg.count == 0 && opts.pinned.is_empty() {
        return Err(Error::Precondition(
            "sample count must be at least 1".into(),
        ));
    }
    let n = pi.dim();
    let mut sampler = Sampler::new(cfg);
    let mut points = opts.pinned.clone();
    while points.len() < opts.pinned.len() + cfg.count {
        let p = sampler.point(n);
        if opts.exclude_origin && p.iter().all(Zero::is_zero) {
            continue;
        }
        points.push(p);
    }
    let mut histogram = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    let mut minor_mismatches = Vec::new();
    for p in &points {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
        let sp: Vec<Scalar> = p.iter().cloned().map(Scalar::real).collect();
        let r = rank_at(pi, &sp)?;
        let shown = || p.iter().map(ToString::to_string).collect::<Vec<_>>();
        if rank_from_minors(pi, &sp)? != r {
            minor_mismatches.push(shown());
        }
        *histogram.entry(r).or_insert(0) += 1;
        witnesses.entry(r).or_insert_with(shown);
    }
    let max_rank = histogram.keys().copied().max().unwrap_or(0);
    let top = histogram.get(&max_rank).copied().unwrap_or(0);
    Ok(StratificationReport {
        samples: points.len(),
        max_rank_dominates: 2 * top >= points.len(),
        histogram,
        witnesses,
        max_rank,
        minor_mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;
    use crate::poisson::lie_poisson;
    use crate::poly::{MultiPoly, VarSet};
    use crate::scalar::q;

    fn pt(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn ranks() {
        let v4 = VarSet::numbered("x", 4);
        let sym = PolyBivector::standard_symplectic(&v4).unwrap();
        assert_eq!(rank_at(&sym, &pt(&[1, 2, 3, 4])).unwrap(), 4);
        let v = VarSet::affine(&["x", "y"]);
        let pix = PolyBivector::from_entries(&v, [(0, 1, MultiPoly::var(&v, 0))]).unwrap();
        assert_eq!(rank_at(&pix, &pt(&[0, 5])).unwrap(), 0);
        let lp = lie_poisson(&LieAlgebra::sl2());
        assert_eq!(rank_at(&lp, &pt(&[1, 0, 0])).unwrap(), 2);
    }

    #[test]
    fn minor_sums() {
        let v = VarSet::affine(&["x", "y"]);
        let pix = PolyBivector::from_entries(&v, [(0, 1, MultiPoly::var(&v, 0))]).unwrap();
        assert_eq!(r_k(&pix, &pt(&[2, 3]), 2).unwrap(), q(16));
        assert_eq!(r_k(&pix, &pt(&[0, 3]), 2).unwrap(), q(0));
        let sym = PolyBivector::standard_symplectic(&v).unwrap();
        assert_eq!(r_k(&sym, &pt(&[7, -1]), 2).unwrap(), q(1));
    }

    #[test]
    fn stratification() {
        let v4 = VarSet::numbered("x", 4);
        let sym = PolyBivector::standard_symplectic(&v4).unwrap();
        let rep =
            stratify_sample(&sym, &SamplerConfig::new(3), &StratifyOptions::default()).unwrap();
        assert_eq!(rep.histogram, BTreeMap::from([(4, 100)]));
        assert!(rep.consistent() && rep.max_rank_dominates);

        let v = VarSet::affine(&["x", "y"]);
        let pix = PolyBivector::from_entries(&v, [(0, 1, MultiPoly::var(&v, 0))]).unwrap();
        let opts = StratifyOptions {
            pinned: vec![vec![q(0), q(1)], vec![q(0), q(-3)]],
            exclude_origin: false,
        };
        let rep = stratify_sample(&pix, &SamplerConfig::new(5), &opts).unwrap();
        assert!(rep.histogram.contains_key(&0) && rep.histogram.contains_key(&2));
        assert!(rep.consistent());
    }
}
