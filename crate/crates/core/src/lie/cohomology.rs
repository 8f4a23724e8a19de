//! Chevalley–Eilenberg complex `∧^p g* ⊗ V`.
//!
//! A cochain basis element is a pair (sorted index set `S`, module index
//! `a`) and represents the alternating form with `ω(e_S) = v_a`. Its flat
//! position is `index(S) * dim V + a`, with `S` in lexicographic order.

use num_traits::Zero;

use super::{LieAlgebra, LieModule};
use crate::exterior::{binomial, sort_sign, subset_index, subsets};
use crate::linalg::Matrix;
use crate::scalar::Rational;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct CochainSlice {
    pub degree: usize,
    /// Rows index `C^{p+1}`, columns index `C^p`.
    pub matrix: Matrix<Rational>,
}

pub fn cochain_dim(l: &LieAlgebra, m: &LieModule, p: usize) -> usize {
    binomial(l.dim(), p) * m.dim()
}

/// Matrix of `d: C^p → C^{p+1}`,
/// `(dω)(X_0..X_p) = Σ (-1)^i ρ(X_i) ω(..X̂_i..) + Σ_{i<j} (-1)^{i+j} ω([X_i,X_j], ..X̂_i..X̂_j..)`.
pub fn ce_differential(l: &LieAlgebra, m: &LieModule, p: usize) -> Result<CochainSlice> {
    let n = l.dim();
    if p > n {
        return Err(Error::Precondition(format!(
            "degree {p} exceeds dimension {n}"
        )));
    }
    let bad = m.axiom_violations(l)?;
    if let Some(((i, j), _)) = bad.first() {
        return Err(Error::InvalidModule(format!(
            "rho([e{0},e{1}]) != [rho(e{0}), rho(e{1})]",
            i + 1,
            j + 1
        )));
    }
    Ok(CochainSlice {
        degree: p,
        matrix: raw_differential(l, m, p),
    })
}

pub(crate) fn raw_differential(l: &LieAlgebra, m: &LieModule, p: usize) -> Matrix<Rational> {
    let n = l.dim();
    let d = m.dim();
    let src = subsets(n, p);
    let dst = subsets(n, p + 1);
    let mut out = Matrix::zeros(dst.len() * d, src.len() * d);
    for (ti, t) in dst.iter().enumerate() {
        for i in 0..t.len() {
            let rest: Vec<usize> = t
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, v)| *v)
                .collect();
            let si = subset_index(&src, &rest).expect("sorted subset");
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let rho = m.rho(t[i]);
            for b in 0..d {
                for a in 0..d {
                    let v = &rho[(b, a)];
                    if !v.is_zero() {
                        let cell = &mut out[(ti * d + b, si * d + a)];
                        *cell = if sign > 0 { &*cell + v } else { &*cell - v };
                    }
                }
            }
        }
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                let br = l.bracket_basis(t[i], t[j]);
                let rest: Vec<usize> = t
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i && *k != j)
                    .map(|(_, v)| *v)
                    .collect();
                for (k, c) in br.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut idx = Vec::with_capacity(p);
                    idx.push(k);
                    idx.extend(&rest);
                    let Some(s) = sort_sign(&mut idx) else {
                        continue;
                    };
                    let si = subset_index(&src, &idx).expect("sorted subset");
                    let coeff = if (i + j + usize::from(s < 0)) % 2 == 0 {
                        c.clone()
                    } else {
                        -c.clone()
                    };
                    for a in 0..d {
                        let cell = &mut out[(ti * d + a, si * d + a)];
                        *cell = &*cell + &coeff;
                    }
                }
            }
        }
    }
    out
}

/// `dim H^p = dim C^p - rank d_p - rank d_{p-1}`.
pub fn cohomology_dim(l: &LieAlgebra, m: &LieModule, p: usize) -> Result<usize> {
    let dp = ce_differential(l, m, p)?.matrix.rank();
    let dprev = if p == 0 {
        0
    } else {
        ce_differential(l, m, p - 1)?.matrix.rank()
    };
    Ok(cochain_dim(l, m, p) - dp - dprev)
}

/// `(Σ (-1)^p dim C^p, Σ (-1)^p dim H^p)`; the two must agree.
pub fn euler_characteristic(l: &LieAlgebra, m: &LieModule) -> Result<(i64, i64)> {
    let mut chains = 0i64;
    let mut homology = 0i64;
    for p in 0..=l.dim() {
        let s = if p % 2 == 0 { 1 } else { -1 };
        chains += s * cochain_dim(l, m, p) as i64;
        homology += s * cohomology_dim(l, m, p)? as i64;
    }
    Ok((chains, homology))
}
