//! Classical r-matrices, coboundary Lie bialgebras and Poisson–Lie
//! structures on abelian groups.
//!
//! Conventions: `Λ = Σ_{i<j} Λ^{ij} e_i∧e_j` is stored as a full skew matrix.
//! Contraction uses the first slot, `(Λ♯ξ)^j = Σ_i ξ_i Λ^{ij}`, and the
//! coadjoint action is `(ad*_X μ)_j = −Σ_{i,k} μ_k C^k_{ij} X^i`. With this
//! pair the sl(2) family reproduces its known dual brackets.

mod abelian;

pub use abelian::{
    abelian_pl_check, check_eq_33, positive_points, AbelianPLReport, AbelianPLStructure,
    Eq33Report, SubCheck,
};

use num_traits::Zero;
use serde::Serialize;

use crate::exterior::{sort_sign, subset_index, subsets};
use crate::lie::{JacobiReport, LieAlgebra};
use crate::linalg::Matrix;
use crate::scalar::Rational;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix {
    algebra: LieAlgebra,
    lambda: Matrix<Rational>,
}

impl RMatrix {
    pub fn new(algebra: LieAlgebra, lambda: Matrix<Rational>) -> Result<Self> {
        let n = algebra.dim();
        if lambda.rows() != n || lambda.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: lambda.rows().max(lambda.cols()),
            });
        }
        for i in 0..n {
            for j in 0..n {
                if lambda[(i, j)] != -lambda[(j, i)].clone() {
                    return Err(Error::NotSkew(format!(
                        "Λ^({i},{j}) = {}, Λ^({j},{i}) = {}",
                        lambda[(i, j)],
                        lambda[(j, i)]
                    )));
                }
            }
        }
        Ok(RMatrix { algebra, lambda })
    }

    /// `Λ = λ₁e₁∧e₂ + λ₂e₂∧e₃ + λ₃e₃∧e₁` on sl(2).
    pub fn sl2_family(l1: Rational, l2: Rational, l3: Rational) -> Self {
        Self::three_dim(LieAlgebra::sl2(), l1, l2, l3).expect("sl2 is three-dimensional")
    }

    /// Same parametrisation over any three-dimensional algebra.
    pub fn three_dim(
        algebra: LieAlgebra,
        l1: Rational,
        l2: Rational,
        l3: Rational,
    ) -> Result<Self> {
        let z = Rational::zero;
        let lambda = Matrix::from_rows(vec![
            vec![z(), l1.clone(), -l3.clone()],
            vec![-l1, z(), l2.clone()],
            vec![l3, -l2, z()],
        ])?;
        RMatrix::new(algebra, lambda)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn lambda(&self) -> &Matrix<Rational> {
        &self.lambda
    }

    /// `Λ♯ξ ∈ 𝔤`.
    pub fn contract(&self, xi: &[Rational]) -> Result<Vec<Rational>> {
        let n = self.algebra.dim();
        if xi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: xi.len(),
            });
        }
        Ok((0..n)
            .map(|j| {
                (0..n).fold(Rational::zero(), |acc, i| {
                    acc + &xi[i] * &self.lambda[(i, j)]
                })
            })
            .collect())
    }
}

/// `ad_X` acting on a bivector `M`: `A M + M Aᵀ` with `A = ad(X)`.
pub fn ad_bivector(
    l: &LieAlgebra,
    x: &[Rational],
    m: &Matrix<Rational>,
) -> Result<Matrix<Rational>> {
    let a = l.ad(x);
    a.mul(m)?.add(&m.mul(&a.transpose())?)
}

/// `δ(X) = ad_X Λ`.
pub fn delta_from_r(r: &RMatrix, x: &[Rational]) -> Result<Matrix<Rational>> {
    let n = r.algebra.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    ad_bivector(&r.algebra, x, &r.lambda)
}

/// A 3-vector `Σ_{i<j<k} T^{ijk} e_i∧e_j∧e_k`, indexed by sorted triples.
#[derive(Clone, Debug, PartialEq)]
pub struct Trivector {
    n: usize,
    coeffs: Vec<Rational>,
}

impl Trivector {
    pub fn zero(n: usize) -> Self {
        Trivector {
            n,
            coeffs: vec![Rational::zero(); subsets(n, 3).len()],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Component along `e_i∧e_j∧e_k` for any index order.
    pub fn comp(&self, i: usize, j: usize, k: usize) -> Rational {
        let mut s = [i, j, k];
        match sort_sign(&mut s) {
            None => Rational::zero(),
            Some(sign) => {
                let idx = subset_index(&subsets(self.n, 3), &s).expect("indices in range");
                if sign > 0 {
                    self.coeffs[idx].clone()
                } else {
                    -self.coeffs[idx].clone()
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn nonzero(&self) -> Vec<([usize; 3], Rational)> {
        subsets(self.n, 3)
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| ([s[0], s[1], s[2]], c.clone()))
            .collect()
    }

    /// Adds `c · u∧e_b∧e_d` where `u` is a coefficient vector.
    fn add_vec_wedge(&mut self, c: &Rational, u: &[Rational], b: usize, d: usize) {
        let basis = subsets(self.n, 3);
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            let mut s = [a, b, d];
            if let Some(sign) = sort_sign(&mut s) {
                let idx = subset_index(&basis, &s).expect("indices in range");
                let v = c * ua;
                if sign > 0 {
                    self.coeffs[idx] += v;
                } else {
                    self.coeffs[idx] -= v;
                }
            }
        }
    }

    /// `ad_X T`, extended to `∧³𝔤` as a derivation.
    pub fn ad(&self, l: &LieAlgebra, x: &[Rational]) -> Result<Trivector> {
        let mut out = Trivector::zero(self.n);
        for ([i, j, k], c) in self.nonzero() {
            let e = |t: usize| {
                let mut v = vec![Rational::zero(); self.n];
                v[t] = Rational::from_integer(1.into());
                v
            };
            // [X,a]∧b∧c + a∧[X,b]∧c + a∧b∧[X,c], each rotated so the bracket leads.
            out.add_vec_wedge(&c, &l.bracket(x, &e(i))?, j, k);
            out.add_vec_wedge(&c, &l.bracket(x, &e(j))?, k, i);
            out.add_vec_wedge(&c, &l.bracket(x, &e(k))?, i, j);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchoutenReport {
    /// `[Λ,Λ]`.
    pub bracket: Trivector,
    /// `ad_{e_p}[Λ,Λ] = 0` for every basis element.
    pub invariant: bool,
    /// Basis elements whose action on `[Λ,Λ]` is nonzero, with that action.
    pub violations: Vec<(usize, Trivector)>,
}

/// Algebraic Schouten bracket `[Λ,Λ] ∈ ∧³𝔤`, built from
/// `[a∧b, c∧d] = [a,c]∧b∧d − [a,d]∧b∧c − [b,c]∧a∧d + [b,d]∧a∧c`.
pub fn schouten_wedge_bracket(r: &RMatrix) -> Result<SchoutenReport> {
    let l = &r.algebra;
    let n = l.dim();
    let mut t = Trivector::zero(n);
    let pairs: Vec<(usize, usize, Rational)> = subsets(n, 2)
        .into_iter()
        .map(|s| (s[0], s[1], r.lambda[(s[0], s[1])].clone()))
        .filter(|(_, _, c)| !c.is_zero())
        .collect();
    for (a, b, x) in &pairs {
        for (c, d, y) in &pairs {
            let w = x * y;
            let nw = -w.clone();
            t.add_vec_wedge(&w, &l.bracket_basis(*a, *c), *b, *d);
            t.add_vec_wedge(&nw, &l.bracket_basis(*a, *d), *b, *c);
            t.add_vec_wedge(&nw, &l.bracket_basis(*b, *c), *a, *d);
            t.add_vec_wedge(&w, &l.bracket_basis(*b, *d), *a, *c);
        }
    }
    let mut violations = Vec::new();
    for p in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[p] = Rational::from_integer(1.into());
        let a = t.ad(l, &e)?;
        if !a.is_zero() {
            violations.push((p, a));
        }
    }
    Ok(SchoutenReport {
        invariant: violations.is_empty(),
        bracket: t,
        violations,
    })
}

/// `(ad*_X μ)_j = −Σ μ_k C^k_{ij} X^i`.
pub fn coad(l: &LieAlgebra, x: &[Rational], mu: &[Rational]) -> Vec<Rational> {
    let n = l.dim();
    (0..n)
        .map(|j| {
            let mut acc = Rational::zero();
            for i in 0..n {
                if x[i].is_zero() {
                    continue;
                }
                for k in 0..n {
                    let c = l.constant(i, j, k);
                    if !c.is_zero() {
                        acc -= &mu[k] * c * &x[i];
                    }
                }
            }
            acc
        })
        .collect()
}

/// `[ξ,η]_* = ad*_{Λξ}η − ad*_{Λη}ξ`.
pub fn dual_bracket_from_r(
    r: &RMatrix,
    xi: &[Rational],
    eta: &[Rational],
) -> Result<Vec<Rational>> {
    let n = r.algebra.dim();
    if eta.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: eta.len(),
        });
    }
    let a = coad(&r.algebra, &r.contract(xi)?, eta);
    let b = coad(&r.algebra, &r.contract(eta)?, xi);
    Ok(a.into_iter().zip(b).map(|(x, y)| x - y).collect())
}

/// The bracket `[,]_*` as a Lie algebra on the dual basis `e1*, …`.
pub fn dual_algebra_from_r(r: &RMatrix) -> Result<LieAlgebra> {
    let n = r.algebra.dim();
    let basis: Vec<String> = r.algebra.basis().iter().map(|b| format!("{b}*")).collect();
    let unit = |t: usize| {
        let mut v = vec![Rational::zero(); n];
        v[t] = Rational::from_integer(1.into());
        v
    };
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            brackets.push((i, j, dual_bracket_from_r(r, &unit(i), &unit(j))?));
        }
    }
    LieAlgebra::from_brackets(basis, &brackets)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    FromRMatrix,
    Explicit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LieBialgebra {
    pub primal: LieAlgebra,
    pub dual: LieAlgebra,
    pub provenance: Provenance,
}

impl LieBialgebra {
    pub fn from_r(r: &RMatrix) -> Result<Self> {
        Ok(LieBialgebra {
            primal: r.algebra.clone(),
            dual: dual_algebra_from_r(r)?,
            provenance: Provenance::FromRMatrix,
        })
    }

    pub fn explicit(primal: LieAlgebra, dual: LieAlgebra) -> Result<Self> {
        if primal.dim() != dual.dim() {
            return Err(Error::DimensionMismatch {
                expected: primal.dim(),
                got: dual.dim(),
            });
        }
        Ok(LieBialgebra {
            primal,
            dual,
            provenance: Provenance::Explicit,
        })
    }

    /// `δ(X)^{ij} = Σ_k X^k D^k_{ij}`, the transpose of the dual bracket.
    pub fn delta(&self, x: &[Rational]) -> Result<Matrix<Rational>> {
        let n = self.primal.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                for (k, xk) in x.iter().enumerate() {
                    *v += xk * self.dual.constant(i, j, k);
                }
            }
        }
        Matrix::from_rows(rows)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CocycleViolation {
    pub pair: (usize, usize),
    /// `δ([e_i,e_j]) − ad_{e_i}δ(e_j) + ad_{e_j}δ(e_i)`.
    pub residual: Matrix<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BialgebraReport {
    pub primal_jacobi: JacobiReport,
    pub dual_jacobi: JacobiReport,
    pub cocycle: Vec<CocycleViolation>,
}

impl BialgebraReport {
    pub fn cocycle_holds(&self) -> bool {
        self.cocycle.is_empty()
    }

    pub fn passes(&self) -> bool {
        self.primal_jacobi.holds && self.dual_jacobi.holds && self.cocycle_holds()
    }
}

pub fn validate_bialgebra(b: &LieBialgebra) -> Result<BialgebraReport> {
    let n = b.primal.dim();
    let unit = |t: usize| {
        let mut v = vec![Rational::zero(); n];
        v[t] = Rational::from_integer(1.into());
        v
    };
    let deltas: Vec<Matrix<Rational>> = (0..n).map(|i| b.delta(&unit(i))).collect::<Result<_>>()?;
    let mut cocycle = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = b.delta(&b.primal.bracket_basis(i, j))?;
            let rhs = ad_bivector(&b.primal, &unit(i), &deltas[j])?.sub(&ad_bivector(
                &b.primal,
                &unit(j),
                &deltas[i],
            )?)?;
            let residual = lhs.sub(&rhs)?;
            if !residual.is_zero() {
                cocycle.push(CocycleViolation {
                    pair: (i, j),
                    residual,
                });
            }
        }
    }
    Ok(BialgebraReport {
        primal_jacobi: b.primal.check_jacobi(),
        dual_jacobi: b.dual.check_jacobi(),
        cocycle,
    })
}
