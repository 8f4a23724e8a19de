//! Finite-dimensional Lie algebras given by structure constants.

mod cohomology;
mod module;

pub use cohomology::{
    ce_differential, cochain_dim, cohomology_dim, euler_characteristic, CochainSlice,
};
pub use module::{LieModule, ModuleKind};

use num_traits::Zero;

use crate::linalg::Matrix;
use crate::scalar::{q, qf, Rational};
use crate::{Error, Result};

/// `C^k_{ij}` stored densely as `c[(i * n + j) * n + k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    basis: Vec<String>,
    c: Vec<Rational>,
}

/// One basis triple where the cyclic sum `[[x,y],z] + [[y,z],x] + [[z,x],y]`
/// is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiViolation {
    pub indices: (usize, usize, usize),
    pub residual: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobiReport {
    pub holds: bool,
    pub violations: Vec<JacobiViolation>,
}

pub(crate) fn default_basis(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

impl LieAlgebra {
    /// From a dense tensor `c[i][j][k] = C^k_{ij}`. Skew-symmetry in the
    /// lower indices is enforced.
    pub fn from_constants(basis: Vec<String>, c: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let n = basis.len();
        if c.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.len(),
            });
        }
        let mut flat = Vec::with_capacity(n * n * n);
        for row in &c {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for v in row {
                if v.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: v.len(),
                    });
                }
                flat.extend(v.iter().cloned());
            }
        }
        let l = LieAlgebra {
            dim: n,
            basis,
            c: flat,
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if *l.constant(i, j, k) != -l.constant(j, i, k) {
                        return Err(Error::NotSkew(format!(
                            "C^{k}_({i},{j}) = {} but C^{k}_({j},{i}) = {}",
                            l.constant(i, j, k),
                            l.constant(j, i, k)
                        )));
                    }
                }
            }
        }
        Ok(l)
    }

    /// From a list of brackets `[e_i, e_j] = result`; unlisted pairs are zero
    /// and the reversed pair is filled in by skew-symmetry.
    pub fn from_brackets(
        basis: Vec<String>,
        brackets: &[(usize, usize, Vec<Rational>)],
    ) -> Result<Self> {
        let n = basis.len();
        let mut c = vec![Rational::zero(); n * n * n];
        let mut set = vec![false; n * n];
        for (i, j, r) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: i.max(j) + 1,
                });
            }
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
            if i == j {
                if r.iter().any(|v| !v.is_zero()) {
                    return Err(Error::NotSkew(format!("[e{0},e{0}] must vanish", i + 1)));
                }
                continue;
            }
            for k in 0..n {
                let fwd = (i * n + j) * n + k;
                let bwd = (j * n + i) * n + k;
                if (set[i * n + j] && c[fwd] != r[k]) || (set[j * n + i] && c[bwd] != -r[k].clone())
                {
                    return Err(Error::NotSkew(format!(
                        "conflicting brackets for ({i},{j})"
                    )));
                }
                c[fwd] = r[k].clone();
                c[bwd] = -r[k].clone();
            }
            set[i * n + j] = true;
            set[j * n + i] = true;
        }
        Ok(LieAlgebra { dim: n, basis, c })
    }

    fn from_int_brackets(n: usize, br: &[(usize, usize, [i64; 3])]) -> Self {
        let list: Vec<_> = br
            .iter()
            .map(|(i, j, r)| (*i, *j, r.iter().take(n).map(|&v| q(v)).collect()))
            .collect();
        LieAlgebra::from_brackets(default_basis(n), &list).expect("valid table")
    }

    /// `[e1,e2]=e3`, `[e2,e3]=e1`, `[e3,e1]=-e2`.
    pub fn sl2() -> Self {
        LieAlgebra::from_int_brackets(
            3,
            &[(0, 1, [0, 0, 1]), (1, 2, [1, 0, 0]), (2, 0, [0, -1, 0])],
        )
    }

    /// `[e1,e2]=e3`, `[e2,e3]=e1`, `[e3,e1]=e2`.
    pub fn so3() -> Self {
        LieAlgebra::from_int_brackets(
            3,
            &[(0, 1, [0, 0, 1]), (1, 2, [1, 0, 0]), (2, 0, [0, 1, 0])],
        )
    }

    /// `[e1,e2]=e3`, all else zero.
    pub fn heisenberg() -> Self {
        LieAlgebra::from_int_brackets(3, &[(0, 1, [0, 0, 1])])
    }

    pub fn abelian(n: usize) -> Self {
        LieAlgebra {
            dim: n,
            basis: default_basis(n),
            c: vec![Rational::zero(); n * n * n],
        }
    }

    /// Basis matrices of the defining representation of sl(2,ℝ) matching
    /// [`LieAlgebra::sl2`]: `½diag(1,-1)`, `½[[0,1],[-1,0]]`, `½[[0,1],[1,0]]`.
    pub fn sl2_matrices() -> Vec<Matrix<Rational>> {
        let h = qf(1, 2);
        let z = q(0);
        let m = |a: [&Rational; 4]| {
            Matrix::from_rows(vec![
                vec![a[0].clone(), a[1].clone()],
                vec![a[2].clone(), a[3].clone()],
            ])
            .expect("2x2")
        };
        let nh = -h.clone();
        vec![
            m([&h, &z, &z, &nh]),
            m([&z, &h, &nh, &z]),
            m([&z, &h, &h, &z]),
        ]
    }

    /// Lie algebra spanned by linearly independent square matrices, closed
    /// under the commutator.
    pub fn from_matrices(basis: Vec<String>, mats: &[Matrix<Rational>]) -> Result<Self> {
        let n = mats.len();
        if basis.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: basis.len(),
            });
        }
        let flat = |m: &Matrix<Rational>| -> Vec<Rational> {
            (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect()
        };
        let cols: Vec<Vec<Rational>> = mats.iter().map(flat).collect();
        let size = cols.first().map_or(0, Vec::len);
        let span = Matrix::from_cols(size, &cols)?;
        if span.rank() != n {
            return Err(Error::Precondition(
                "basis matrices are linearly dependent".into(),
            ));
        }
        let mut br = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let comm = mats[i].mul(&mats[j])?.sub(&mats[j].mul(&mats[i])?)?;
                let coeffs = span.solve(&flat(&comm))?.ok_or_else(|| {
                    Error::Precondition(format!("[{},{}] leaves the span", basis[i], basis[j]))
                })?;
                br.push((i, j, coeffs));
            }
        }
        LieAlgebra::from_brackets(basis, &br)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    /// `C^k_{ij}`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Copy with a single constant changed (and its skew partner).
    pub fn with_constant(&self, i: usize, j: usize, k: usize, v: Rational) -> Result<Self> {
        if i == j {
            return Err(Error::NotSkew("diagonal constants must vanish".into()));
        }
        let n = self.dim;
        let mut out = self.clone();
        out.c[(j * n + i) * n + k] = -v.clone();
        out.c[(i * n + j) * n + k] = v;
        Ok(out)
    }

    /// `[e_i, e_j]` as a coefficient vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        let s = (i * self.dim + j) * self.dim;
        self.c[s..s + self.dim].to_vec()
    }

    /// `[X,Y]^k = Σ C^k_{ij} X^i Y^j`.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        let n = self.dim;
        for v in [x, y] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let w = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        *o += c * &w;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `ad(e_i)`: column `j` holds `[e_i, e_j]`.
    pub fn ad_matrix(&self, i: usize) -> Matrix<Rational> {
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                m[(k, j)] = self.constant(i, j, k).clone();
            }
        }
        m
    }

    /// `ad(X)` for a general element.
    pub fn ad(&self, x: &[Rational]) -> Matrix<Rational> {
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m = m.add(&self.ad_matrix(i).scale(xi)).expect("square");
            }
        }
        m
    }

    fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<Rational> {
        let e = |t: usize| {
            let mut v = vec![Rational::zero(); self.dim];
            v[t] = q(1);
            v
        };
        let term = |a: usize, b: usize, c: usize| {
            self.bracket(&self.bracket_basis(a, b), &e(c))
                .expect("dims")
        };
        let (t1, t2, t3) = (term(i, j, k), term(j, k, i), term(k, i, j));
        (0..self.dim).map(|m| &(&t1[m] + &t2[m]) + &t3[m]).collect()
    }

    /// Evaluates `[[e_i,e_j],e_k] + c.p.` on all triples `i<j<k` (the sum is
    /// totally antisymmetric, so these suffice).
    pub fn check_jacobi(&self) -> JacobiReport {
        let n = self.dim;
        let mut violations = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let r = self.jacobiator(i, j, k);
                    if r.iter().any(|v| !v.is_zero()) {
                        violations.push(JacobiViolation {
                            indices: (i, j, k),
                            residual: r,
                        });
                    }
                }
            }
        }
        JacobiReport {
            holds: violations.is_empty(),
            violations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![q(0); n];
        v[i] = q(1);
        v
    }

    #[test]
    fn sl2_brackets() {
        let l = LieAlgebra::sl2();
        assert_eq!(l.bracket(&e(3, 0), &e(3, 1)).unwrap(), e(3, 2));
        let x = vec![q(1), q(1), q(0)];
        assert_eq!(l.bracket(&x, &x).unwrap(), vec![q(0); 3]);
        // [e1+e2, e3] = [e1,e3] + [e2,e3] = e2 + e1
        assert_eq!(l.bracket(&x, &e(3, 2)).unwrap(), vec![q(1), q(1), q(0)]);
        assert!(l.bracket(&x, &[q(1)]).is_err());
    }

    #[test]
    fn jacobi_verdicts() {
        assert!(LieAlgebra::sl2().check_jacobi().holds);
        assert!(LieAlgebra::so3().check_jacobi().holds);
        assert!(LieAlgebra::heisenberg().check_jacobi().holds);
        assert!(LieAlgebra::abelian(4).check_jacobi().holds);

        let bad = LieAlgebra::from_brackets(
            default_basis(3),
            &[
                (0, 1, vec![q(0), q(0), q(1)]),
                (1, 2, vec![q(0), q(1), q(0)]),
            ],
        )
        .unwrap();
        let rep = bad.check_jacobi();
        assert!(!rep.holds);
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].indices, (0, 1, 2));
        assert_eq!(rep.violations[0].residual, vec![q(0), q(0), q(-1)]);
    }

    #[test]
    fn skew_is_enforced() {
        let mut c = vec![vec![vec![q(0); 2]; 2]; 2];
        c[0][1][0] = q(1);
        assert!(matches!(
            LieAlgebra::from_constants(default_basis(2), c),
            Err(Error::NotSkew(_))
        ));
    }

    #[test]
    fn matrices_reproduce_sl2() {
        let l = LieAlgebra::from_matrices(default_basis(3), &LieAlgebra::sl2_matrices()).unwrap();
        assert_eq!(l, LieAlgebra::sl2());
    }
}
