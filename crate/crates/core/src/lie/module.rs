use num_traits::Zero;

use super::LieAlgebra;
use crate::linalg::Matrix;
use crate::scalar::Rational;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    Trivial,
    Adjoint,
    Coadjoint,
    Custom,
}

/// A representation `ρ: g → gl(V)` given on basis elements.
#[derive(Clone, Debug, PartialEq)]
pub struct LieModule {
    dim: usize,
    rho: Vec<Matrix<Rational>>,
    kind: ModuleKind,
}

impl LieModule {
    pub fn trivial(l: &LieAlgebra, dim: usize) -> Self {
        LieModule {
            dim,
            rho: vec![Matrix::zeros(dim, dim); l.dim()],
            kind: ModuleKind::Trivial,
        }
    }

    pub fn adjoint(l: &LieAlgebra) -> Self {
        let rho = (0..l.dim()).map(|i| l.ad_matrix(i)).collect();
        LieModule {
            dim: l.dim(),
            rho,
            kind: ModuleKind::Adjoint,
        }
    }

    /// `ρ(e_i) = -ad(e_i)^T`, i.e. `⟨ad*_X μ, Y⟩ = -⟨μ, [X,Y]⟩`.
    pub fn coadjoint(l: &LieAlgebra) -> Self {
        let rho = (0..l.dim())
            .map(|i| {
                l.ad_matrix(i)
                    .transpose()
                    .scale(&Rational::from_integer((-1).into()))
            })
            .collect();
        LieModule {
            dim: l.dim(),
            rho,
            kind: ModuleKind::Coadjoint,
        }
    }

    pub fn custom(rho: Vec<Matrix<Rational>>) -> Result<Self> {
        let dim = rho.first().map_or(0, Matrix::rows);
        for m in &rho {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: m.rows().max(m.cols()),
                });
            }
        }
        Ok(LieModule {
            dim,
            rho,
            kind: ModuleKind::Custom,
        })
    }

    pub fn of_kind(l: &LieAlgebra, kind: ModuleKind) -> Result<Self> {
        match kind {
            ModuleKind::Trivial => Ok(LieModule::trivial(l, 1)),
            ModuleKind::Adjoint => Ok(LieModule::adjoint(l)),
            ModuleKind::Coadjoint => Ok(LieModule::coadjoint(l)),
            ModuleKind::Custom => Err(Error::InvalidModule(
                "custom modules need explicit matrices".into(),
            )),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn rho(&self, i: usize) -> &Matrix<Rational> {
        &self.rho[i]
    }

    /// Residuals `ρ([e_i,e_j]) - [ρ(e_i), ρ(e_j)]` for every failing pair.
    pub fn axiom_violations(
        &self,
        l: &LieAlgebra,
    ) -> Result<Vec<((usize, usize), Matrix<Rational>)>> {
        if self.rho.len() != l.dim() {
            return Err(Error::DimensionMismatch {
                expected: l.dim(),
                got: self.rho.len(),
            });
        }
        let mut out = Vec::new();
        for i in 0..l.dim() {
            for j in i + 1..l.dim() {
                let br = l.bracket_basis(i, j);
                let mut lhs = Matrix::zeros(self.dim, self.dim);
                for (k, c) in br.iter().enumerate() {
                    if !c.is_zero() {
                        lhs = lhs.add(&self.rho[k].scale(c))?;
                    }
                }
                let comm = self.rho[i]
                    .mul(&self.rho[j])?
                    .sub(&self.rho[j].mul(&self.rho[i])?)?;
                let res = lhs.sub(&comm)?;
                if !res.is_zero() {
                    out.push(((i, j), res));
                }
            }
        }
        Ok(out)
    }

    pub fn check_axiom(&self, l: &LieAlgebra) -> Result<bool> {
        Ok(self.axiom_violations(l)?.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn named_modules_satisfy_axiom() {
        for l in [
            LieAlgebra::sl2(),
            LieAlgebra::so3(),
            LieAlgebra::heisenberg(),
        ] {
            for m in [
                LieModule::trivial(&l, 2),
                LieModule::adjoint(&l),
                LieModule::coadjoint(&l),
            ] {
                assert!(m.check_axiom(&l).unwrap());
            }
        }
    }

    #[test]
    fn sl2_actions() {
        let l = LieAlgebra::sl2();
        let ad = LieModule::adjoint(&l);
        assert_eq!(
            ad.rho(0).mul_vec(&[q(0), q(1), q(0)]).unwrap(),
            vec![q(0), q(0), q(1)]
        );
        // ⟨ad*_{e1} e3*, e2⟩ = -⟨e3*, [e1,e2]⟩ = -1
        let co = LieModule::coadjoint(&l);
        assert_eq!(co.rho(0).mul_vec(&[q(0), q(0), q(1)]).unwrap()[1], q(-1));
        assert!(LieModule::trivial(&l, 1).rho(2).is_zero());
    }

    #[test]
    fn broken_module_detected() {
        let l = LieAlgebra::sl2();
        let mut rho: Vec<_> = (0..3).map(|i| l.ad_matrix(i)).collect();
        rho[2] = Matrix::zeros(3, 3);
        let m = LieModule::custom(rho).unwrap();
        assert!(!m.check_axiom(&l).unwrap());
    }
}
