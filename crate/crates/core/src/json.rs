//! JSON exchange formats.
//!
//! Wire structs mirror the documented layouts and convert to and from the
//! core types. Rationals inside algebras and matrices are either JSON
//! integers or `"a/b"` strings; polynomial coefficients always carry
//! numerator and denominator strings.

use serde::{Deserialize, Serialize};

use crate::action::{GroupRelation, LinearPoissonAction};
use crate::bialgebra::RMatrix;
use crate::lie::LieAlgebra;
use crate::linalg::Matrix;
use crate::poly::{MultiPoly, Var, VarKind, VarSet};
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatJson {
    Int(i64),
    Str(String),
}

impl RatJson {
    pub fn from_rational(r: &Rational) -> Self {
        if r.is_integer() {
            if let Ok(i) = i64::try_from(r.numer()) {
                return RatJson::Int(i);
            }
        }
        RatJson::Str(r.to_string())
    }

    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            RatJson::Int(i) => Ok(Rational::from_integer((*i).into())),
            RatJson::Str(s) => parse_rational(s),
        }
    }
}

fn rats(v: &[RatJson]) -> Result<Vec<Rational>> {
    v.iter().map(RatJson::to_rational).collect()
}

fn rat_matrix(rows: &[Vec<RatJson>]) -> Result<Matrix<Rational>> {
    Matrix::from_rows(rows.iter().map(|r| rats(r)).collect::<Result<_>>()?)
}

fn matrix_json(m: &Matrix<Rational>) -> Vec<Vec<RatJson>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(RatJson::from_rational).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarJson {
    pub name: String,
    #[serde(default = "affine")]
    pub kind: VarKind,
}

fn affine() -> VarKind {
    VarKind::Affine
}

pub fn vars_from_json(v: &[VarJson]) -> Result<VarSet> {
    VarSet::new(
        v.iter()
            .map(|v| Var {
                name: v.name.clone(),
                kind: v.kind,
            })
            .collect(),
    )
}

pub fn vars_to_json(v: &VarSet) -> Vec<VarJson> {
    v.vars()
        .iter()
        .map(|v| VarJson {
            name: v.name.clone(),
            kind: v.kind,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub num: String,
    pub den: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im_num: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im_den: Option<String>,
}

impl CoeffJson {
    pub fn from_scalar(s: &Scalar) -> Self {
        let (im_num, im_den) = if s.is_real() {
            (None, None)
        } else {
            (
                Some(s.im.numer().to_string()),
                Some(s.im.denom().to_string()),
            )
        };
        CoeffJson {
            num: s.re.numer().to_string(),
            den: s.re.denom().to_string(),
            im_num,
            im_den,
        }
    }

    pub fn to_scalar(&self) -> Result<Scalar> {
        let re = parse_rational(&format!("{}/{}", self.num, self.den))?;
        let im = match (&self.im_num, &self.im_den) {
            (None, None) => Rational::from_integer(0.into()),
            (Some(n), d) => parse_rational(&format!("{}/{}", n, d.as_deref().unwrap_or("1")))?,
            (None, Some(_)) => return Err(Error::Parse("im_den without im_num".into())),
        };
        Ok(Scalar::new(re, im))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<i32>,
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<VarJson>,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn from_poly(p: &MultiPoly) -> Self {
        PolyJson {
            vars: vars_to_json(p.vars()),
            terms: p
                .terms()
                .map(|(e, c)| TermJson {
                    exp: e.clone(),
                    coeff: CoeffJson::from_scalar(c),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<MultiPoly> {
        let vars = vars_from_json(&self.vars)?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                if t.exp.len() != vars.len() {
                    return Err(Error::DimensionMismatch {
                        expected: vars.len(),
                        got: t.exp.len(),
                    });
                }
                Ok((t.exp.clone(), t.coeff.to_scalar()?))
            })
            .collect::<Result<Vec<_>>>()?;
        MultiPoly::from_terms(&vars, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub result: Vec<RatJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<BracketJson>,
}

impl LieJson {
    pub fn from_algebra(l: &LieAlgebra) -> Self {
        let d = l.dim();
        let mut brackets = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let b = l.bracket_basis(i, j);
                if b.iter().any(|c| !num_traits::Zero::is_zero(c)) {
                    brackets.push(BracketJson {
                        i,
                        j,
                        result: b.iter().map(RatJson::from_rational).collect(),
                    });
                }
            }
        }
        LieJson {
            dim: d,
            basis: Some(l.basis().to_vec()),
            brackets,
        }
    }

    /// Unlisted pairs are zero. Skew-symmetry is imposed; conflicting
    /// `(i,j)`/`(j,i)` entries are an error. Jacobi is not checked here.
    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        let basis = self
            .basis
            .clone()
            .unwrap_or_else(|| (1..=self.dim).map(|i| format!("e{i}")).collect());
        if basis.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: basis.len(),
            });
        }
        let b = self
            .brackets
            .iter()
            .map(|b| {
                if b.result.len() != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim,
                        got: b.result.len(),
                    });
                }
                Ok((b.i, b.j, rats(&b.result)?))
            })
            .collect::<Result<Vec<_>>>()?;
        LieAlgebra::from_brackets(basis, &b)
    }
}

/// Algebra by name (`sl2`, `so3`, `heisenberg`, `abelian:N`) or inline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Named(String),
    Inline(LieJson),
}

impl AlgebraRef {
    pub fn resolve(&self) -> Result<LieAlgebra> {
        match self {
            AlgebraRef::Inline(l) => l.to_algebra(),
            AlgebraRef::Named(n) => named_algebra(n),
        }
    }
}

pub fn named_algebra(name: &str) -> Result<LieAlgebra> {
    match name {
        "sl2" => Ok(LieAlgebra::sl2()),
        "so3" => Ok(LieAlgebra::so3()),
        "heisenberg" => Ok(LieAlgebra::heisenberg()),
        _ => match name.strip_prefix("abelian:").map(str::parse::<usize>) {
            Some(Ok(n)) => Ok(LieAlgebra::abelian(n)),
            _ => Err(Error::Parse(format!("unknown algebra {name:?}"))),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RMatrixJson {
    pub algebra: AlgebraRef,
    pub lambda: Vec<Vec<RatJson>>,
}

impl RMatrixJson {
    pub fn from_r(r: &RMatrix) -> Self {
        RMatrixJson {
            algebra: AlgebraRef::Inline(LieJson::from_algebra(r.algebra())),
            lambda: matrix_json(r.lambda()),
        }
    }

    pub fn to_r(&self) -> Result<RMatrix> {
        RMatrix::new(self.algebra.resolve()?, rat_matrix(&self.lambda)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub i: usize,
    pub j: usize,
    pub poly: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BivectorJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<VarJson>>,
    pub entries: Vec<EntryJson>,
}

impl BivectorJson {
    pub fn from_bivector(pi: &crate::poisson::PolyBivector) -> Self {
        BivectorJson {
            dim: pi.dim(),
            vars: Some(vars_to_json(pi.vars())),
            entries: pi
                .nonzero_entries()
                .into_iter()
                .filter(|(i, j, _)| i < j)
                .map(|(i, j, p)| EntryJson {
                    i,
                    j,
                    poly: PolyJson::from_poly(p),
                })
                .collect(),
        }
    }

    /// Without `vars`, coordinates are those of the first entry's
    /// polynomial when it has `dim` variables, else `x1..xn`.
    pub fn to_bivector(&self) -> Result<crate::poisson::PolyBivector> {
        let polys: Vec<MultiPoly> = self
            .entries
            .iter()
            .map(|e| e.poly.to_poly())
            .collect::<Result<_>>()?;
        let vars = match &self.vars {
            Some(v) => vars_from_json(v)?,
            None => match polys.first() {
                Some(p) if p.vars().len() == self.dim => p.vars().clone(),
                _ => VarSet::numbered("x", self.dim),
            },
        };
        if vars.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: vars.len(),
            });
        }
        crate::poisson::PolyBivector::from_entries(
            &vars,
            self.entries.iter().zip(polys).map(|(e, p)| (e.i, e.j, p)),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RelationJson {
    #[default]
    SpecialLinear,
    SpecialOrthogonal,
    General,
}

impl From<RelationJson> for GroupRelation {
    fn from(r: RelationJson) -> Self {
        match r {
            RelationJson::SpecialLinear => GroupRelation::SpecialLinear,
            RelationJson::SpecialOrthogonal => GroupRelation::SpecialOrthogonal,
            RelationJson::General => GroupRelation::General,
        }
    }
}

/// A linear action of `G` on `(P, π_P)` with optional r-matrix and
/// momentum components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionBundle {
    pub algebra: AlgebraRef,
    pub rep: Vec<Vec<Vec<RatJson>>>,
    pub bivector: BivectorJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Vec<RatJson>>>,
    #[serde(default)]
    pub relation: RelationJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum: Option<Vec<PolyJson>>,
    /// Exact points for pointwise checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<RatJson>>>,
    /// Group elements (in the representation) paired with points, for the
    /// finite action identity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_samples: Option<Vec<GroupSampleJson>>,
    /// Pointwise momentum tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSampleJson {
    pub g: Vec<Vec<RatJson>>,
    pub x: Vec<RatJson>,
}

impl GroupSampleJson {
    pub fn new(g: &Matrix<Rational>, x: &[Rational]) -> Self {
        GroupSampleJson {
            g: matrix_json(g),
            x: x.iter().map(RatJson::from_rational).collect(),
        }
    }
}

impl ActionBundle {
    pub fn from_action(a: &LinearPoissonAction) -> Self {
        ActionBundle {
            algebra: AlgebraRef::Inline(LieJson::from_algebra(a.algebra())),
            rep: a.rep().iter().map(matrix_json).collect(),
            bivector: BivectorJson::from_bivector(a.pi()),
            lambda: a.r_matrix().map(|r| matrix_json(r.lambda())),
            relation: match a.relation() {
                GroupRelation::SpecialLinear => RelationJson::SpecialLinear,
                GroupRelation::SpecialOrthogonal => RelationJson::SpecialOrthogonal,
                GroupRelation::General => RelationJson::General,
            },
            momentum: None,
            points: None,
            group_samples: None,
            tolerance: None,
        }
    }

    pub fn group_samples(&self) -> Result<Vec<(Matrix<Rational>, Vec<Rational>)>> {
        self.group_samples
            .iter()
            .flatten()
            .map(|s| Ok((rat_matrix(&s.g)?, rats(&s.x)?)))
            .collect()
    }

    pub fn to_action(&self) -> Result<LinearPoissonAction> {
        let l = self.algebra.resolve()?;
        let rep = self
            .rep
            .iter()
            .map(|m| rat_matrix(m))
            .collect::<Result<Vec<_>>>()?;
        let pi = self.bivector.to_bivector()?;
        let r = match &self.lambda {
            Some(m) => Some(RMatrix::new(l.clone(), rat_matrix(m)?)?),
            None => None,
        };
        LinearPoissonAction::new(l, rep, pi, r, self.relation.into())
    }

    pub fn momentum_polys(&self, vars: &VarSet) -> Result<Option<Vec<MultiPoly>>> {
        match &self.momentum {
            None => Ok(None),
            Some(m) => Ok(Some(
                m.iter()
                    .map(|p| p.to_poly()?.with_vars(vars))
                    .collect::<Result<_>>()?,
            )),
        }
    }

    pub fn exact_points(&self) -> Result<Vec<Vec<Rational>>> {
        self.points.iter().flatten().map(|p| rats(p)).collect()
    }
}

/// A Poisson manifold with optional Hamiltonian, Casimirs and sample data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonBundle {
    pub bivector: BivectorJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<PolyJson>,
    #[serde(default)]
    pub casimirs: Vec<PolyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<RatJson>>>,
    /// Relative conservation tolerance for flows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl PoissonBundle {
    pub fn new(pi: &crate::poisson::PolyBivector) -> Self {
        PoissonBundle {
            bivector: BivectorJson::from_bivector(pi),
            hamiltonian: None,
            casimirs: Vec::new(),
            x0: None,
            points: None,
            tolerance: None,
        }
    }

    pub fn exact_points(&self) -> Result<Vec<Vec<Rational>>> {
        self.points.iter().flatten().map(|p| rats(p)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieBundle {
    pub algebra: AlgebraRef,
}

/// Either an r-matrix or an explicit primal/dual pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BialgebraBundle {
    Coboundary(RMatrixJson),
    Explicit {
        primal: AlgebraRef,
        dual: AlgebraRef,
    },
}

pub fn parse<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}
