//! Linear Poisson actions of matrix groups, momentum maps and the
//! equivariance obstruction.
//!
//! The infinitesimal action of a linear representation is `λ(X)(x) = X·x`.
//! With this choice `λ([X,Y]) = −[λ(X),λ(Y)]`, and the momentum condition
//! reads `λ(X) = π(·, dm(X)) = −X_{m(X)}`.

mod momentum;
pub mod plane;

pub use momentum::{
    check_prop52, fit_momentum_scale, gamma, gamma_checks, momentum_check, momentum_kernel_image,
    psi_cocycle_check, sigma_flow_drift, sigma_psi, solve_gamma_class, GammaChecks, GammaCochain,
    KernelImageReport, MomentumMap, MomentumReport, Prop52Report, PsiReport, ScaleFit,
};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::bialgebra::RMatrix;
use crate::lie::{LieAlgebra, LieModule};
use crate::linalg::Matrix;
use crate::poisson::{bracket, lie_derivative_bivector, PolyBivector, VectorField};
use crate::poly::MultiPoly;
use crate::scalar::{Rational, Scalar};
use crate::{Error, Result};

/// Defining relation used to validate sampled group elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupRelation {
    /// `det g = 1`.
    SpecialLinear,
    /// `gᵀg = 1` and `det g = 1`.
    SpecialOrthogonal,
    /// `det g ≠ 0`.
    General,
}

impl GroupRelation {
    pub fn check(&self, g: &Matrix<Rational>) -> Result<()> {
        let det = g.det()?;
        let ok = match self {
            GroupRelation::SpecialLinear => det.is_one(),
            GroupRelation::SpecialOrthogonal => {
                det.is_one() && g.transpose().mul(g)? == Matrix::identity(g.rows())
            }
            GroupRelation::General => !det.is_zero(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NotInGroup(format!("{self:?} fails, det = {det}")))
        }
    }
}

pub(crate) fn to_scalar(m: &Matrix<Rational>) -> Matrix<Scalar> {
    m.map(|r| Scalar::real(r.clone()))
}

pub(crate) fn to_scalars(v: &[Rational]) -> Vec<Scalar> {
    v.iter().cloned().map(Scalar::real).collect()
}

pub(crate) fn show(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub(crate) fn unit(n: usize, t: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[t] = Rational::one();
    v
}

#[derive(Clone, Debug)]
pub struct LinearPoissonAction {
    algebra: LieAlgebra,
    rep: Vec<Matrix<Rational>>,
    pi: PolyBivector,
    r: Option<RMatrix>,
    relation: GroupRelation,
}

impl LinearPoissonAction {
    pub fn new(
        algebra: LieAlgebra,
        rep: Vec<Matrix<Rational>>,
        pi: PolyBivector,
        r: Option<RMatrix>,
        relation: GroupRelation,
    ) -> Result<Self> {
        if rep.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                got: rep.len(),
            });
        }
        let n = pi.dim();
        if let Some(m) = rep.iter().find(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.rows(),
            });
        }
        if !LieModule::custom(rep.clone())?.check_axiom(&algebra)? {
            return Err(Error::InvalidModule(
                "representation does not respect the brackets".into(),
            ));
        }
        if let Some(r) = &r {
            if r.algebra() != &algebra {
                return Err(Error::Precondition(
                    "r-matrix lives on a different algebra".into(),
                ));
            }
        }
        Ok(LinearPoissonAction {
            algebra,
            rep,
            pi,
            r,
            relation,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn rep(&self) -> &[Matrix<Rational>] {
        &self.rep
    }

    pub fn pi(&self) -> &PolyBivector {
        &self.pi
    }

    pub fn r_matrix(&self) -> Option<&RMatrix> {
        self.r.as_ref()
    }

    pub fn relation(&self) -> GroupRelation {
        self.relation
    }

    /// The group carries the zero Poisson structure.
    pub fn trivial_group_structure(&self) -> bool {
        self.r.as_ref().is_none_or(|r| r.lambda().is_zero())
    }

    /// Same data with `π_P` replaced.
    pub fn with_pi(&self, pi: PolyBivector) -> Result<Self> {
        LinearPoissonAction::new(
            self.algebra.clone(),
            self.rep.clone(),
            pi,
            self.r.clone(),
            self.relation,
        )
    }

    pub fn infinitesimal(&self) -> Result<InfinitesimalAction> {
        infinitesimal_from_linear(self)
    }

    /// `Ad_g` on `𝔤` in the chosen basis, via `g E_j g⁻¹` in the representation.
    pub fn adjoint_of(&self, g: &Matrix<Rational>) -> Result<Matrix<Rational>> {
        let n = self.pi.dim();
        let d = self.algebra.dim();
        let gi = g.inverse()?;
        let flat = |m: &Matrix<Rational>| -> Vec<Rational> {
            (0..n * n).map(|t| m[(t / n, t % n)].clone()).collect()
        };
        let basis = Matrix::from_cols(n * n, &self.rep.iter().map(flat).collect::<Vec<_>>())?;
        let mut cols = Vec::with_capacity(d);
        for e in &self.rep {
            let c = g.mul(e)?.mul(&gi)?;
            let coords = basis.solve(&flat(&c))?.ok_or_else(|| {
                Error::Precondition(
                    "representation is not faithful or g is outside the group".into(),
                )
            })?;
            cols.push(coords);
        }
        Matrix::from_cols(d, &cols)
    }

    /// `Coad(g) = (Ad_{g⁻¹})ᵀ` on `𝔤*`.
    pub fn coadjoint_of(&self, g: &Matrix<Rational>) -> Result<Matrix<Rational>> {
        Ok(self.adjoint_of(&g.inverse()?)?.transpose())
    }
}

/// Fundamental vector fields `λ(e_i)` of an algebra acting on a phase space.
#[derive(Clone, Debug)]
pub struct InfinitesimalAction {
    algebra: LieAlgebra,
    fields: Vec<VectorField>,
}

impl InfinitesimalAction {
    pub fn new(algebra: LieAlgebra, fields: Vec<VectorField>) -> Result<Self> {
        if fields.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                got: fields.len(),
            });
        }
        Ok(InfinitesimalAction { algebra, fields })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn field(&self, i: usize) -> &VectorField {
        &self.fields[i]
    }

    /// `λ(X) = Σ X^i λ(e_i)`.
    pub fn of(&self, x: &[Rational]) -> Result<VectorField> {
        let vars = self.fields[0].vars();
        let mut acc = VectorField::zero(vars);
        for (c, f) in x.iter().zip(&self.fields) {
            if !c.is_zero() {
                acc = acc.add(&f.scale(&Scalar::real(c.clone())))?;
            }
        }
        Ok(acc)
    }

    /// The `ε ∈ {+1, −1}` with `λ([e_i,e_j]) = ε[λ(e_i),λ(e_j)]` for all
    /// pairs, or `None` if neither sign works.
    pub fn homomorphism_sign(&self) -> Result<Option<i32>> {
        let n = self.algebra.dim();
        let mut ok = [true, true];
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.of(&self.algebra.bracket_basis(i, j))?;
                let br = self.fields[i].lie_bracket(&self.fields[j])?;
                ok[0] &= lhs == br;
                ok[1] &= lhs == br.scale(&Scalar::int(-1));
            }
        }
        Ok(match ok {
            [true, _] if !ok[1] || self.fields.iter().all(VectorField::is_zero) => Some(1),
            [_, true] => Some(-1),
            _ => None,
        })
    }

    /// `λ(X)(p)` for every basis element, as the columns of an `n × dim 𝔤` matrix.
    pub fn at(&self, p: &[Rational]) -> Result<Matrix<Rational>> {
        let sp = to_scalars(p);
        let cols: Vec<Vec<Rational>> = self
            .fields
            .iter()
            .map(|f| -> Result<Vec<Rational>> {
                f.eval(&sp)?
                    .into_iter()
                    .map(|s| {
                        if s.is_real() {
                            Ok(s.re)
                        } else {
                            Err(Error::Evaluation("complex field value".into()))
                        }
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Matrix::from_cols(p.len(), &cols)
    }
}

/// `λ(e_i)(x) = E_i x` as linear vector fields on the phase space of `π_P`.
pub fn infinitesimal_from_linear(a: &LinearPoissonAction) -> Result<InfinitesimalAction> {
    let vars = a.pi.vars();
    let n = a.pi.dim();
    let mut fields = Vec::with_capacity(a.rep.len());
    for e in &a.rep {
        let comps = (0..n)
            .map(|r| MultiPoly::linear(vars, &to_scalars(e.row(r))))
            .collect();
        fields.push(VectorField::new(vars, comps)?);
    }
    InfinitesimalAction::new(a.algebra.clone(), fields)
}

fn wedge(u: &[Scalar], v: &[Scalar]) -> Matrix<Scalar> {
    let n = u.len();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = &(&u[i] * &v[j]) - &(&v[i] * &u[j]);
        }
    }
    m
}

/// `σ_{x*}π_G(g) = Σ_{i<j} Λ^{ij}((gE_ix)∧(gE_jx) − (E_igx)∧(E_jgx))`.
pub fn group_term(
    a: &LinearPoissonAction,
    g: &Matrix<Rational>,
    x: &[Rational],
) -> Result<Matrix<Scalar>> {
    let n = a.pi.dim();
    let mut out = Matrix::zeros(n, n);
    let Some(r) = &a.r else {
        return Ok(out);
    };
    let gs = to_scalar(g);
    let xs = to_scalars(x);
    let gx = gs.mul_vec(&xs)?;
    let d = a.algebra.dim();
    for i in 0..d {
        for j in i + 1..d {
            let l = &r.lambda()[(i, j)];
            if l.is_zero() {
                continue;
            }
            let (ei, ej) = (to_scalar(&a.rep[i]), to_scalar(&a.rep[j]));
            let left = wedge(
                &gs.mul_vec(&ei.mul_vec(&xs)?)?,
                &gs.mul_vec(&ej.mul_vec(&xs)?)?,
            );
            let right = wedge(&ei.mul_vec(&gx)?, &ej.mul_vec(&gx)?);
            out = out.add(&left.sub(&right)?.scale(&Scalar::real(l.clone())))?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionResidual {
    pub g: Vec<Vec<String>>,
    pub x: Vec<String>,
    /// Nonzero upper-triangular entries of `π(gx) − gπ(x)gᵀ − σ_{x*}π_G(g)`.
    pub residual: Vec<(usize, usize, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PoissonActionReport {
    pub samples: usize,
    pub failures: Vec<ActionResidual>,
}

impl PoissonActionReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exact check of `π_P(gx) = σ_{g*}π_P(x) + σ_{x*}π_G(g)` at each sample.
pub fn check_poisson_action(
    a: &LinearPoissonAction,
    samples: &[(Matrix<Rational>, Vec<Rational>)],
) -> Result<PoissonActionReport> {
    let n = a.pi.dim();
    let mut failures = Vec::new();
    for (g, x) in samples {
        a.relation.check(g)?;
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let gs = to_scalar(g);
        let gx = g.mul_vec(x)?;
        let lhs = a.pi.eval(&to_scalars(&gx))?;
        let pushed = gs.mul(&a.pi.eval(&to_scalars(x))?)?.mul(&gs.transpose())?;
        let res = lhs.sub(&pushed)?.sub(&group_term(a, g, x)?)?;
        if !res.is_zero() {
            let mut entries = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if !res[(i, j)].is_zero() {
                        entries.push((i, j, res[(i, j)].to_string()));
                    }
                }
            }
            failures.push(ActionResidual {
                g: (0..g.rows()).map(|r| show(g.row(r))).collect(),
                x: show(x),
                residual: entries,
            });
        }
    }
    Ok(PoissonActionReport {
        samples: samples.len(),
        failures,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreservationReport {
    /// `L_{λ(e_i)}π` for each basis element where it is nonzero.
    pub residuals: Vec<(usize, PolyBivector)>,
}

impl PreservationReport {
    pub fn preserved(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn preserved_by(&self, i: usize) -> bool {
        self.residuals.iter().all(|(k, _)| *k != i)
    }
}

/// `L_{λ(e_i)}π_P = 0` for every basis element.
pub fn check_structure_preserved(
    pi: &PolyBivector,
    act: &InfinitesimalAction,
) -> Result<PreservationReport> {
    let mut residuals = Vec::new();
    for (i, f) in act.fields.iter().enumerate() {
        let l = lie_derivative_bivector(pi, f)?;
        if !l.is_zero() {
            residuals.push((i, l));
        }
    }
    Ok(PreservationReport { residuals })
}

/// `⟨ξ_f, e_i⟩ = λ(e_i)(f)`, as functions of the point.
pub fn xi_f(act: &InfinitesimalAction, f: &MultiPoly) -> Result<Vec<MultiPoly>> {
    act.fields.iter().map(|v| v.apply(f)).collect()
}

/// `ξ_f(p)`.
pub fn xi_f_at(act: &InfinitesimalAction, f: &MultiPoly, p: &[Rational]) -> Result<Vec<Scalar>> {
    let sp = to_scalars(p);
    xi_f(act, f)?.iter().map(|c| c.eval(&sp)).collect()
}

/// Pointwise dual bracket of two `𝔤*`-valued functions:
/// `[ξ,η]_*^k = Σ_{i,j} ξ_i η_j D^k_{ij}`.
pub fn dual_bracket_fn(
    dual: &LieAlgebra,
    xi: &[MultiPoly],
    eta: &[MultiPoly],
) -> Result<Vec<MultiPoly>> {
    let d = dual.dim();
    let vars = xi[0].vars().clone();
    let mut out = vec![MultiPoly::zero(&vars); d];
    for i in 0..d {
        for j in 0..d {
            if xi[i].is_zero() || eta[j].is_zero() {
                continue;
            }
            let p = xi[i].checked_mul(&eta[j])?;
            for (k, o) in out.iter_mut().enumerate() {
                let c = dual.constant(i, j, k);
                if !c.is_zero() {
                    *o = o.checked_add(&p.scale(&Scalar::real(c.clone())))?;
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Check42Report {
    /// Per basis element `e_k`, the residual of
    /// `λ(e_k){f,g} − {λ(e_k)f, g} − {f, λ(e_k)g} − ⟨e_k, [ξ_f,ξ_g]_*⟩`.
    pub residuals: Vec<MultiPoly>,
}

impl Check42Report {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(MultiPoly::is_zero)
    }
}

pub fn check_42(
    pi: &PolyBivector,
    act: &InfinitesimalAction,
    dual: &LieAlgebra,
    f: &MultiPoly,
    g: &MultiPoly,
) -> Result<Check42Report> {
    if dual.dim() != act.algebra.dim() {
        return Err(Error::DimensionMismatch {
            expected: act.algebra.dim(),
            got: dual.dim(),
        });
    }
    let (xf, xg) = (xi_f(act, f)?, xi_f(act, g)?);
    let db = dual_bracket_fn(dual, &xf, &xg)?;
    let fg = bracket(pi, f, g)?;
    let mut residuals = Vec::new();
    for (k, v) in act.fields.iter().enumerate() {
        let lhs = v.apply(&fg)?;
        let rhs = bracket(pi, &v.apply(f)?, g)?
            .checked_add(&bracket(pi, f, &v.apply(g)?)?)?
            .checked_add(&db[k])?;
        residuals.push(lhs.checked_sub(&rhs)?);
    }
    Ok(Check42Report { residuals })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsotropyReport {
    /// Basis of `𝔤_p`.
    pub isotropy: Vec<Vec<String>>,
    /// Basis of `𝔤_p° ⊂ 𝔤*`.
    pub annihilator: Vec<Vec<String>>,
    pub abelian: bool,
    /// Pairs of annihilator basis vectors with a nonzero dual bracket.
    pub witnesses: Vec<(usize, usize, Vec<String>)>,
}

fn dual_bracket_vec(dual: &LieAlgebra, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let d = dual.dim();
    let mut out = vec![Rational::zero(); d];
    for i in 0..d {
        for j in 0..d {
            if a[i].is_zero() || b[j].is_zero() {
                continue;
            }
            let p = &a[i] * &b[j];
            for (k, o) in out.iter_mut().enumerate() {
                *o += &p * dual.constant(i, j, k);
            }
        }
    }
    out
}

pub(crate) fn isotropy_basis(
    act: &InfinitesimalAction,
    p: &[Rational],
) -> Result<Vec<Vec<Rational>>> {
    Ok(act.at(p)?.nullspace())
}

pub(crate) fn annihilator(dim: usize, sub: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    if sub.is_empty() {
        return Ok((0..dim).map(|t| unit(dim, t)).collect());
    }
    Ok(Matrix::from_rows(sub.to_vec())?.nullspace())
}

pub fn isotropy_and_annihilator(
    act: &InfinitesimalAction,
    dual: &LieAlgebra,
    p: &[Rational],
) -> Result<IsotropyReport> {
    let d = act.algebra.dim();
    let iso = isotropy_basis(act, p)?;
    let ann = annihilator(d, &iso)?;
    let mut witnesses = Vec::new();
    for i in 0..ann.len() {
        for j in i + 1..ann.len() {
            let b = dual_bracket_vec(dual, &ann[i], &ann[j]);
            if b.iter().any(|c| !c.is_zero()) {
                witnesses.push((i, j, show(&b)));
            }
        }
    }
    Ok(IsotropyReport {
        isotropy: iso.iter().map(|v| show(v)).collect(),
        annihilator: ann.iter().map(|v| show(v)).collect(),
        abelian: witnesses.is_empty(),
        witnesses,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentialReport {
    pub points: usize,
    /// `(point, basis index)` pairs where `λ(e_i)(p) ∉ Im π♯(p)`.
    pub failures: Vec<(Vec<String>, usize)>,
}

impl TangentialReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Solvability of `π♯(p)α = λ(e_i)(p)` at each point.
pub fn tangential_check(
    pi: &PolyBivector,
    act: &InfinitesimalAction,
    points: &[Vec<Rational>],
) -> Result<TangentialReport> {
    let mut failures = Vec::new();
    for p in points {
        // First-slot sharp: (π♯α)^j = Σ_i α_i π^{ij}, i.e. πᵀα.
        let m = pi.eval(&to_scalars(p))?.transpose();
        let lam = act.at(p)?;
        for i in 0..act.algebra.dim() {
            let v = to_scalars(&lam.col(i));
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            if m.solve(&v)?.is_none() {
                failures.push((show(p), i));
            }
        }
    }
    Ok(TangentialReport {
        points: points.len(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarSet;
    use crate::sampling::Sampler;
    use crate::scalar::{q, qf};

    fn plane(h: MultiPoly, lambda: Option<[Rational; 3]>) -> LinearPoissonAction {
        let vars = h.vars().clone();
        let pi = PolyBivector::from_entries(&vars, [(0, 1, h)]).unwrap();
        let r = lambda.map(|[a, b, c]| RMatrix::sl2_family(a, b, c));
        LinearPoissonAction::new(
            LieAlgebra::sl2(),
            LieAlgebra::sl2_matrices(),
            pi,
            r,
            GroupRelation::SpecialLinear,
        )
        .unwrap()
    }

    fn xs() -> (VarSet, MultiPoly, MultiPoly) {
        let v = VarSet::numbered("x", 2);
        let (a, b) = (MultiPoly::var(&v, 0), MultiPoly::var(&v, 1));
        (v, a, b)
    }

    #[test]
    fn printed_fundamental_fields() {
        let (v, x1, x2) = xs();
        let act = plane(MultiPoly::one(&v), None).infinitesimal().unwrap();
        let half = Scalar::frac(1, 2);
        assert_eq!(
            act.field(0).comps(),
            &[x1.scale(&half), x2.scale(&-half.clone())]
        );
        assert_eq!(
            act.field(1).comps(),
            &[x2.scale(&half), x1.scale(&-half.clone())]
        );
        assert_eq!(act.field(2).comps(), &[x2.scale(&half), x1.scale(&half)]);
        assert_eq!(act.homomorphism_sign().unwrap(), Some(-1));
    }

    #[test]
    fn zero_matrix_gives_zero_field() {
        let (v, _, _) = xs();
        let pi = PolyBivector::zero(&v);
        let a = LinearPoissonAction::new(
            LieAlgebra::abelian(1),
            vec![Matrix::zeros(2, 2)],
            pi,
            None,
            GroupRelation::General,
        )
        .unwrap();
        assert!(a.infinitesimal().unwrap().field(0).is_zero());
    }

    #[test]
    fn poisson_action_example() {
        let (v, x1, x2) = xs();
        let h = &MultiPoly::constant(&v, Scalar::int(3)) - &(&x1 * &x2);
        let a = plane(h.clone(), Some([q(0), q(2), q(0)]));
        let mut s = Sampler::seeded(5);
        let samples: Vec<_> = (0..30).map(|_| (s.sl2(4), s.point(2))).collect();
        assert!(check_poisson_action(&a, &samples).unwrap().passes());
        let ident = vec![(Matrix::identity(2), vec![q(2), qf(1, 3)])];
        assert!(check_poisson_action(&a, &ident).unwrap().passes());
        let bad = plane(&h + &x1, Some([q(0), q(2), q(0)]));
        assert!(!check_poisson_action(&bad, &samples).unwrap().passes());
        let one = plane(MultiPoly::one(&v), Some([q(0), q(2), q(0)]));
        assert!(!check_poisson_action(&one, &samples).unwrap().passes());
    }

    #[test]
    fn rejects_non_group_elements() {
        let (v, _, _) = xs();
        let a = plane(MultiPoly::one(&v), None);
        let g = Matrix::from_rows(vec![vec![q(2), q(0)], vec![q(0), q(1)]]).unwrap();
        assert!(matches!(
            check_poisson_action(&a, &[(g, vec![q(1), q(1)])]),
            Err(Error::NotInGroup(_))
        ));
    }

    #[test]
    fn preservation() {
        let (v, x1, x2) = xs();
        let h = &MultiPoly::constant(&v, Scalar::int(1)) - &(&x1 * &x2);
        let act = plane(h.clone(), None).infinitesimal().unwrap();
        let pi = PolyBivector::from_entries(&v, [(0, 1, h)]).unwrap();
        let rep = check_structure_preserved(&pi, &act).unwrap();
        assert!(rep.preserved_by(0));
        assert!(!rep.preserved());
        assert!(check_structure_preserved(&PolyBivector::zero(&v), &act)
            .unwrap()
            .preserved());
    }

    #[test]
    fn identity_42_on_example() {
        let (v, x1, x2) = xs();
        let h = &MultiPoly::constant(&v, Scalar::int(2)) - &(&x1 * &x2);
        let a = plane(h, Some([q(0), q(2), q(0)]));
        let act = a.infinitesimal().unwrap();
        let dual = crate::bialgebra::dual_algebra_from_r(a.r_matrix().unwrap()).unwrap();
        let fs = [x1.clone(), x2.clone(), &x1 * &x2];
        for f in &fs {
            for g in &fs {
                let rep = check_42(a.pi(), &act, &dual, f, g).unwrap();
                assert!(rep.holds(), "f={f} g={g}: {:?}", rep.residuals);
            }
        }
    }

    #[test]
    fn isotropy_example() {
        let (v, _, _) = xs();
        let a = plane(MultiPoly::one(&v), Some([q(0), q(2), q(0)]));
        let act = a.infinitesimal().unwrap();
        let dual = crate::bialgebra::dual_algebra_from_r(a.r_matrix().unwrap()).unwrap();
        let rep = isotropy_and_annihilator(&act, &dual, &[q(1), q(0)]).unwrap();
        assert_eq!(rep.isotropy.len(), 1);
        assert!(crate::linalg::same_span(
            3,
            &[vec![q(0), q(1), q(1)]],
            &isotropy_basis(&act, &[q(1), q(0)]).unwrap()
        )
        .unwrap());
        assert!(!rep.abelian);
        let origin = isotropy_and_annihilator(&act, &dual, &[q(0), q(0)]).unwrap();
        assert!(origin.annihilator.is_empty() && origin.abelian);
        let trivial =
            isotropy_and_annihilator(&act, &LieAlgebra::abelian(3), &[q(1), q(0)]).unwrap();
        assert!(trivial.abelian);
    }

    #[test]
    fn tangency() {
        let (v, x1, x2) = xs();
        let h = &(&x1.pow(2) + &x2.pow(2)) + &MultiPoly::one(&v);
        let a = plane(h, None);
        let act = a.infinitesimal().unwrap();
        let mut s = Sampler::seeded(1);
        let pts: Vec<_> = (0..50).map(|_| s.point(2)).collect();
        assert!(tangential_check(a.pi(), &act, &pts).unwrap().passes());
        let h = &(&x1.pow(2) + &x2.pow(2)) - &MultiPoly::one(&v);
        let b = plane(h, None);
        let rep =
            tangential_check(b.pi(), &act, &[vec![qf(3, 5), qf(4, 5)], vec![q(0), q(0)]]).unwrap();
        assert!(!rep.passes());
        assert!(rep.failures.iter().all(|(p, _)| p[0] == "3/5"));
    }

    #[test]
    fn adjoint_matrices() {
        let (v, _, _) = xs();
        let a = plane(MultiPoly::one(&v), None);
        let mut s = Sampler::seeded(2);
        let g = s.sl2(3);
        let h = s.sl2(3);
        let lhs = a.adjoint_of(&g.mul(&h).unwrap()).unwrap();
        let rhs = a
            .adjoint_of(&g)
            .unwrap()
            .mul(&a.adjoint_of(&h).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(
            a.coadjoint_of(&Matrix::identity(2)).unwrap(),
            Matrix::identity(3)
        );
    }
}
