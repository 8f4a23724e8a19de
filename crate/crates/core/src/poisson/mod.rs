//! Poisson calculus for polynomial bivectors.
//!
//! Conventions: `π♯` contracts the first slot, `(π♯α)^j = Σ_i α_i π^{ij}`,
//! so `{f,g} = ⟨π♯df, dg⟩ = Σ π^{ij} ∂_i f ∂_j g` and `π = ∂x∧∂y` gives
//! `{x,y} = 1`. Hamiltonian fields are `X_f = π♯df = {f, ·}`.

mod fields;
mod flow;
mod multivector;
mod rank;

pub use fields::{OneForm, PolyBivector, ScalarField, VectorField};
pub use flow::{hamiltonian_flow, FlowOptions, FlowSample, Trajectory};
pub use multivector::{jacobi_check, schouten, JacobiCheck, Multivector};
pub use rank::{
    r_k, rank_at, rank_from_minors, stratify_sample, StratificationReport, StratifyOptions,
};

use crate::lie::LieAlgebra;
use crate::linalg::Matrix;
use crate::poly::{MultiPoly, VarSet};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// `(π♯α)^j = Σ_i α_i π^{ij}`.
pub fn sharp(pi: &PolyBivector, a: &OneForm) -> Result<VectorField> {
    let n = pi.dim();
    if a.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.dim(),
        });
    }
    let mut comps = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = MultiPoly::zero(pi.vars());
        for i in 0..n {
            let e = pi.entry(i, j);
            if !e.is_zero() && !a.comp(i).is_zero() {
                acc = acc.checked_add(&a.comp(i).checked_mul(e)?)?;
            }
        }
        comps.push(acc);
    }
    VectorField::new(pi.vars(), comps)
}

/// `{f,g} = Σ π^{ij} ∂_i f ∂_j g`.
pub fn bracket(pi: &PolyBivector, f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    let f = f.with_vars(pi.vars())?;
    let g = g.with_vars(pi.vars())?;
    pi.pair(&OneForm::differential(&f), &OneForm::differential(&g))
}

/// Symbolic bracket of scalar fields; numeric fields are rejected.
pub fn bracket_fn(pi: &PolyBivector, f: &ScalarField, g: &ScalarField) -> Result<ScalarField> {
    Ok(ScalarField::Exact(bracket(
        pi,
        f.as_exact()?,
        g.as_exact()?,
    )?))
}

/// Pointwise bracket in floating point; works for numeric fields too.
pub fn bracket_at(pi: &PolyBivector, f: &ScalarField, g: &ScalarField, x: &[f64]) -> Result<f64> {
    let n = pi.dim();
    let p = pi.eval_f64(x)?;
    let df = f.gradient_f64(x)?;
    let dg = g.gradient_f64(x)?;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += p[i * n + j] * df[i] * dg[j];
        }
    }
    Ok(acc)
}

/// `X_f = π♯df`.
pub fn hamiltonian_field(pi: &PolyBivector, f: &MultiPoly) -> Result<VectorField> {
    sharp(pi, &OneForm::differential(&f.with_vars(pi.vars())?))
}

/// True iff `X_f ≡ 0`.
pub fn casimir_check(pi: &PolyBivector, f: &MultiPoly) -> Result<bool> {
    Ok(hamiltonian_field(pi, f)?.is_zero())
}

/// Basis of the homogeneous degree-`d` Casimirs, by a linear solve on the
/// coefficients of a generic polynomial.
pub fn polynomial_casimirs(pi: &PolyBivector, d: u32) -> Result<Vec<MultiPoly>> {
    let vars = pi.vars();
    let monos = monomials(vars.len(), d);
    let fields: Vec<VectorField> = monos
        .iter()
        .map(|e| hamiltonian_field(pi, &MultiPoly::monomial(vars, e.clone(), Scalar::from(1))?))
        .collect::<Result<_>>()?;
    // Each (component, monomial) of X_f is one linear equation.
    let mut keys = std::collections::BTreeSet::new();
    for v in &fields {
        for (j, c) in v.comps().iter().enumerate() {
            for (e, _) in c.terms() {
                keys.insert((j, e.clone()));
            }
        }
    }
    let keys: Vec<_> = keys.into_iter().collect();
    let mut m = Matrix::zeros(keys.len(), monos.len());
    for (col, v) in fields.iter().enumerate() {
        for (row, (j, e)) in keys.iter().enumerate() {
            m[(row, col)] = v.comp(*j).coeff(e);
        }
    }
    Ok(m.nullspace()
        .into_iter()
        .map(|coeffs| {
            MultiPoly::from_terms(vars, monos.iter().cloned().zip(coeffs)).expect("valid exponents")
        })
        .collect())
}

/// Exponent vectors of total degree exactly `d` in `n` variables.
pub(crate) fn monomials(n: usize, d: u32) -> Vec<Vec<i32>> {
    fn rec(n: usize, d: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() == n - 1 {
            cur.push(d);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=d).rev() {
            cur.push(k);
            rec(n, d - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d as i32, &mut Vec::new(), &mut out);
    out
}

/// Lie–Poisson bivector on `g*`: `π^{ij}(μ) = Σ_k C^k_{ij} μ_k`, in
/// variables `mu1..mun`.
pub fn lie_poisson(l: &LieAlgebra) -> PolyBivector {
    lie_poisson_in(l, &VarSet::numbered("mu", l.dim())).expect("matching dimension")
}

pub fn lie_poisson_in(l: &LieAlgebra, vars: &VarSet) -> Result<PolyBivector> {
    let n = l.dim();
    if vars.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: vars.len(),
        });
    }
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let coeffs: Vec<Scalar> = (0..n)
                .map(|k| Scalar::real(l.constant(i, j, k).clone()))
                .collect();
            entries.push((i, j, MultiPoly::linear(vars, &coeffs)));
        }
    }
    PolyBivector::from_entries(vars, entries)
}

/// `(L_V π)^{ij} = V(π^{ij}) - π^{lj} ∂_l V^i - π^{il} ∂_l V^j`.
pub fn lie_derivative_bivector(pi: &PolyBivector, v: &VectorField) -> Result<PolyBivector> {
    let n = pi.dim();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut acc = v.apply(pi.entry(i, j))?;
            for l in 0..n {
                let a = pi.entry(l, j);
                if !a.is_zero() {
                    acc = acc.checked_sub(&a.checked_mul(&v.comp(i).partial(l))?)?;
                }
                let b = pi.entry(i, l);
                if !b.is_zero() {
                    acc = acc.checked_sub(&b.checked_mul(&v.comp(j).partial(l))?)?;
                }
            }
            entries.push((i, j, acc));
        }
    }
    PolyBivector::from_entries(pi.vars(), entries)
}

/// How the textbook-displayed one-form bracket
/// `dπ(α,β) − ⟨π♯α, dβ⟩ + ⟨π♯β, dα⟩` relates to the standard one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DisplayedForm {
    /// Agrees under the first-slot sharp used here.
    Verbatim,
    /// Agrees only when `♯` contracts the second slot instead.
    TransposedSharp,
    Neither,
}

#[derive(Clone, Debug)]
pub struct OneFormBracket {
    /// `L_{π♯α}β − L_{π♯β}α − dπ(α,β)`.
    pub value: OneForm,
    /// `dπ(α,β) + i_{π♯α}dβ − i_{π♯β}dα`, asserted equal to `value`.
    pub contracted_agrees: bool,
    pub displayed: DisplayedForm,
}

fn transpose(pi: &PolyBivector) -> PolyBivector {
    pi.scale(&Scalar::int(-1))
}

/// Bracket of one-forms with `{df, dg} = d{f,g}`.
pub fn one_form_bracket(pi: &PolyBivector, a: &OneForm, b: &OneForm) -> Result<OneFormBracket> {
    let pa = sharp(pi, a)?;
    let pb = sharp(pi, b)?;
    let dpab = OneForm::differential(&pi.pair(a, b)?);
    let value = b
        .lie_derivative(&pa)?
        .sub(&a.lie_derivative(&pb)?)?
        .sub(&dpab)?;
    let contracted = dpab.add(&b.contract_d(&pa)?)?.sub(&a.contract_d(&pb)?)?;

    let displayed_with = |sh: &dyn Fn(&OneForm) -> Result<VectorField>| -> Result<OneForm> {
        dpab.sub(&b.contract_d(&sh(a)?)?)?
            .add(&a.contract_d(&sh(b)?)?)
    };
    let verbatim = displayed_with(&|f| sharp(pi, f))?;
    let pt = transpose(pi);
    // Under the second-slot sharp, π(α,β) and {·,·} keep their meaning but
    // ♯ becomes sharp of the transpose.
    let transposed = displayed_with(&|f| sharp(&pt, f))?;
    let displayed = if verbatim == value {
        DisplayedForm::Verbatim
    } else if transposed == value {
        DisplayedForm::TransposedSharp
    } else {
        DisplayedForm::Neither
    };
    Ok(OneFormBracket {
        contracted_agrees: contracted == value,
        value,
        displayed,
    })
}

/// Both sides of `⟨V,{α,β}⟩ = (L_Vπ)(α,β) + ⟨π♯α, d i_Vβ⟩ − ⟨π♯β, d i_Vα⟩`,
/// which is the form the identity takes with first-slot sharp.
#[derive(Clone, Debug)]
pub struct LieDerivativeIdentity {
    pub lhs: MultiPoly,
    pub rhs: MultiPoly,
    /// `lhs − rhs`.
    pub residual: MultiPoly,
    /// Residual of the sign pattern with interior terms `−, +`.
    pub displayed_residual: MultiPoly,
}

impl LieDerivativeIdentity {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn lie_derivative_identity(
    pi: &PolyBivector,
    v: &VectorField,
    a: &OneForm,
    b: &OneForm,
) -> Result<LieDerivativeIdentity> {
    let lhs = v.pair(&one_form_bracket(pi, a, b)?.value)?;
    let lv = lie_derivative_bivector(pi, v)?.pair(a, b)?;
    let t1 = sharp(pi, a)?.pair(&OneForm::differential(&v.pair(b)?))?;
    let t2 = sharp(pi, b)?.pair(&OneForm::differential(&v.pair(a)?))?;
    let rhs = lv.checked_add(&t1)?.checked_sub(&t2)?;
    let displayed = lv.checked_sub(&t1)?.checked_add(&t2)?;
    Ok(LieDerivativeIdentity {
        residual: lhs.checked_sub(&rhs)?,
        displayed_residual: lhs.checked_sub(&displayed)?,
        lhs,
        rhs,
    })
}
