//! Momentum maps for a trivial group structure (`G* = 𝔤*`) and the
//! cocycles measuring their failure to be equivariant.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::{
    annihilator, isotropy_basis, show, to_scalars, unit, InfinitesimalAction, LinearPoissonAction,
};
use crate::bialgebra::coad;
use crate::lie::LieAlgebra;
use crate::linalg::{rank_f64, same_span, span_rank, Matrix};
use crate::poisson::{
    bracket, hamiltonian_field, hamiltonian_flow, lie_poisson, FlowOptions, OneForm, PolyBivector,
    ScalarField,
};
use crate::poly::{MultiPoly, VarSet};
use crate::sampling::Sampler;
use crate::scalar::{rational_to_f64, Rational, Scalar};
use crate::{Error, Result};

/// Components `m(e_i)` of a map `P → 𝔤*`.
#[derive(Clone, Debug)]
pub struct MomentumMap {
    comps: Vec<ScalarField>,
}

impl MomentumMap {
    pub fn new(comps: Vec<ScalarField>) -> Self {
        MomentumMap { comps }
    }

    pub fn exact(comps: Vec<MultiPoly>) -> Self {
        MomentumMap {
            comps: comps.into_iter().map(ScalarField::Exact).collect(),
        }
    }

    /// `m(μ) = μ` on `𝔤*` in the given coordinates.
    pub fn identity(vars: &VarSet) -> Self {
        Self::exact((0..vars.len()).map(|i| MultiPoly::var(vars, i)).collect())
    }

    /// `m + μ₀`.
    pub fn shifted(&self, mu0: &[Rational]) -> Result<Self> {
        let comps = self.exact_comps()?;
        Ok(Self::exact(
            comps
                .iter()
                .zip(mu0)
                .map(|(c, s)| c + &MultiPoly::constant(c.vars(), Scalar::real(s.clone())))
                .collect(),
        ))
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn is_exact(&self) -> bool {
        self.comps
            .iter()
            .all(|c| matches!(c, ScalarField::Exact(_)))
    }

    pub fn exact_comps(&self) -> Result<Vec<MultiPoly>> {
        self.comps.iter().map(|c| c.as_exact().cloned()).collect()
    }

    /// `m(X) = Σ X^k m_k`.
    pub fn pair(&self, x: &[Rational]) -> Result<MultiPoly> {
        let comps = self.exact_comps()?;
        let mut acc = MultiPoly::zero(comps[0].vars());
        for (c, k) in x.iter().zip(&comps) {
            if !c.is_zero() {
                acc = acc.checked_add(&k.scale(&Scalar::real(c.clone())))?;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, p: &[Rational]) -> Result<Vec<Rational>> {
        let sp = to_scalars(p);
        self.exact_comps()?
            .iter()
            .map(|c| {
                let v = c.eval(&sp)?;
                if v.is_real() {
                    Ok(v.re)
                } else {
                    Err(Error::Evaluation("complex momentum value".into()))
                }
            })
            .collect()
    }
}

fn check_dims(act: &InfinitesimalAction, m: &MomentumMap) -> Result<()> {
    if m.dim() != act.algebra().dim() {
        return Err(Error::DimensionMismatch {
            expected: act.algebra().dim(),
            got: m.dim(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentumReport {
    pub symbolic: bool,
    /// Symbolic mode: `(i, λ(e_i) + X_{m(e_i)})` where nonzero.
    pub residuals: Vec<(usize, String)>,
    /// Pointwise mode: largest `|λ(e_i)(p) + π♯dm_i(p)|_∞`.
    pub max_residual: f64,
    pub passes: bool,
}

/// `λ(e_i) = −X_{m(e_i)}`: symbolically when every component is exact,
/// otherwise at `points` with tolerance `tol`.
pub fn momentum_check(
    pi: &PolyBivector,
    act: &InfinitesimalAction,
    m: &MomentumMap,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<MomentumReport> {
    check_dims(act, m)?;
    if m.is_exact() {
        let mut residuals = Vec::new();
        for (i, c) in m.exact_comps()?.iter().enumerate() {
            let r = act.field(i).add(&hamiltonian_field(pi, c)?)?;
            if !r.is_zero() {
                residuals.push((
                    i,
                    r.comps()
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(", "),
                ));
            }
        }
        let passes = residuals.is_empty();
        return Ok(MomentumReport {
            symbolic: true,
            residuals,
            max_residual: 0.0,
            passes,
        });
    }
    let mut worst = 0.0f64;
    for p in points {
        let pim = pi.eval_f64(p)?;
        let n = pi.dim();
        for (i, c) in m.comps.iter().enumerate() {
            let grad = c.gradient_f64(p)?;
            for j in 0..n {
                let lam = act.field(i).comp(j).to_f64()?.eval(p);
                let xm: f64 = (0..n).map(|k| grad[k] * pim[k * n + j]).sum();
                worst = worst.max((lam + xm).abs());
            }
        }
    }
    Ok(MomentumReport {
        symbolic: false,
        residuals: Vec::new(),
        max_residual: worst,
        passes: worst < tol,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaleFit {
    /// Best `α` for `m = α·template`, fitted at the first point.
    pub alpha: Option<f64>,
    /// Residual of `λ(e_i) = −X_{α·template}` over all points, relative to `1 + |λ|`.
    pub max_residual: f64,
    pub passes: bool,
}

/// Fits the normalization of a one-parameter family `α·template` for basis
/// element `i` at `points[0]` and tests it on every point.
pub fn fit_momentum_scale(
    pi: &PolyBivector,
    act: &InfinitesimalAction,
    i: usize,
    template: &ScalarField,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<ScaleFit> {
    let n = pi.dim();
    let vecs = |p: &[f64]| -> Result<(Vec<f64>, Vec<f64>)> {
        let pim = pi.eval_f64(p)?;
        let grad = template.gradient_f64(p)?;
        let lam: Vec<f64> = (0..n)
            .map(|j| Ok(act.field(i).comp(j).to_f64()?.eval(p)))
            .collect::<Result<_>>()?;
        let w: Vec<f64> = (0..n)
            .map(|j| -(0..n).map(|k| grad[k] * pim[k * n + j]).sum::<f64>())
            .collect();
        Ok((lam, w))
    };
    let Some(p0) = points.first() else {
        return Err(Error::Precondition("no sample points".into()));
    };
    let (v, w) = vecs(p0)?;
    let ww: f64 = w.iter().map(|x| x * x).sum();
    if ww == 0.0 {
        return Ok(ScaleFit {
            alpha: None,
            max_residual: f64::INFINITY,
            passes: false,
        });
    }
    let alpha = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / ww;
    let mut worst = 0.0f64;
    for p in points {
        let (v, w) = vecs(p)?;
        let scale = 1.0 + v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        for (a, b) in v.iter().zip(&w) {
            worst = worst.max((a - alpha * b).abs() / scale);
        }
    }
    Ok(ScaleFit {
        alpha: Some(alpha),
        max_residual: worst,
        passes: worst < tol,
    })
}

/// `Γ_{e_i,e_j}` for `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaCochain {
    dim: usize,
    entries: BTreeMap<(usize, usize), MultiPoly>,
    vars: VarSet,
    /// `m([X,Y]) − {m(X),m(Y)}` agrees with `m*(π_{𝔤*}(X,Y)) − π_P(dm(X), dm(Y))`.
    pub routes_agree: bool,
}

impl GammaCochain {
    pub fn from_entries(
        dim: usize,
        vars: &VarSet,
        entries: BTreeMap<(usize, usize), MultiPoly>,
    ) -> Self {
        GammaCochain {
            dim,
            entries,
            vars: vars.clone(),
            routes_agree: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> MultiPoly {
        let z = || MultiPoly::zero(&self.vars);
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.entries.get(&(i, j)).cloned().unwrap_or_else(z),
            std::cmp::Ordering::Greater => -&self.entries.get(&(j, i)).cloned().unwrap_or_else(z),
            std::cmp::Ordering::Equal => z(),
        }
    }

    /// `Γ(X, e_j)` for a coefficient vector `X`.
    pub fn entry_vec(&self, x: &[Rational], j: usize) -> MultiPoly {
        let mut acc = MultiPoly::zero(&self.vars);
        for (k, c) in x.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &self.entry(k, j).scale(&Scalar::real(c.clone()));
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(MultiPoly::is_zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &MultiPoly)> {
        self.entries.iter()
    }
}

pub fn gamma(pi: &PolyBivector, l: &LieAlgebra, m: &MomentumMap) -> Result<GammaCochain> {
    let d = l.dim();
    if m.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: m.dim(),
        });
    }
    let comps: Vec<MultiPoly> = m
        .exact_comps()?
        .iter()
        .map(|c| c.with_vars(pi.vars()))
        .collect::<Result<_>>()?;
    let lp = lie_poisson(l);
    let mut entries = BTreeMap::new();
    let mut agree = true;
    for i in 0..d {
        for j in i + 1..d {
            let g1 = m
                .pair(&l.bracket_basis(i, j))?
                .with_vars(pi.vars())?
                .checked_sub(&bracket(pi, &comps[i], &comps[j])?)?;
            let pulled = lp.entry(i, j).compose(&comps)?;
            let paired = pi.pair(
                &OneForm::differential(&comps[i]),
                &OneForm::differential(&comps[j]),
            )?;
            let g2 = pulled.with_vars(pi.vars())?.checked_sub(&paired)?;
            agree &= g1 == g2;
            entries.insert((i, j), g1);
        }
    }
    Ok(GammaCochain {
        dim: d,
        entries,
        vars: pi.vars().clone(),
        routes_agree: agree,
    })
}

#[derive(Clone, Debug)]
pub struct ClassSolution {
    /// `Γ = ⟨ν, [·,·]⟩` has a solution `ν`.
    pub solvable: bool,
    pub correction: Option<Vec<MultiPoly>>,
}

/// Solves `Σ_k C^k_{ij} ν_k = Γ_{ij}` monomial by monomial.
pub fn solve_gamma_class(l: &LieAlgebra, gamma: &GammaCochain) -> Result<ClassSolution> {
    let d = l.dim();
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
        .collect();
    let a = Matrix::from_rows(
        pairs
            .iter()
            .map(|&(i, j)| {
                (0..d)
                    .map(|k| Scalar::real(l.constant(i, j, k).clone()))
                    .collect()
            })
            .collect(),
    )?;
    let mut exps: Vec<Vec<i32>> = gamma
        .entries
        .values()
        .flat_map(|p| p.terms().map(|(e, _)| e.clone()))
        .collect();
    exps.sort();
    exps.dedup();
    let mut nu = vec![MultiPoly::zero(&gamma.vars); d];
    for e in exps {
        let b: Vec<Scalar> = pairs
            .iter()
            .map(|&(i, j)| gamma.entry(i, j).coeff(&e))
            .collect();
        if a.rows() == 0 {
            break;
        }
        match a.solve(&b)? {
            None => {
                return Ok(ClassSolution {
                    solvable: false,
                    correction: None,
                })
            }
            Some(x) => {
                for (k, c) in x.into_iter().enumerate() {
                    nu[k] = &nu[k] + &MultiPoly::monomial(&gamma.vars, e.clone(), c)?;
                }
            }
        }
    }
    Ok(ClassSolution {
        solvable: true,
        correction: Some(nu),
    })
}

#[derive(Clone, Debug)]
pub struct GammaChecks {
    /// Entries `(i, j)` of `Γ` that are not Casimirs.
    pub non_casimir: Vec<(usize, usize)>,
    /// Nonzero `Σ_cyc ({m([X,Y]), m(Z)} − m([[X,Y],Z]))` on basis triples.
    pub d_star_displayed: Vec<((usize, usize, usize), MultiPoly)>,
    /// Nonzero `−Σ_cyc Γ([X,Y],Z)` on basis triples.
    pub d_star_cochain: Vec<((usize, usize, usize), MultiPoly)>,
    pub routes_agree: bool,
    pub class: ClassSolution,
    /// `Γ` recomputed for `m − ν` vanishes.
    pub correction_equivariant: Option<bool>,
}

impl GammaChecks {
    pub fn all_casimir(&self) -> bool {
        self.non_casimir.is_empty()
    }

    pub fn closed(&self) -> bool {
        self.d_star_displayed.is_empty() && self.d_star_cochain.is_empty()
    }
}

pub fn gamma_checks(
    pi: &PolyBivector,
    l: &LieAlgebra,
    m: &MomentumMap,
    g: &GammaCochain,
) -> Result<GammaChecks> {
    let d = l.dim();
    let non_casimir = g
        .entries
        .iter()
        .filter_map(|(k, p)| match crate::poisson::casimir_check(pi, p) {
            Ok(true) => None,
            _ => Some(*k),
        })
        .collect();
    let comps: Vec<MultiPoly> = m
        .exact_comps()?
        .iter()
        .map(|c| c.with_vars(pi.vars()))
        .collect::<Result<_>>()?;
    let mut displayed = Vec::new();
    let mut cochain = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                let mut a = MultiPoly::zero(pi.vars());
                let mut b = MultiPoly::zero(pi.vars());
                for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                    let xy = l.bracket_basis(x, y);
                    let mxy = m.pair(&xy)?.with_vars(pi.vars())?;
                    let xyz = l.bracket(&xy, &unit(d, z))?;
                    a = a
                        .checked_add(&bracket(pi, &mxy, &comps[z])?)?
                        .checked_sub(&m.pair(&xyz)?.with_vars(pi.vars())?)?;
                    b = b.checked_sub(&g.entry_vec(&xy, z))?;
                }
                if !a.is_zero() {
                    displayed.push(((i, j, k), a.clone()));
                }
                if !b.is_zero() {
                    cochain.push(((i, j, k), b.clone()));
                }
            }
        }
    }
    let routes_agree = g.routes_agree
        && displayed
            .iter()
            .map(|(t, _)| *t)
            .eq(cochain.iter().map(|(t, _)| *t));
    let class = solve_gamma_class(l, g)?;
    let correction_equivariant = match &class.correction {
        Some(nu) => {
            let corrected: Vec<MultiPoly> = comps
                .iter()
                .zip(nu)
                .map(|(c, n)| c.checked_sub(n))
                .collect::<Result<_>>()?;
            Some(gamma(pi, l, &MomentumMap::exact(corrected))?.is_zero())
        }
        None => None,
    };
    Ok(GammaChecks {
        non_casimir,
        d_star_displayed: displayed,
        d_star_cochain: cochain,
        routes_agree,
        class,
        correction_equivariant,
    })
}

/// `Σ(g,x) = m(gx) − Coad(g)·m(x)`.
pub fn sigma_psi(
    a: &LinearPoissonAction,
    m: &MomentumMap,
    g: &Matrix<Rational>,
    x: &[Rational],
) -> Result<Vec<Rational>> {
    a.relation().check(g)?;
    let gx = g.mul_vec(x)?;
    let c = a.coadjoint_of(g)?;
    let mg = m.eval(&gx)?;
    let cm = c.mul_vec(&m.eval(x)?)?;
    Ok(mg.into_iter().zip(cm).map(|(p, q)| p - q).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiReport {
    pub samples: usize,
    /// Samples where `Σ(gh,x) ≠ Σ(g,hx) + Coad(g)Σ(h,x)`.
    pub cocycle_failures: usize,
    /// Samples where `Σ(gh,x) ≠ Σ(g,x) + Coad(g)Σ(h,x)`, i.e. `Ψ` depends on `x`.
    pub x_dependent: usize,
    /// `Σ(e,x) = 0` at every sampled `x`.
    pub unit_trivial: bool,
    /// `Σ ≡ 0` on all samples.
    pub equivariant: bool,
}

impl PsiReport {
    pub fn cocycle_holds(&self) -> bool {
        self.cocycle_failures == 0 && self.x_dependent == 0 && self.unit_trivial
    }
}

pub fn psi_cocycle_check(
    a: &LinearPoissonAction,
    m: &MomentumMap,
    samples: &[(Matrix<Rational>, Matrix<Rational>, Vec<Rational>)],
) -> Result<PsiReport> {
    let mut cocycle_failures = 0;
    let mut x_dependent = 0;
    let mut unit_trivial = true;
    let mut equivariant = true;
    let sub = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    };
    for (g, h, x) in samples {
        let gh = g.mul(h)?;
        let s_gh = sigma_psi(a, m, &gh, x)?;
        let s_h = sigma_psi(a, m, h, x)?;
        let s_g = sigma_psi(a, m, g, x)?;
        let cs_h = a.coadjoint_of(g)?.mul_vec(&s_h)?;
        let s_g_hx = sigma_psi(a, m, g, &h.mul_vec(x)?)?;
        if sub(&sub(&s_gh, &s_g_hx), &cs_h)
            .iter()
            .any(|v| !v.is_zero())
        {
            cocycle_failures += 1;
        }
        if sub(&sub(&s_gh, &s_g), &cs_h).iter().any(|v| !v.is_zero()) {
            x_dependent += 1;
        }
        equivariant &= s_g.iter().all(Zero::is_zero);
        let id = Matrix::identity(g.rows());
        unit_trivial &= sigma_psi(a, m, &id, x)?.iter().all(Zero::is_zero);
    }
    Ok(PsiReport {
        samples: samples.len(),
        cocycle_failures,
        x_dependent,
        unit_trivial,
        equivariant,
    })
}

/// Largest change of `Σ(g,·)` along the Hamiltonian flow of `f` from `x0`.
pub fn sigma_flow_drift(
    a: &LinearPoissonAction,
    m: &MomentumMap,
    g: &Matrix<Rational>,
    f: &MultiPoly,
    x0: &[f64],
    opts: &FlowOptions,
) -> Result<f64> {
    a.relation().check(g)?;
    let comps: Vec<_> = m
        .exact_comps()?
        .iter()
        .map(|c| c.to_f64())
        .collect::<Result<_>>()?;
    let gf: Vec<Vec<f64>> = (0..g.rows())
        .map(|r| g.row(r).iter().map(rational_to_f64).collect())
        .collect();
    let c = a.coadjoint_of(g)?;
    let cf: Vec<Vec<f64>> = (0..c.rows())
        .map(|r| c.row(r).iter().map(rational_to_f64).collect())
        .collect();
    let sigma = |x: &[f64]| -> Vec<f64> {
        let gx: Vec<f64> = gf
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect();
        let mx: Vec<f64> = comps.iter().map(|p| p.eval(x)).collect();
        comps
            .iter()
            .enumerate()
            .map(|(k, p)| p.eval(&gx) - cf[k].iter().zip(&mx).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    };
    let opts = FlowOptions {
        track_rank: false,
        ..opts.clone()
    };
    let tr = hamiltonian_flow(a.pi(), f, &[], x0, &opts)?;
    let s0 = sigma(x0);
    let mut worst = 0.0f64;
    for s in &tr.samples {
        for (a, b) in sigma(&s.x).iter().zip(&s0) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelImageReport {
    pub kernel_dim: usize,
    pub orthogonal_dim: usize,
    /// `ker m_* = (T_p O_p)^ω`.
    pub kernel_matches: bool,
    pub image_dim: usize,
    pub annihilator_dim: usize,
    /// `Im m_* = 𝔤_p°`.
    pub image_matches: bool,
}

impl KernelImageReport {
    pub fn holds(&self) -> bool {
        self.kernel_matches && self.image_matches
    }
}

/// Compares `ker m_*` with the symplectic orthogonal of the orbit and
/// `Im m_*` with the annihilator of the isotropy algebra at a symplectic point.
///
/// `ker J = V^ω` is tested as `rowspace(J·π) = span V`, and
/// `Im J = 𝔤_p°` as `colspace J = rowspace M` where `M` has columns `λ(e_i)(p)`.
pub fn momentum_kernel_image(
    pi: &PolyBivector,
    act: &InfinitesimalAction,
    m: &MomentumMap,
    p: &[Rational],
) -> Result<KernelImageReport> {
    check_dims(act, m)?;
    let n = pi.dim();
    let d = act.algebra().dim();
    let pim = pi.eval(&to_scalars(p))?;
    if pim.rank() != n {
        return Err(Error::Precondition(format!(
            "π is degenerate at {:?}",
            show(p)
        )));
    }
    let lam = act.at(p)?;
    let v_cols: Vec<Vec<Rational>> = (0..d).map(|i| lam.col(i)).collect();
    let m_rows: Vec<Vec<Rational>> = (0..n).map(|r| lam.row(r).to_vec()).collect();

    if m.is_exact() {
        let sp = to_scalars(p);
        let real = |s: Scalar| {
            if s.is_real() {
                Ok(s.re)
            } else {
                Err(Error::Evaluation("complex derivative".into()))
            }
        };
        let j_rows: Vec<Vec<Rational>> = m
            .exact_comps()?
            .iter()
            .map(|c| {
                c.with_vars(pi.vars())?
                    .gradient()
                    .iter()
                    .map(|g| real(g.eval(&sp)?))
                    .collect()
            })
            .collect::<Result<_>>()?;
        let jm = Matrix::from_rows(j_rows.clone())?;
        let pr = pim.map(|s| s.re.clone());
        let jpi: Vec<Vec<Rational>> = (0..d)
            .map(|r| jm.mul(&pr).map(|x| x.row(r).to_vec()))
            .collect::<Result<_>>()?;
        let j_cols: Vec<Vec<Rational>> = (0..n).map(|c| jm.col(c)).collect();
        let rank_j = span_rank(n, &j_rows)?;
        let orbit = span_rank(n, &v_cols)?;
        let ann = annihilator(d, &isotropy_basis(act, p)?)?;
        return Ok(KernelImageReport {
            kernel_dim: n - rank_j,
            orthogonal_dim: n - orbit,
            kernel_matches: same_span(n, &jpi, &v_cols)?,
            image_dim: rank_j,
            annihilator_dim: ann.len(),
            image_matches: same_span(d, &j_cols, &m_rows)?,
        });
    }

    // Finite-difference Jacobian with a relative singular-value threshold.
    let pf: Vec<f64> = p.iter().map(rational_to_f64).collect();
    let j: Vec<Vec<f64>> = m
        .comps
        .iter()
        .map(|c| c.gradient_f64(&pf))
        .collect::<Result<_>>()?;
    let pi_f = pi.eval_f64(&pf)?;
    let vf: Vec<Vec<f64>> = v_cols
        .iter()
        .map(|v| v.iter().map(rational_to_f64).collect())
        .collect();
    let mf: Vec<Vec<f64>> = m_rows
        .iter()
        .map(|v| v.iter().map(rational_to_f64).collect())
        .collect();
    let jpi: Vec<Vec<f64>> = j
        .iter()
        .map(|row| {
            (0..n)
                .map(|c| (0..n).map(|k| row[k] * pi_f[k * n + c]).sum())
                .collect()
        })
        .collect();
    let j_cols: Vec<Vec<f64>> = (0..n)
        .map(|c| j.iter().map(|row| row[c]).collect())
        .collect();
    let rk = |rows: &[Vec<f64>], width: usize| -> usize {
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        rank_f64(rows.len(), width, &flat, 1e-8)
    };
    let same = |a: &[Vec<f64>], b: &[Vec<f64>], width: usize| {
        let both: Vec<Vec<f64>> = a.iter().chain(b).cloned().collect();
        let r = rk(&both, width);
        rk(a, width) == r && rk(b, width) == r
    };
    let rank_j = rk(&j, n);
    let orbit = rk(&vf, n);
    let ann = annihilator(d, &isotropy_basis(act, p)?)?;
    Ok(KernelImageReport {
        kernel_dim: n - rank_j,
        orthogonal_dim: n - orbit,
        kernel_matches: same(&jpi, &vf, n),
        image_dim: rank_j,
        annihilator_dim: ann.len(),
        image_matches: same(&j_cols, &mf, d),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop52Report {
    pub u: Vec<String>,
    pub isotropy_u_dim: usize,
    pub isotropy_p_dim: usize,
    /// `[X,Y] ∈ 𝔤_p` for all basis pairs of `𝔤_u`.
    pub holds: bool,
    pub violations: Vec<(usize, usize)>,
    /// No sampled neighbour has a smaller coadjoint isotropy; `None` without neighbours.
    pub locally_minimal: Option<bool>,
}

fn coad_isotropy(l: &LieAlgebra, u: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    let d = l.dim();
    let cols: Vec<Vec<Rational>> = (0..d).map(|i| coad(l, &unit(d, i), u)).collect();
    Ok(Matrix::from_cols(d, &cols)?.nullspace())
}

/// `[𝔤_u, 𝔤_u] ⊂ 𝔤_p` with `u = m(p)`. `neighbours` random points near `p`
/// probe local minimality of `dim 𝔤_{m(·)}`.
pub fn check_prop52(
    act: &InfinitesimalAction,
    m: &MomentumMap,
    p: &[Rational],
    sampler: Option<&mut Sampler>,
    neighbours: usize,
) -> Result<Prop52Report> {
    check_dims(act, m)?;
    let l = act.algebra();
    let u = m.eval(p)?;
    let gu = coad_isotropy(l, &u)?;
    let lam = act.at(p)?;
    let mut violations = Vec::new();
    for i in 0..gu.len() {
        for j in i + 1..gu.len() {
            let b = l.bracket(&gu[i], &gu[j])?;
            if lam.mul_vec(&b)?.iter().any(|v| !v.is_zero()) {
                violations.push((i, j));
            }
        }
    }
    let locally_minimal = match sampler {
        Some(s) if neighbours > 0 => {
            let eps = Rational::new(1.into(), 64.into());
            let mut ok = true;
            for _ in 0..neighbours {
                let q: Vec<Rational> = p.iter().map(|x| x + &eps * s.rational()).collect();
                ok &= coad_isotropy(l, &m.eval(&q)?)?.len() >= gu.len();
            }
            Some(ok)
        }
        _ => None,
    };
    Ok(Prop52Report {
        u: show(&u),
        isotropy_u_dim: gu.len(),
        isotropy_p_dim: isotropy_basis(act, p)?.len(),
        holds: violations.is_empty(),
        violations,
        locally_minimal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::GroupRelation;
    use crate::lie::LieModule;
    use crate::numeric::NumericField;
    use crate::poisson::VectorField;
    use crate::scalar::{q, qf};

    fn coadjoint_action(l: &LieAlgebra) -> LinearPoissonAction {
        let rep = (0..l.dim())
            .map(|i| LieModule::coadjoint(l).rho(i).clone())
            .collect();
        LinearPoissonAction::new(
            l.clone(),
            rep,
            lie_poisson(l),
            None,
            GroupRelation::SpecialLinear,
        )
        .unwrap()
    }

    fn rotation() -> LinearPoissonAction {
        let v = VarSet::affine(&["x", "y"]);
        let gen = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(-1), q(0)]]).unwrap();
        let pi = PolyBivector::standard_symplectic(&v).unwrap();
        LinearPoissonAction::new(
            LieAlgebra::abelian(1),
            vec![gen],
            pi,
            None,
            GroupRelation::SpecialOrthogonal,
        )
        .unwrap()
    }

    fn rotation_m() -> MomentumMap {
        let v = VarSet::affine(&["x", "y"]);
        let (x, y) = (MultiPoly::var(&v, 0), MultiPoly::var(&v, 1));
        MomentumMap::exact(vec![(&x.pow(2) + &y.pow(2)).scale(&Scalar::frac(1, 2))])
    }

    #[test]
    fn identity_on_coadjoint_orbits() {
        let a = coadjoint_action(&LieAlgebra::sl2());
        let act = a.infinitesimal().unwrap();
        let m = MomentumMap::identity(a.pi().vars());
        assert!(momentum_check(a.pi(), &act, &m, &[], 0.0).unwrap().passes);
        let shifted = m.shifted(&[q(1), q(-2), qf(1, 2)]).unwrap();
        assert!(
            momentum_check(a.pi(), &act, &shifted, &[], 0.0)
                .unwrap()
                .passes
        );
        assert!(gamma(a.pi(), a.algebra(), &m).unwrap().is_zero());
    }

    #[test]
    fn shifted_identity_gamma() {
        let l = LieAlgebra::sl2();
        let a = coadjoint_action(&l);
        let mu0 = [q(1), q(-2), qf(1, 2)];
        let m = MomentumMap::identity(a.pi().vars()).shifted(&mu0).unwrap();
        let g = gamma(a.pi(), &l, &m).unwrap();
        assert!(g.routes_agree);
        for i in 0..3 {
            for j in i + 1..3 {
                let expect: Rational = l
                    .bracket_basis(i, j)
                    .iter()
                    .zip(&mu0)
                    .map(|(a, b)| a * b)
                    .sum();
                assert_eq!(g.entry(i, j).as_constant(), Some(Scalar::real(expect)));
            }
        }
        let c = gamma_checks(a.pi(), &l, &m, &g).unwrap();
        assert!(c.all_casimir() && c.closed() && c.routes_agree);
        assert!(c.class.solvable);
        assert_eq!(c.correction_equivariant, Some(true));
    }

    #[test]
    fn heisenberg_class_obstruction() {
        // Plane with {x,y} = 1: m = (x, y²/2, y) is a momentum map for a
        // Heisenberg action whose Γ_{13} = −1 is not a coboundary.
        let l = LieAlgebra::heisenberg();
        let v = VarSet::affine(&["x", "y"]);
        let pi = PolyBivector::standard_symplectic(&v).unwrap();
        let (x, y) = (MultiPoly::var(&v, 0), MultiPoly::var(&v, 1));
        let comps = vec![x.clone(), y.pow(2).scale(&Scalar::frac(1, 2)), y.clone()];
        let fields: Vec<VectorField> = comps
            .iter()
            .map(|c| hamiltonian_field(&pi, c).unwrap().scale(&Scalar::int(-1)))
            .collect();
        let act = InfinitesimalAction::new(l.clone(), fields).unwrap();
        assert_eq!(act.homomorphism_sign().unwrap(), Some(-1));
        let m = MomentumMap::exact(comps);
        assert!(momentum_check(&pi, &act, &m, &[], 0.0).unwrap().passes);
        let g = gamma(&pi, &l, &m).unwrap();
        assert_eq!(g.entry(0, 2).as_constant(), Some(Scalar::int(-1)));
        let c = gamma_checks(&pi, &l, &m, &g).unwrap();
        assert!(c.all_casimir() && c.closed());
        assert!(!c.class.solvable);
    }

    #[test]
    fn abelian_commuting_components() {
        let v = VarSet::numbered("x", 4);
        let pi = PolyBivector::standard_symplectic(&v).unwrap();
        let comps = vec![MultiPoly::var(&v, 0), MultiPoly::var(&v, 2)];
        let g = gamma(&pi, &LieAlgebra::abelian(2), &MomentumMap::exact(comps)).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn psi_cocycle() {
        let l = LieAlgebra::sl2();
        let a = coadjoint_action(&l);
        let nat = LinearPoissonAction::new(
            l.clone(),
            LieAlgebra::sl2_matrices(),
            PolyBivector::zero(&VarSet::numbered("x", 2)),
            None,
            GroupRelation::SpecialLinear,
        )
        .unwrap();
        let mut s = Sampler::seeded(9);
        let mut samples = Vec::new();
        for _ in 0..10 {
            let (g, h) = (s.sl2(3), s.sl2(3));
            samples.push((
                nat.coadjoint_of(&g).unwrap(),
                nat.coadjoint_of(&h).unwrap(),
                s.point(3),
            ));
        }
        let m = MomentumMap::identity(a.pi().vars());
        let rep = psi_cocycle_check(&a, &m, &samples).unwrap();
        assert!(rep.cocycle_holds() && rep.equivariant);
        let shifted = m.shifted(&[q(1), q(2), q(3)]).unwrap();
        let rep = psi_cocycle_check(&a, &shifted, &samples).unwrap();
        assert!(rep.cocycle_holds() && !rep.equivariant);

        let f = MultiPoly::var(a.pi().vars(), 0).pow(2);
        let opts = FlowOptions {
            steps: 500,
            ..FlowOptions::default()
        };
        let drift =
            sigma_flow_drift(&a, &shifted, &samples[0].0, &f, &[0.3, -0.2, 0.5], &opts).unwrap();
        assert!(drift < 1e-12);
    }

    #[test]
    fn rotation_kernel_image() {
        let a = rotation();
        let act = a.infinitesimal().unwrap();
        let m = rotation_m();
        assert!(momentum_check(a.pi(), &act, &m, &[], 0.0).unwrap().passes);
        let rep = momentum_kernel_image(a.pi(), &act, &m, &[q(1), q(0)]).unwrap();
        assert!(rep.holds());
        assert_eq!(
            (rep.kernel_dim, rep.image_dim, rep.annihilator_dim),
            (1, 1, 1)
        );
        let origin = momentum_kernel_image(a.pi(), &act, &m, &[q(0), q(0)]).unwrap();
        assert!(origin.holds() && origin.kernel_dim == 2);

        // Same map as a pointwise field.
        let num = MomentumMap::new(vec![ScalarField::Numeric(NumericField::new(
            2,
            "r2",
            |x: &[f64]| Ok((x[0] * x[0] + x[1] * x[1]) / 2.0),
        ))]);
        assert!(momentum_kernel_image(a.pi(), &act, &num, &[qf(1, 2), q(3)])
            .unwrap()
            .holds());
        assert!(
            momentum_check(a.pi(), &act, &num, &[vec![0.5, 3.0], vec![-1.0, 2.0]], 1e-6)
                .unwrap()
                .passes
        );
    }

    #[test]
    fn degenerate_point_rejected() {
        let a = coadjoint_action(&LieAlgebra::sl2());
        let act = a.infinitesimal().unwrap();
        let m = MomentumMap::identity(a.pi().vars());
        assert!(matches!(
            momentum_kernel_image(a.pi(), &act, &m, &[q(1), q(0), q(0)]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn prop52_examples() {
        let a = rotation();
        let rep = check_prop52(
            &a.infinitesimal().unwrap(),
            &rotation_m(),
            &[q(1), q(0)],
            None,
            0,
        )
        .unwrap();
        assert!(rep.holds && rep.isotropy_u_dim == 1);
        let c = coadjoint_action(&LieAlgebra::sl2());
        let act = c.infinitesimal().unwrap();
        let m = MomentumMap::identity(c.pi().vars());
        let mut s = Sampler::seeded(4);
        let rep = check_prop52(&act, &m, &[q(1), q(0), q(0)], Some(&mut s), 10).unwrap();
        assert!(rep.holds && rep.isotropy_u_dim == 1 && rep.locally_minimal == Some(true));
        let rep = check_prop52(&act, &m, &[q(2), q(1), q(-3)], None, 0).unwrap();
        assert_eq!(rep.isotropy_u_dim, rep.isotropy_p_dim);
    }
}
