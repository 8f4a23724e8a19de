//! Polynomial vector fields, one-forms, bivectors and scalar fields.

use crate::linalg::Matrix;
use crate::numeric::NumericField;
use crate::poly::{F64Poly, MultiPoly, VarSet};
use crate::scalar::Scalar;
use crate::{Error, Result};

fn align(vars: &VarSet, comps: Vec<MultiPoly>) -> Result<Vec<MultiPoly>> {
    if comps.len() != vars.len() {
        return Err(Error::DimensionMismatch {
            expected: vars.len(),
            got: comps.len(),
        });
    }
    comps.iter().map(|c| c.with_vars(vars)).collect()
}

macro_rules! component_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name {
            vars: VarSet,
            comps: Vec<MultiPoly>,
        }

        impl $name {
            pub fn new(vars: &VarSet, comps: Vec<MultiPoly>) -> Result<Self> {
                Ok($name { vars: vars.clone(), comps: align(vars, comps)? })
            }

            pub fn zero(vars: &VarSet) -> Self {
                $name { vars: vars.clone(), comps: vec![MultiPoly::zero(vars); vars.len()] }
            }

            /// Constant components.
            pub fn constant(vars: &VarSet, c: &[Scalar]) -> Result<Self> {
                let comps = c.iter().map(|v| MultiPoly::constant(vars, v.clone())).collect();
                $name::new(vars, comps)
            }

            /// The `i`-th basis element (`∂_i` or `dx_i`).
            pub fn basis(vars: &VarSet, i: usize) -> Self {
                let mut out = $name::zero(vars);
                out.comps[i] = MultiPoly::one(vars);
                out
            }

            pub fn vars(&self) -> &VarSet {
                &self.vars
            }

            pub fn dim(&self) -> usize {
                self.comps.len()
            }

            pub fn comps(&self) -> &[MultiPoly] {
                &self.comps
            }

            pub fn comp(&self, i: usize) -> &MultiPoly {
                &self.comps[i]
            }

            pub fn is_zero(&self) -> bool {
                self.comps.iter().all(MultiPoly::is_zero)
            }

            pub fn add(&self, o: &Self) -> Result<Self> {
                let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>()?;
                $name::new(&self.vars, comps)
            }

            pub fn sub(&self, o: &Self) -> Result<Self> {
                let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| a.checked_sub(b)).collect::<Result<_>>()?;
                $name::new(&self.vars, comps)
            }

            pub fn scale(&self, s: &Scalar) -> Self {
                $name { vars: self.vars.clone(), comps: self.comps.iter().map(|c| c.scale(s)).collect() }
            }

            pub fn mul_fn(&self, f: &MultiPoly) -> Result<Self> {
                let comps = self.comps.iter().map(|c| c.checked_mul(f)).collect::<Result<_>>()?;
                $name::new(&self.vars, comps)
            }

            pub fn eval(&self, p: &[Scalar]) -> Result<Vec<Scalar>> {
                self.comps.iter().map(|c| c.eval(p)).collect()
            }
        }
    };
}

component_type!(
    /// `Σ V^i ∂_i`.
    VectorField
);
component_type!(
    /// `Σ α_i dx_i`.
    OneForm
);

impl VectorField {
    /// `V(f) = Σ V^i ∂_i f`.
    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly> {
        let f = f.with_vars(&self.vars)?;
        let mut acc = MultiPoly::zero(&self.vars);
        for (i, v) in self.comps.iter().enumerate() {
            if !v.is_zero() {
                acc = &acc + &(v * &f.partial(i));
            }
        }
        Ok(acc)
    }

    /// `[V,W]^j = V(W^j) - W(V^j)`.
    pub fn lie_bracket(&self, w: &VectorField) -> Result<VectorField> {
        let comps = (0..self.dim())
            .map(|j| Ok(&self.apply(&w.comps[j])? - &w.apply(&self.comps[j])?))
            .collect::<Result<_>>()?;
        VectorField::new(&self.vars, comps)
    }

    /// `i_V α = Σ V^i α_i`.
    pub fn pair(&self, a: &OneForm) -> Result<MultiPoly> {
        let mut acc = MultiPoly::zero(&self.vars);
        for (v, c) in self.comps.iter().zip(&a.comps) {
            acc = acc.checked_add(&v.checked_mul(c)?)?;
        }
        Ok(acc)
    }
}

impl OneForm {
    pub fn differential(f: &MultiPoly) -> OneForm {
        OneForm {
            vars: f.vars().clone(),
            comps: f.gradient(),
        }
    }

    /// `(i_V dα)_k = Σ_j V^j (∂_j α_k - ∂_k α_j)`.
    pub fn contract_d(&self, v: &VectorField) -> Result<OneForm> {
        let n = self.dim();
        let mut comps = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = MultiPoly::zero(&self.vars);
            for j in 0..n {
                let curl = &self.comps[k].partial(j) - &self.comps[j].partial(k);
                if !curl.is_zero() {
                    acc = &acc + &(&v.comps[j] * &curl);
                }
            }
            comps.push(acc);
        }
        OneForm::new(&self.vars, comps)
    }

    /// `L_V α = i_V dα + d(i_V α)`.
    pub fn lie_derivative(&self, v: &VectorField) -> Result<OneForm> {
        self.contract_d(v)?
            .add(&OneForm::differential(&v.pair(self)?))
    }

    /// True iff `dα = 0`.
    pub fn is_closed(&self) -> bool {
        (0..self.dim())
            .all(|k| (0..k).all(|j| self.comps[k].partial(j) == self.comps[j].partial(k)))
    }
}

/// A skew matrix `π^{ij}` of polynomials, `π = Σ_{i<j} π^{ij} ∂_i ∧ ∂_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyBivector {
    vars: VarSet,
    m: Vec<MultiPoly>,
}

impl PolyBivector {
    pub fn zero(vars: &VarSet) -> Self {
        let n = vars.len();
        PolyBivector {
            vars: vars.clone(),
            m: vec![MultiPoly::zero(vars); n * n],
        }
    }

    /// From `(i, j, π^{ij})` triples; the transposed entry is filled in.
    /// Listing both `(i,j)` and `(j,i)` is allowed only if they agree.
    pub fn from_entries<I>(vars: &VarSet, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, MultiPoly)>,
    {
        let n = vars.len();
        let mut out = PolyBivector::zero(vars);
        let mut set = vec![false; n * n];
        for (i, j, p) in entries {
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: i.max(j) + 1,
                });
            }
            let p = p.with_vars(vars)?;
            if i == j {
                if !p.is_zero() {
                    return Err(Error::NotSkew(format!("diagonal entry ({i},{i}) = {p}")));
                }
                continue;
            }
            let neg = -&p;
            if (set[i * n + j] && out.m[i * n + j] != p)
                || (set[j * n + i] && out.m[j * n + i] != neg)
            {
                return Err(Error::NotSkew(format!(
                    "entries ({i},{j}) and ({j},{i}) disagree"
                )));
            }
            out.m[j * n + i] = neg;
            out.m[i * n + j] = p;
            set[i * n + j] = true;
            set[j * n + i] = true;
        }
        Ok(out)
    }

    /// From a full matrix, which must be skew.
    pub fn from_matrix(vars: &VarSet, rows: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let n = vars.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        let mut m = Vec::with_capacity(n * n);
        for r in rows {
            for p in r {
                m.push(p.with_vars(vars)?);
            }
        }
        let out = PolyBivector {
            vars: vars.clone(),
            m,
        };
        for i in 0..n {
            for j in 0..=i {
                if out.m[i * n + j] != -&out.m[j * n + i] {
                    return Err(Error::NotSkew(format!("entries ({i},{j}) and ({j},{i})")));
                }
            }
        }
        Ok(out)
    }

    /// `∂_1∧∂_2 + ∂_3∧∂_4 + …`; needs an even number of variables.
    pub fn standard_symplectic(vars: &VarSet) -> Result<Self> {
        if !vars.len().is_multiple_of(2) {
            return Err(Error::Precondition("odd dimension".into()));
        }
        PolyBivector::from_entries(
            vars,
            (0..vars.len() / 2).map(|k| (2 * k, 2 * k + 1, MultiPoly::one(vars))),
        )
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        &self.m[i * self.dim() + j]
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(MultiPoly::is_zero)
    }

    /// Upper-triangle entries that are nonzero.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, &MultiPoly)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let p = self.entry(i, j);
                if !p.is_zero() {
                    out.push((i, j, p));
                }
            }
        }
        out
    }

    pub fn add(&self, o: &PolyBivector) -> Result<PolyBivector> {
        let m = self
            .m
            .iter()
            .zip(&o.m)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<Vec<_>>>()?;
        let vars = m.first().map_or(self.vars.clone(), |p| p.vars().clone());
        PolyBivector::from_flat(&vars, m)
    }

    pub fn sub(&self, o: &PolyBivector) -> Result<PolyBivector> {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> PolyBivector {
        PolyBivector {
            vars: self.vars.clone(),
            m: self.m.iter().map(|p| p.scale(s)).collect(),
        }
    }

    fn from_flat(vars: &VarSet, m: Vec<MultiPoly>) -> Result<Self> {
        let m = m.iter().map(|p| p.with_vars(vars)).collect::<Result<_>>()?;
        Ok(PolyBivector {
            vars: vars.clone(),
            m,
        })
    }

    /// `π(α, β) = Σ π^{ij} α_i β_j`.
    pub fn pair(&self, a: &OneForm, b: &OneForm) -> Result<MultiPoly> {
        let n = self.dim();
        let mut acc = MultiPoly::zero(&self.vars);
        for i in 0..n {
            if a.comp(i).is_zero() {
                continue;
            }
            for j in 0..n {
                let e = self.entry(i, j);
                if e.is_zero() || b.comp(j).is_zero() {
                    continue;
                }
                acc = acc.checked_add(&e.checked_mul(a.comp(i))?.checked_mul(b.comp(j))?)?;
            }
        }
        Ok(acc)
    }

    /// Exact value at a point (angular coordinates given as `e^{iθ}`).
    pub fn eval(&self, p: &[Scalar]) -> Result<Matrix<Scalar>> {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = self.entry(i, j).eval(p)?;
                out[(j, i)] = -v.clone();
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }

    /// Float images of the upper-triangle entries, for integration.
    pub fn to_f64(&self) -> Result<Vec<(usize, usize, F64Poly)>> {
        self.nonzero_entries()
            .into_iter()
            .map(|(i, j, p)| Ok((i, j, p.to_f64()?)))
            .collect()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        let mut out = vec![0.0; n * n];
        for (i, j, p) in self.to_f64()? {
            let v = p.eval(x);
            out[i * n + j] = v;
            out[j * n + i] = -v;
        }
        Ok(out)
    }
}

/// A function on the phase space, either an exact polynomial or a
/// pointwise-only numeric field.
#[derive(Clone, Debug)]
pub enum ScalarField {
    Exact(MultiPoly),
    Numeric(NumericField),
}

impl ScalarField {
    pub fn as_exact(&self) -> Result<&MultiPoly> {
        match self {
            ScalarField::Exact(p) => Ok(p),
            ScalarField::Numeric(_) => Err(Error::NumericField),
        }
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<f64> {
        match self {
            ScalarField::Exact(p) => Ok(p.to_f64()?.eval(x)),
            ScalarField::Numeric(f) => f.eval(x),
        }
    }

    /// Exact partials evaluated in floating point, or finite differences.
    pub fn gradient_f64(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            ScalarField::Exact(p) => p
                .gradient()
                .iter()
                .map(|d| Ok(d.to_f64()?.eval(x)))
                .collect(),
            ScalarField::Numeric(f) => f.fd_gradient(x),
        }
    }
}

impl From<MultiPoly> for ScalarField {
    fn from(p: MultiPoly) -> Self {
        ScalarField::Exact(p)
    }
}

impl From<NumericField> for ScalarField {
    fn from(f: NumericField) -> Self {
        ScalarField::Numeric(f)
    }
}
