//! Sparse multivariate polynomials over Gaussian rationals.
//!
//! A variable is either *affine* (ordinary coordinate, non-negative
//! exponents) or *angular*: an angle θ stored through its exponential
//! `e^{iθ}`, so monomials are Laurent in that factor and
//! `∂_θ e^{ikθ} = ik·e^{ikθ}`. Terms are kept in a `BTreeMap` keyed by the
//! exponent vector, which orders monomials lexicographically in the
//! declared variable order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{q, Scalar};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Affine,
    Angular,
}

impl VarKind {
    fn label(self) -> &'static str {
        match self {
            VarKind::Affine => "affine",
            VarKind::Angular => "angular",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: String,
    pub kind: VarKind,
}

impl Var {
    pub fn affine(name: impl Into<String>) -> Self {
        Var {
            name: name.into(),
            kind: VarKind::Affine,
        }
    }

    pub fn angular(name: impl Into<String>) -> Self {
        Var {
            name: name.into(),
            kind: VarKind::Angular,
        }
    }
}

/// Ordered, shared list of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarSet(Arc<Vec<Var>>);

impl VarSet {
    pub fn new(vars: Vec<Var>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(VarSet(Arc::new(vars)))
    }

    /// Affine variables with the given names. Panics on duplicates.
    pub fn affine<S: AsRef<str>>(names: &[S]) -> Self {
        VarSet::new(names.iter().map(|n| Var::affine(n.as_ref())).collect())
            .expect("duplicate variable names")
    }

    /// `prefix1, …, prefixN`, all affine.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        VarSet::affine(&names)
    }

    pub fn empty() -> Self {
        VarSet(Arc::new(Vec::new()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &Var {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v.name == name)
    }

    fn same(&self, other: &VarSet) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }

    /// Concatenation of two disjoint variable lists.
    pub fn concat(&self, other: &VarSet) -> Result<VarSet> {
        let mut v = self.0.as_ref().clone();
        v.extend(other.0.iter().cloned());
        VarSet::new(v)
    }

    /// Union keeping `self`'s order and appending new names from `other`.
    /// Returns the union and, for each variable of `other`, its index in it.
    pub fn merge(&self, other: &VarSet) -> Result<(VarSet, Vec<usize>)> {
        if self.same(other) {
            return Ok((self.clone(), (0..self.len()).collect()));
        }
        let mut vars = self.0.as_ref().clone();
        let mut map = Vec::with_capacity(other.len());
        for v in other.0.iter() {
            match vars.iter().position(|w| w.name == v.name) {
                Some(i) => {
                    if vars[i].kind != v.kind {
                        return Err(Error::VarKindMismatch {
                            name: v.name.clone(),
                            first: vars[i].kind.label(),
                            second: v.kind.label(),
                        });
                    }
                    map.push(i);
                }
                None => {
                    map.push(vars.len());
                    vars.push(v.clone());
                }
            }
        }
        Ok((VarSet(Arc::new(vars)), map))
    }
}

pub type Exponent = Vec<i32>;

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: VarSet,
    terms: BTreeMap<Exponent, Scalar>,
}

impl MultiPoly {
    pub fn zero(vars: &VarSet) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarSet, c: Scalar) -> Self {
        let mut p = MultiPoly::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &VarSet) -> Self {
        MultiPoly::constant(vars, Scalar::one())
    }

    /// The coordinate function of variable `i` (for angular variables, the
    /// exponential `e^{iθ}`).
    pub fn var(vars: &VarSet, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        MultiPoly::monomial(vars, e, Scalar::one()).expect("valid exponent")
    }

    pub fn var_named(vars: &VarSet, name: &str) -> Result<Self> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(MultiPoly::var(vars, i))
    }

    pub fn monomial(vars: &VarSet, exp: Exponent, c: Scalar) -> Result<Self> {
        check_exponent(vars, &exp)?;
        let mut p = MultiPoly::zero(vars);
        p.add_term(exp, c);
        Ok(p)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents.
    pub fn from_terms<I>(vars: &VarSet, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Scalar)>,
    {
        let mut p = MultiPoly::zero(vars);
        for (e, c) in terms {
            check_exponent(vars, &e)?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Linear form `Σ coeffs[i]·x_i`.
    pub fn linear(vars: &VarSet, coeffs: &[Scalar]) -> Self {
        let mut p = MultiPoly::zero(vars);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    fn add_term(&mut self, exp: Exponent, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[i32]) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Lex-largest term.
    pub fn leading_term(&self) -> Option<(&Exponent, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    /// The constant term, or `None` if the polynomial is not constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.terms
                .values()
                .next()
                .cloned()
                .unwrap_or_else(Scalar::zero),
        )
    }

    /// Total degree counting absolute values of Laurent exponents.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|k| k.unsigned_abs()).sum())
            .max()
            .unwrap_or(0)
    }

    /// True iff every coefficient is real.
    pub fn has_real_coefficients(&self) -> bool {
        self.terms.values().all(Scalar::is_real)
    }

    /// Re-expresses `self` over `target`, which must contain every variable
    /// that occurs with a nonzero exponent.
    pub fn with_vars(&self, target: &VarSet) -> Result<Self> {
        if self.vars.same(target) {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for v in self.vars.vars() {
            match target.index_of(&v.name) {
                Some(j) if target.get(j).kind != v.kind => {
                    return Err(Error::VarKindMismatch {
                        name: v.name.clone(),
                        first: target.get(j).kind.label(),
                        second: v.kind.label(),
                    })
                }
                found => map.push(found),
            }
        }
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => ne[j] = k,
                    None => return Err(Error::UnknownVariable(self.vars.get(i).name.clone())),
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    fn align(&self, other: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
        if self.vars.same(&other.vars) {
            return Ok((self.clone(), other.clone()));
        }
        let (u, _) = self.vars.merge(&other.vars)?;
        Ok((self.with_vars(&u)?, other.with_vars(&u)?))
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        if !self.vars.same(&other.vars) {
            let (a, b) = self.align(other)?;
            return a.checked_add(&b);
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        if !self.vars.same(&other.vars) {
            let (a, b) = self.align(other)?;
            return a.checked_mul(&b);
        }
        let mut out = MultiPoly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    fn neg_ref(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative along variable `i`.
    pub fn partial(&self, i: usize) -> MultiPoly {
        let angular = self.vars.get(i).kind == VarKind::Angular;
        let mut out = MultiPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            let k = e[i];
            if k == 0 {
                continue;
            }
            let factor = if angular {
                Scalar::new(q(0), q(k as i64))
            } else {
                Scalar::int(k as i64)
            };
            let mut ne = e.clone();
            if !angular {
                ne[i] -= 1;
            }
            out.add_term(ne, c * &factor);
        }
        out
    }

    pub fn partial_named(&self, name: &str) -> Result<MultiPoly> {
        let i = self
            .vars
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(self.partial(i))
    }

    /// Gradient `(∂_0 p, …, ∂_{n-1} p)`.
    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.vars.len()).map(|i| self.partial(i)).collect()
    }

    /// Exact evaluation. For an angular variable the supplied value is the
    /// exponential `e^{iθ}`, not θ itself.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, x) in e.iter().zip(point) {
                if *k != 0 {
                    t = &t
                        * &x.pow(*k)
                            .map_err(|_| Error::Evaluation("negative power of zero".into()))?;
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Evaluation at a real rational point (all variables affine).
    pub fn eval_rational(&self, point: &[crate::Rational]) -> Result<Scalar> {
        let pt: Vec<Scalar> = point.iter().cloned().map(Scalar::real).collect();
        self.eval(&pt)
    }

    /// Substitutes `subs[i]` for affine variable `i`. All substitutes must
    /// share one variable set, which becomes the result's. Angular variables
    /// may only be substituted when they do not occur.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<MultiPoly> {
        if subs.len() != self.vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vars.len(),
                got: subs.len(),
            });
        }
        let target = match subs.first() {
            Some(s) => s.vars.clone(),
            None => return Ok(self.clone()),
        };
        let subs: Vec<MultiPoly> = subs
            .iter()
            .map(|s| s.with_vars(&target))
            .collect::<Result<_>>()?;
        let mut out = MultiPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if k < 0 || self.vars.get(i).kind == VarKind::Angular {
                    return Err(Error::Evaluation(format!(
                        "cannot substitute into angular variable {}",
                        self.vars.get(i).name
                    )));
                }
                t = &t * &subs[i].pow(k as u32);
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Compiles into a floating-point evaluator. Requires affine variables
    /// and real coefficients.
    pub fn to_f64(&self) -> Result<F64Poly> {
        if let Some(v) = self.vars.vars().iter().find(|v| v.kind == VarKind::Angular) {
            return Err(Error::Evaluation(format!(
                "angular variable {} in float evaluation",
                v.name
            )));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if !c.is_real() {
                return Err(Error::Evaluation(
                    "complex coefficient in float evaluation".into(),
                ));
            }
            let (re, _) = c.to_f64_pair();
            if !re.is_finite() {
                return Err(Error::Overflow(format!(
                    "coefficient {c} does not fit in f64"
                )));
            }
            terms.push((re, e.clone()));
        }
        Ok(F64Poly {
            nvars: self.vars.len(),
            terms,
        })
    }
}

fn check_exponent(vars: &VarSet, exp: &[i32]) -> Result<()> {
    if exp.len() != vars.len() {
        return Err(Error::DimensionMismatch {
            expected: vars.len(),
            got: exp.len(),
        });
    }
    for (k, v) in exp.iter().zip(vars.vars()) {
        if *k < 0 && v.kind == VarKind::Affine {
            return Err(Error::Evaluation(format!(
                "negative exponent on affine variable {}",
                v.name
            )));
        }
    }
    Ok(())
}

/// Floating-point image of a real affine polynomial.
#[derive(Clone, Debug)]
pub struct F64Poly {
    nvars: usize,
    terms: Vec<(f64, Exponent)>,
}

impl F64Poly {
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(c, e)| e.iter().zip(x).fold(*c, |acc, (k, xi)| acc * xi.powi(*k)))
            .sum()
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.checked_add(o).expect("incompatible variable sets")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self.checked_sub(o).expect("incompatible variable sets")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.checked_mul(o).expect("incompatible variable sets")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.neg_ref()
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: MultiPoly) -> MultiPoly {
        &self + &o
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: MultiPoly) -> MultiPoly {
        &self - &o
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: MultiPoly) -> MultiPoly {
        &self * &o
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.neg_ref()
    }
}

impl fmt::Display for MultiPoly {
    /// Highest terms first, e.g. `x1^2*x2 - 1/2*t^-1 + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k != 0)
                .map(|(i, k)| {
                    let v = &self.vars.get(i).name;
                    let base = match self.vars.get(i).kind {
                        VarKind::Affine => v.clone(),
                        VarKind::Angular => format!("e^(i{v})"),
                    };
                    if *k == 1 {
                        base
                    } else {
                        format!("{base}^{k}")
                    }
                })
                .collect();
            let negative = c.is_real() && c.re < num_rational::BigRational::zero();
            let mag = if negative { -c } else { c.clone() };
            if n == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}
