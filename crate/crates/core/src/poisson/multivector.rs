//! Multivector fields and the Schouten–Nijenhuis bracket.
//!
//! A `p`-vector is stored as `Σ_S A^S ξ_S` over sorted index sets `S`,
//! where `ξ_S = ∂_{s1}∧…∧∂_{sp}`. The bracket is computed with odd
//! variables `ξ_i` and right derivatives:
//! `[A,B] = Σ_i ∂A/∂ξ_i · ∂_i B − (−1)^{(a−1)(b−1)} ∂B/∂ξ_i · ∂_i A`.
//! With this sign `[V,W]` is the Lie bracket and `[V,π] = L_V π`.

use std::collections::BTreeMap;
use std::fmt;

use super::bracket;
use super::fields::{PolyBivector, VectorField};
use crate::exterior::sort_sign;
use crate::poly::{MultiPoly, VarSet};
use crate::scalar::Scalar;
use crate::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Multivector {
    vars: VarSet,
    degree: usize,
    comps: BTreeMap<Vec<usize>, MultiPoly>,
}

impl Multivector {
    pub fn zero(vars: &VarSet, degree: usize) -> Self {
        Multivector {
            vars: vars.clone(),
            degree,
            comps: BTreeMap::new(),
        }
    }

    pub fn function(f: &MultiPoly) -> Self {
        let mut m = Multivector::zero(f.vars(), 0);
        m.add_comp(Vec::new(), f.clone());
        m
    }

    pub fn from_vector_field(v: &VectorField) -> Self {
        let mut m = Multivector::zero(v.vars(), 1);
        for (i, c) in v.comps().iter().enumerate() {
            m.add_comp(vec![i], c.clone());
        }
        m
    }

    pub fn from_bivector(pi: &PolyBivector) -> Self {
        let mut m = Multivector::zero(pi.vars(), 2);
        for (i, j, p) in pi.nonzero_entries() {
            m.add_comp(vec![i, j], p.clone());
        }
        m
    }

    /// Adds `c · ξ_idx` for an arbitrary (unsorted) index list.
    pub fn add_term(&mut self, idx: &[usize], c: &MultiPoly) -> Result<()> {
        if idx.len() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                got: idx.len(),
            });
        }
        let mut s = idx.to_vec();
        if let Some(sign) = sort_sign(&mut s) {
            let c = c.with_vars(&self.vars)?;
            self.add_comp(s, if sign > 0 { c } else { -&c });
        }
        Ok(())
    }

    fn add_comp(&mut self, key: Vec<usize>, c: MultiPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .comps
            .entry(key.clone())
            .or_insert_with(|| MultiPoly::zero(&c.vars().clone()));
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.comps.remove(&key);
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Component along the sorted index set `s`.
    pub fn comp(&self, s: &[usize]) -> MultiPoly {
        self.comps
            .get(s)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(&self.vars))
    }

    pub fn comps(&self) -> impl Iterator<Item = (&Vec<usize>, &MultiPoly)> {
        self.comps.iter()
    }

    pub fn scale(&self, s: &Scalar) -> Multivector {
        let mut out = Multivector::zero(&self.vars, self.degree);
        for (k, c) in &self.comps {
            out.add_comp(k.clone(), c.scale(s));
        }
        out
    }

    pub fn sub(&self, o: &Multivector) -> Result<Multivector> {
        if self.degree != o.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                got: o.degree,
            });
        }
        let mut out = self.clone();
        for (k, c) in &o.comps {
            out.add_comp(k.clone(), -c);
        }
        Ok(out)
    }

    pub fn to_bivector(&self) -> Result<PolyBivector> {
        if self.degree != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: self.degree,
            });
        }
        PolyBivector::from_entries(
            &self.vars,
            self.comps.iter().map(|(k, c)| (k[0], k[1], c.clone())),
        )
    }

    /// Right derivative `∂/∂ξ_i`: `ξ_i` is moved to the far right first.
    fn odd_derivative(&self, i: usize) -> Multivector {
        let mut out = Multivector::zero(&self.vars, self.degree.saturating_sub(1));
        for (k, c) in &self.comps {
            if let Some(pos) = k.iter().position(|&t| t == i) {
                let after = k.len() - 1 - pos;
                let mut rest = k.clone();
                rest.remove(pos);
                out.add_comp(rest, if after % 2 == 0 { c.clone() } else { -c });
            }
        }
        out
    }

    fn partial(&self, i: usize) -> Multivector {
        let mut out = Multivector::zero(&self.vars, self.degree);
        for (k, c) in &self.comps {
            out.add_comp(k.clone(), c.partial(i));
        }
        out
    }

    fn wedge(&self, o: &Multivector) -> Multivector {
        let mut out = Multivector::zero(&self.vars, self.degree + o.degree);
        for (ka, ca) in &self.comps {
            for (kb, cb) in &o.comps {
                let mut idx = ka.clone();
                idx.extend(kb);
                if let Some(sign) = sort_sign(&mut idx) {
                    let p = ca * cb;
                    out.add_comp(idx, if sign > 0 { p } else { -&p });
                }
            }
        }
        out
    }
}

/// Graded Schouten–Nijenhuis bracket; the result has degree `a + b − 1`.
pub fn schouten(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    let (vars, _) = a.vars.merge(&b.vars)?;
    if vars.len() != a.vars.len() || vars.len() != b.vars.len() {
        return Err(Error::DimensionMismatch {
            expected: a.vars.len(),
            got: b.vars.len(),
        });
    }
    let deg = (a.degree + b.degree).checked_sub(1);
    let Some(deg) = deg else {
        // Two functions bracket to zero.
        return Ok(Multivector::zero(&vars, 0));
    };
    let odd = (a.degree + 1) * (b.degree + 1) % 2 == 1;
    let mut out = Multivector::zero(&vars, deg);
    for i in 0..vars.len() {
        let t1 = a.odd_derivative(i).wedge(&b.partial(i));
        let t2 = b.odd_derivative(i).wedge(&a.partial(i));
        for (k, c) in t1.comps {
            out.add_comp(k, c);
        }
        for (k, c) in t2.comps {
            out.add_comp(k, if odd { c } else { -&c });
        }
    }
    Ok(out)
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.comps.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let names: Vec<String> = k
                .iter()
                .map(|&i| format!("d_{}", self.vars.get(i).name))
                .collect();
            if names.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{}", names.join("^"))?;
            }
        }
        Ok(())
    }
}

/// Both routes to the Jacobi identity for a bivector.
#[derive(Clone, Debug)]
pub struct JacobiCheck {
    pub holds: bool,
    /// `[π,π]`.
    pub schouten: Multivector,
    /// Nonzero cyclic sums `{{x_i,x_j},x_k} + c.p.` for `i<j<k`.
    pub cyclic: Vec<((usize, usize, usize), MultiPoly)>,
    /// `[π,π]^{ijk} = −2·({{x_i,x_j},x_k} + c.p.)` on every triple.
    pub routes_agree: bool,
}

pub fn jacobi_check(pi: &PolyBivector) -> Result<JacobiCheck> {
    let m = Multivector::from_bivector(pi);
    let s = schouten(&m, &m)?;
    let n = pi.dim();
    let vars = pi.vars();
    let x: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(vars, i)).collect();
    let mut cyclic = Vec::new();
    let mut agree = true;
    let kappa = Scalar::int(-2);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let c = |a: usize, b: usize, c: usize| -> Result<MultiPoly> {
                    bracket(pi, &bracket(pi, &x[a], &x[b])?, &x[c])
                };
                let cs = &(&c(i, j, k)? + &c(j, k, i)?) + &c(k, i, j)?;
                if s.comp(&[i, j, k]) != cs.scale(&kappa) {
                    agree = false;
                }
                if !cs.is_zero() {
                    cyclic.push(((i, j, k), cs));
                }
            }
        }
    }
    Ok(JacobiCheck {
        holds: s.is_zero() && cyclic.is_empty(),
        schouten: s,
        cyclic,
        routes_agree: agree,
    })
}
