//! Normal forms modulo a single polynomial relation.

use crate::poly::{Exponent, MultiPoly, VarKind};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// The principal ideal `(g)` with `g`'s lex-largest monomial as the
/// rewriting head: `lead -> lead - g/lc`.
#[derive(Clone, Debug)]
pub struct RelationIdeal {
    generator: MultiPoly,
    lead: Exponent,
    tail: MultiPoly,
}

impl RelationIdeal {
    pub fn new(generator: MultiPoly) -> Result<Self> {
        let (lead, lc) = match generator.leading_term() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(Error::InvalidRelation("zero generator".into())),
        };
        if lead.iter().all(|&k| k == 0) {
            return Err(Error::InvalidRelation("constant generator".into()));
        }
        for (k, v) in lead.iter().zip(generator.vars().vars()) {
            if *k != 0 && v.kind == VarKind::Angular {
                return Err(Error::InvalidRelation(format!(
                    "leading monomial involves angular variable {}",
                    v.name
                )));
            }
        }
        let lead_mono = MultiPoly::monomial(generator.vars(), lead.clone(), lc.clone())?;
        // tail = -(g - lc·lead)/lc, so that lead ≡ tail.
        let inv = lc.inv()?;
        let tail = (&lead_mono - &generator).scale(&inv);
        Ok(RelationIdeal {
            generator,
            lead,
            tail,
        })
    }

    /// `a1*a4 - a2*a3 - 1` over variables named `names` (in that order).
    pub fn sl2_determinant(vars: &crate::VarSet, names: [&str; 4]) -> Result<Self> {
        let v = |n: &str| MultiPoly::var_named(vars, n);
        let g = &(&(&v(names[0])? * &v(names[3])?) - &(&v(names[1])? * &v(names[2])?))
            - &MultiPoly::one(vars);
        RelationIdeal::new(g)
    }

    pub fn generator(&self) -> &MultiPoly {
        &self.generator
    }

    pub fn leading_exponent(&self) -> &Exponent {
        &self.lead
    }

    /// Remainder of `p` with no term divisible by the leading monomial.
    /// Each step replaces a term by lex-smaller ones, so this terminates.
    pub fn reduce(&self, p: &MultiPoly) -> Result<MultiPoly> {
        let (vars, _) = p.vars().merge(self.generator.vars())?;
        let lead = MultiPoly::monomial(self.generator.vars(), self.lead.clone(), Scalar::from(1))?
            .with_vars(&vars)?;
        let lead = lead
            .leading_term()
            .map(|(e, _)| e.clone())
            .expect("nonzero monomial");
        let divides = |e: &[i32]| lead.iter().zip(e).all(|(l, k)| *l == 0 || k >= l);
        let tail = self.tail.with_vars(&vars)?;
        let mut cur = p.with_vars(&vars)?;
        loop {
            let hit = cur
                .terms()
                .rev()
                .find(|(e, _)| divides(e))
                .map(|(e, c)| (e.clone(), c.clone()));
            let Some((e, c)) = hit else { break };
            let quot: Exponent = e.iter().zip(&lead).map(|(a, b)| a - b).collect();
            let m = MultiPoly::monomial(&vars, quot, c.clone())?;
            let term = MultiPoly::monomial(&vars, e, c)?;
            cur = &(&cur - &term) + &(&m * &tail);
        }
        Ok(cur)
    }

    /// True iff `p` reduces to zero.
    pub fn contains(&self, p: &MultiPoly) -> Result<bool> {
        Ok(self.reduce(p)?.is_zero())
    }
}
