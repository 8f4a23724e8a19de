//! Built-in bundles selectable with `--suite`. Each is produced as JSON and
//! parsed back, so suites exercise the same path as bundle files.

use poissonkit::action::{plane, GroupRelation, LinearPoissonAction};
use poissonkit::bialgebra::RMatrix;
use poissonkit::json::{
    ActionBundle, AlgebraRef, BialgebraBundle, LieBundle, LieJson, PoissonBundle, PolyJson,
    RMatrixJson, RatJson,
};
use poissonkit::lie::{LieAlgebra, LieModule};
use poissonkit::linalg::Matrix;
use poissonkit::poisson::{lie_poisson, polynomial_casimirs, PolyBivector};
use poissonkit::{q, qf, MultiPoly, Scalar, VarSet};
use serde_json::Value;

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("bundle serializes")
}

pub fn lie(name: &str) -> Option<Value> {
    let algebra = match name {
        "sl2" | "so3" | "heisenberg" => AlgebraRef::Named(name.into()),
        "abelian2" => AlgebraRef::Named("abelian:2".into()),
        "sl2-corrupted" => {
            let l = LieAlgebra::sl2().with_constant(0, 1, 0, q(1)).ok()?;
            AlgebraRef::Inline(LieJson::from_algebra(&l))
        }
        _ => return None,
    };
    Some(to_value(&LieBundle { algebra }))
}

pub fn bialgebra(name: &str) -> Option<Value> {
    let r = match name {
        "sl2-standard" => RMatrix::sl2_family(q(0), q(2), q(0)),
        "sl2-general" => RMatrix::sl2_family(q(1), q(2), q(3)),
        "so3-trivial" => RMatrix::three_dim(LieAlgebra::so3(), q(0), q(0), q(0)).ok()?,
        _ => return None,
    };
    Some(to_value(&BialgebraBundle::Coboundary(RMatrixJson::from_r(
        &r,
    ))))
}

fn sl2_lie_poisson_bundle() -> PoissonBundle {
    let pi = lie_poisson(&LieAlgebra::sl2());
    let mut b = PoissonBundle::new(&pi);
    b.casimirs = polynomial_casimirs(&pi, 2)
        .unwrap_or_default()
        .into_iter()
        .filter(|c| c.as_constant().is_none())
        .map(|c| PolyJson::from_poly(&c))
        .collect();
    b
}

pub fn poisson(name: &str) -> Option<Value> {
    let b = match name {
        "zero" => PoissonBundle::new(&PolyBivector::zero(&VarSet::numbered("x", 2))),
        "symplectic" => PoissonBundle::new(
            &PolyBivector::standard_symplectic(&VarSet::affine(&["x", "y"])).ok()?,
        ),
        "sl2-lie-poisson" => sl2_lie_poisson_bundle(),
        "so3-corrupted" => {
            let pi = lie_poisson(&LieAlgebra::so3());
            let v = pi.vars().clone();
            let e = &pi.entry(0, 1).clone() + &MultiPoly::var(&v, 0);
            let pi = PolyBivector::from_entries(
                &v,
                [
                    (0, 1, e),
                    (1, 2, pi.entry(1, 2).clone()),
                    (2, 0, pi.entry(2, 0).clone()),
                ],
            )
            .ok()?;
            PoissonBundle::new(&pi)
        }
        _ => return None,
    };
    Some(to_value(&b))
}

pub fn flow(name: &str) -> Option<Value> {
    let b = match name {
        "oscillator" => {
            let v = VarSet::affine(&["x", "y"]);
            let mut b = PoissonBundle::new(&PolyBivector::standard_symplectic(&v).ok()?);
            let h = (&MultiPoly::var(&v, 0).pow(2) + &MultiPoly::var(&v, 1).pow(2))
                .scale(&Scalar::frac(1, 2));
            b.hamiltonian = Some(PolyJson::from_poly(&h));
            b.x0 = Some(vec![1.0, 0.0]);
            b
        }
        "sl2-casimir" => {
            let mut b = sl2_lie_poisson_bundle();
            b.hamiltonian = b.casimirs.first().cloned();
            b.x0 = Some(vec![0.3, -0.2, 0.5]);
            b
        }
        "sl2-rigid" => {
            let mut b = sl2_lie_poisson_bundle();
            let v = VarSet::numbered("mu", 3);
            let h = &MultiPoly::var(&v, 0).pow(2)
                + &MultiPoly::var(&v, 1).pow(2).scale(&Scalar::int(2));
            b.hamiltonian = Some(PolyJson::from_poly(&h));
            b.x0 = Some(vec![0.3, -0.2, 0.5]);
            b
        }
        _ => return None,
    };
    Some(to_value(&b))
}

fn rotation() -> Option<LinearPoissonAction> {
    let v = VarSet::affine(&["x", "y"]);
    let gen = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(-1), q(0)]]).ok()?;
    let pi = PolyBivector::standard_symplectic(&v).ok()?;
    LinearPoissonAction::new(
        LieAlgebra::abelian(1),
        vec![gen],
        pi,
        None,
        GroupRelation::SpecialOrthogonal,
    )
    .ok()
}

fn coadjoint(l: &LieAlgebra) -> Option<LinearPoissonAction> {
    let m = LieModule::coadjoint(l);
    let rep = (0..l.dim()).map(|i| m.rho(i).clone()).collect();
    LinearPoissonAction::new(l.clone(), rep, lie_poisson(l), None, GroupRelation::General).ok()
}

pub fn action(name: &str) -> Option<Value> {
    let b = match name {
        "plane-sl2" => ActionBundle::from_action(
            &plane::sl2_plane(
                &[q(0), q(2), q(0)],
                &plane::printed_h(&[q(0), q(2), q(0)], &q(1)),
            )
            .ok()?,
        ),
        "plane-circle" => ActionBundle::from_action(
            &plane::sl2_plane(
                &[q(0), q(0), q(4)],
                &plane::printed_h(&[q(0), q(0), q(4)], &q(1)),
            )
            .ok()?,
        ),
        "plane-circle-negative" => {
            let mut b = ActionBundle::from_action(
                &plane::sl2_plane(
                    &[q(0), q(0), q(4)],
                    &plane::printed_h(&[q(0), q(0), q(4)], &q(-1)),
                )
                .ok()?,
            );
            // (3/5, 4/5) lies on the degeneracy circle.
            let pts = [[qf(3, 5), qf(4, 5)], [q(1), q(1)], [qf(1, 2), q(0)]];
            b.points = Some(
                pts.iter()
                    .map(|p| p.iter().map(RatJson::from_rational).collect())
                    .collect(),
            );
            b
        }
        "rotation" => ActionBundle::from_action(&rotation()?),
        "sl2-coadjoint" => ActionBundle::from_action(&coadjoint(&LieAlgebra::sl2())?),
        _ => return None,
    };
    Some(to_value(&b))
}

pub fn momentum(name: &str) -> Option<Value> {
    let (a, comps) = match name {
        "rotation" => {
            let a = rotation()?;
            let v = a.pi().vars().clone();
            let m = (&MultiPoly::var(&v, 0).pow(2) + &MultiPoly::var(&v, 1).pow(2))
                .scale(&Scalar::frac(1, 2));
            (a, vec![m])
        }
        "sl2-coadjoint" | "sl2-coadjoint-shifted" => {
            let a = coadjoint(&LieAlgebra::sl2())?;
            let v = a.pi().vars().clone();
            let shift = if name.ends_with("shifted") {
                [1, -2, 3]
            } else {
                [0, 0, 0]
            };
            let m = (0..3)
                .map(|i| &MultiPoly::var(&v, i) + &MultiPoly::constant(&v, Scalar::int(shift[i])))
                .collect();
            (a, m)
        }
        _ => return None,
    };
    let mut b = ActionBundle::from_action(&a);
    b.momentum = Some(comps.iter().map(PolyJson::from_poly).collect());
    Some(to_value(&b))
}

pub fn lookup(command: &str, name: &str) -> Option<Value> {
    match command {
        "check-lie" => lie(name),
        "check-bialgebra" => bialgebra(name),
        "check-poisson" | "stratify" => poisson(name),
        "flow" => flow(name),
        "check-action" => action(name),
        "momentum" => momentum(name),
        _ => None,
    }
}

pub fn names(command: &str) -> &'static [&'static str] {
    match command {
        "check-lie" => &["sl2", "so3", "heisenberg", "abelian2", "sl2-corrupted"],
        "check-bialgebra" => &["sl2-standard", "sl2-general", "so3-trivial"],
        "check-poisson" | "stratify" => &["zero", "symplectic", "sl2-lie-poisson", "so3-corrupted"],
        "flow" => &["oscillator", "sl2-casimir", "sl2-rigid"],
        "check-action" => &[
            "plane-sl2",
            "plane-circle",
            "plane-circle-negative",
            "rotation",
            "sl2-coadjoint",
        ],
        "momentum" => &["rotation", "sl2-coadjoint", "sl2-coadjoint-shifted"],
        _ => &[],
    }
}
