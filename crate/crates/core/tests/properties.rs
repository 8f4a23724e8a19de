use poissonkit::action::{
    check_poisson_action, gamma, gamma_checks, momentum_check, momentum_kernel_image, plane,
    GroupRelation, LinearPoissonAction, MomentumMap,
};
use poissonkit::bialgebra::{
    delta_from_r, dual_algebra_from_r, dual_bracket_from_r, schouten_wedge_bracket,
    validate_bialgebra, LieBialgebra, RMatrix,
};
use poissonkit::lie::{ce_differential, euler_characteristic, LieAlgebra, LieModule};
use poissonkit::linalg::Matrix;
use poissonkit::numeric::NumericField;
use poissonkit::poisson::{
    bracket, hamiltonian_field, hamiltonian_flow, jacobi_check, lie_derivative_bivector,
    lie_poisson, one_form_bracket, r_k, rank_at, rank_from_minors, FlowOptions, OneForm,
    PolyBivector,
};
use poissonkit::relation::RelationIdeal;
use poissonkit::sampling::Sampler;
use poissonkit::{q, qf, MultiPoly, Rational, Scalar, VarSet};
use proptest::prelude::*;

type Terms = Vec<(Vec<i32>, i64)>;

fn terms(nvars: usize, deg: i32, coeff: i64, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec(
        (prop::collection::vec(0..=deg, nvars), -coeff..=coeff),
        0..=max_terms,
    )
    .prop_map(move |ts| {
        ts.into_iter()
            .filter(|(e, _)| e.iter().sum::<i32>() <= deg)
            .collect()
    })
}

fn poly(v: &VarSet, t: &Terms) -> MultiPoly {
    MultiPoly::from_terms(v, t.iter().map(|(e, c)| (e.clone(), Scalar::int(*c)))).unwrap()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| qf(n, d))
}

fn rvec(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), n)
}

fn basis(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

/// Lie algebras that satisfy Jacobi for every parameter choice: the named
/// ones, the 2-dimensional `[e1,e2] = a e1 + b e2`, and `ℝ ⋉_A ℝ^k`.
#[derive(Clone, Debug)]
enum Family {
    Sl2,
    So3,
    Heisenberg,
    Abelian(usize),
    Plane(Rational, Rational),
    Semidirect(usize, Vec<i64>),
}

impl Family {
    fn build(&self) -> LieAlgebra {
        match self {
            Family::Sl2 => LieAlgebra::sl2(),
            Family::So3 => LieAlgebra::so3(),
            Family::Heisenberg => LieAlgebra::heisenberg(),
            Family::Abelian(n) => LieAlgebra::abelian(*n),
            Family::Plane(a, b) => {
                LieAlgebra::from_brackets(basis(2), &[(0, 1, vec![a.clone(), b.clone()])]).unwrap()
            }
            Family::Semidirect(k, a) => {
                let n = k + 1;
                let br: Vec<_> = (0..*k)
                    .map(|j| {
                        let mut col = vec![q(0)];
                        col.extend((0..*k).map(|i| q(a[i * k + j])));
                        (0, j + 1, col)
                    })
                    .collect();
                LieAlgebra::from_brackets(basis(n), &br).unwrap()
            }
        }
    }
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Sl2),
        Just(Family::So3),
        Just(Family::Heisenberg),
        (1usize..=4).prop_map(Family::Abelian),
        (rational(), rational()).prop_map(|(a, b)| Family::Plane(a, b)),
        (2usize..=3)
            .prop_flat_map(|k| (Just(k), prop::collection::vec(-3i64..=3, k * k)))
            .prop_map(|(k, a)| Family::Semidirect(k, a)),
    ]
}

fn module(l: &LieAlgebra, which: u8) -> LieModule {
    match which {
        0 => LieModule::trivial(l, 1),
        1 => LieModule::adjoint(l),
        _ => LieModule::coadjoint(l),
    }
}

fn antisym(n: usize, upper: &[Rational]) -> Matrix<Rational> {
    let mut m = Matrix::zeros(n, n);
    let mut t = 0;
    for i in 0..n {
        for j in i + 1..n {
            m[(i, j)] = upper[t].clone();
            m[(j, i)] = -upper[t].clone();
            t += 1;
        }
    }
    m
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn bivector(v: &VarSet, entries: &[Terms]) -> PolyBivector {
    let n = v.len();
    let mut t = 0;
    let mut es = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            es.push((i, j, poly(v, &entries[t])));
            t += 1;
        }
    }
    PolyBivector::from_entries(v, es).unwrap()
}

fn jacobi_bivectors() -> impl Strategy<Value = PolyBivector> {
    prop_oneof![
        Just(lie_poisson(&LieAlgebra::sl2())),
        Just(lie_poisson(&LieAlgebra::so3())),
        Just(lie_poisson(&LieAlgebra::heisenberg())),
        Just(PolyBivector::standard_symplectic(&VarSet::numbered("x", 4)).unwrap()),
        // h ∂1∧∂2 in the plane is Poisson for any h.
        terms(2, 3, 5, 4).prop_map(|t| {
            let v = VarSet::numbered("x", 2);
            PolyBivector::from_entries(&v, [(0, 1, poly(&v, &t))]).unwrap()
        }),
    ]
}

fn with_polys(n_polys: usize) -> impl Strategy<Value = (PolyBivector, Vec<Terms>)> {
    jacobi_bivectors().prop_flat_map(move |pi| {
        let n = pi.dim();
        (Just(pi), prop::collection::vec(terms(n, 2, 5, 4), n_polys))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in terms(3, 3, 9, 5), b in terms(3, 3, 9, 5), c in terms(3, 3, 9, 5)) {
        let v = VarSet::numbered("x", 3);
        let (a, b, c) = (poly(&v, &a), poly(&v, &b), poly(&v, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MultiPoly::one(&v), a.clone());
    }

    #[test]
    fn reduction_ignores_ideal_multiples(p in terms(6, 2, 9, 5), r in terms(6, 3, 9, 6)) {
        let v = VarSet::affine(&["a1", "a2", "a3", "a4", "x1", "x2"]);
        let ideal = RelationIdeal::sl2_determinant(&v, ["a1", "a2", "a3", "a4"]).unwrap();
        let (p, r) = (poly(&v, &p), poly(&v, &r));
        let lhs = &(&p * ideal.generator()) + &r;
        prop_assert_eq!(ideal.reduce(&lhs).unwrap(), ideal.reduce(&r).unwrap());
        prop_assert!(ideal.contains(&(&p * ideal.generator())).unwrap());
    }

    #[test]
    fn fd_gradient_matches_partials(t in terms(2, 4, 10, 5), x in prop::collection::vec(-1.0f64..1.0, 2)) {
        let v = VarSet::numbered("x", 2);
        let f = poly(&v, &t);
        let ff = f.to_f64().unwrap();
        let num = NumericField::new(2, "f", move |y: &[f64]| Ok(ff.eval(y)));
        let h = num.step();
        let g = num.fd_gradient(&x).unwrap();
        for (i, gi) in g.iter().enumerate() {
            let exact = f.partial(i).to_f64().unwrap().eval(&x);
            prop_assert!((gi - exact).abs() <= 10.0 * h * h, "∂{} {} vs {}", i, gi, exact);
        }
    }

    #[test]
    fn leibniz_rule(
        entries in prop::collection::vec(terms(3, 2, 5, 3), 3),
        f in terms(3, 2, 5, 4), g in terms(3, 2, 5, 4), h in terms(3, 2, 5, 4),
    ) {
        let v = VarSet::numbered("x", 3);
        let pi = bivector(&v, &entries);
        let (f, g, h) = (poly(&v, &f), poly(&v, &g), poly(&v, &h));
        let lhs = bracket(&pi, &(&f * &g), &h).unwrap();
        let rhs = &(&f * &bracket(&pi, &g, &h).unwrap()) + &(&bracket(&pi, &f, &h).unwrap() * &g);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(bracket(&pi, &f, &g).unwrap(), -bracket(&pi, &g, &f).unwrap());
    }

    #[test]
    fn one_form_bracket_of_exact_forms(
        entries in prop::collection::vec(terms(3, 2, 5, 3), 3),
        f in terms(3, 2, 5, 4), g in terms(3, 2, 5, 4),
    ) {
        let v = VarSet::numbered("x", 3);
        let pi = bivector(&v, &entries);
        let (f, g) = (poly(&v, &f), poly(&v, &g));
        let b = one_form_bracket(&pi, &OneForm::differential(&f), &OneForm::differential(&g)).unwrap();
        prop_assert_eq!(b.value, OneForm::differential(&bracket(&pi, &f, &g).unwrap()));
        prop_assert!(b.contracted_agrees);
    }

    #[test]
    fn hamiltonian_fields_form_a_lie_morphism((pi, fs) in with_polys(2)) {
        prop_assert!(jacobi_check(&pi).unwrap().holds);
        let v = pi.vars().clone();
        let (f, g) = (poly(&v, &fs[0]), poly(&v, &fs[1]));
        let xf = hamiltonian_field(&pi, &f).unwrap();
        let xg = hamiltonian_field(&pi, &g).unwrap();
        let fg = bracket(&pi, &f, &g).unwrap();
        prop_assert_eq!(xf.lie_bracket(&xg).unwrap(), hamiltonian_field(&pi, &fg).unwrap());
        prop_assert!(lie_derivative_bivector(&pi, &xf).unwrap().is_zero());
    }

    #[test]
    fn ce_differential_squares_to_zero(f in family(), which in 0u8..3) {
        let l = f.build();
        prop_assert!(l.check_jacobi().holds);
        let m = module(&l, which);
        for p in 0..l.dim() {
            let d0 = ce_differential(&l, &m, p).unwrap().matrix;
            let d1 = ce_differential(&l, &m, p + 1).unwrap().matrix;
            prop_assert!(d1.mul(&d0).unwrap().is_zero(), "d∘d ≠ 0 at degree {}", p);
        }
        let (from_dims, from_ranks) = euler_characteristic(&l, &m).unwrap();
        prop_assert_eq!(from_dims, from_ranks);
    }

    #[test]
    fn bracket_identities_on_vectors(
        f in family(),
        seed in rvec(15),
    ) {
        let l = f.build();
        let n = l.dim();
        let (x, y, z) = (&seed[..n], &seed[5..5 + n], &seed[10..10 + n]);
        let br = |a: &[Rational], b: &[Rational]| l.bracket(a, b).unwrap();
        let neg: Vec<Rational> = br(y, x).into_iter().map(|c| -c).collect();
        prop_assert_eq!(br(x, y), neg);
        let jac: Vec<Rational> = (0..n)
            .map(|k| br(x, &br(y, z))[k].clone() + br(y, &br(z, x))[k].clone() + br(z, &br(x, y))[k].clone())
            .collect();
        prop_assert!(jac.iter().all(|c| c == &q(0)));
    }

    #[test]
    fn coboundary_bialgebras(so3 in any::<bool>(), upper in rvec(3), x in rvec(3), xi in rvec(3), eta in rvec(3)) {
        let l = if so3 { LieAlgebra::so3() } else { LieAlgebra::sl2() };
        let r = RMatrix::new(l, antisym(3, &upper)).unwrap();
        let dual = dual_algebra_from_r(&r).unwrap();
        if schouten_wedge_bracket(&r).unwrap().invariant {
            prop_assert!(dual.check_jacobi().holds);
        }
        // A coboundary is always a cocycle, r-matrix or not.
        let report = validate_bialgebra(&LieBialgebra::from_r(&r).unwrap()).unwrap();
        prop_assert!(report.cocycle_holds());
        // ⟨[ξ,η]_*, X⟩ = δ(X)(ξ,η).
        let d = delta_from_r(&r, &x).unwrap();
        let lhs = dot(&dual_bracket_from_r(&r, &xi, &eta).unwrap(), &x);
        prop_assert_eq!(lhs, dot(&xi, &d.mul_vec(&eta).unwrap()));
    }

    #[test]
    fn cocycle_for_any_lambda_on_any_algebra(f in family(), upper in rvec(10)) {
        let l = f.build();
        let n = l.dim();
        let r = RMatrix::new(l, antisym(n, &upper)).unwrap();
        prop_assert!(validate_bialgebra(&LieBialgebra::from_r(&r).unwrap()).unwrap().cocycle_holds());
    }

    #[test]
    fn coadjoint_actions_are_anti_homomorphisms(f in family()) {
        let l = f.build();
        let rep = (0..l.dim()).map(|i| LieModule::coadjoint(&l).rho(i).clone()).collect();
        let a = LinearPoissonAction::new(l.clone(), rep, lie_poisson(&l), None, GroupRelation::General).unwrap();
        let sign = a.infinitesimal().unwrap().homomorphism_sign().unwrap();
        if l.is_abelian() {
            prop_assert!(sign.is_some());
        } else {
            prop_assert_eq!(sign, Some(-1));
        }
    }

    #[test]
    fn gamma_is_casimir_when_momentum_holds(f in family(), mu0 in rvec(4), t in 0i64..=2) {
        let l = f.build();
        let n = l.dim();
        let rep = (0..n).map(|i| LieModule::coadjoint(&l).rho(i).clone()).collect();
        let a = LinearPoissonAction::new(l.clone(), rep, lie_poisson(&l), None, GroupRelation::General).unwrap();
        let v = a.pi().vars().clone();
        let comps = (0..n)
            .map(|i| &MultiPoly::var(&v, i).scale(&Scalar::int(t)) + &MultiPoly::constant(&v, Scalar::real(mu0[i].clone())))
            .collect();
        let m = MomentumMap::exact(comps);
        let passes = momentum_check(a.pi(), &a.infinitesimal().unwrap(), &m, &[], 0.0).unwrap().passes;
        prop_assert!(passes || t != 1);
        let g = gamma(a.pi(), &l, &m).unwrap();
        let checks = gamma_checks(a.pi(), &l, &m, &g).unwrap();
        if passes {
            prop_assert!(checks.all_casimir());
        }
        prop_assert!(checks.routes_agree);
    }

    #[test]
    fn gamma_closed_on_lie_algebras(f in family(), mu0 in rvec(4)) {
        // Closedness is checked directly, without first asserting the
        // Casimir property.
        let l = f.build();
        let m = MomentumMap::identity(lie_poisson(&l).vars()).shifted(&mu0[..l.dim()]).unwrap();
        let pi = lie_poisson(&l);
        let g = gamma(&pi, &l, &m).unwrap();
        prop_assert!(gamma_checks(&pi, &l, &m, &g).unwrap().closed());
    }

    #[test]
    fn rotation_kernel_image(x in rational(), y in rational()) {
        let v = VarSet::affine(&["x", "y"]);
        let gen = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(-1), q(0)]]).unwrap();
        let pi = PolyBivector::standard_symplectic(&v).unwrap();
        let a = LinearPoissonAction::new(LieAlgebra::abelian(1), vec![gen], pi, None, GroupRelation::SpecialOrthogonal)
            .unwrap();
        let r2 = &MultiPoly::var(&v, 0).pow(2) + &MultiPoly::var(&v, 1).pow(2);
        let m = MomentumMap::exact(vec![r2.scale(&Scalar::frac(1, 2))]);
        let rep = momentum_kernel_image(a.pi(), &a.infinitesimal().unwrap(), &m, &[x, y]).unwrap();
        prop_assert!(rep.holds());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_matches_minors(
        (n, entries) in (2usize..=5).prop_flat_map(|n| (Just(n), prop::collection::vec(terms(n, 2, 4, 3), n * (n - 1) / 2))),
        p in rvec(5),
    ) {
        let v = VarSet::numbered("x", n);
        let pi = bivector(&v, &entries);
        let pt: Vec<Scalar> = p[..n].iter().cloned().map(Scalar::real).collect();
        let rank = rank_at(&pi, &pt).unwrap();
        prop_assert_eq!(rank, rank_from_minors(&pi, &pt).unwrap());
        prop_assert_eq!(rank % 2, 0);
        for k in 1..=n {
            prop_assert_eq!(r_k(&pi, &pt, k).unwrap() == q(0), k > rank);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn rank_constant_along_flows(h in terms(3, 2, 3, 4), x0 in prop::collection::vec(0.1f64..1.0, 3)) {
        let pi = lie_poisson(&LieAlgebra::so3());
        let f = poly(pi.vars(), &h);
        let opts = FlowOptions { dt: 1e-3, steps: 500, record_every: 50, ..FlowOptions::default() };
        let tr = hamiltonian_flow(&pi, &f, &[], &x0, &opts).unwrap();
        prop_assert!(tr.rank_constant);
        prop_assert!(tr.samples.iter().all(|s| s.rank == Some(2)));
    }

    #[test]
    fn plane_action_residuals(seed in any::<u64>(), c in rational()) {
        let l = [q(0), q(2), q(0)];
        let h = plane::printed_h(&l, &c);
        let mut s = Sampler::seeded(seed);
        let mut samples: Vec<_> = (0..4).map(|_| (s.sl2(2), s.point(2))).collect();
        let good = plane::sl2_plane(&l, &h).unwrap();
        prop_assert!(check_poisson_action(&good, &samples).unwrap().passes());
        prop_assert_eq!(good.infinitesimal().unwrap().homomorphism_sign().unwrap(), Some(-1));
        let x1 = MultiPoly::var(h.vars(), 0);
        let bad = plane::sl2_plane(&l, &(&h + &x1)).unwrap();
        // Random samples may all be near-trivial, so one shear is pinned.
        samples.push((Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(0), q(1)]]).unwrap(), vec![q(1), q(2)]));
        prop_assert!(!check_poisson_action(&bad, &samples).unwrap().passes());
    }
}
