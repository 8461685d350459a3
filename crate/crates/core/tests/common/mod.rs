//! Strategies and property bodies shared by the property suite and the
//! acceptance runner.

#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use verdier::bundles::{csm_smooth_ci, CompleteIntersection, Space};
use verdier::catalog::{builtin, builtin_names, ScenarioSpec};
use verdier::constructible::{
    csm_of_function, euler_of_function, fiber_euler, push_stratified, ConstructibleFunction, CsmSource, Registry,
    StratificationTable,
};
use verdier::ring::{rat, BaseGeometry, ChowClass, Monomial, Ring};
use verdier::specialize::{delta_function, specialization_csm, specialization_pushforward, Component, ResolutionDatum};
use verdier::verify::{check_identity_formal_mutated, Mutation};

pub type Outcome = Result<(), TestCaseError>;

pub fn formal3() -> BaseGeometry {
    BaseGeometry::formal(3, &["L", "S"])
}

/// Random class on `ring`: small integer coefficients, exponents up to 3.
pub fn class_in(ring: Arc<Ring>) -> impl Strategy<Value = ChowClass> {
    let n = ring.symbols().len();
    prop::collection::vec((prop::collection::vec(0u16..=3, n), -5i64..=5), 0..8).prop_map(move |terms| {
        ChowClass::from_terms(
            &ring,
            terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), rat(c))),
        )
    })
}

pub fn base_class() -> impl Strategy<Value = ChowClass> {
    class_in(formal3().ring().clone())
}

pub fn twists(max: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-3i64..=3, -3i64..=3), 1..max)
}

fn line(b: &BaseGeometry, l: i64, s: i64) -> ChowClass {
    &b.line_class("L").unwrap().scale_int(l) + &b.line_class("S").unwrap().scale_int(s)
}

fn bundle(b: &BaseGeometry, twists: &[(i64, i64)]) -> Space {
    let mut summands = vec![ChowClass::zero(b.ring())];
    summands.extend(twists.iter().map(|(l, s)| line(b, *l, *s)));
    Space::Base(b.clone()).bundle(summands).unwrap()
}

pub fn ring_axioms(a: &ChowClass, b: &ChowClass, c: &ChowClass) -> Outcome {
    let ring = a.ring().clone();
    let zero = ChowClass::zero(&ring);
    let one = ChowClass::one(&ring);
    prop_assert_eq!(a + b, b + a);
    prop_assert_eq!(a * b, b * a);
    prop_assert_eq!(&(a + b) + c, a + &(b + c));
    prop_assert_eq!(&(a * b) * c, a * &(b * c));
    prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    prop_assert_eq!(a + &zero, a.clone());
    prop_assert_eq!(a * &one, a.clone());
    prop_assert!((a - &a.clone()).is_zero());
    prop_assert!((a * &zero).is_zero());
    Ok(())
}

/// Degree `k` of a product only sees degrees `i + j = k` of the factors.
pub fn graded_product(a: &ChowClass, b: &ChowClass) -> Outcome {
    let ab = a * b;
    for k in 0..=a.ring().dim() {
        let mut expected = ChowClass::zero(a.ring());
        for i in 0..=k {
            expected = &expected + &(&a.degree_component(i) * &b.degree_component(k - i));
        }
        prop_assert_eq!(ab.degree_component(k), expected);
    }
    Ok(())
}

pub fn series_inversion(a: &ChowClass) -> Outcome {
    let one = ChowClass::one(a.ring());
    let u = &one + &(a - &a.degree_component(0));
    let inv = u.series_invert().unwrap();
    prop_assert_eq!(&u * &inv, one.clone());
    prop_assert_eq!(inv.series_invert().unwrap(), u);
    Ok(())
}

/// `π_* ζ^j = 0` for `j < r - 1`, `π_* ζ^{r-1} = 1`, and higher powers have
/// no degree-0 part.
pub fn relative_top_power(twists: &[(i64, i64)], extra: u32) -> Outcome {
    let b = formal3();
    let p = bundle(&b, twists);
    let r = twists.len() as u32 + 1;
    let z = p.zeta().unwrap();
    for j in 0..r - 1 {
        prop_assert!(p.push_to_root(&z.pow(j)).unwrap().is_zero());
    }
    prop_assert_eq!(p.push_to_root(&z.pow(r - 1)).unwrap(), ChowClass::one(b.ring()));
    let next = p.push_to_root(&z.pow(r + extra)).unwrap();
    prop_assert!(next.degree_component(0).is_zero());
    Ok(())
}

pub fn projection_formula(twists: &[(i64, i64)], k: u32, beta: &ChowClass) -> Outcome {
    let b = formal3();
    let p = bundle(&b, twists);
    let zk = p.zeta().unwrap().pow(k);
    let lhs = p.push_to_root(&(&zk * &p.pullback(beta).unwrap())).unwrap();
    let rhs = &p.push_to_root(&zk).unwrap() * beta;
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// Degree 0 of a pushforward is the Euler characteristic of the generic
/// fibre: plane cubic 0, conic 2, line 2, the plane itself 3.
pub fn generic_fibre_euler(a: i64, b: i64, k: i64) -> Outcome {
    let base = formal3();
    let p = bundle(&base, &[(a, 0), (b, 0)]);
    let z = p.zeta().unwrap();
    let chi = |degree: i64| {
        let h = &z.scale_int(degree) + &p.pullback(&line(&base, k, 0)).unwrap();
        let y = CompleteIntersection::new(p.clone(), vec![h], true).unwrap();
        csm_smooth_ci(&y).unwrap().constant_term()
    };
    prop_assert_eq!(chi(3), rat(fiber_euler::ELLIPTIC));
    prop_assert_eq!(chi(2), rat(fiber_euler::SMOOTH_CONIC));
    prop_assert_eq!(chi(1), rat(2));
    let whole = p.push_to_root(&p.tangent_chern()).unwrap();
    prop_assert_eq!(whole.constant_term(), rat(3));
    Ok(())
}

fn p2_registry(l: i64) -> Registry {
    let b = BaseGeometry::projective(2).with_assignment("L", l);
    let h = b.line_class("L").unwrap();
    let smooth = |ks: &[i64]| {
        CsmSource::smooth_or_empty(Space::Base(b.clone()), ks.iter().map(|k| h.scale_int(*k)).collect()).unwrap()
    };
    Registry::new(b.clone())
        .with_stratum("C1", smooth(&[1]))
        .unwrap()
        .with_stratum("C2", smooth(&[2]))
        .unwrap()
        .with_stratum("P", smooth(&[1, 2]))
        .unwrap()
}

const NAMES: [&str; 4] = ["B", "C1", "C2", "P"];

pub fn table() -> impl Strategy<Value = StratificationTable> {
    prop::collection::vec((0usize..4, prop::option::of(0usize..4), -4i64..=4), 0..6).prop_map(|rows| {
        rows.into_iter().fold(StratificationTable::new(), |t, (v, w, c)| {
            t.row(NAMES[v], w.map(|w| NAMES[w]), c)
        })
    })
}

/// Stratified pushforwards add up row by row, and so do their CSM classes
/// and Euler characteristics.
pub fn stratified_additivity(t1: &StratificationTable, t2: &StratificationTable, l: i64) -> Outcome {
    let reg = p2_registry(l);
    let mut joined = t1.clone();
    joined.rows.extend(t2.rows.clone());
    let f1 = push_stratified(t1, &reg).unwrap();
    let f2 = push_stratified(t2, &reg).unwrap();
    let f = push_stratified(&joined, &reg).unwrap();
    prop_assert_eq!(&f, &(&f1 + &f2));
    let c = csm_of_function(&f, &reg).unwrap();
    prop_assert_eq!(
        c,
        &csm_of_function(&f1, &reg).unwrap() + &csm_of_function(&f2, &reg).unwrap()
    );
    let chi = |name: &str| euler_of_function(&ConstructibleFunction::indicator(name), &reg);
    prop_assert_eq!(
        euler_of_function(&f, &reg).unwrap(),
        joined.alternating_count(chi).unwrap()
    );
    Ok(())
}

/// With one component of multiplicity `m`, `δ = m·1_D`.
pub fn single_component_delta(m: u32, l: i64, k: i64) -> Outcome {
    let b = BaseGeometry::projective(2).with_assignment("L", l);
    let lb = b.line_class("L").unwrap();
    let p = Space::Base(b.clone())
        .bundle(vec![ChowClass::zero(b.ring()), lb.clone()])
        .unwrap();
    let h = &p.zeta().unwrap().scale_int(2) + &p.pullback(&lb.scale_int(2 * k)).unwrap();
    let model = CompleteIntersection::new(p, vec![h], true).unwrap();
    let comp = Component {
        name: "D".into(),
        multiplicity: m,
        model: model.clone(),
        table: StratificationTable::new().row("B", None, fiber_euler::SMOOTH_CONIC),
    };
    let r = ResolutionDatum::new(vec![comp], vec![]).unwrap();
    let m = m as i64;
    prop_assert_eq!(delta_function(&r), ConstructibleFunction::from_terms([("D", m)]));
    prop_assert_eq!(
        specialization_pushforward(&r, &Registry::new(b)).unwrap(),
        ConstructibleFunction::from_terms([("B", 2 * m)])
    );
    prop_assert_eq!(
        specialization_csm(&r).unwrap(),
        csm_smooth_ci(&model).unwrap().scale_int(m)
    );
    Ok(())
}

/// Every single-term corruption of a resolution: each component or
/// intersection dropped, each component's multiplicity doubled, each
/// intersection's weight replaced by -1.
pub fn mutations(spec: &ScenarioSpec) -> Vec<Mutation> {
    let mut out = Vec::new();
    for c in &spec.resolution.components {
        out.push(Mutation::Drop(c.name.clone()));
        out.push(Mutation::Reweight(c.name.clone(), 2 * c.multiplicity as i64));
    }
    for x in &spec.resolution.intersections {
        out.push(Mutation::Drop(x.name.clone()));
        out.push(Mutation::Reweight(x.name.clone(), -1));
    }
    out
}

/// True when some dimension in `1..=3` fails under `m`.
pub fn detected(spec: &ScenarioSpec, m: &Mutation) -> bool {
    (1..=3).any(|d| !check_identity_formal_mutated(spec, d, Some(m)).unwrap().passed())
}

/// Mutations that slip through, as `family: mutation`.
pub fn undetected_mutations() -> Vec<String> {
    let mut out = Vec::new();
    for name in builtin_names() {
        let spec = builtin(name).unwrap();
        for m in mutations(&spec) {
            if !detected(&spec, &m) {
                out.push(format!("{name}: {m:?}"));
            }
        }
    }
    out
}
