use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sphtrop::expr::{parse, parse_matrix, Assignment, Expression, Variable};
use sphtrop::horn::{
    attained_products, enumerate_t, enumerate_u, horn_check, HornQuery, IndexTriple, OracleConfig,
};
use sphtrop::rat::q;
use sphtrop::trop::{
    check_on_variety, in_valuation_cone, sample_family, val_point, GroupSpace, Membership, Point, SampleConfig,
    VarietySpec,
};
use sphtrop::{PuiseuxSeries, SeriesMatrix, Q};

const P: i64 = 32;

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn nonzero(bound: i64) -> impl Strategy<Value = i64> {
    (1..=bound).prop_flat_map(|c| prop_oneof![Just(c), Just(-c)])
}

/// Nonzero series with valuation in [-5, 5] on a grid with denominator ≤ 3.
fn series() -> impl Strategy<Value = PuiseuxSeries> {
    (1i64..=3)
        .prop_flat_map(|den| {
            (
                Just(den),
                -5 * den..=5 * den,
                nonzero(20),
                prop::collection::vec((1i64..=12, nonzero(20)), 0..4),
            )
        })
        .prop_map(|(den, num, c, tail)| {
            let lead = Q::new(num, den);
            let mut terms = vec![(lead, big(c))];
            terms.extend(tail.into_iter().map(|(k, c)| (lead + Q::new(k, den), big(c))));
            PuiseuxSeries::from_terms(terms, q(P))
        })
}

fn random_entry(rng: &mut ChaCha8Rng) -> PuiseuxSeries {
    if rng.gen_ratio(1, 8) {
        return PuiseuxSeries::zero(q(P));
    }
    let v = rng.gen_range(-5..=5);
    let mut terms = vec![(q(v), big(rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 }))];
    if rng.gen_bool(0.5) {
        terms.push((q(v + rng.gen_range(1..=4)), big(rng.gen_range(-9..=9))));
    }
    PuiseuxSeries::from_terms(terms, q(P))
}

fn random_matrix(n: usize, seed: u64) -> SeriesMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SeriesMatrix::new(n, (0..n * n).map(|_| random_entry(&mut rng)).collect()).unwrap()
}

fn expression() -> impl Strategy<Value = Expression> {
    let leaf = prop_oneof![
        (0i64..20).prop_map(Expression::constant),
        (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Expression::T(Q::new(n, d))),
        (1usize..=2, 1usize..=2).prop_map(|(i, j)| Expression::Var(Variable::Entry(i, j))),
        (1usize..=2).prop_map(|k| Expression::Var(Variable::Param(k))),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expression::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expression::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expression::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expression::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), 1i64..5).prop_map(|(a, c)| Expression::Div(Box::new(a), Box::new(Expression::constant(c)))),
            (inner, 0i64..4).prop_map(|(a, k)| Expression::Pow(Box::new(a), k)),
        ]
    })
}

fn assignment(seed: u64) -> Assignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = Assignment::new(q(P));
    for i in 1..=2 {
        for j in 1..=2 {
            a.set(Variable::Entry(i, j), random_entry(&mut rng));
        }
        a.set(Variable::Param(i), random_entry(&mut rng));
    }
    a
}

fn decreasing(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(lo..=hi, n).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v.into_iter().map(q).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn valuation_is_additive(a in series(), b in series()) {
        let va = a.valuation().unwrap();
        let vb = b.valuation().unwrap();
        prop_assert_eq!(a.mul(&b).valuation().unwrap(), va + vb);
    }

    #[test]
    fn valuation_of_sum(a in series(), b in series()) {
        let va = a.valuation().unwrap();
        let vb = b.valuation().unwrap();
        let s = a.add(&b);
        match s.valuation() {
            Ok(v) => {
                prop_assert!(v >= va.min(vb));
                if va != vb {
                    prop_assert_eq!(v, va.min(vb));
                }
            }
            Err(_) => prop_assert_eq!(va, vb),
        }
    }

    #[test]
    fn inverse_is_inverse(a in series()) {
        let prod = a.mul(&a.invert().unwrap());
        prop_assert!(prod.precision() > q(0));
        prop_assert!(prod.agrees_with(&PuiseuxSeries::one(prod.precision())));
    }

    #[test]
    fn scaling_exponents_scales_valuation(a in series(), n in 1i64..=6, d in 1i64..=4) {
        let c = Q::new(n, d);
        let scaled = a.scale_exponents(c).unwrap();
        prop_assert_eq!(scaled.valuation().unwrap(), a.valuation().unwrap() * c);
        prop_assert_eq!(scaled.precision(), a.precision() * c);
    }

    #[test]
    fn printer_is_stable(e in expression()) {
        let printed = e.to_string();
        let once = parse(&printed).unwrap().to_string();
        let twice = parse(&once).unwrap().to_string();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(printed, once);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn evaluation_is_a_homomorphism(a in expression(), b in expression(), seed in any::<u64>()) {
        let env = assignment(seed);
        let (Ok(x), Ok(y)) = (a.evaluate(&env), b.evaluate(&env)) else {
            return Ok(());
        };
        let sum = Expression::Add(Box::new(a.clone()), Box::new(b.clone())).evaluate(&env).unwrap();
        let prod = Expression::Mul(Box::new(a), Box::new(b)).evaluate(&env).unwrap();
        prop_assert!(sum.agrees_with(&x.add(&y)));
        prop_assert!(prod.agrees_with(&x.mul(&y)));
    }

    #[test]
    fn transpose_keeps_invariant_factors(n in 2usize..=4, seed in any::<u64>()) {
        let m = random_matrix(n, seed);
        if let Ok(f) = m.invariant_factors_minors() {
            prop_assert_eq!(m.transpose().invariant_factors_minors().unwrap(), f);
        }
    }

    #[test]
    fn monomial_scalar_shifts_factors(n in 2usize..=4, seed in any::<u64>(), e in -4i64..=4) {
        let m = random_matrix(n, seed);
        if let Ok(f) = m.invariant_factors_minors() {
            let scaled = m.scale(&PuiseuxSeries::monomial(big(3), q(e), q(P)));
            let g = scaled.invariant_factors_minors().unwrap();
            let want: Vec<Q> = f.alphas().iter().map(|a| a + q(e)).collect();
            prop_assert_eq!(g.alphas(), &want[..]);
        }
    }

    #[test]
    fn smith_transforms_are_units(n in 2usize..=4, seed in any::<u64>()) {
        let m = random_matrix(n, seed);
        if let Ok(s) = m.smith_normal_form() {
            prop_assert_eq!(s.left.determinant().valuation().unwrap(), q(0));
            prop_assert_eq!(s.right.determinant().valuation().unwrap(), q(0));
            prop_assert_eq!(s.invariant_factors(), m.invariant_factors_minors().unwrap());
        }
    }

    #[test]
    fn products_satisfy_horn(n in 2usize..=3, s1 in any::<u64>(), s2 in any::<u64>()) {
        let (m, k) = (random_matrix(n, s1), random_matrix(n, s2));
        let (Ok(a), Ok(b)) = (m.invariant_factors_minors(), k.invariant_factors_minors()) else {
            return Ok(());
        };
        let c = m.multiply(&k).unwrap().invariant_factors_minors().unwrap();
        let query = HornQuery::new(a.into_vec(), b.into_vec(), c.into_vec()).unwrap();
        prop_assert!(horn_check(&query), "{}", query);
    }

    #[test]
    fn horn_is_symmetric(a in decreasing(3, -3, 3), b in decreasing(3, -3, 3), c in decreasing(3, -6, 6)) {
        let ab = HornQuery::new(a.clone(), b.clone(), c.clone()).unwrap();
        let ba = HornQuery::new(b, a, c).unwrap();
        prop_assert_eq!(horn_check(&ab), horn_check(&ba));
    }

    #[test]
    fn horn_is_homogeneous(a in decreasing(3, -3, 3), b in decreasing(3, -3, 3), c in decreasing(3, -6, 6),
                           n in 1i64..=5, d in 1i64..=3) {
        let s = Q::new(n, d);
        let scale = |v: &[Q]| v.iter().map(|x| x * s).collect::<Vec<_>>();
        let base = HornQuery::new(a.clone(), b.clone(), c.clone()).unwrap();
        let scaled = HornQuery::new(scale(&a), scale(&b), scale(&c)).unwrap();
        prop_assert_eq!(horn_check(&base), horn_check(&scaled));
    }

    #[test]
    fn pgl_ignores_representative(n in 2usize..=3, seed in any::<u64>(), e in -5i64..=5, c in 1i64..=7) {
        let m = random_matrix(n, seed);
        let space = GroupSpace::pgl(n);
        if let Ok(v) = val_point(&space, &Point::Matrix(m.clone())) {
            let u = PuiseuxSeries::monomial(big(c), q(e), q(P));
            prop_assert_eq!(val_point(&space, &Point::Matrix(m.scale(&u))).unwrap(), v.clone());
            prop_assert!(in_valuation_cone(&space, &v.coords).unwrap());
        }
    }

    #[test]
    fn torus_val_is_coordinatewise(v in prop::collection::vec(series(), 1..5)) {
        let expected: Vec<Q> = v.iter().map(|s| s.leading_term().unwrap().0).collect();
        let got = val_point(&GroupSpace::torus(v.len()), &Point::Vector(v)).unwrap();
        prop_assert_eq!(got.coords, expected);
    }
}

/// A determinant-one matrix: `diag(t^a, t^b, t^{-a-b})` between random
/// unipotent factors with Laurent entries.
fn sl3_matrix(seed: u64) -> SeriesMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = (rng.gen_range(-4..=4), rng.gen_range(-4..=4));
    let diag = SeriesMatrix::diagonal(
        [a, b, -a - b]
            .iter()
            .map(|e| PuiseuxSeries::monomial(big(1), q(*e), q(P)))
            .collect(),
    );
    let mut unipotent = |upper: bool| {
        let mut m = SeriesMatrix::identity(3, q(P));
        for i in 0..3 {
            for j in 0..3 {
                if (upper && j > i) || (!upper && j < i) {
                    let c = rng.gen_range(-5..=5);
                    m.set(i, j, PuiseuxSeries::monomial(big(c), q(rng.gen_range(-3..=3)), q(P)));
                }
            }
        }
        m
    };
    let (l, u) = (unipotent(false), unipotent(true));
    l.multiply(&diag).unwrap().multiply(&u).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn sl_is_truncated_gl(seed in any::<u64>()) {
        let m = sl3_matrix(seed);
        let point = Point::Matrix(m);
        let gl = val_point(&GroupSpace::gl(3), &point).unwrap();
        let sl = val_point(&GroupSpace::sl(3), &point).unwrap();
        prop_assert_eq!(gl.coords.iter().sum::<Q>(), q(0));
        prop_assert_eq!(&sl.coords[..], &gl.coords[..2]);
        prop_assert!(in_valuation_cone(&GroupSpace::sl(3), &sl.coords).unwrap());
    }
}

const FAMILIES: [&str; 4] = ["s1 + 1, s1; s1, 0", "1, s1; s1^2, s2", "s1, 0; 0, s2", "1, s1; s2, s1*s2 + s1"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn family_values_scale_with_exponents(f in 0usize..FAMILIES.len(), e1 in -4i64..=4, e2 in -4i64..=4,
                                          c1 in nonzero(9), c2 in nonzero(9), n in 1i64..=4, d in 1i64..=3) {
        let rows = parse_matrix(FAMILIES[f]).unwrap();
        let spec = VarietySpec::param(GroupSpace::gl(2), rows.into_iter().flatten().collect()).unwrap();
        let params = vec![
            PuiseuxSeries::monomial(big(c1), q(e1), q(P)),
            PuiseuxSeries::monomial(big(c2), q(e2), q(P)),
        ];
        let Ok(base) = spec.instantiate(&params, q(P)).and_then(|p| val_point(&spec.space, &p)) else {
            return Ok(());
        };
        let c = Q::new(n, d);
        let scaled_params: Vec<PuiseuxSeries> = params.iter().map(|s| s.scale_exponents(c).unwrap()).collect();
        let scaled = spec.instantiate(&scaled_params, q(P) * c).unwrap();
        prop_assert_eq!(val_point(&spec.space, &scaled).unwrap(), base.scaled(c));
    }
}

#[test]
fn index_sets_are_nested() {
    for n in 1..=5 {
        for r in 1..=n {
            let u = enumerate_u(n, r);
            assert!(u.iter().all(|t| t.sum_defect() == 0));
            let u: BTreeSet<IndexTriple> = u.into_iter().collect();
            assert!(enumerate_t(n, r).iter().all(|t| u.contains(t)));
        }
    }
}

#[test]
fn horn_matches_oracle_for_three_by_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tuple = |rng: &mut ChaCha8Rng| {
        let mut v: Vec<i64> = (0..3).map(|_| rng.gen_range(-2..=2)).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v.into_iter().map(q).collect::<Vec<Q>>()
    };
    let gammas: Vec<Vec<Q>> = {
        let mut out = Vec::new();
        for a in -4..=4i64 {
            for b in -4..=a {
                for c in -4..=b {
                    out.push(vec![q(a), q(b), q(c)]);
                }
            }
        }
        out
    };
    let cfg = OracleConfig {
        draws: 1500,
        degree_bound: 6,
        seed: 33,
    };
    let mut checked = 0;
    let mut pairs = 0;
    while checked < 200 {
        let (a, b) = (tuple(&mut rng), tuple(&mut rng));
        let seen = attained_products(&a, &b, &cfg);
        pairs += 1;
        let total = a.iter().chain(&b).sum::<Q>();
        for c in gammas.iter().filter(|c| c.iter().sum::<Q>() == total) {
            let query = HornQuery::new(a.clone(), b.clone(), c.clone()).unwrap();
            assert_eq!(horn_check(&query), seen.contains(c), "{query} after {pairs} pairs");
            checked += 1;
        }
    }
}

#[test]
fn sampled_witnesses_are_sound() {
    let cases = [
        ("1, s1; s2, s3", "x[1][1] - 1"),
        ("1, s1; s1^2, s2", "x[1][1] - 1, x[2][1] - x[1][2]^2"),
        ("s1 + 1, s1; s1, 0", "x[1][1] - x[1][2] - 1, x[1][2] - x[2][1], x[2][2]"),
    ];
    for (fam, ideal) in cases {
        let rows = parse_matrix(fam).unwrap();
        let spec = VarietySpec::param(GroupSpace::gl(2), rows.into_iter().flatten().collect()).unwrap();
        let gens = sphtrop::expr::parse_list(ideal).unwrap();
        let report = sample_family(
            &spec,
            &SampleConfig {
                lo: -3,
                hi: 3,
                ideal: Some(gens.clone()),
                ..SampleConfig::default()
            },
        )
        .unwrap();
        assert_eq!(report.ideal_violations, 0);
        for s in &report.samples {
            assert!(in_valuation_cone(&spec.space, &s.point.coords).unwrap());
            assert_eq!(check_on_variety(&gens, &s.witness).unwrap(), Membership::OnVariety);
            assert_eq!(val_point(&spec.space, &s.witness).unwrap(), s.point);
        }
    }
}
