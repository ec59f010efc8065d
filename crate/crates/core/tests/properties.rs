use proptest::prelude::*;

use prering::measures::Measure;
use prering::piecewise::{PiecewiseFunc, Value};
use prering::poly::Poly;
use prering::prering::{Interval, SimpleSet};
use prering::random::{self, rng_for};
use prering::rational::{frac, int, Rational};
use prering::surd::SurdSum;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 3i64..=6).prop_map(|(n, d)| frac(n, d))
}

fn interval() -> impl Strategy<Value = Interval> {
    (rational(), rational(), any::<bool>(), any::<bool>()).prop_map(|(a, b, lc, hc)| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Interval::new(lo, hi, lc, hc).unwrap()
    })
}

fn simple_set() -> impl Strategy<Value = SimpleSet> {
    prop::collection::vec(interval(), 0..4).prop_map(SimpleSet::normalize)
}

fn probes(sets: &[&SimpleSet]) -> Vec<Rational> {
    let quarter = frac(1, 4);
    sets.iter()
        .flat_map(|s| s.endpoints())
        .flat_map(|e| [&e - &quarter, e.clone(), &e + &quarter])
        .collect()
}

fn stieltjes_cube() -> Measure {
    let g = PiecewiseFunc::polynomial(
        "[-10,10]".parse().unwrap(),
        vec![Poly::from_ints(&[0, 1, 0, 1])],
    )
    .unwrap();
    Measure::stieltjes(g, []).unwrap()
}

fn integral(f: &PiecewiseFunc, a: &Rational, b: &Rational) -> prering::vector::QVector {
    match f.integrate(a, b).unwrap() {
        Value::Exact(q) => q,
        Value::Approx(_) => panic!("polynomial integral should be exact"),
    }
}

proptest! {
    #[test]
    fn set_operations_match_membership(a in simple_set(), b in simple_set()) {
        let (u, i, d) = (a.union(&b), a.intersect(&b), a.difference(&b));
        for x in probes(&[&a, &b]) {
            let (p, q) = (a.contains(&x), b.contains(&x));
            prop_assert_eq!(u.contains(&x), p || q);
            prop_assert_eq!(i.contains(&x), p && q);
            prop_assert_eq!(d.contains(&x), p && !q);
        }
    }

    #[test]
    fn parts_stay_disjoint_and_sorted(a in simple_set(), b in simple_set()) {
        for s in [a.union(&b), a.difference(&b), a.intersect(&b)] {
            for w in s.parts().windows(2) {
                prop_assert!(w[0].hi() <= w[1].lo());
                prop_assert!(w[0].intersect(&w[1]).is_empty());
            }
        }
    }

    #[test]
    fn inclusion_exclusion(a in simple_set(), b in simple_set()) {
        prop_assert_eq!(a.union(&b).length() + a.intersect(&b).length(), a.length() + b.length());
        let mu = stieltjes_cube();
        let m = |s: &SimpleSet| mu.eval(s).unwrap();
        prop_assert_eq!(m(&a.union(&b)) + m(&a.intersect(&b)), m(&a) + m(&b));
        prop_assert!(m(&a.difference(&b)) >= int(0));
    }

    #[test]
    fn set_display_round_trips(a in simple_set()) {
        let back: SimpleSet = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn integral_chains_and_flips(seed in any::<u64>(), t in prop::array::uniform3(rational())) {
        let mut rng = rng_for(seed, 0);
        let f = random::rand_continuous_piecewise_poly(&mut rng, 2, &int(-7), &int(7), 4, 3);
        let [a, b, c] = t;
        let ab = integral(&f, &a, &b);
        prop_assert_eq!(ab.add(&integral(&f, &b, &c)).unwrap(), integral(&f, &a, &c));
        prop_assert_eq!(ab.scale(&int(-1)), integral(&f, &b, &a));
    }

    #[test]
    fn simple_integral_is_additive_over_resplits(seed in any::<u64>()) {
        let mut rng = rng_for(seed, 1);
        let h = random::rand_simple_function(&mut rng, 2, &int(0), &int(4), 5);
        let split = random::resplit(&mut rng, &h);
        let mu = stieltjes_cube();
        prop_assert_eq!(h.integral_dv(&mu).unwrap(), split.integral_dv(&mu).unwrap());
        prop_assert_eq!(h.seminorm(&mu).unwrap().cmp_exact(&split.seminorm(&mu).unwrap()), std::cmp::Ordering::Equal);
    }

    #[test]
    fn surd_order_agrees_with_floats(xs in prop::collection::vec((1i64..50, 1i64..50), 1..4), q in 0i64..60) {
        let s = xs.iter().fold(SurdSum::zero(), |acc, (c, r)| acc.add(&SurdSum::term(int(*c), int(*r))));
        let target = SurdSum::from_rational(int(q));
        let gap = s.to_f64() - q as f64;
        if gap.abs() > 1e-6 {
            prop_assert_eq!(s.cmp_exact(&target), gap.partial_cmp(&0.0).unwrap());
        }
    }
}
