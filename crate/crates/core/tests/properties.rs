use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use loopacc::closedform::iteration_cost;
use loopacc::its::{derivation_height, parse, step, Dh, Fuel};
use loopacc::pipeline::chain;
use loopacc::terms::{compose, Atom, Poly, Var};
use loopacc::workload;
use loopacc::{closed_form, cost_sum, faulhaber, Configuration};

fn pv(name: &str) -> Poly {
    Poly::var(Var::program(name))
}

fn arb_poly() -> impl Strategy<Value = Poly> {
    let leaf = prop_oneof![
        (-4i64..=4).prop_map(Poly::int),
        prop::sample::select(vec!["x", "y", "z"]).prop_map(pv),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a + &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a - &b),
            (inner.clone(), inner).prop_map(|(a, b)| &a * &b),
        ]
    })
}

fn arb_val() -> impl Strategy<Value = BTreeMap<Var, BigInt>> {
    (-6i64..=6, -6i64..=6, -6i64..=6).prop_map(|(x, y, z)| {
        [("x", x), ("y", y), ("z", z)]
            .into_iter()
            .map(|(n, v)| (Var::program(n), BigInt::from(v)))
            .collect()
    })
}

fn ev(p: &Poly, val: &BTreeMap<Var, BigInt>) -> BigRational {
    p.eval(val).expect("all variables assigned")
}

proptest! {
    #[test]
    fn ring_operations_agree_with_evaluation(a in arb_poly(), b in arb_poly(), val in arb_val()) {
        prop_assert_eq!(ev(&(&a + &b), &val), ev(&a, &val) + ev(&b, &val));
        prop_assert_eq!(ev(&(&a * &b), &val), ev(&a, &val) * ev(&b, &val));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn substitution_agrees_with_evaluation(a in arb_poly(), s in arb_poly(), val in arb_val()) {
        let x = Var::program("x");
        let sub = a.substitute(&[(x.clone(), s.clone())].into());
        let mut inner = val.clone();
        inner.insert(x, ev(&s, &val).to_integer());
        prop_assert_eq!(ev(&sub, &val), ev(&a, &inner));
    }

    #[test]
    fn negation_flips_atoms(a in arb_poly(), val in arb_val()) {
        let atom = Atom::gt_zero(a);
        prop_assert_eq!(atom.negate().holds(&val), atom.holds(&val).map(|b| !b));
    }

    #[test]
    fn power_sums_match_direct_summation(d in 0u32..=10, n in 0i64..=20) {
        let f = faulhaber(d).unwrap();
        let direct: BigInt = (0..n).map(|i| BigInt::from(i).pow(d)).sum();
        let val = [(Var::iteration(), BigInt::from(n))].into_iter().collect();
        prop_assert_eq!(ev(&f, &val), BigRational::from_integer(direct));
    }

    #[test]
    fn closed_forms_match_iteration(seed in any::<u64>(), k in 1usize..=3) {
        let mut rng = workload::rng(seed);
        let a = workload::triangular_update(&mut rng, k);
        let Ok(cf) = closed_form(&a) else { return Ok(()) };
        let u = Var::temporary("u");
        let n = Var::iteration();
        for m in cf.threshold()..=10 {
            let iterated = compose(&a, m);
            for (x0, u0) in [(-2i64, 3i64), (1, -1), (4, 0)] {
                let mut val: BTreeMap<Var, BigInt> = a
                    .vars()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v.clone(), BigInt::from(x0 + i as i64)))
                    .collect();
                val.insert(u.clone(), u0.into());
                val.insert(n.clone(), m.into());
                for (c, it) in cf.values().iter().zip(iterated.rhs()) {
                    prop_assert_eq!(ev(c, &val), ev(it, &val), "{} at n = {}", a, m);
                }
            }
        }
    }

    #[test]
    fn cost_sums_match_summed_costs(seed in any::<u64>(), k in 1usize..=3) {
        let mut rng = workload::rng(seed);
        let a = workload::triangular_update(&mut rng, k);
        let p = workload::cost_poly(&mut rng, a.vars());
        let Ok(cf) = closed_form(&a) else { return Ok(()) };
        let sum = if cf.threshold() == 0 {
            cost_sum(&p, &cf)
        } else {
            prop_assert!(cost_sum(&p, &cf).is_err());
            iteration_cost(&p, &cf)
        };
        let Ok(sum) = sum else { return Ok(()) };
        let mut val: BTreeMap<Var, BigInt> = a
            .vars()
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), BigInt::from(2 - i as i64)))
            .collect();
        val.insert(Var::temporary("u"), BigInt::from(-1));
        let mut acc = BigRational::zero();
        let mut cur = val.clone();
        for m in 0..=8u32 {
            if m >= cf.threshold().max(1) || (m == 0 && cf.threshold() == 0) {
                let mut at = val.clone();
                at.insert(Var::iteration(), m.into());
                prop_assert_eq!(ev(&sum, &at), acc.clone(), "{} / {} at n = {}", a, p, m);
            }
            acc += ev(&p, &cur);
            let next = a.eval(&cur).unwrap();
            for (v, x) in a.vars().iter().zip(next) {
                cur.insert(v.clone(), x);
            }
        }
    }

    #[test]
    fn chaining_is_two_steps(x in -5i64..=8, y in -5i64..=8) {
        let its = parse("vars x y\nstart main\nf(x, y) -> f(x - y, y + 1) [x > 0 && y >= 0] cost x\n").unwrap();
        let t = &its.transitions[0];
        let c = chain(t, t).unwrap();
        let from = Configuration::new(t.src.clone(), [x, y]);
        let none = BTreeMap::new();
        let twice = step(&its, &from, t, &none)
            .unwrap()
            .and_then(|(mid, k1)| step(&its, &mid, t, &none).unwrap().map(|(to, k2)| (to, k1 + k2)));
        prop_assert_eq!(step(&its, &from, &c, &none).unwrap(), twice);
    }

    #[test]
    fn countdown_height_is_its_start_value(x in -5i64..=30) {
        let its = parse("vars x\nstart main\nmain(x) -> main(x - 1) [x > 0]\n").unwrap();
        let dh = derivation_height(&its, &Configuration::new(its.start.clone(), [x]), Fuel::default()).unwrap();
        prop_assert_eq!(dh, Dh::Height(BigInt::from(x.max(0))));
    }

    #[test]
    fn printed_transitions_parse_back(seed in any::<u64>(), m in 1usize..=6) {
        let t = workload::accelerable_loop(&mut workload::rng(seed), m);
        let vars: Vec<&str> = t.program_vars().iter().map(Var::name).collect();
        let text = format!("vars {}\nstart main\n{}\n", vars.join(" "), t);
        let its = parse(&text).unwrap();
        prop_assert_eq!(&its.transitions[0], &t);
    }
}
