use proptest::prelude::*;

use ordlab::engine::{eval_m, symbolic_levels, AlgoConfig, Budget, Evaluator, DEFAULT_MAX_PIECES};
use ordlab::numerics::Rational;

/// Rationals in `[-2, 9/4)` on a grid of step `1/24`.
fn arg() -> impl Strategy<Value = Rational> {
    (-48i64..54).prop_map(|n| Rational::ratio(n, 24))
}

fn fine_arg() -> impl Strategy<Value = Rational> {
    (-64i64..112, 0u32..6).prop_map(|(n, extra)| Rational::ratio(n, 64) + Rational::ratio(1, 3 << (10 + extra)))
}

/// Follows the leftmost chain `x -> x - M_2(x)` to its negative terminal `t`,
/// counting the nonnegative arguments on the way.
fn leftmost_chain(ev: &mut Evaluator, x: &Rational) -> (Rational, u64) {
    let mut x = x.clone();
    let mut d = 0;
    while !x.is_negative() {
        let m2 = ev.levels(&x).unwrap()[1].clone();
        x = &x - &m2;
        d += 1;
    }
    (x, d)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn values_are_positive_and_levels_consistent(x in arg(), n in 1usize..4) {
        prop_assume!(!x.is_negative() && (n < 3 || x <= Rational::ratio(1, 2)));
        let cfg = AlgoConfig::m_n(n).unwrap();
        let mut ev = Evaluator::new(cfg.clone(), Budget::default());
        let levels = ev.levels(&x).unwrap();
        prop_assert_eq!(levels.len(), cfg.k);
        prop_assert!(levels.iter().all(Rational::is_positive));
        prop_assert_eq!(&levels[0], &ev.value(&x).unwrap());
    }

    #[test]
    fn memo_is_sound(x in arg()) {
        let cfg = AlgoConfig::classic();
        let (with, _) = eval_m(&cfg, &x, Budget::default()).unwrap();
        if x < Rational::one() {
            let (without, _) = eval_m(&cfg, &x, Budget::default().without_memo()).unwrap();
            prop_assert_eq!(with, without);
        }
        let mut shared = Evaluator::new(cfg, Budget::default());
        shared.value(&(&x + &Rational::ratio(1, 8))).unwrap();
        prop_assert_eq!(shared.value(&x).unwrap(), eval_m(&AlgoConfig::classic(), &x, Budget::default()).unwrap().0);
    }

    #[test]
    fn classic_halving_law(x in fine_arg()) {
        let cfg = AlgoConfig::classic();
        let mut ev = Evaluator::new(cfg.clone(), Budget::default());
        let (t, d) = leftmost_chain(&mut ev, &x);
        let expected = cfg.f.eval(&t).unwrap() * Rational::half_pow(d);
        prop_assert_eq!(ev.value(&x).unwrap(), expected);
    }

    #[test]
    fn symbolic_matches_evaluation(x in (0i64..1000).prop_map(|n| Rational::ratio(n, 1001))) {
        let cfg = AlgoConfig::classic();
        let upto = Rational::ratio(15, 16);
        prop_assume!(x < upto);
        let levels = symbolic_levels(&cfg, &upto, DEFAULT_MAX_PIECES).unwrap();
        let mut ev = Evaluator::new(cfg, Budget::default());
        let direct = ev.levels(&x).unwrap();
        for (i, pieces) in levels.iter().enumerate() {
            let p = pieces.iter().find(|p| p.left <= x && x < p.right).unwrap();
            prop_assert_eq!(p.eval(&x), direct[i].clone());
        }
    }

    #[test]
    fn evaluation_is_deterministic(x in arg()) {
        let cfg = AlgoConfig::m_n(2).unwrap();
        let a = eval_m(&cfg, &x, Budget::default()).unwrap();
        let b = eval_m(&cfg, &x, Budget::default()).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.1.distinct_args <= a.1.total_calls);
    }
}
