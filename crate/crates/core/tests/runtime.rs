mod common;

use common::random_spec;
use proptest::prelude::*;
use skillsynth::runtime::{check_trace, execute, FairEnv, RandomEnv, FAIR_K, WINDOW};
use skillsynth::synthesis::{solve, Outcome};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    /// Strategies never break a system guarantee, whatever the
    /// environment does within its assumptions.
    #[test]
    fn strategies_never_violate_safety(seed in 0u64..10_000, run in 0u64..1000) {
        let spec = random_spec(seed, 6);
        if let Outcome::Realizable(st) = solve(&spec).unwrap() {
            let t = execute(&st, &mut RandomEnv::new(run), 200, None).unwrap();
            prop_assert!(t.violation.is_none());
            let v = check_trace(&spec, &t, WINDOW);
            prop_assert!(v.safety.is_empty(), "{:?}", v.safety);
            prop_assert!(v.assumptions.is_empty(), "{:?}", v.assumptions);
            let t = execute(&st, &mut FairEnv::new(&spec, run, FAIR_K), 200, None).unwrap();
            prop_assert!(check_trace(&spec, &t, WINDOW).safety.is_empty());
        }
    }
}
