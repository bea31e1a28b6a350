mod common;

use common::random_spec;
use proptest::prelude::*;
use skillsynth::repair_synth::{relax_preconditions, repair_once, restrict_postconditions, user_neutral};
use skillsynth::synthesis::build_game;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    /// Restriction only removes environment moves and never constrains
    /// user variables; relaxation only adds system moves, all of them
    /// allowed by the hard and task constraints.
    #[test]
    fn modifications_keep_contracts(seed in 0u64..10_000, legacy in any::<bool>()) {
        let mut g = build_game(&random_spec(seed, 6)).unwrap();
        let allowed = g.mgr.and(g.tau_s_hard, g.tau_task);
        let (tau_e, tau_s) = (g.tau_e, g.tau_s);
        for z in g.winning_iterates() {
            let e = restrict_postconditions(&mut g, z, None, legacy);
            prop_assert!(g.mgr.leq(e, tau_e));
            if !legacy {
                prop_assert!(user_neutral(&mut g, tau_e, e));
            }
            g.tau_e = e;
            let s = relax_preconditions(&mut g, z);
            g.tau_e = tau_e;
            prop_assert!(g.mgr.leq(tau_s, s));
            let ns = g.mgr.not(tau_s);
            let added = g.mgr.and(s, ns);
            prop_assert!(g.mgr.leq(added, allowed));
        }
    }

    /// A repaired game is realizable with its own strategy, and the input
    /// game is left as it was.
    #[test]
    fn repaired_games_are_realizable(seed in 0u64..10_000) {
        let mut g = build_game(&random_spec(seed, 5)).unwrap();
        let before = (g.tau_e, g.tau_s);
        let r = repair_once(&mut g, None, false).unwrap();
        prop_assert_eq!((g.tau_e, g.tau_s), before);
        if let Some(r) = r {
            g.tau_e = r.tau_e;
            g.tau_s = r.tau_s;
            prop_assert!(g.realizable());
            for e in &r.strategy.edges {
                let src = &r.strategy.states[e.src].valuation;
                let dst = &r.strategy.states[e.dst].valuation;
                let step = g.step_assignment(src, dst);
                prop_assert!(g.mgr.eval(g.tau_e, &step) && g.mgr.eval(g.tau_s, &step));
            }
        }
    }
}

#[test]
fn some_random_games_get_repaired() {
    let mut repaired = 0;
    for seed in 0..200 {
        let mut g = build_game(&random_spec(seed, 5)).unwrap();
        if !g.realizable() && repair_once(&mut g, None, false).unwrap().is_some() {
            repaired += 1;
        }
    }
    assert!(repaired > 5, "{repaired}");
}
