mod common;

use common::{mask, random_spec, Explicit};
use skillsynth::synthesis::{build_game, solve, Outcome, Strategy};

const SEEDS: u64 = 300;

#[test]
fn symbolic_matches_explicit_oracle() {
    let mut verdicts = [0usize; 2];
    for seed in 0..SEEDS {
        let spec = random_spec(seed, 6);
        let oracle = Explicit::new(&spec);
        let mut g = build_game(&spec).unwrap();
        let w = g.compute_winning();
        let z = oracle.winning();
        for (v, &win) in z.iter().enumerate() {
            let val: Vec<bool> = (0..oracle.n).map(|k| v >> k & 1 == 1).collect();
            assert_eq!(g.holds(w.z, &val), win, "seed {seed} state {v}");
        }
        let r = g.is_realizable(&w);
        assert_eq!(r, oracle.realizable(), "seed {seed}");
        verdicts[r as usize] += 1;
    }
    // The generator must exercise both outcomes.
    assert!(verdicts[0] > 20 && verdicts[1] > 20, "{verdicts:?}");
}

#[test]
fn environment_region_is_complement_of_system_region() {
    for seed in 0..SEEDS {
        let mut g = build_game(&random_spec(seed, 5)).unwrap();
        let w = g.compute_winning();
        let e = g.compute_env_winning();
        let nz = g.mgr.not(w.z);
        // Compare on current-state valuations only.
        for v in 0..1usize << g.num_props() {
            let val: Vec<bool> = (0..g.num_props()).map(|k| v >> k & 1 == 1).collect();
            assert_eq!(g.holds(e.region, &val), g.holds(nz, &val), "seed {seed}");
        }
    }
}

fn check_strategy(seed: u64, st: &Strategy, oracle: &Explicit) {
    let mut g = build_game(&random_spec(seed, 6)).unwrap();
    let w = g.compute_winning();
    for q in &st.states {
        assert!(g.holds(w.z, &q.valuation), "seed {seed}: state outside Z");
        let moves = g.env_moves(&q.valuation);
        let mut answered: Vec<Vec<bool>> = st.env_choices(q.id).into_iter().map(|e| e.to_vec()).collect();
        answered.sort();
        let mut expected = moves.clone();
        expected.sort();
        assert_eq!(answered, expected, "seed {seed}: strategy must answer every input move");
    }
    for e in &st.edges {
        let src = &st.states[e.src].valuation;
        let dst = &st.states[e.dst].valuation;
        let step = g.step_assignment(src, dst);
        assert!(g.mgr.eval(g.tau_e, &step) && g.mgr.eval(g.tau_s, &step), "seed {seed}: illegal step");
        assert_eq!(&dst[..st.n_env], e.env.as_slice());
    }
    let z = oracle.winning();
    assert!(st.states.iter().all(|q| z[mask(&q.valuation)]));
}

#[test]
fn strategies_stay_winning_and_legal() {
    let mut checked = 0;
    for seed in 0..SEEDS {
        let spec = random_spec(seed, 6);
        if let Outcome::Realizable(st) = solve(&spec).unwrap() {
            check_strategy(seed, &st, &Explicit::new(&spec));
            let back = Strategy::from_json(&st.to_json().unwrap()).unwrap();
            assert_eq!(back, st);
            checked += 1;
        }
    }
    assert!(checked > 20);
}

#[test]
fn counterstrategies_stay_losing_for_the_system() {
    let mut checked = 0;
    for seed in 0..SEEDS {
        let spec = random_spec(seed, 6);
        if let Outcome::Unrealizable(cs) = solve(&spec).unwrap() {
            let z = Explicit::new(&spec).winning();
            let mut g = build_game(&spec).unwrap();
            for q in cs.states.iter().filter(|q| !q.is_dead()) {
                assert!(!z[mask(&q.valuation())], "seed {seed}: counter-strategy state is system-winning");
            }
            for e in &cs.edges {
                let src = cs.states[e.src].valuation();
                assert!(g.env_moves(&src).contains(&e.env), "seed {seed}: illegal input move");
            }
            assert!(!cs.initial.is_empty(), "seed {seed}");
            checked += 1;
        }
    }
    assert!(checked > 20);
}
