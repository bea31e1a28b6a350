use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;

use super::*;
use crate::worlds::datasets;

fn labels(a: &Abstraction, ids: &[usize]) -> BTreeSet<String> {
    ids.iter().map(|&i| a.symbol_label(i)).collect()
}

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn fig1_masks() {
    let data = datasets::fig1(11);
    let cfg = LearnConfig::default();
    let (pre1, eff1) = estimate_masks(&data, "a1", &cfg).unwrap();
    let (pre2, eff2) = estimate_masks(&data, "a2", &cfg).unwrap();
    assert_eq!(pre1, vec![true, true]);
    assert_eq!(pre2, vec![true, false]);
    assert_eq!(eff1, vec![vec![true, true], vec![true, false]]);
    assert_eq!(eff2, vec![vec![true, true]]);
}

#[test]
fn fig1_symbols_and_preconditions() {
    let a = learn(&datasets::fig1(11), &LearnConfig::default()).unwrap();
    assert_eq!(a.factors, vec![Factor { id: 0, vars: vec![0] }, Factor { id: 1, vars: vec![1] }]);
    let all: Vec<usize> = (0..a.symbols.len()).collect();
    assert_eq!(labels(&a, &all), set(&["a1_1_x1", "a1_1_x2", "a1_2_x1", "a2_1_x1", "a2_1_x2"]));

    let id = |l: &str| all.iter().copied().find(|&i| a.symbol_label(i) == l).unwrap();
    let a2 = a.skill("a2").unwrap();
    assert_eq!(a2.pre, vec![vec![id("a1_1_x1")], vec![id("a1_2_x1")]]);
    let a1 = a.skill("a1").unwrap();
    assert_eq!(a1.pre, vec![{
        let mut v = vec![id("a2_1_x1"), id("a2_1_x2")];
        v.sort();
        v
    }]);

    let o2 = &a1.outcomes[1];
    assert_eq!(labels(&a, &o2.eff_true), set(&["a1_2_x1"]));
    assert_eq!(labels(&a, &o2.eff_false), set(&["a1_1_x1", "a2_1_x1"]));
    assert_eq!(labels(&a, &o2.eff_stay), set(&["a1_1_x2", "a2_1_x2"]));
}

#[test]
fn fig1_supports_cover_generating_clusters() {
    let data = datasets::fig1(11);
    let a = learn(&data, &LearnConfig::default()).unwrap();
    let all: Vec<usize> = (0..a.symbols.len()).collect();
    let id = |l: &str| all.iter().copied().find(|&i| a.symbol_label(i) == l).unwrap();
    // a2 lands at x1 = 0.2; a1 lands at 0.5 or 0.8.
    let checks: Vec<(usize, Vec<f64>)> = vec![
        (id("a2_1_x1"), data.iter().filter(|s| s.skill == "a2").map(|s| s.post[0]).collect()),
        (id("a1_1_x1"), data.iter().filter(|s| s.executed() && s.post[0] < 0.65 && s.skill == "a1").map(|s| s.post[0]).collect()),
        (id("a1_2_x1"), data.iter().filter(|s| s.executed() && s.post[0] > 0.65).map(|s| s.post[0]).collect()),
    ];
    for (sym, xs) in checks {
        let g = &a.symbols[sym].grounding;
        let inside = xs.iter().filter(|&&x| g.contains(&[x], 5.0)).count();
        assert!(inside as f64 >= 0.99 * xs.len() as f64, "{} covers {inside}/{}", a.symbol_label(sym), xs.len());
    }
}

#[test]
fn noop_skill_has_empty_effmask() {
    let mut data = datasets::fig1(3);
    for s in data.iter_mut().filter(|s| s.skill == "a2") {
        s.skill = "wait".into();
        s.applicable = vec!["wait".into()];
        s.post = s.pre.iter().map(|x| x + 0.001).collect();
    }
    let (_, eff) = estimate_masks(&data, "wait", &LearnConfig::default()).unwrap();
    assert_eq!(eff, vec![vec![false, false]]);
}

#[test]
fn outcome_counts() {
    let (data, _) = datasets::bimodal(5, 100, 0.0);
    let cm = estimate_change_model(&data, &LearnConfig::default());
    let refs: Vec<&TransitionSample> = data.iter().collect();
    assert_eq!(cluster_outcomes(&refs, cm, &LearnConfig::default()).len(), 1);

    // Modes whose three-sigma intervals are disjoint (means seven sigma apart).
    let (data, modes) = datasets::bimodal(5, 100, 7.0);
    let cm = estimate_change_model(&data, &LearnConfig::default());
    let refs: Vec<&TransitionSample> = data.iter().collect();
    let out = cluster_outcomes(&refs, cm, &LearnConfig::default());
    assert_eq!(out.len(), 2);
    for c in &out {
        let m = modes[c.members[0]];
        assert!(c.members.iter().all(|&i| modes[i] == m));
    }
}

#[test]
fn insufficient_data_is_reported() {
    let data: Vec<TransitionSample> = datasets::fig1(1).into_iter().filter(|s| s.skill == "a2").take(10).collect();
    let err = estimate_masks(&data, "a2", &LearnConfig::default()).unwrap_err();
    assert!(matches!(err, Error::InsufficientData { found: 10, needed: 20, .. }));
}

#[test]
fn factor_examples() {
    let f = compute_factors(&[vec![true, true], vec![true, false]], 2);
    assert_eq!(f.iter().map(|f| f.vars.clone()).collect::<Vec<_>>(), vec![vec![0], vec![1]]);
    let f = compute_factors(&[vec![true; 4], vec![true; 4]], 4);
    assert_eq!(f.len(), 1);
    // Three vials whose x and y always move together.
    let m = |v: usize| (0..6).map(|i| i / 2 == v).collect::<Vec<bool>>();
    let f = compute_factors(&[m(0), m(1), m(2)], 6);
    assert_eq!(f.iter().map(|f| f.vars.clone()).collect::<Vec<_>>(), vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
}

fn candidate(points: Vec<f64>, skill: &str) -> Candidate {
    Candidate {
        factor: 0,
        sources: vec![SymbolSource { skill: skill.into(), outcome: 1 }],
        points: points.into_iter().map(|p| vec![p]).collect(),
    }
}

#[test]
fn merge_examples() {
    let cfg = LearnConfig::default();
    let pts: Vec<f64> = (0..40).map(|i| 0.5 + 0.001 * ((i * 7) % 13) as f64).collect();
    let merged = merge_symbols(vec![candidate(pts.clone(), "a"), candidate(pts.clone(), "b")], &cfg);
    assert_eq!(merged.len(), 1);
    assert_eq!(merged[0].sources.len(), 2);
    let far: Vec<f64> = pts.iter().map(|p| p + 0.2).collect();
    assert_eq!(merge_symbols(vec![candidate(pts, "a"), candidate(far, "b")], &cfg).len(), 2);
}

#[test]
fn three_clusters_give_disjoint_symbols() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut data = Vec::new();
    for (skill, target) in [("l", 0.1), ("m", 0.5), ("r", 0.9)] {
        for _ in 0..40 {
            // The second coordinate never changes apart from sensor noise.
            let y = rng.random_range(0.0..1.0);
            let noise = |rng: &mut ChaCha8Rng| 0.005 * rng.sample::<f64, _>(StandardNormal);
            let pre = vec![rng.random_range(0.0..1.0), y + noise(&mut rng)];
            let post = vec![target + 0.01 * rng.sample::<f64, _>(StandardNormal), y + noise(&mut rng)];
            data.push(TransitionSample {
                pre,
                skill: skill.into(),
                post,
                applicable: vec!["l".into(), "m".into(), "r".into()],
            });
        }
    }
    let a = learn(&data, &LearnConfig::default()).unwrap();
    assert_eq!(a.symbols.len(), 3);
    for i in 0..3 {
        for j in i + 1..3 {
            assert!(a.symbols[i].grounding.disjoint(&a.symbols[j].grounding, 5.0));
        }
    }
    // Every skill is applicable everywhere, so each precondition is vacuous.
    for s in &a.skills {
        assert!(s.premask.iter().all(|m| !m));
        assert_eq!(s.outcomes[0].effmask, vec![true, false]);
        assert_eq!(s.pre, vec![Vec::<usize>::new()]);
    }
}

#[test]
fn track_world() {
    let data = datasets::track(4, 30);
    let a = learn(&data, &LearnConfig::default()).unwrap();
    assert_eq!(a.factors.len(), 3);
    let names: BTreeSet<String> = a.skills.iter().map(|s| s.name.clone()).collect();
    assert_eq!(names, set(&["c_to_b", "to_a_0", "to_a_1", "to_c", "to_d_0", "to_d_1", "to_e"]));

    // Both ways of reaching A share one symbol.
    let at_a: Vec<&Symbol> =
        a.symbols.iter().filter(|s| s.factor == 0 && (s.grounding.mean()[0] - datasets::LOC_A).abs() < 0.05).collect();
    assert_eq!(at_a.len(), 1);
    let srcs: BTreeSet<&str> = at_a[0].sources.iter().map(|s| s.skill.as_str()).collect();
    assert_eq!(srcs, ["to_a_0", "to_a_1"].into_iter().collect());
    assert_eq!(a.symbols_of_factor(0).len(), 4);

    let c_to_b = a.skill("c_to_b").unwrap();
    assert_eq!(c_to_b.premask, vec![true, false, false]);
    assert_eq!(c_to_b.pre.len(), 1);
    let at_c = &a.symbols[c_to_b.pre[0][0]];
    assert!((at_c.grounding.mean()[0] - datasets::LOC_C).abs() < 0.05);
}

#[test]
fn constant_classifier_accepts_all_combos() {
    let cfg = LearnConfig::default();
    let factors = vec![Factor { id: 0, vars: vec![0] }, Factor { id: 1, vars: vec![1] }];
    let g = |m: f64| Grounding::Gaussian { mean: vec![m], std: vec![0.01] };
    let symbols: Vec<Symbol> = [(0, 0.1), (0, 0.5), (1, 0.2), (1, 0.6), (1, 0.9)]
        .iter()
        .enumerate()
        .map(|(id, &(f, m))| Symbol { id, name: format!("s{id}"), factor: f, sources: vec![], grounding: g(m) })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let pre = lift_preconditions(&[true, true], &factors, &symbols, &|_| true, &[0.0, 0.0], &cfg, &mut rng);
    assert_eq!(pre.len(), 6);
    let pre = lift_preconditions(&[true, false], &factors, &symbols, &|x| x[0] > 0.3, &[0.0, 0.0], &cfg, &mut rng);
    assert_eq!(pre, vec![vec![1]]);
}

#[test]
fn effect_sets_without_untouched_factor() {
    let factors = vec![Factor { id: 0, vars: vec![0] }, Factor { id: 1, vars: vec![1] }];
    let g = |m: f64| Grounding::Gaussian { mean: vec![m], std: vec![0.01] };
    let symbols: Vec<Symbol> = [(0, 0.1), (0, 0.5), (1, 0.2), (1, 0.21)]
        .iter()
        .enumerate()
        .map(|(id, &(f, m))| Symbol { id, name: format!("s{id}"), factor: f, sources: vec![], grounding: g(m) })
        .collect();
    let (t, f, s) = compute_effect_sets(&[true, true], &[0, 2], &factors, &symbols, 5.0);
    assert_eq!(t, vec![0, 2]);
    assert_eq!(f, vec![1]);
    // s3 overlaps s2 and is left unconstrained.
    assert!(s.is_empty());
}

#[test]
fn abstraction_json_roundtrip() {
    let a = learn(&datasets::fig1(11), &LearnConfig::default()).unwrap();
    let b = Abstraction::from_json(&a.to_json().unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn dataset_jsonl_roundtrip() {
    let data = datasets::fig1(2);
    let mut buf = Vec::new();
    write_dataset(&mut buf, &data).unwrap();
    let back = read_dataset(&buf[..]).unwrap();
    assert_eq!(back, data);
    assert!(read_dataset("{\"pre\":[1],\"skill\":\"a\",\"post\":[1,2],\"applicable\":[]}".as_bytes()).is_err());
}

fn random_layout() -> impl Strategy<Value = (Vec<Factor>, Vec<Symbol>, Vec<bool>, Vec<usize>)> {
    (1usize..4, prop::collection::vec((0usize..3, 0.0f64..1.0, 0.005f64..0.05), 1..8), prop::collection::vec(any::<bool>(), 3))
        .prop_flat_map(|(nf, syms, mask)| {
            let factors: Vec<Factor> = (0..nf).map(|id| Factor { id, vars: vec![id] }).collect();
            let symbols: Vec<Symbol> = syms
                .iter()
                .enumerate()
                .map(|(id, &(f, m, s))| Symbol {
                    id,
                    name: format!("s{id}"),
                    factor: f % nf,
                    sources: vec![],
                    grounding: Grounding::Gaussian { mean: vec![m], std: vec![s] },
                })
                .collect();
            let mask: Vec<bool> = mask[..nf].to_vec();
            let n = symbols.len();
            (Just(factors), Just(symbols), Just(mask), prop::collection::vec(0..n, 0..3))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factors_partition_variables(masks in prop::collection::vec(prop::collection::vec(any::<bool>(), 6), 0..5)) {
        let fs = compute_factors(&masks, 6);
        let mut seen: Vec<usize> = fs.iter().flat_map(|f| f.vars.clone()).collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..6).collect::<Vec<_>>());
        for a in 0..6 {
            for b in 0..6 {
                let same = fs.iter().any(|f| f.vars.contains(&a) && f.vars.contains(&b));
                let cochange = masks.iter().all(|m| m[a] == m[b]);
                prop_assert_eq!(same, cochange);
            }
        }
    }

    #[test]
    fn merge_is_idempotent(centers in prop::collection::vec(0usize..4, 2..6), seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cands: Vec<Candidate> = centers
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let pts = (0..25).map(|_| c as f64 * 0.3 + 0.01 * rng.sample::<f64, _>(StandardNormal)).collect();
                candidate(pts, &format!("k{i}"))
            })
            .collect();
        let cfg = LearnConfig::default();
        let once = merge_symbols(cands, &cfg);
        let twice = merge_symbols(once.clone(), &cfg);
        prop_assert_eq!(once.len(), twice.len());
        for (a, b) in once.iter().zip(&twice) {
            prop_assert_eq!(&a.sources, &b.sources);
        }
    }

    #[test]
    fn effect_sets_are_disjoint((factors, symbols, mask, own) in random_layout()) {
        let mut own = own;
        own.sort_unstable();
        own.dedup();
        // Own symbols must sit on touched factors.
        own.retain(|&i| mask[symbols[i].factor]);
        let (t, f, s) = compute_effect_sets(&mask, &own, &factors, &symbols, 5.0);
        let inside = |i: &usize| mask[symbols[*i].factor];
        prop_assert!(t.iter().chain(&f).all(inside));
        prop_assert!(s.iter().all(|i| !inside(i)));
        prop_assert!(s.iter().all(|i| !t.contains(i) && !f.contains(i)));
        prop_assert!(t.iter().all(|i| !f.contains(i)));
        let outside: Vec<usize> = symbols.iter().filter(|x| !mask[x.factor]).map(|x| x.id).collect();
        prop_assert_eq!(s, outside);
    }
}
