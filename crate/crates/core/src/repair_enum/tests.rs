use super::*;
use crate::abstraction::{learn, LearnConfig};
use crate::encoder::Effect;
use crate::synthesis::build_game;
use crate::worlds::{blocks, datasets, plates};

fn s(v: &[&str]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn a_not_of(spec: &Gr1Spec) -> BTreeSet<String> {
    let cs = build_game(spec).unwrap().extract_counterstrategy().unwrap();
    skills_to_dead_ends(&cs, &Domain::from_spec(spec).unwrap())
}

fn green_c_to_f(c: &CandidateSkill) -> bool {
    c.pre == vec![s(&["green_x_c", "green_yz_c"])] && c.eff_true == s(&["green_x_f", "green_yz_f"])
}

#[test]
fn fig1_postcondition_cross_products() {
    let a = learn(&datasets::fig1(7), &LearnConfig::default()).unwrap();
    let d = Domain::from_abstraction(&a);
    let posts = new_postconditions(&d);
    let x1 = d.factors.iter().find(|f| f.len() == 3).unwrap();
    let x2 = d.factors.iter().find(|f| f.len() == 2).unwrap();
    let singles = posts.iter().filter(|p| p.len() == 1).count();
    let pairs = posts.iter().filter(|p| p.len() == 2).count();
    assert_eq!((singles, pairs), (x1.len(), x1.len() * x2.len()));
}

#[test]
fn single_symbol_factors_give_existing_effects() {
    let d = Domain {
        factors: vec![s(&["p"]), s(&["q"])],
        exclusive: vec![],
        skills: vec![SkillModel { name: "a".into(), pre: vec![s(&["p"])], outcomes: vec![Effect { eff_true: s(&["q"]), ..Default::default() }] }],
    };
    assert_eq!(new_postconditions(&d), vec![s(&["q"])]);
    // The only candidate duplicates the existing skill.
    let (not_pool, all_pool) = candidate_pools(&d, &BTreeSet::new());
    assert!(not_pool.is_empty() && all_pool.is_empty());
}

#[test]
fn dead_end_skills_of_blocks_variants() {
    let green: BTreeSet<String> = ["green_c_to_b".to_string()].into();
    assert_eq!(a_not_of(&blocks::world(blocks::Variant::NoB).spec().unwrap()), green);
    assert_eq!(a_not_of(&blocks::world(blocks::Variant::NoCToB).spec().unwrap()), green);
    assert!(a_not_of(&blocks::world(blocks::Variant::Missing).spec().unwrap()).is_empty());
    assert!(a_not_of(&blocks::world(blocks::Variant::MissingB).spec().unwrap()).is_empty());
}

#[test]
fn pools_exclude_existing_pairs() {
    let d = blocks::world(blocks::Variant::NoB).domain();
    let (not_pool, all_pool) = candidate_pools(&d, &["green_c_to_b".to_string()].into());
    assert!(not_pool.iter().any(green_c_to_f));
    for c in all_pool.iter().chain(&not_pool) {
        assert!(!d.skills.iter().any(|sk| sk.pre == c.pre && sk.outcomes.iter().any(|o| o.eff_true == c.eff_true)));
    }
    assert!(not_pool.iter().all(|c| all_pool.contains(c)));
}

#[test]
fn combinations_are_unique_and_skip_self_pairs() {
    let d = plates::world(plates::Variant::Keep).domain();
    let (not_pool, all_pool) = candidate_pools(&d, &["blue_set_to_dirty".to_string()].into());
    let combos: Vec<_> = Combos::new(&not_pool, &all_pool, 1).collect();
    let mut sets: Vec<BTreeSet<&CandidateSkill>> = combos.iter().map(|c| c.iter().collect()).collect();
    assert!(sets.iter().all(|s| s.len() == 2));
    let n = sets.len();
    sets.sort();
    sets.dedup();
    assert_eq!(sets.len(), n);
    assert_eq!(Combos::new(&not_pool, &all_pool, 0).count(), not_pool.len());
}

#[test]
fn no_b_repair_moves_green_from_c_to_f() {
    let spec = blocks::world(blocks::Variant::NoB).spec().unwrap();
    let r = repair(&spec, &EnumConfig::default()).unwrap();
    assert!(!r.suggestions.is_empty());
    assert!(r.suggestions.iter().all(|s| s.verified && s.new_skills.len() == 1));
    assert!(r.suggestions.iter().any(|s| green_c_to_f(&s.new_skills[0])));
}

#[test]
fn realizable_spec_is_rejected() {
    let spec = blocks::world(blocks::Variant::Base).spec().unwrap();
    assert!(matches!(repair(&spec, &EnumConfig::default()), Err(Error::SpecRealizable)));
}

#[test]
fn search_is_deterministic_and_respects_limits() {
    let spec = blocks::world(blocks::Variant::MissingB).spec().unwrap();
    let cfg = EnumConfig { max_suggestions: Some(2), ..Default::default() };
    let a = repair(&spec, &cfg).unwrap();
    let b = repair(&spec, &cfg).unwrap();
    assert_eq!(a.suggestions.len(), 2);
    let strip = |r: &EnumReport| r.suggestions.iter().map(|s| s.new_skills.clone()).collect::<Vec<_>>();
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn report_json_shape() {
    let sug = Suggestion {
        new_skills: vec![CandidateSkill { pre: vec![s(&["a", "b"])], eff_true: s(&["c"]) }],
        provenance: Provenance::Enumeration,
        verified: true,
        elapsed_ms: 3,
    };
    let v = serde_json::to_value(vec![&sug]).unwrap();
    assert_eq!(v[0]["skills"][0]["pre"][0][1], "b");
    assert_eq!(v[0]["verified"], true);
    assert!(sug.render().contains("a & b -> c"));
}
