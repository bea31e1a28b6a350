use super::*;
use crate::specformat::parse;
use crate::synthesis::build_game;
use crate::worlds::{blocks, plates};

fn game(spec: &Gr1Spec) -> GameStructure {
    build_game(spec).unwrap()
}

#[test]
fn extras_are_added_idle_and_counted() {
    let spec = blocks::world(blocks::Variant::NoB).spec().unwrap();
    let s3 = with_extras(&spec, 3).unwrap();
    let extras = s3.props_of_kind(PropKind::ExtraSkill);
    assert_eq!(extras, ["extra1", "extra2", "extra3"]);
    let init: Vec<String> = s3.sys_init.formulas().map(crate::specformat::formula_to_string).collect();
    assert!(init.contains(&"!extra3".to_string()));
    // Already enough: nothing added.
    let again = with_extras(&s3, 2).unwrap();
    assert_eq!(again.props_of_kind(PropKind::ExtraSkill).len(), 3);
    let plates = with_extras(&plates::world(plates::Variant::Keep).spec().unwrap(), 1).unwrap();
    assert_eq!(plates.props_of_kind(PropKind::ExtraSkill), ["extra1"]);
}

#[test]
fn full_target_leaves_environment_unchanged() {
    let mut g = game(&with_extras(&blocks::world(blocks::Variant::NoB).spec().unwrap(), 2).unwrap());
    let tt = g.mgr.tt();
    let e = restrict_postconditions(&mut g, tt, None, false);
    assert_eq!(e, g.tau_e);
}

#[test]
fn empty_target_leaves_system_unchanged() {
    let mut g = game(&plates::world(plates::Variant::Keep).spec().unwrap());
    let ff = g.mgr.ff();
    let s = relax_preconditions(&mut g, ff);
    assert_eq!(s, g.tau_s);
}

#[test]
fn without_user_variables_or_extras_both_variants_agree() {
    let spec = parse("[INPUT]\ne\nf\n[OUTPUT]\nx\n[ENV_TRANS]\n!(e' & f')\n[SYS_TRANS]\nx' -> e'\n[SYS_LIVENESS]\nx & f\n").unwrap();
    let mut spec = spec;
    for n in ["e", "f"] {
        spec.kinds.insert(n.into(), PropKind::LearnedSymbol);
    }
    let mut g = game(&spec);
    for z in g.winning_iterates() {
        let a = restrict_postconditions(&mut g, z, None, false);
        let b = restrict_postconditions(&mut g, z, None, true);
        assert_eq!(a, b);
    }
}

/// Checks the contracts of both modifications for every target the repair
/// would try.
fn check_contracts(spec: &Gr1Spec) {
    let mut g = game(spec);
    let extras = g.map.props_of_kind(PropKind::ExtraSkill);
    let allowed = g.mgr.and(g.tau_s_hard, g.tau_task);
    for z in g.winning_iterates() {
        for a in extras.iter().copied().map(Some).chain([None]) {
            let e = restrict_postconditions(&mut g, z, a, false);
            assert!(g.mgr.leq(e, g.tau_e), "restriction only removes");
            let tau_e = g.tau_e;
            assert!(user_neutral(&mut g, tau_e, e));
            let saved = g.tau_e;
            g.tau_e = e;
            let s = relax_preconditions(&mut g, z);
            g.tau_e = saved;
            assert!(g.mgr.leq(g.tau_s, s), "relaxation only adds");
            let ns = g.mgr.not(g.tau_s);
            let added = g.mgr.and(s, ns);
            assert!(g.mgr.leq(added, allowed), "hard and task constraints kept");
        }
    }
}

#[test]
fn modifications_keep_their_contracts() {
    check_contracts(&with_extras(&blocks::world(blocks::Variant::NoB).spec().unwrap(), 2).unwrap());
    check_contracts(&with_extras(&plates::world(plates::Variant::Keep).spec().unwrap(), 2).unwrap());
}

#[test]
fn legacy_restriction_forces_person_moves() {
    let mut g = game(&with_extras(&plates::world(plates::Variant::Keep).spec().unwrap(), 3).unwrap());
    let tau_e = g.tau_e;
    let forced = g.winning_iterates().into_iter().any(|z| {
        let e = restrict_postconditions(&mut g, z, None, true);
        !user_neutral(&mut g, tau_e, e)
    });
    assert!(forced);
}

#[test]
fn realizable_game_is_returned_unchanged() {
    let mut g = game(&blocks::world(blocks::Variant::Base).spec().unwrap());
    let r = repair_once(&mut g, None, false).unwrap().unwrap();
    assert_eq!((r.tau_e, r.tau_s), (g.tau_e, g.tau_s));
    assert!(matches!(enumerate_suggestions(&blocks::world(blocks::Variant::Base).spec().unwrap(), &RepairConfig::default()), Err(Error::SpecRealizable)));
}

#[test]
fn missing_skill_is_found_as_new_skill() {
    let w = blocks::world(blocks::Variant::NoB);
    let cfg = RepairConfig { max_suggestions: Some(1), ..Default::default() };
    let r = enumerate_suggestions(&w.spec().unwrap(), &cfg).unwrap();
    assert_eq!(r.suggestions.len(), 1);
    let s = &r.suggestions[0];
    assert!(s.verified && s.user_neutral);
    let has = |set: &Vec<String>, xs: &[&str]| xs.iter().all(|x| set.iter().any(|s| s == x));
    // Green from C to F, whatever red and blue do.
    assert!(s.new_skills.iter().any(|n| {
        n.pre.iter().any(|p| has(p, &["green_x_c", "green_yz_c"])) && n.outcomes.iter().all(|o| has(o, &["green_x_f", "green_yz_f"]))
    }));
    let text = s.render(&w.domain());
    assert!(text.starts_with("+ new skill 1: when "));
    let v: serde_json::Value = serde_json::to_value(s).unwrap();
    assert_eq!(v["provenance"], "synthesis");
    assert!(v["skills"][0]["outcomes"].is_array() && v["relaxed_pres"].is_object() && v["removed_posts"].is_object());
}

#[test]
fn flaky_plates_repair_removes_an_outcome_without_touching_people() {
    let w = plates::world(plates::Variant::Keep);
    let spec = w.spec().unwrap();
    let r = enumerate_suggestions(&spec, &RepairConfig::default()).unwrap();
    assert!(!r.suggestions.is_empty());
    assert!(r.suggestions.iter().all(|s| s.verified && s.user_neutral));
    let s = &r.suggestions[0];
    // The setting skill keeps only its "nothing happens" outcome.
    let (skill, gone) = s.removed_posts.iter().next().unwrap();
    let model = w.domain().skill(skill).unwrap().clone();
    assert!(gone.iter().all(|&j| !model.outcomes[j].eff_true.is_empty()));
    assert!(s.render(&w.domain()).contains("- "));

    let legacy = enumerate_suggestions(&spec, &RepairConfig { legacy: true, ..Default::default() }).unwrap();
    assert!(legacy.suggestions.iter().any(|s| !s.user_neutral));
}

#[test]
fn applied_suggestion_round_trips_through_text() {
    let w = blocks::world(blocks::Variant::MissingB);
    let spec = w.spec().unwrap();
    let r = enumerate_suggestions(&spec, &RepairConfig { max_suggestions: Some(1), ..Default::default() }).unwrap();
    let (domain, task) = split_spec(&spec).unwrap();
    let fixed = apply_suggestion(&domain, &task, &r.suggestions[0]).unwrap();
    assert!(verify_clean(&fixed).unwrap());
    assert!(fixed.props_of_kind(PropKind::Skill).contains(&"new0".to_string()));
}

#[test]
fn blocked_suggestion_is_not_found_again() {
    let w = blocks::world(blocks::Variant::NoB);
    let spec = w.spec().unwrap();
    let r = enumerate_suggestions(&spec, &RepairConfig::default()).unwrap();
    for (i, a) in r.suggestions.iter().enumerate() {
        for b in &r.suggestions[i + 1..] {
            assert!(!a.same_delta(b));
        }
    }
    let (domain, _) = split_spec(&spec).unwrap();
    let extras = vec!["extra1".to_string()];
    let f = blocking(&r.suggestions[0], &domain.symbols(), &extras);
    assert_eq!(f.len(), r.suggestions[0].new_skills.iter().map(|n| n.pre.len() * n.outcomes.len()).sum::<usize>());
}
