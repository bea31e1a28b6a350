//! Synthesis-based repair. The environment's outcomes for skills are
//! restricted toward the system's winning states and skill preconditions
//! are relaxed; when the modified game is realizable, the skills its
//! strategy uses are read back as suggestions.
//!
//! Extra skills are system outputs with no precondition and no effect
//! model. Restricting their outcomes is what turns them into new skills.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bdd::{Bdd, VarId};
use crate::encoder::{assemble, Domain, EncodeOptions, Effect, SkillModel};
use crate::logic::{Formula, Gr1Spec, PropKind};
use crate::repair_enum::{fresh_names, split_spec, verify_clean, Provenance};
use crate::synthesis::{build_game, CounterStrategy, GameStructure, Strategy};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepairConfig {
    /// Extra skills present during repair; missing ones are added.
    pub n_extra_skills: usize,
    pub max_suggestions: Option<usize>,
    pub budget: Option<Duration>,
    /// Restrict without the extra-skill filter and the user-variable
    /// expansion. Kept to reproduce the failure it causes.
    pub legacy: bool,
}

impl Default for RepairConfig {
    fn default() -> Self {
        RepairConfig { n_extra_skills: 3, max_suggestions: None, budget: None, legacy: false }
    }
}

/// A suggested skill: any of `pre` enables it, and it ends in one of
/// `outcomes` (each the full set of symbols that hold afterwards).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NewSkill {
    pub pre: Vec<Vec<String>>,
    pub outcomes: Vec<Vec<String>>,
}

impl NewSkill {
    pub fn to_model(&self, domain: &Domain, name: &str) -> SkillModel {
        let symbols = domain.symbols();
        let outcomes = self
            .outcomes
            .iter()
            .map(|o| Effect { eff_true: o.clone(), eff_false: symbols.iter().filter(|s| !o.contains(s)).cloned().collect(), stay: Vec::new() })
            .collect();
        SkillModel { name: name.to_string(), pre: self.pre.clone(), outcomes }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthSuggestion {
    #[serde(rename = "skills")]
    pub new_skills: Vec<NewSkill>,
    /// Added precondition combinations per existing skill.
    pub relaxed_pres: BTreeMap<String, Vec<Vec<String>>>,
    /// Removed outcome indices per existing skill.
    pub removed_posts: BTreeMap<String, Vec<usize>>,
    pub provenance: Provenance,
    pub verified: bool,
    /// The modified environment never forbids a user-variable move.
    pub user_neutral: bool,
    pub elapsed_ms: u64,
}

impl SynthSuggestion {
    pub fn is_empty(&self) -> bool {
        self.new_skills.is_empty() && self.relaxed_pres.is_empty() && self.removed_posts.is_empty()
    }

    fn same_delta(&self, other: &SynthSuggestion) -> bool {
        self.new_skills == other.new_skills && self.relaxed_pres == other.relaxed_pres && self.removed_posts == other.removed_posts
    }

    /// Diff-style text against the original skills.
    pub fn render(&self, domain: &Domain) -> String {
        let combo = |c: &Vec<String>| if c.is_empty() { "true".to_string() } else { c.join(" & ") };
        let mut s = String::new();
        for (k, n) in self.new_skills.iter().enumerate() {
            let pre: Vec<String> = n.pre.iter().map(combo).collect();
            let post: Vec<String> = n.outcomes.iter().map(combo).collect();
            s += &format!("+ new skill {}: when {} -> {}\n", k + 1, pre.join(" | "), post.join(" | "));
        }
        for (skill, combos) in &self.relaxed_pres {
            for c in combos {
                s += &format!("+ {skill} pre: {}\n", combo(c));
            }
        }
        for (skill, idx) in &self.removed_posts {
            for &j in idx {
                let eff = domain.skill(skill).and_then(|m| m.outcomes.get(j)).map(|o| combo(&o.eff_true)).unwrap_or_default();
                s += &format!("- {skill} outcome {j}: {eff}\n");
            }
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct SynthReport {
    pub suggestions: Vec<SynthSuggestion>,
    /// Calls of the one-iteration repair.
    pub attempts: usize,
    /// Suggestions discarded as empty or failing clean re-verification.
    pub dropped: usize,
    /// Counter-strategy of the input when no repair was found at all.
    pub irreparable: Option<CounterStrategy>,
    pub timed_out: bool,
}

/// Adds extra skills `extra1, extra2, …` until `n` are declared; new ones
/// are idle initially.
pub fn with_extras(spec: &Gr1Spec, n: usize) -> Result<Gr1Spec> {
    let (domain, mut task) = split_spec(spec)?;
    let skills: BTreeSet<String> = domain.skill_names().into_iter().collect();
    let taken: BTreeSet<String> = spec.propositions().into_iter().map(|p| p.name).collect();
    let have = task.outputs.decls().filter(|d| !skills.contains(*d)).count();
    let mut k = 1;
    for _ in have..n {
        while taken.contains(&format!("extra{k}")) {
            k += 1;
        }
        let name = format!("extra{k}");
        task.outputs.push_decl(&name);
        task.sys_init.push_formula(Formula::not(Formula::atom(&name)));
        k += 1;
    }
    assemble(&domain, &task, EncodeOptions::default())
}

/// Proposition indices by role.
struct Roles {
    symbols: Vec<u32>,
    skills: Vec<u32>,
    extras: Vec<u32>,
}

impl Roles {
    fn of(g: &GameStructure) -> Roles {
        let m = &g.map;
        Roles {
            symbols: m.props_of_kind(PropKind::LearnedSymbol),
            skills: m.props_of_kind(PropKind::Skill),
            extras: m.props_of_kind(PropKind::ExtraSkill),
        }
    }
}

fn user_cube(g: &mut GameStructure, primed_only: bool) -> Bdd {
    let user = g.map.props_of_kind(PropKind::UserEnv);
    let mut vars: Vec<VarId> = user.iter().map(|&p| VarId(2 * p + 1)).collect();
    if !primed_only {
        vars.extend(user.iter().map(|&p| VarId(2 * p)));
    }
    g.mgr.cube(&vars)
}

/// Restricts `τ_e` so that from states outside `z` that could reach it,
/// the environment must move somewhere the system can enter `z`.
///
/// Unless `legacy`, only `a_modify` among the extra skills is restricted
/// and the restriction is widened to every valuation of the user
/// variables, so the environment keeps full control of them.
pub fn restrict_postconditions(g: &mut GameStructure, z: Bdd, a_modify: Option<u32>, legacy: bool) -> Bdd {
    let zp = g.mgr.swap(z);
    let r1 = g.mgr.and_exists(g.tau_s, zp, g.next_sys);
    let r2 = g.mgr.and_exists(g.tau_e, r1, g.next_env);
    let nz = g.mgr.not(z);
    let mut r2 = g.mgr.and(r2, nz);
    if !legacy {
        for p in g.map.props_of_kind(PropKind::ExtraSkill) {
            if Some(p) != a_modify {
                let other = g.mgr.var(VarId(2 * p));
                let idle = g.mgr.not(other);
                r2 = g.mgr.and(r2, idle);
            }
        }
    }
    let mut new = g.mgr.and(r2, r1);
    new = g.mgr.and(new, g.tau_e);
    if !legacy {
        let rc = user_cube(g, false);
        let wide = g.mgr.exists_cube(rc, new);
        new = g.mgr.and(wide, g.tau_e);
    }
    let nr2 = g.mgr.not(r2);
    let old = g.mgr.and(nr2, g.tau_e);
    g.mgr.or(new, old)
}

/// Adds system transitions, within the hard and task constraints, from
/// states where every environment move admits such a step into `z`.
pub fn relax_preconditions(g: &mut GameStructure, z: Bdd) -> Bdd {
    let zp = g.mgr.swap(z);
    let allowed = g.mgr.and(g.tau_s_hard, g.tau_task);
    let s1 = g.mgr.and(allowed, zp);
    let some = g.mgr.exists_cube(g.next_sys, s1);
    let imp = g.mgr.implies(g.tau_e, some);
    let s2 = g.mgr.forall_cube(g.next_env, imp);
    let nz = g.mgr.not(z);
    let s2 = g.mgr.and(s2, nz);
    let add = g.mgr.and(s2, s1);
    g.mgr.or(g.tau_s, add)
}

/// Whether `tau_new` lets the environment choose any next user-variable
/// values wherever the original `tau_e` would.
pub fn user_neutral(g: &mut GameStructure, tau_e: Bdd, tau_new: Bdd) -> bool {
    let rc = user_cube(g, true);
    let wide = g.mgr.exists_cube(rc, tau_new);
    let wide = g.mgr.and(wide, tau_e);
    g.mgr.leq(wide, tau_new)
}

/// A realizable modification of the game and its strategy.
pub struct Repaired {
    pub tau_e: Bdd,
    pub tau_s: Bdd,
    pub strategy: Strategy,
}

/// One restriction and one relaxation toward a target set, then a full
/// solve of the modified game. Targets are the outer iterates of the
/// winning-region computation, tried from the smallest nonempty one up.
/// The game is left unmodified; a realizable game is returned as is.
pub fn repair_once(g: &mut GameStructure, a_modify: Option<u32>, legacy: bool) -> Result<Option<Repaired>> {
    let (tau_e, tau_s) = (g.tau_e, g.tau_s);
    let w = g.compute_winning();
    if g.is_realizable(&w) {
        return Ok(Some(Repaired { tau_e, tau_s, strategy: g.extract_strategy(&w)? }));
    }
    let mut targets = g.winning_iterates();
    if targets.is_empty() {
        targets.push(g.mgr.tt());
    }
    targets.retain(|z| !z.is_false());
    for &z in targets.iter().rev() {
        let new_e = restrict_postconditions(g, z, a_modify, legacy);
        g.tau_e = new_e;
        let new_s = relax_preconditions(g, z);
        g.tau_s = new_s;
        let w = g.compute_winning();
        let found = if g.is_realizable(&w) { Some(g.extract_strategy(&w)?) } else { None };
        g.tau_e = tau_e;
        g.tau_s = tau_s;
        if let Some(strategy) = found {
            return Ok(Some(Repaired { tau_e: new_e, tau_s: new_s, strategy }));
        }
    }
    Ok(None)
}

fn holding(st: &Strategy, v: &[bool], symbols: &[u32]) -> Vec<String> {
    symbols.iter().filter(|&&p| v[p as usize]).map(|&p| st.props[p as usize].clone()).collect()
}

fn matches(e: &Effect, before: &[String], after: &[String]) -> bool {
    let has = |set: &[String], s: &String| set.contains(s);
    e.eff_true.iter().all(|s| has(after, s))
        && e.eff_false.iter().all(|s| !has(after, s))
        && e.stay.iter().all(|s| has(before, s) == has(after, s))
}

/// Reads the skills a repaired strategy relies on.
pub fn extract_suggestion(g: &mut GameStructure, domain: &Domain, repaired: &Repaired) -> SynthSuggestion {
    let roles = Roles::of(g);
    let st = &repaired.strategy;
    let mut succ: Vec<BTreeSet<Vec<String>>> = vec![BTreeSet::new(); st.states.len()];
    for e in &st.edges {
        let post = holding(st, &st.states[e.dst].valuation, &roles.symbols);
        succ[e.src].insert(post);
    }

    // Extra skills grouped by their observed outcome sets.
    let mut by_outcome: BTreeMap<Vec<Vec<String>>, BTreeSet<Vec<String>>> = BTreeMap::new();
    let mut relaxed: BTreeMap<String, BTreeSet<Vec<String>>> = BTreeMap::new();
    let mut observed: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for q in &st.states {
        let v = &q.valuation;
        let pre = holding(st, v, &roles.symbols);
        let outs: Vec<Vec<String>> = succ[q.id].iter().cloned().collect();
        if outs.is_empty() {
            continue;
        }
        if roles.extras.iter().any(|&p| v[p as usize]) {
            by_outcome.entry(outs.clone()).or_default().insert(pre.clone());
        }
        for &p in roles.skills.iter().filter(|&&p| v[p as usize]) {
            let name = &st.props[p as usize];
            let Some(model) = domain.skill(name) else { continue };
            let held: BTreeSet<String> = pre.iter().cloned().collect();
            if !model.admits(&held) {
                relaxed.entry(name.clone()).or_default().insert(pre.clone());
            }
            let seen = observed.entry(name.clone()).or_default();
            for post in &outs {
                for (j, o) in model.outcomes.iter().enumerate() {
                    if matches(o, &pre, post) {
                        seen.insert(j);
                    }
                }
            }
        }
    }

    let mut removed = BTreeMap::new();
    for (name, seen) in &observed {
        let p = g.map.prop_index(name).expect("skill is declared");
        let active = g.mgr.var(VarId(2 * p));
        let before = g.mgr.and(g.tau_e, active);
        if g.mgr.leq(before, repaired.tau_e) {
            continue;
        }
        let n = domain.skill(name).map_or(0, |m| m.outcomes.len());
        let gone: Vec<usize> = (0..n).filter(|j| !seen.contains(j)).collect();
        if !gone.is_empty() {
            removed.insert(name.clone(), gone);
        }
    }

    let tau_e = g.tau_e;
    SynthSuggestion {
        new_skills: by_outcome.into_iter().map(|(outcomes, pre)| NewSkill { pre: pre.into_iter().collect(), outcomes }).collect(),
        relaxed_pres: relaxed.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect(),
        removed_posts: removed,
        provenance: Provenance::Synthesis,
        verified: false,
        user_neutral: user_neutral(g, tau_e, repaired.tau_e),
        elapsed_ms: 0,
    }
}

/// The domain with a suggestion applied, re-encoded with `task`.
pub fn apply_suggestion(domain: &Domain, task: &Gr1Spec, s: &SynthSuggestion) -> Result<Gr1Spec> {
    let mut d = domain.clone();
    let mut t = task.clone();
    for sk in &mut d.skills {
        if let Some(extra) = s.relaxed_pres.get(&sk.name) {
            sk.pre.extend(extra.iter().cloned());
        }
        if let Some(gone) = s.removed_posts.get(&sk.name) {
            sk.outcomes = sk.outcomes.iter().enumerate().filter(|(j, _)| !gone.contains(j)).map(|(_, o)| o.clone()).collect();
        }
    }
    let names = fresh_names(task, s.new_skills.len());
    for (n, name) in s.new_skills.iter().zip(&names) {
        d.skills.push(n.to_model(domain, name));
        t.sys_init.push_formula(Formula::not(Formula::atom(name)));
    }
    assemble(&d, &t, EncodeOptions::default())
}

/// Exact symbol valuation: listed symbols true, the rest false.
fn state_literals(symbols: &[String], holding: &[String], primed: bool) -> Vec<Formula> {
    symbols
        .iter()
        .map(|s| {
            let a = if primed { Formula::next(s) } else { Formula::atom(s) };
            if holding.contains(s) {
                a
            } else {
                Formula::not(a)
            }
        })
        .collect()
}

/// Hard constraints ruling out the suggestion's new skills (for every extra
/// skill) and its added preconditions.
fn blocking(s: &SynthSuggestion, symbols: &[String], extras: &[String]) -> Vec<Formula> {
    let mut out = Vec::new();
    let any_extra = Formula::or(extras.iter().map(Formula::atom));
    for n in &s.new_skills {
        for pre in &n.pre {
            for post in &n.outcomes {
                let mut parts = state_literals(symbols, pre, false);
                parts.push(any_extra.clone());
                parts.extend(state_literals(symbols, post, true));
                out.push(Formula::not(Formula::and(parts)));
            }
        }
    }
    for (skill, combos) in &s.relaxed_pres {
        for c in combos {
            let mut parts = state_literals(symbols, c, true);
            parts.push(Formula::next(skill));
            out.push(Formula::not(Formula::and(parts)));
        }
    }
    out
}

/// Synthesis-based repair of an unrealizable encoded specification,
/// returning several suggestions by ruling out each one found.
pub fn enumerate_suggestions(spec: &Gr1Spec, cfg: &RepairConfig) -> Result<SynthReport> {
    let start = Instant::now();
    let (domain, orig_task) = split_spec(spec)?;
    let (_, mut task) = split_spec(&with_extras(spec, cfg.n_extra_skills)?)?;
    let symbols = domain.symbols();
    let mut report = SynthReport { suggestions: Vec::new(), attempts: 0, dropped: 0, irreparable: None, timed_out: false };
    let mut round = 0usize;
    loop {
        if cfg.budget.is_some_and(|b| start.elapsed() >= b) {
            report.timed_out = true;
            break;
        }
        let current = assemble(&domain, &task, EncodeOptions::default())?;
        let mut g = build_game(&current)?;
        if round == 0 && g.realizable() {
            return Err(Error::SpecRealizable);
        }
        let roles = Roles::of(&g);
        let extras: Vec<String> = roles.extras.iter().map(|&p| g.map.name(p).to_string()).collect();
        let choices: Vec<Option<u32>> =
            if roles.extras.is_empty() { vec![None] } else { (0..roles.extras.len()).map(|k| Some(roles.extras[(round + k) % roles.extras.len()])).collect() };
        let mut found = None;
        for a in choices {
            report.attempts += 1;
            if let Some(r) = repair_once(&mut g, a, cfg.legacy)? {
                log::info!("repair found with a_modify = {:?}", a.map(|p| g.map.name(p).to_string()));
                found = Some(r);
                break;
            }
            if cfg.budget.is_some_and(|b| start.elapsed() >= b) {
                break;
            }
        }
        round += 1;
        let Some(repaired) = found else {
            if report.suggestions.is_empty() && !cfg.budget.is_some_and(|b| start.elapsed() >= b) {
                let mut g0 = build_game(spec)?;
                report.irreparable = Some(g0.extract_counterstrategy()?);
            }
            break;
        };
        let mut s = extract_suggestion(&mut g, &domain, &repaired);
        drop(g);
        if s.is_empty() || report.suggestions.iter().any(|p| p.same_delta(&s)) {
            report.dropped += 1;
            break;
        }
        s.elapsed_ms = start.elapsed().as_millis() as u64;
        s.verified = verify_clean(&apply_suggestion(&domain, &orig_task, &s)?)?;
        let block = blocking(&s, &symbols, &extras);
        if s.verified || cfg.legacy {
            report.suggestions.push(s);
        } else {
            log::warn!("suggestion failed clean re-verification; dropped");
            report.dropped += 1;
        }
        if block.is_empty() {
            break;
        }
        for f in block {
            task.sys_trans_hard.push_formula(f);
        }
        if cfg.max_suggestions.is_some_and(|m| report.suggestions.len() >= m) {
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
