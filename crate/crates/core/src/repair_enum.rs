//! Enumeration-based repair: new skills are assembled from preconditions
//! already seen in the domain and recombined effects, and kept when the
//! re-encoded specification becomes realizable.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoder::{annotate, assemble, strip_generated, Domain, EncodeOptions, SkillModel};
use crate::logic::{Formula, Gr1Spec};
use crate::specformat::{parse, serialize};
use crate::synthesis::{build_game, CounterStrategy};
use crate::{Error, Result};

/// A proposed skill with one deterministic outcome.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CandidateSkill {
    /// Precondition combinations, borrowed from an existing skill.
    pub pre: Vec<Vec<String>>,
    pub eff_true: Vec<String>,
}

impl CandidateSkill {
    pub fn to_model(&self, domain: &Domain, name: &str) -> SkillModel {
        SkillModel { name: name.to_string(), pre: self.pre.clone(), outcomes: vec![domain.effect_for(&self.eff_true)] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Enumeration,
    Synthesis,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    #[serde(rename = "skills")]
    pub new_skills: Vec<CandidateSkill>,
    pub provenance: Provenance,
    pub verified: bool,
    /// Time from the start of the search until this suggestion was found.
    pub elapsed_ms: u64,
}

impl Suggestion {
    /// Text rendering naming precondition combinations and effects.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, c) in self.new_skills.iter().enumerate() {
            let pre: Vec<String> = c.pre.iter().map(|combo| combo.join(" & ")).collect();
            s += &format!("new skill {}: when {} -> {}\n", k + 1, pre.join(" | "), c.eff_true.join(" & "));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnumConfig {
    pub n_new_skills: usize,
    pub max_suggestions: Option<usize>,
    /// Wall-clock limit for the whole search.
    pub budget: Option<Duration>,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { n_new_skills: 1, max_suggestions: None, budget: None }
    }
}

#[derive(Clone, Debug)]
pub struct EnumReport {
    pub suggestions: Vec<Suggestion>,
    /// Skills leading to dead ends of the counter-strategy.
    pub a_not: BTreeSet<String>,
    /// Combinations checked by synthesis.
    pub combinations_checked: usize,
    /// Distinct candidate skills in the search.
    pub candidates: usize,
    /// The search stopped at the budget before exhausting combinations.
    pub timed_out: bool,
}

/// New postconditions: for each existing outcome, every choice of one
/// symbol per factor it makes true.
pub fn new_postconditions(domain: &Domain) -> Vec<Vec<String>> {
    let mut out: BTreeSet<Vec<String>> = BTreeSet::new();
    for sk in &domain.skills {
        for o in &sk.outcomes {
            let factors: BTreeSet<usize> = o.eff_true.iter().filter_map(|s| domain.factor_of(s)).collect();
            if factors.is_empty() {
                continue;
            }
            let mut acc: Vec<Vec<String>> = vec![Vec::new()];
            for f in factors {
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        domain.factors[f].iter().map(move |s| {
                            let mut p = prefix.clone();
                            p.push(s.clone());
                            p
                        })
                    })
                    .collect();
            }
            out.extend(acc);
        }
    }
    out.into_iter().collect()
}

fn holding(cs: &CounterStrategy, env: &[bool]) -> BTreeSet<String> {
    env.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| cs.props[k].clone()).collect()
}

/// Skills whose execution leads into a dead end of the counter-strategy:
/// the active skill when the environment leaves the system without a legal
/// answer, or the skill the system would have to choose against the task.
pub fn skills_to_dead_ends(cs: &CounterStrategy, domain: &Domain) -> BTreeSet<String> {
    let dead: BTreeSet<usize> = cs.q_not().into_iter().collect();
    let mut out = BTreeSet::new();
    for e in cs.edges.iter().filter(|e| dead.contains(&e.dst)) {
        let src = &cs.states[e.src];
        let (sys, env) = match &e.sys {
            None => match &src.sys {
                Some(s) => (s.as_slice(), src.env.as_slice()),
                None => continue,
            },
            Some(s) => (s.as_slice(), e.env.as_slice()),
        };
        let held = holding(cs, env);
        for (k, &on) in sys.iter().enumerate() {
            if !on {
                continue;
            }
            let name = &cs.props[cs.n_env + k];
            if let Some(sk) = domain.skill(name) {
                if sk.admits(&held) {
                    out.insert(name.clone());
                }
            }
        }
    }
    out
}

fn pre_sets<'a>(skills: impl Iterator<Item = &'a SkillModel>) -> Vec<Vec<Vec<String>>> {
    let set: BTreeSet<Vec<Vec<String>>> = skills.filter(|s| !s.pre.is_empty()).map(|s| s.pre.clone()).collect();
    set.into_iter().collect()
}

/// Candidate pools: preconditions of the dead-end skills and of all skills,
/// each crossed with the new postconditions, minus existing pairs.
pub fn candidate_pools(domain: &Domain, a_not: &BTreeSet<String>) -> (Vec<CandidateSkill>, Vec<CandidateSkill>) {
    let posts = new_postconditions(domain);
    let existing: HashSet<(Vec<Vec<String>>, Vec<String>)> = domain
        .skills
        .iter()
        .flat_map(|s| s.outcomes.iter().map(move |o| (s.pre.clone(), o.eff_true.clone())))
        .collect();
    let pool = |pres: Vec<Vec<Vec<String>>>| -> Vec<CandidateSkill> {
        pres.iter()
            .flat_map(|p| posts.iter().map(move |e| CandidateSkill { pre: p.clone(), eff_true: e.clone() }))
            .filter(|c| !existing.contains(&(c.pre.clone(), c.eff_true.clone())))
            .collect()
    };
    let not_pool = pool(pre_sets(domain.skills.iter().filter(|s| a_not.contains(&s.name))));
    let all_pool = pool(pre_sets(domain.skills.iter()));
    (not_pool, all_pool)
}

/// Fresh skill names that do not clash with existing propositions.
pub(crate) fn fresh_names(spec: &Gr1Spec, n: usize) -> Vec<String> {
    let taken: BTreeSet<String> = spec.propositions().into_iter().map(|p| p.name).collect();
    (0..).map(|k| format!("new{k}")).filter(|s| !taken.contains(s)).take(n).collect()
}

/// Re-encodes `task` over `domain` extended with `skills`. New skills are
/// idle initially, like the existing ones.
pub fn reencode_with(domain: &Domain, task: &Gr1Spec, skills: &[SkillModel]) -> Result<Gr1Spec> {
    let mut d = domain.clone();
    d.skills.extend(skills.iter().cloned());
    let mut t = task.clone();
    for s in skills {
        t.sys_init.push_formula(Formula::not(Formula::atom(&s.name)));
    }
    assemble(&d, &t, EncodeOptions::default())
}

/// Independent check from text: serialize, parse, rebuild and solve.
pub fn verify_clean(spec: &Gr1Spec) -> Result<bool> {
    let mut back = parse(&serialize(spec))?;
    annotate(&mut back);
    Ok(build_game(&back)?.realizable())
}

/// Domain and task of an encoded specification.
pub fn split_spec(spec: &Gr1Spec) -> Result<(Domain, Gr1Spec)> {
    Ok((Domain::from_spec(spec)?, strip_generated(spec)))
}

/// Lazily enumerates index combinations: one primary candidate followed by
/// `rest` distinct all-pool indices in lexicographic order. Each unordered
/// set of skills is produced once.
struct Combos<'a> {
    primary: &'a [CandidateSkill],
    all: &'a [CandidateSkill],
    all_index: BTreeMap<&'a CandidateSkill, usize>,
    rest: usize,
    i: usize,
    idx: Vec<usize>,
    started: bool,
    seen: HashSet<Vec<usize>>,
}

impl<'a> Combos<'a> {
    fn new(primary: &'a [CandidateSkill], all: &'a [CandidateSkill], rest: usize) -> Self {
        let all_index = all.iter().enumerate().map(|(k, c)| (c, k)).collect();
        Combos { primary, all, all_index, rest, i: 0, idx: (0..rest).collect(), started: false, seen: HashSet::new() }
    }

    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            return self.rest <= self.all.len();
        }
        let n = self.all.len();
        let k = self.rest;
        if k == 0 {
            return false;
        }
        let mut p = k;
        while p > 0 {
            p -= 1;
            if self.idx[p] < n - k + p {
                self.idx[p] += 1;
                for q in p + 1..k {
                    self.idx[q] = self.idx[q - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Combos<'_> {
    type Item = Vec<CandidateSkill>;

    fn next(&mut self) -> Option<Self::Item> {
        while self.i < self.primary.len() {
            if !self.advance() {
                self.i += 1;
                self.started = false;
                self.idx = (0..self.rest).collect();
                continue;
            }
            let first = &self.primary[self.i];
            let mut key: Vec<usize> = self.idx.clone();
            match self.all_index.get(first) {
                Some(&k) if key.contains(&k) => continue,
                Some(&k) => key.push(k),
                None => key.push(self.all.len() + self.i),
            }
            key.sort_unstable();
            if !self.seen.insert(key) {
                continue;
            }
            let mut out = vec![first.clone()];
            out.extend(self.idx.iter().map(|&k| self.all[k].clone()));
            return Some(out);
        }
        None
    }
}

fn check(domain: &Domain, task: &Gr1Spec, names: &[String], combo: &[CandidateSkill]) -> Result<bool> {
    let models: Vec<SkillModel> = combo.iter().zip(names).map(|(c, n)| c.to_model(domain, n)).collect();
    let spec = reencode_with(domain, task, &models)?;
    Ok(build_game(&spec)?.realizable())
}

/// Enumeration-based repair of an unrealizable encoded specification.
pub fn repair(spec: &Gr1Spec, cfg: &EnumConfig) -> Result<EnumReport> {
    if cfg.n_new_skills == 0 {
        return Err(Error::Config("n_new_skills must be at least 1".into()));
    }
    let start = Instant::now();
    let mut game = build_game(spec)?;
    let cs = game.extract_counterstrategy()?;
    drop(game);
    let (domain, task) = split_spec(spec)?;
    let a_not = skills_to_dead_ends(&cs, &domain);
    let (not_pool, all_pool) = candidate_pools(&domain, &a_not);
    let primary = if a_not.is_empty() { &all_pool } else { &not_pool };
    let candidates = primary.iter().chain(all_pool.iter()).collect::<BTreeSet<_>>().len();
    log::info!("A_not = {a_not:?}; {} primary and {} pool candidates", primary.len(), all_pool.len());
    let names = fresh_names(spec, cfg.n_new_skills);

    let mut combos = Combos::new(primary, &all_pool, cfg.n_new_skills - 1);
    let chunk = (rayon::current_num_threads() * 4).max(8);
    let mut report = EnumReport { suggestions: Vec::new(), a_not, combinations_checked: 0, candidates, timed_out: false };
    loop {
        let batch: Vec<Vec<CandidateSkill>> = combos.by_ref().take(chunk).collect();
        if batch.is_empty() {
            break;
        }
        let results: Vec<Result<bool>> = batch.par_iter().map(|c| check(&domain, &task, &names, c)).collect();
        let elapsed_ms = start.elapsed().as_millis() as u64;
        for (combo, r) in batch.into_iter().zip(results) {
            report.combinations_checked += 1;
            if !r? {
                continue;
            }
            let models: Vec<SkillModel> = combo.iter().zip(&names).map(|(c, n)| c.to_model(&domain, n)).collect();
            let verified = verify_clean(&reencode_with(&domain, &task, &models)?)?;
            if !verified {
                log::warn!("suggestion failed clean re-verification; dropped");
                continue;
            }
            report.suggestions.push(Suggestion { new_skills: combo, provenance: Provenance::Enumeration, verified, elapsed_ms });
            if cfg.max_suggestions.is_some_and(|m| report.suggestions.len() >= m) {
                return Ok(report);
            }
        }
        if cfg.budget.is_some_and(|b| start.elapsed() >= b) {
            report.timed_out = true;
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
