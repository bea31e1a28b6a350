//! Compiles a symbolic skill model into the skills-based part of a GR(1)
//! specification and merges it with a user task file.
//!
//! Generated content is delimited by comment markers: a line `# auto:<tag>`
//! opens a region and `# auto:end` closes it. Tags are `symbols`
//! (INPUT), `skills` (OUTPUT), `eff`, `noact`, `mutex` (ENV_TRANS), `pre`
//! (SYS_TRANS) and `mutex` (SYS_TRANS_HARD). A task file may place the
//! opening markers as placeholders; missing ones are appended.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::abstraction::Abstraction;
use crate::logic::{validate, Formula, Gr1Spec, Item, Line, PropKind, Section, SectionKind};
use crate::{Error, Result};

pub const END: &str = "auto:end";

/// One outcome of a skill: symbols made true, made false, and kept.
/// Symbols in none of the lists are unconstrained.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Effect {
    pub eff_true: Vec<String>,
    pub eff_false: Vec<String>,
    pub stay: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkillModel {
    pub name: String,
    /// Precondition combinations; the skill may run when all symbols of
    /// some combination hold. Empty means never, `[[]]` means always.
    pub pre: Vec<Vec<String>>,
    pub outcomes: Vec<Effect>,
}

impl SkillModel {
    /// Whether some precondition combination holds when exactly `holding`
    /// symbols are true.
    pub fn admits(&self, holding: &BTreeSet<String>) -> bool {
        self.pre.iter().any(|c| c.iter().all(|s| holding.contains(s)))
    }
}

/// Symbols grouped by factor, their pairwise exclusions, and skills.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub factors: Vec<Vec<String>>,
    /// Same-factor symbol pairs with disjoint groundings.
    pub exclusive: Vec<(String, String)>,
    pub skills: Vec<SkillModel>,
}

impl Domain {
    pub fn from_abstraction(a: &Abstraction) -> Domain {
        let name = |i: usize| a.symbols[i].name.clone();
        let factors: Vec<Vec<String>> = (0..a.factors.len())
            .map(|f| a.symbols_of_factor(f).into_iter().map(name).collect())
            .filter(|v: &Vec<String>| !v.is_empty())
            .collect();
        let mut exclusive = Vec::new();
        for f in 0..a.factors.len() {
            let ids = a.symbols_of_factor(f);
            for (k, &x) in ids.iter().enumerate() {
                for &y in &ids[k + 1..] {
                    if !a.overlapping(x, y) {
                        exclusive.push((name(x), name(y)));
                    }
                }
            }
        }
        let names = |v: &[usize]| v.iter().map(|&i| name(i)).collect::<Vec<_>>();
        let skills = a
            .skills
            .iter()
            .map(|s| SkillModel {
                name: s.name.clone(),
                pre: s.pre.iter().map(|c| names(c)).collect(),
                outcomes: s
                    .outcomes
                    .iter()
                    .map(|o| Effect { eff_true: names(&o.eff_true), eff_false: names(&o.eff_false), stay: names(&o.eff_stay) })
                    .collect(),
            })
            .collect();
        Domain { factors, exclusive, skills }
    }

    pub fn symbols(&self) -> Vec<String> {
        self.factors.iter().flatten().cloned().collect()
    }

    pub fn skill_names(&self) -> Vec<String> {
        self.skills.iter().map(|s| s.name.clone()).collect()
    }

    pub fn skill(&self, name: &str) -> Option<&SkillModel> {
        self.skills.iter().find(|s| s.name == name)
    }

    pub fn factor_of(&self, symbol: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.iter().any(|s| s == symbol))
    }

    pub fn exclusive_with(&self, a: &str, b: &str) -> bool {
        self.exclusive.iter().any(|(x, y)| (x == a && y == b) || (x == b && y == a))
    }

    /// Effect sets for a deterministic outcome that makes `eff_true` hold:
    /// exclusive symbols of the touched factors become false, symbols of
    /// untouched factors stay.
    pub fn effect_for(&self, eff_true: &[String]) -> Effect {
        let touched: BTreeSet<usize> = eff_true.iter().filter_map(|s| self.factor_of(s)).collect();
        let mut eff_false = Vec::new();
        let mut stay = Vec::new();
        for (f, syms) in self.factors.iter().enumerate() {
            for s in syms {
                if touched.contains(&f) {
                    if !eff_true.contains(s) && eff_true.iter().any(|t| self.exclusive_with(s, t)) {
                        eff_false.push(s.clone());
                    }
                } else {
                    stay.push(s.clone());
                }
            }
        }
        Effect { eff_true: eff_true.to_vec(), eff_false, stay }
    }

    /// Factors an outcome changes, in factor order.
    pub fn effect_factors(&self, e: &Effect) -> Vec<usize> {
        let set: BTreeSet<usize> = e.eff_true.iter().chain(&e.eff_false).filter_map(|s| self.factor_of(s)).collect();
        set.into_iter().collect()
    }

    /// Decodes the generated regions of an assembled specification.
    pub fn from_spec(spec: &Gr1Spec) -> Result<Domain> {
        let mut factors: Vec<Vec<String>> = Vec::new();
        for (tag, line) in regions(&spec.inputs) {
            if tag != "symbols" {
                continue;
            }
            match &line.item {
                Item::Comment(c) if c.trim().starts_with("factor") => factors.push(Vec::new()),
                Item::Decl(d) => {
                    if factors.is_empty() {
                        factors.push(Vec::new());
                    }
                    factors.last_mut().unwrap().push(d.clone());
                }
                _ => {}
            }
        }
        factors.retain(|f| !f.is_empty());
        let skill_names: Vec<String> = regions(&spec.outputs)
            .filter(|(t, _)| *t == "skills")
            .filter_map(|(_, l)| match &l.item {
                Item::Decl(d) => Some(d.clone()),
                _ => None,
            })
            .collect();

        let bad = |f: &Formula| Error::InvalidSpec(format!("unrecognized generated formula `{}`", crate::specformat::formula_to_string(f)));
        let mut pre: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
        for (tag, l) in regions(&spec.sys_trans) {
            let Item::Formula(f) = &l.item else { continue };
            if tag == "pre" {
                let (skill, combos) = decode_pre(f).ok_or_else(|| bad(f))?;
                pre.insert(skill, combos);
            }
        }
        let mut eff: BTreeMap<String, Vec<Effect>> = BTreeMap::new();
        let mut exclusive = Vec::new();
        for (tag, l) in regions(&spec.env_trans) {
            let Item::Formula(f) = &l.item else { continue };
            match tag {
                "eff" => {
                    let (skill, outs) = decode_eff(f).ok_or_else(|| bad(f))?;
                    eff.insert(skill, outs);
                }
                "mutex" => {
                    if let Some((a, b, false)) = decode_pair(f) {
                        exclusive.push((a, b));
                    }
                }
                _ => {}
            }
        }
        let skills = skill_names
            .into_iter()
            .map(|n| SkillModel { pre: pre.remove(&n).unwrap_or_default(), outcomes: eff.remove(&n).unwrap_or_default(), name: n })
            .collect();
        Ok(Domain { factors, exclusive, skills })
    }
}

/// Options for [`assemble`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodeOptions {
    /// Emit pairwise skill exclusion into SYS_TRANS_HARD.
    pub skill_mutex: bool,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions { skill_mutex: true }
    }
}

/// `¬(⋁_p ⋀_{σ∈p} ○σ) → ¬○a`, one formula per skill.
pub fn build_phi_pre(skills: &[SkillModel]) -> Vec<Formula> {
    skills
        .iter()
        .map(|s| {
            let combos = s.pre.iter().map(|c| Formula::and(c.iter().map(Formula::next)));
            Formula::implies(Formula::not(Formula::or(combos)), Formula::not(Formula::next(&s.name)))
        })
        .collect()
}

/// `a → ⋁_j (⋀ ○σ_true ∧ ⋀ ¬○σ_false ∧ ⋀ (σ ↔ ○σ))`, one formula per skill.
pub fn build_phi_eff(skills: &[SkillModel]) -> Vec<Formula> {
    skills
        .iter()
        .map(|s| {
            let outs = s.outcomes.iter().map(|o| {
                let t = o.eff_true.iter().map(Formula::next);
                let f = o.eff_false.iter().map(|x| Formula::not(Formula::next(x)));
                let k = o.stay.iter().map(|x| Formula::iff(Formula::atom(x), Formula::next(x)));
                Formula::and(t.chain(f).chain(k))
            });
            Formula::implies(Formula::atom(&s.name), Formula::or(outs))
        })
        .collect()
}

/// `(⋀ ¬a) → ⋀ (σ ↔ ○σ)`.
pub fn build_phi_noact(skills: &[String], symbols: &[String]) -> Formula {
    let idle = Formula::and(skills.iter().map(|a| Formula::not(Formula::atom(a))));
    let frame = Formula::and(symbols.iter().map(|s| Formula::iff(Formula::atom(s), Formula::next(s))));
    Formula::implies(idle, frame)
}

fn exclusion(a: &str, b: &str, primed: bool) -> Formula {
    let at = |x: &str| if primed { Formula::next(x) } else { Formula::atom(x) };
    Formula::not(Formula::and([at(a), at(b)]))
}

/// Symbol exclusions (environment) and skill exclusions (hard system
/// safety), each at the current and next step. `skills` should include
/// the extra skills.
pub fn build_mutex(domain: &Domain, skills: &[String], opts: EncodeOptions) -> (Vec<Formula>, Vec<Formula>) {
    let order: BTreeMap<String, usize> = domain.symbols().into_iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut pairs: Vec<(String, String)> = domain
        .exclusive
        .iter()
        .map(|(a, b)| if order.get(a) <= order.get(b) { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) })
        .collect();
    pairs.sort_by_key(|(a, b)| (order.get(a).copied(), order.get(b).copied()));
    pairs.dedup();
    let mut env = Vec::new();
    for primed in [false, true] {
        env.extend(pairs.iter().map(|(a, b)| exclusion(a, b, primed)));
    }
    let mut hard = Vec::new();
    if opts.skill_mutex {
        for primed in [false, true] {
            for (i, a) in skills.iter().enumerate() {
                for b in &skills[i + 1..] {
                    hard.push(exclusion(a, b, primed));
                }
            }
        }
    }
    (env, hard)
}

/// Builds the full specification from a domain and a task file.
///
/// Task INPUT declarations become user variables and task OUTPUT
/// declarations that are not skills become extra skills. Task formulas may
/// mention symbols, user variables, skills and extra skills only.
pub fn assemble(domain: &Domain, task: &Gr1Spec, opts: EncodeOptions) -> Result<Gr1Spec> {
    let task = strip_generated(task);
    let symbols = domain.symbols();
    let skills = domain.skill_names();
    let sym_set: BTreeSet<&str> = symbols.iter().map(String::as_str).collect();
    let skill_set: BTreeSet<&str> = skills.iter().map(String::as_str).collect();
    let user: Vec<String> = task.inputs.decls().filter(|d| !sym_set.contains(d)).map(str::to_string).collect();
    let extras: Vec<String> = task.outputs.decls().filter(|d| !skill_set.contains(d)).map(str::to_string).collect();

    let known: BTreeSet<&str> = sym_set.iter().chain(&skill_set).copied().chain(user.iter().map(String::as_str)).chain(extras.iter().map(String::as_str)).collect();
    for k in SectionKind::ALL.into_iter().filter(|k| !k.is_declaration()) {
        for f in task.section(k).formulas() {
            if let Some(a) = f.atoms().into_iter().find(|a| !known.contains(a.name.as_str())) {
                return Err(Error::UnknownProposition(a.name));
            }
        }
    }

    let mut all_skills = skills.clone();
    all_skills.extend(extras.iter().cloned());
    let (mx_syms, mx_skills) = build_mutex(domain, &all_skills, opts);

    let mut spec = Gr1Spec { preamble: task.preamble.clone(), ..Default::default() };
    for k in SectionKind::ALL {
        spec.section_mut(k).lines = task.section(k).lines.iter().filter(|l| !is_decl_of(l, &sym_set, &skill_set)).cloned().collect();
    }

    let mut sym_lines = Vec::new();
    for (i, f) in domain.factors.iter().enumerate() {
        sym_lines.push(comment(format!(" factor {i}")));
        sym_lines.extend(f.iter().map(|s| decl(s)));
    }
    fill(&mut spec.inputs, "symbols", sym_lines, true);
    fill(&mut spec.outputs, "skills", skills.iter().map(|s| decl(s)).collect(), true);
    fill(&mut spec.env_trans, "eff", build_phi_eff(&domain.skills).into_iter().map(formula).collect(), false);
    fill(&mut spec.env_trans, "noact", vec![formula(build_phi_noact(&all_skills, &symbols))], false);
    fill(&mut spec.env_trans, "mutex", mx_syms.into_iter().map(formula).collect(), false);
    fill(&mut spec.sys_trans, "pre", build_phi_pre(&domain.skills).into_iter().map(formula).collect(), false);
    fill(&mut spec.sys_trans_hard, "mutex", mx_skills.into_iter().map(formula).collect(), false);

    for s in &symbols {
        spec.kinds.insert(s.clone(), PropKind::LearnedSymbol);
    }
    for u in &user {
        spec.kinds.insert(u.clone(), PropKind::UserEnv);
    }
    for s in &skills {
        spec.kinds.insert(s.clone(), PropKind::Skill);
    }
    for e in &extras {
        spec.kinds.insert(e.clone(), PropKind::ExtraSkill);
    }

    let diags = validate(&spec);
    if let Some(d) = diags.first() {
        return Err(Error::InvalidSpec(d.to_string()));
    }
    Ok(spec)
}

/// Sets proposition kinds of a parsed specification from its generated
/// regions: symbols and skills inside them, user variables and extra skills
/// outside.
pub fn annotate(spec: &mut Gr1Spec) {
    let mut kinds = BTreeMap::new();
    for (sec, inside, outside) in [(&spec.inputs, PropKind::LearnedSymbol, PropKind::UserEnv), (&spec.outputs, PropKind::Skill, PropKind::ExtraSkill)] {
        let generated: BTreeSet<String> = regions(sec).filter_map(|(_, l)| decl_name(l)).collect();
        for d in sec.decls() {
            kinds.insert(d.to_string(), if generated.contains(d) { inside } else { outside });
        }
    }
    spec.kinds = kinds;
}

/// Whether the specification has generated regions.
pub fn is_encoded(spec: &Gr1Spec) -> bool {
    SectionKind::ALL.into_iter().any(|k| regions(spec.section(k)).next().is_some())
}

/// The task part of a specification: everything outside generated regions.
/// Opening markers are kept as placeholders.
pub fn strip_generated(spec: &Gr1Spec) -> Gr1Spec {
    let mut out = spec.clone();
    for k in SectionKind::ALL {
        let section = spec.section(k);
        let tags = line_tags(section);
        out.section_mut(k).lines = section
            .lines
            .iter()
            .zip(&tags)
            .filter(|(l, t)| t.is_none() && marker(l) != Some(END))
            .map(|(l, _)| l.clone())
            .collect();
    }
    out
}

/// Splits a section's formulas into generated and task-authored ones.
pub fn split_generated(section: &Section) -> (Vec<Formula>, Vec<Formula>) {
    let mut generated = Vec::new();
    let mut task = Vec::new();
    for (l, t) in section.lines.iter().zip(line_tags(section)) {
        if let Item::Formula(f) = &l.item {
            if t.is_some() {
                generated.push(f.clone())
            } else {
                task.push(f.clone())
            }
        }
    }
    (generated, task)
}

fn marker(l: &Line) -> Option<&str> {
    match &l.item {
        Item::Comment(c) => c.trim().strip_prefix("auto:").map(|t| if t == "end" { END } else { t }),
        _ => None,
    }
}

/// Per line, the tag of the closed region it lies in. Markers themselves
/// and openers without a matching end (placeholders) get `None`.
fn line_tags(section: &Section) -> Vec<Option<&str>> {
    let mut out = vec![None; section.lines.len()];
    let mut open: Option<(usize, &str)> = None;
    for (i, l) in section.lines.iter().enumerate() {
        match marker(l) {
            Some(END) => {
                if let Some((start, tag)) = open.take() {
                    for t in &mut out[start + 1..i] {
                        *t = Some(tag);
                    }
                }
            }
            Some(tag) => open = Some((i, tag)),
            None => {}
        }
    }
    out
}

/// Lines inside generated regions with their tag.
fn regions(section: &Section) -> impl Iterator<Item = (&str, &Line)> {
    section.lines.iter().zip(line_tags(section)).filter_map(|(l, t)| t.map(|t| (t, l)))
}

fn decl_name(l: &Line) -> Option<String> {
    match &l.item {
        Item::Decl(d) => Some(d.clone()),
        _ => None,
    }
}

fn is_decl_of(l: &Line, a: &BTreeSet<&str>, b: &BTreeSet<&str>) -> bool {
    matches!(&l.item, Item::Decl(d) if a.contains(d.as_str()) || b.contains(d.as_str()))
}

fn comment(text: String) -> Line {
    Line { item: Item::Comment(text), line: 0 }
}

fn decl(name: &str) -> Line {
    Line { item: Item::Decl(name.to_string()), line: 0 }
}

fn formula(f: Formula) -> Line {
    Line { item: Item::Formula(f), line: 0 }
}

/// Puts `content` after the `auto:<tag>` placeholder, or adds a new region
/// at the start (`front`) or end of the section.
fn fill(section: &mut Section, tag: &str, content: Vec<Line>, front: bool) {
    let open = comment(format!(" auto:{tag}"));
    let mut block = vec![open.clone()];
    block.extend(content);
    block.push(comment(format!(" {END}")));
    match section.lines.iter().position(|l| marker(l) == Some(tag)) {
        Some(i) => {
            section.lines.splice(i..=i, block);
        }
        None if front => {
            section.lines.splice(0..0, block);
        }
        None => section.lines.extend(block),
    }
}

fn next_atom(f: &Formula) -> Option<String> {
    match f {
        Formula::Atom(a) if a.primed => Some(a.name.clone()),
        _ => None,
    }
}

fn conj_items(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::And(xs) => xs.iter().collect(),
        Formula::Const(true) => Vec::new(),
        other => vec![other],
    }
}

fn disj_items(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::Or(xs) => xs.iter().collect(),
        Formula::Const(false) => Vec::new(),
        other => vec![other],
    }
}

fn decode_pre(f: &Formula) -> Option<(String, Vec<Vec<String>>)> {
    let Formula::Implies(lhs, rhs) = f else { return None };
    let Formula::Not(skill) = rhs.as_ref() else { return None };
    let skill = next_atom(skill)?;
    let Formula::Not(body) = lhs.as_ref() else { return None };
    let combos = disj_items(body)
        .into_iter()
        .map(|c| conj_items(c).into_iter().map(next_atom).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Some((skill, combos))
}

fn decode_eff(f: &Formula) -> Option<(String, Vec<Effect>)> {
    let Formula::Implies(lhs, rhs) = f else { return None };
    let Formula::Atom(a) = lhs.as_ref() else { return None };
    let mut outs = Vec::new();
    for d in disj_items(rhs) {
        let mut e = Effect::default();
        for item in conj_items(d) {
            match item {
                Formula::Atom(x) if x.primed => e.eff_true.push(x.name.clone()),
                Formula::Not(x) => e.eff_false.push(next_atom(x)?),
                Formula::Iff(x, y) => match (x.as_ref(), y.as_ref()) {
                    (Formula::Atom(p), Formula::Atom(q)) if !p.primed && q.primed && p.name == q.name => e.stay.push(p.name.clone()),
                    _ => return None,
                },
                _ => return None,
            }
        }
        outs.push(e);
    }
    Some((a.name.clone(), outs))
}

/// `!(a & b)` or `!(a' & b')`, returning the pair and whether it is primed.
fn decode_pair(f: &Formula) -> Option<(String, String, bool)> {
    let Formula::Not(x) = f else { return None };
    let Formula::And(xs) = x.as_ref() else { return None };
    match xs.as_slice() {
        [Formula::Atom(a), Formula::Atom(b)] if a.primed == b.primed => Some((a.name.clone(), b.name.clone(), a.primed)),
        _ => None,
    }
}
