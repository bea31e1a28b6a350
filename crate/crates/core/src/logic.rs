//! Propositions, boolean formulas with primed atoms, and the nine-section
//! GR(1) specification model.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bdd::{Bdd, Manager, VarId};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropKind {
    LearnedSymbol,
    UserEnv,
    Skill,
    ExtraSkill,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Owner {
    Environment,
    System,
}

impl PropKind {
    pub fn owner(self) -> Owner {
        match self {
            PropKind::LearnedSymbol | PropKind::UserEnv => Owner::Environment,
            PropKind::Skill | PropKind::ExtraSkill => Owner::System,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proposition {
    pub name: String,
    pub kind: PropKind,
}

impl Proposition {
    pub fn owner(&self) -> Owner {
        self.kind.owner()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub name: String,
    pub primed: bool,
}

/// Boolean formula over current and primed atoms.
///
/// `And`/`Or` are n-ary; the constructors flatten nested occurrences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn tt() -> Self {
        Formula::Const(true)
    }

    pub fn ff() -> Self {
        Formula::Const(false)
    }

    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(Atom { name: name.into(), primed: false })
    }

    /// `○name`
    pub fn next(name: impl Into<String>) -> Self {
        Formula::Atom(Atom { name: name.into(), primed: true })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    /// Conjunction; nested conjunctions are flattened, `true` operands
    /// dropped, and an empty list yields `true`.
    pub fn and(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::Const(true) => {}
                Formula::And(xs) => out.extend(xs),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::Const(true),
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Disjunction; the dual of [`Formula::and`].
    pub fn or(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::Const(false) => {}
                Formula::Or(xs) => out.extend(xs),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::Const(false),
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Applies `○` to every atom.
    pub fn primed(&self) -> Formula {
        self.map_atoms(&|a| Formula::Atom(Atom { name: a.name.clone(), primed: true }))
    }

    fn map_atoms(&self, f: &dyn Fn(&Atom) -> Formula) -> Formula {
        match self {
            Formula::Const(b) => Formula::Const(*b),
            Formula::Atom(a) => f(a),
            Formula::Not(x) => Formula::not(x.map_atoms(f)),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| x.map_atoms(f)).collect()),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| x.map_atoms(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Const(_) => {}
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(x) => x.collect_atoms(out),
            Formula::And(xs) | Formula::Or(xs) => xs.iter().for_each(|x| x.collect_atoms(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn has_primed(&self) -> bool {
        self.atoms().iter().any(|a| a.primed)
    }

    /// Evaluates under `value(atom)`.
    pub fn eval(&self, value: &dyn Fn(&Atom) -> bool) -> bool {
        match self {
            Formula::Const(b) => *b,
            Formula::Atom(a) => value(a),
            Formula::Not(x) => !x.eval(value),
            Formula::And(xs) => xs.iter().all(|x| x.eval(value)),
            Formula::Or(xs) => xs.iter().any(|x| x.eval(value)),
            Formula::Implies(a, b) => !a.eval(value) || b.eval(value),
            Formula::Iff(a, b) => a.eval(value) == b.eval(value),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::specformat::formula_to_string(self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SectionKind {
    Input,
    Output,
    EnvInit,
    SysInit,
    EnvTrans,
    SysTrans,
    SysTransHard,
    SysLiveness,
    EnvLiveness,
}

impl SectionKind {
    pub const ALL: [SectionKind; 9] = [
        SectionKind::Input,
        SectionKind::Output,
        SectionKind::EnvInit,
        SectionKind::SysInit,
        SectionKind::EnvTrans,
        SectionKind::SysTrans,
        SectionKind::SysTransHard,
        SectionKind::SysLiveness,
        SectionKind::EnvLiveness,
    ];

    pub fn header(self) -> &'static str {
        match self {
            SectionKind::Input => "INPUT",
            SectionKind::Output => "OUTPUT",
            SectionKind::EnvInit => "ENV_INIT",
            SectionKind::SysInit => "SYS_INIT",
            SectionKind::EnvTrans => "ENV_TRANS",
            SectionKind::SysTrans => "SYS_TRANS",
            SectionKind::SysTransHard => "SYS_TRANS_HARD",
            SectionKind::SysLiveness => "SYS_LIVENESS",
            SectionKind::EnvLiveness => "ENV_LIVENESS",
        }
    }

    pub fn from_header(s: &str) -> Option<SectionKind> {
        SectionKind::ALL.into_iter().find(|k| k.header() == s)
    }

    pub fn is_declaration(self) -> bool {
        matches!(self, SectionKind::Input | SectionKind::Output)
    }
}

impl fmt::Display for SectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.header())
    }
}

#[derive(Clone, Debug)]
pub enum Item {
    Decl(String),
    Formula(Formula),
    Comment(String),
}

/// One entry of a section with the source line it came from (0 when built
/// in code). Line numbers do not take part in equality.
#[derive(Clone, Debug)]
pub struct Line {
    pub item: Item,
    pub line: usize,
}

impl PartialEq for Line {
    fn eq(&self, other: &Self) -> bool {
        match (&self.item, &other.item) {
            (Item::Decl(a), Item::Decl(b)) => a == b,
            (Item::Formula(a), Item::Formula(b)) => a == b,
            (Item::Comment(a), Item::Comment(b)) => a == b,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Section {
    pub lines: Vec<Line>,
}

impl Section {
    pub fn push_formula(&mut self, f: Formula) {
        self.lines.push(Line { item: Item::Formula(f), line: 0 });
    }

    pub fn push_decl(&mut self, name: impl Into<String>) {
        self.lines.push(Line { item: Item::Decl(name.into()), line: 0 });
    }

    pub fn push_comment(&mut self, text: impl Into<String>) {
        self.lines.push(Line { item: Item::Comment(text.into()), line: 0 });
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.lines.iter().filter_map(|l| match &l.item {
            Item::Formula(f) => Some(f),
            _ => None,
        })
    }

    pub fn decls(&self) -> impl Iterator<Item = &str> {
        self.lines.iter().filter_map(|l| match &l.item {
            Item::Decl(d) => Some(d.as_str()),
            _ => None,
        })
    }

    pub fn formula_count(&self) -> usize {
        self.formulas().count()
    }
}

/// A GR(1) specification: `inputs` are environment propositions and
/// `outputs` system propositions. `kinds` refines each name beyond the
/// section it is declared in; names missing from it default to
/// [`PropKind::UserEnv`] (inputs) or [`PropKind::Skill`] (outputs).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Gr1Spec {
    /// Comment lines before the first section header.
    pub preamble: Vec<String>,
    pub inputs: Section,
    pub outputs: Section,
    pub env_init: Section,
    pub sys_init: Section,
    pub env_trans: Section,
    pub sys_trans: Section,
    pub sys_trans_hard: Section,
    pub sys_liveness: Section,
    pub env_liveness: Section,
    pub kinds: BTreeMap<String, PropKind>,
}

impl Gr1Spec {
    pub fn section(&self, k: SectionKind) -> &Section {
        match k {
            SectionKind::Input => &self.inputs,
            SectionKind::Output => &self.outputs,
            SectionKind::EnvInit => &self.env_init,
            SectionKind::SysInit => &self.sys_init,
            SectionKind::EnvTrans => &self.env_trans,
            SectionKind::SysTrans => &self.sys_trans,
            SectionKind::SysTransHard => &self.sys_trans_hard,
            SectionKind::SysLiveness => &self.sys_liveness,
            SectionKind::EnvLiveness => &self.env_liveness,
        }
    }

    pub fn section_mut(&mut self, k: SectionKind) -> &mut Section {
        match k {
            SectionKind::Input => &mut self.inputs,
            SectionKind::Output => &mut self.outputs,
            SectionKind::EnvInit => &mut self.env_init,
            SectionKind::SysInit => &mut self.sys_init,
            SectionKind::EnvTrans => &mut self.env_trans,
            SectionKind::SysTrans => &mut self.sys_trans,
            SectionKind::SysTransHard => &mut self.sys_trans_hard,
            SectionKind::SysLiveness => &mut self.sys_liveness,
            SectionKind::EnvLiveness => &mut self.env_liveness,
        }
    }

    pub fn add_input(&mut self, name: impl Into<String>, kind: PropKind) {
        let name = name.into();
        self.kinds.insert(name.clone(), kind);
        self.inputs.push_decl(name);
    }

    pub fn add_output(&mut self, name: impl Into<String>, kind: PropKind) {
        let name = name.into();
        self.kinds.insert(name.clone(), kind);
        self.outputs.push_decl(name);
    }

    pub fn kind_of(&self, name: &str) -> Option<PropKind> {
        if let Some(k) = self.kinds.get(name) {
            return Some(*k);
        }
        if self.inputs.decls().any(|d| d == name) {
            Some(PropKind::UserEnv)
        } else if self.outputs.decls().any(|d| d == name) {
            Some(PropKind::Skill)
        } else {
            None
        }
    }

    /// Declared propositions, inputs first, in declaration order.
    pub fn propositions(&self) -> Vec<Proposition> {
        let inputs = self.inputs.decls().map(|n| (n, PropKind::UserEnv));
        let outputs = self.outputs.decls().map(|n| (n, PropKind::Skill));
        inputs
            .chain(outputs)
            .map(|(n, default)| Proposition {
                name: n.to_string(),
                kind: self.kinds.get(n).copied().unwrap_or(default),
            })
            .collect()
    }

    pub fn props_of_kind(&self, kind: PropKind) -> Vec<String> {
        self.propositions().into_iter().filter(|p| p.kind == kind).map(|p| p.name).collect()
    }
}

/// Maps proposition names to BDD variables: proposition `i` (declaration
/// order, inputs first) owns variables `2i` and `2i + 1`.
#[derive(Clone, Debug, Default)]
pub struct VarMap {
    index: BTreeMap<String, u32>,
    names: Vec<String>,
    kinds: Vec<PropKind>,
}

impl VarMap {
    pub fn new(props: &[Proposition]) -> Self {
        let mut m = VarMap::default();
        for p in props {
            m.index.insert(p.name.clone(), m.names.len() as u32);
            m.names.push(p.name.clone());
            m.kinds.push(p.kind);
        }
        m
    }

    pub fn from_spec(spec: &Gr1Spec) -> Self {
        VarMap::new(&spec.propositions())
    }

    pub fn num_props(&self) -> usize {
        self.names.len()
    }

    pub fn num_vars(&self) -> u32 {
        2 * self.names.len() as u32
    }

    pub fn prop_index(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn var(&self, name: &str, primed: bool) -> Option<VarId> {
        self.prop_index(name).map(|i| VarId(2 * i + primed as u32))
    }

    pub fn name(&self, prop: u32) -> &str {
        &self.names[prop as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kind(&self, prop: u32) -> PropKind {
        self.kinds[prop as usize]
    }

    /// Proposition indices with the given owner.
    pub fn props_owned_by(&self, owner: Owner) -> Vec<u32> {
        (0..self.names.len() as u32).filter(|&i| self.kinds[i as usize].owner() == owner).collect()
    }

    pub fn props_of_kind(&self, kind: PropKind) -> Vec<u32> {
        (0..self.names.len() as u32).filter(|&i| self.kinds[i as usize] == kind).collect()
    }

    pub fn current_vars(&self, props: &[u32]) -> Vec<VarId> {
        props.iter().map(|&p| VarId(2 * p)).collect()
    }

    pub fn primed_vars(&self, props: &[u32]) -> Vec<VarId> {
        props.iter().map(|&p| VarId(2 * p + 1)).collect()
    }

    pub fn var_name(&self, v: VarId) -> String {
        let n = self.name(v.0 / 2);
        if v.is_primed() {
            format!("{n}'")
        } else {
            n.to_string()
        }
    }
}

/// Compiles a formula to a BDD under `map`.
pub fn compile(f: &Formula, map: &VarMap, mgr: &mut Manager) -> Result<Bdd> {
    Ok(match f {
        Formula::Const(b) => mgr.constant(*b),
        Formula::Atom(a) => {
            let v = map.var(&a.name, a.primed).ok_or_else(|| Error::UnmappedAtom(a.name.clone()))?;
            mgr.mk_var(v)?
        }
        Formula::Not(x) => {
            let x = compile(x, map, mgr)?;
            mgr.not(x)
        }
        Formula::And(xs) => {
            let mut acc = mgr.tt();
            for x in xs {
                let b = compile(x, map, mgr)?;
                acc = mgr.and(acc, b);
            }
            acc
        }
        Formula::Or(xs) => {
            let mut acc = mgr.ff();
            for x in xs {
                let b = compile(x, map, mgr)?;
                acc = mgr.or(acc, b);
            }
            acc
        }
        Formula::Implies(a, b) => {
            let (a, b) = (compile(a, map, mgr)?, compile(b, map, mgr)?);
            mgr.implies(a, b)
        }
        Formula::Iff(a, b) => {
            let (a, b) = (compile(a, map, mgr)?, compile(b, map, mgr)?);
            mgr.iff(a, b)
        }
    })
}

/// Conjunction of every formula in a section.
pub fn compile_section(s: &Section, map: &VarMap, mgr: &mut Manager) -> Result<Bdd> {
    let mut acc = mgr.tt();
    for f in s.formulas() {
        let b = compile(f, map, mgr)?;
        acc = mgr.and(acc, b);
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub section: String,
    pub line: usize,
    pub rule: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] line {}: {}", self.section, self.line, self.rule)
    }
}

/// Checks the GR(1) well-formedness rules. An empty result means the spec
/// is well formed.
pub fn validate(spec: &Gr1Spec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut diag = |k: SectionKind, line: usize, rule: String| {
        out.push(Diagnostic { section: k.header().to_string(), line, rule });
    };

    let mut declared: BTreeMap<&str, Owner> = BTreeMap::new();
    for k in [SectionKind::Input, SectionKind::Output] {
        let section_owner = if k == SectionKind::Input { Owner::Environment } else { Owner::System };
        for l in &spec.section(k).lines {
            if let Item::Decl(name) = &l.item {
                if declared.insert(name, section_owner).is_some() {
                    diag(k, l.line, format!("duplicate declaration of `{name}`"));
                }
                if let Some(kind) = spec.kinds.get(name) {
                    if kind.owner() != section_owner {
                        diag(k, l.line, format!("`{name}` has kind {kind:?} but is declared in {k}"));
                    }
                }
            }
        }
    }

    for k in SectionKind::ALL.into_iter().filter(|k| !k.is_declaration()) {
        for l in &spec.section(k).lines {
            let Item::Formula(f) = &l.item else { continue };
            for a in f.atoms() {
                let Some(&owner) = declared.get(a.name.as_str()) else {
                    diag(k, l.line, format!("undeclared proposition `{}`", a.name));
                    continue;
                };
                if !a.primed {
                    continue;
                }
                match k {
                    SectionKind::EnvInit | SectionKind::SysInit => {
                        diag(k, l.line, format!("primed atom in {k}"));
                    }
                    SectionKind::SysLiveness | SectionKind::EnvLiveness => {
                        diag(k, l.line, format!("primed atom in {k}"));
                    }
                    SectionKind::EnvTrans if owner == Owner::System => {
                        diag(k, l.line, "primed system atom in ENV_TRANS".to_string());
                    }
                    _ => {}
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdd::Manager;
    use proptest::prelude::*;

    fn props(names: &[&str]) -> Vec<Proposition> {
        names.iter().map(|n| Proposition { name: n.to_string(), kind: PropKind::UserEnv }).collect()
    }

    #[test]
    fn tautology_compiles_to_true() {
        let map = VarMap::new(&props(&["a"]));
        let mut m = Manager::new(map.num_vars());
        let f = Formula::iff(Formula::atom("a"), Formula::atom("a"));
        assert!(compile(&f, &map, &mut m).unwrap().is_true());
    }

    #[test]
    fn nand_on_primed_slots() {
        // Oracle: the NAND table over the two primed positions.
        let map = VarMap::new(&props(&["s0", "s7"]));
        let mut m = Manager::new(map.num_vars());
        let f = Formula::not(Formula::and([Formula::next("s0"), Formula::next("s7")]));
        let b = compile(&f, &map, &mut m).unwrap();
        for bits in 0..16u32 {
            let asg: Vec<bool> = (0..4).map(|i| bits >> i & 1 == 1).collect();
            let expect = !(asg[1] && asg[3]);
            assert_eq!(m.eval(b, &asg), expect, "assignment {asg:?}");
        }
    }

    #[test]
    fn precondition_instance_matches_hand_built() {
        // □(¬○σ1 → ¬○a_c-to-b)
        let map = VarMap::new(&[
            Proposition { name: "s1".into(), kind: PropKind::LearnedSymbol },
            Proposition { name: "c_to_b".into(), kind: PropKind::Skill },
        ]);
        let mut m = Manager::new(map.num_vars());
        let f = Formula::implies(Formula::not(Formula::next("s1")), Formula::not(Formula::next("c_to_b")));
        let b = compile(&f, &map, &mut m).unwrap();
        let s1p = m.var(VarId(1));
        let ap = m.var(VarId(3));
        let nap = m.not(ap);
        let hand = m.or(s1p, nap);
        assert_eq!(b, hand);
    }

    #[test]
    fn unmapped_atom_is_an_error() {
        let map = VarMap::new(&props(&["a"]));
        let mut m = Manager::new(map.num_vars());
        assert!(matches!(compile(&Formula::atom("b"), &map, &mut m), Err(Error::UnmappedAtom(n)) if n == "b"));
    }

    fn spec_with(section: SectionKind, f: Formula) -> Gr1Spec {
        let mut s = Gr1Spec::default();
        s.add_input("e", PropKind::UserEnv);
        s.add_output("a", PropKind::Skill);
        s.section_mut(section).lines.push(Line { item: Item::Formula(f), line: 7 });
        s
    }

    #[test]
    fn primed_system_atom_in_env_trans() {
        let s = spec_with(SectionKind::EnvTrans, Formula::implies(Formula::atom("e"), Formula::next("a")));
        let d = validate(&s);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].rule, "primed system atom in ENV_TRANS");
        assert_eq!(d[0].section, "ENV_TRANS");
        assert_eq!(d[0].line, 7);
    }

    #[test]
    fn primed_atoms_in_liveness_and_init() {
        let d = validate(&spec_with(SectionKind::SysLiveness, Formula::next("e")));
        assert_eq!(d[0].rule, "primed atom in SYS_LIVENESS");
        let d = validate(&spec_with(SectionKind::EnvInit, Formula::next("e")));
        assert_eq!(d[0].rule, "primed atom in ENV_INIT");
    }

    #[test]
    fn sys_trans_may_prime_anything() {
        let s = spec_with(SectionKind::SysTrans, Formula::and([Formula::next("e"), Formula::next("a")]));
        assert!(validate(&s).is_empty());
        let s = spec_with(SectionKind::EnvTrans, Formula::next("e"));
        assert!(validate(&s).is_empty());
    }

    #[test]
    fn undeclared_and_duplicate() {
        let mut s = spec_with(SectionKind::SysTrans, Formula::atom("zz"));
        s.outputs.push_decl("e");
        let rules: Vec<String> = validate(&s).into_iter().map(|d| d.rule).collect();
        assert!(rules.contains(&"duplicate declaration of `e`".to_string()));
        assert!(rules.contains(&"undeclared proposition `zz`".to_string()));
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            (0..5usize, any::<bool>()).prop_map(|(i, p)| Formula::Atom(Atom { name: format!("p{i}"), primed: p })),
            any::<bool>().prop_map(Formula::Const),
        ];
        leaf.prop_recursive(4, 32, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
                prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::Or),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn compile_agrees_with_evaluation(f in arb_formula()) {
            let names: Vec<String> = (0..5).map(|i| format!("p{i}")).collect();
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let map = VarMap::new(&props(&refs));
            let mut m = Manager::new(map.num_vars());
            let b = compile(&f, &map, &mut m).unwrap();
            // The formula touches at most 10 variables; check them all.
            for bits in 0..1024u32 {
                let asg: Vec<bool> = (0..10).map(|i| bits >> i & 1 == 1).collect();
                let val = |a: &Atom| {
                    let i: usize = a.name[1..].parse().unwrap();
                    asg[2 * i + a.primed as usize]
                };
                prop_assert_eq!(m.eval(b, &asg), f.eval(&val));
            }
        }

        #[test]
        fn validate_is_pure(f in arb_formula()) {
            let s = spec_with(SectionKind::EnvTrans, f);
            prop_assert_eq!(validate(&s), validate(&s));
        }
    }
}
