//! Strategy execution against scripted, random or fair environments, and
//! trace checking against a specification.

use std::collections::{BTreeMap, VecDeque};

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::abstraction::Abstraction;
use crate::logic::{Atom, Formula, Gr1Spec, SectionKind};
use crate::synthesis::Strategy;
use crate::{Error, Result};

/// Default run length before a fair environment forces a favoured move.
pub const FAIR_K: usize = 5;
/// Default liveness window.
pub const WINDOW: usize = 200;

/// What the environment reports for one step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnvObservation {
    /// Truth values of the inputs by name; missing names are false.
    Symbolic(BTreeMap<String, bool>),
    /// A continuous state, grounded through the abstraction, plus user
    /// variables by name.
    Continuous { state: Vec<f64>, #[serde(default)] user: BTreeMap<String, bool> },
}

/// Chooses the next environment move. `moves` are the moves the strategy
/// answers from `state`; `succ[k]` is the full successor valuation for
/// `moves[k]`.
pub trait EnvSource {
    fn choose(&mut self, strategy: &Strategy, state: usize, moves: &[Vec<bool>], succ: &[Vec<bool>]) -> Option<EnvObservation>;
}

fn named(props: &[String], v: &[bool]) -> BTreeMap<String, bool> {
    props.iter().cloned().zip(v.iter().copied()).collect()
}

/// Uniformly random admissible moves.
pub struct RandomEnv {
    rng: ChaCha8Rng,
}

impl RandomEnv {
    pub fn new(seed: u64) -> Self {
        RandomEnv { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl EnvSource for RandomEnv {
    fn choose(&mut self, st: &Strategy, _: usize, moves: &[Vec<bool>], _: &[Vec<bool>]) -> Option<EnvObservation> {
        let m = moves.choose(&mut self.rng)?;
        Some(EnvObservation::Symbolic(named(&st.props[..st.n_env], m)))
    }
}

/// Random moves, except that after `k` consecutive steps in which an
/// environment goal failed, a move satisfying it is forced when one exists.
pub struct FairEnv {
    rng: ChaCha8Rng,
    k: usize,
    goals: Vec<Formula>,
    missed: Vec<usize>,
}

impl FairEnv {
    pub fn new(spec: &Gr1Spec, seed: u64, k: usize) -> Self {
        let goals: Vec<Formula> = spec.env_liveness.formulas().cloned().collect();
        FairEnv { rng: ChaCha8Rng::seed_from_u64(seed), k, missed: vec![0; goals.len()], goals }
    }
}

impl EnvSource for FairEnv {
    fn choose(&mut self, st: &Strategy, _: usize, moves: &[Vec<bool>], succ: &[Vec<bool>]) -> Option<EnvObservation> {
        let mut pool: Vec<usize> = (0..moves.len()).collect();
        let sat = |g: &Formula, v: &[bool]| eval_state(g, &st.props, v);
        let mut overdue: Vec<usize> = (0..self.goals.len()).filter(|&i| self.missed[i] >= self.k).collect();
        overdue.sort_by_key(|&i| std::cmp::Reverse(self.missed[i]));
        for i in overdue {
            let favoured: Vec<usize> = pool.iter().copied().filter(|&m| sat(&self.goals[i], &succ[m])).collect();
            if !favoured.is_empty() {
                pool = favoured;
            }
        }
        let &m = pool.choose(&mut self.rng)?;
        for (i, g) in self.goals.iter().enumerate() {
            self.missed[i] = if sat(g, &succ[m]) { 0 } else { self.missed[i] + 1 };
        }
        Some(EnvObservation::Symbolic(named(&st.props[..st.n_env], &moves[m])))
    }
}

/// Replays recorded observations, then stops.
pub struct ScriptedEnv {
    steps: VecDeque<EnvObservation>,
}

impl ScriptedEnv {
    pub fn new(steps: Vec<EnvObservation>) -> Self {
        ScriptedEnv { steps: steps.into() }
    }

    /// A JSON array of observations.
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(Self::new(serde_json::from_str(text)?))
    }
}

impl EnvSource for ScriptedEnv {
    fn choose(&mut self, _: &Strategy, _: usize, _: &[Vec<bool>], _: &[Vec<bool>]) -> Option<EnvObservation> {
        self.steps.pop_front()
    }
}

/// Full valuations visited, inputs first.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub props: Vec<String>,
    pub n_env: usize,
    pub steps: Vec<Vec<bool>>,
    /// Why execution stopped early, if it did.
    pub violation: Option<String>,
}

impl Trace {
    /// One JSON object per line: `{"env": {...}, "sys": {...}}`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for v in &self.steps {
            let part = |r: std::ops::Range<usize>| -> Map<String, Value> { r.map(|k| (self.props[k].clone(), Value::Bool(v[k]))).collect() };
            let line = serde_json::json!({ "env": part(0..self.n_env), "sys": part(self.n_env..self.props.len()) });
            out += &line.to_string();
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Trace> {
        let mut props: Vec<String> = Vec::new();
        let mut n_env = 0;
        let mut steps = Vec::new();
        for (i, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
            let v: Value = serde_json::from_str(line)?;
            let part = |k: &str| -> Result<Map<String, Value>> {
                v.get(k).and_then(Value::as_object).cloned().ok_or_else(|| Error::Config(format!("trace line {}: missing `{k}`", i + 1)))
            };
            let (env, sys) = (part("env")?, part("sys")?);
            if i == 0 {
                props = env.keys().chain(sys.keys()).cloned().collect();
                n_env = env.len();
            }
            let val = props
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    let m = if k < n_env { &env } else { &sys };
                    m.get(p).and_then(Value::as_bool).ok_or_else(|| Error::Config(format!("trace line {}: missing `{p}`", i + 1)))
                })
                .collect::<Result<Vec<bool>>>()?;
            steps.push(val);
        }
        Ok(Trace { props, n_env, steps, violation: None })
    }
}

/// Input valuation of an observation.
fn observe(st: &Strategy, obs: &EnvObservation, abstraction: Option<&Abstraction>) -> Result<Vec<bool>> {
    let names = &st.props[..st.n_env];
    match obs {
        EnvObservation::Symbolic(m) => {
            if let Some(k) = m.keys().find(|k| !names.contains(k)) {
                return Err(Error::UnknownProposition(k.clone()));
            }
            Ok(names.iter().map(|n| m.get(n).copied().unwrap_or(false)).collect())
        }
        EnvObservation::Continuous { state, user } => {
            let a = abstraction.ok_or_else(|| Error::Config("continuous observation needs an abstraction".into()))?;
            let holding: Vec<&str> = a.symbols_holding(state).into_iter().map(|i| a.symbols[i].name.as_str()).collect();
            Ok(names.iter().map(|n| holding.contains(&n.as_str()) || user.get(n).copied().unwrap_or(false)).collect())
        }
    }
}

/// Runs `strategy` for up to `steps` environment moves from its first
/// initial state. An observation the strategy has no answer for ends the
/// trace with a violation record.
pub fn execute(strategy: &Strategy, env: &mut dyn EnvSource, steps: usize, abstraction: Option<&Abstraction>) -> Result<Trace> {
    let mut trace = Trace { props: strategy.props.clone(), n_env: strategy.n_env, steps: Vec::new(), violation: None };
    let Some(&start) = strategy.initial.first() else {
        return Ok(trace);
    };
    let mut q = start;
    trace.steps.push(strategy.states[q].valuation.clone());
    for t in 0..steps {
        let moves: Vec<Vec<bool>> = strategy.env_choices(q).into_iter().map(|m| m.to_vec()).collect();
        let succ: Vec<Vec<bool>> = moves.iter().map(|m| strategy.states[strategy.step(q, m).expect("listed move")].valuation.clone()).collect();
        let Some(obs) = env.choose(strategy, q, &moves, &succ) else { break };
        let e = observe(strategy, &obs, abstraction)?;
        match strategy.step(q, &e) {
            Some(next) => {
                q = next;
                trace.steps.push(strategy.states[q].valuation.clone());
            }
            None => {
                trace.violation = Some(format!("step {t}: environment move {:?} breaks the assumptions", named(&strategy.props[..strategy.n_env], &e)));
                break;
            }
        }
    }
    Ok(trace)
}

fn eval_state(f: &Formula, props: &[String], v: &[bool]) -> bool {
    eval_step(f, props, v, v)
}

fn eval_step(f: &Formula, props: &[String], cur: &[bool], next: &[bool]) -> bool {
    let val = |a: &Atom| {
        let k = props.iter().position(|p| *p == a.name);
        k.is_some_and(|k| if a.primed { next[k] } else { cur[k] })
    };
    f.eval(&val)
}

/// A violated formula: `step` is the index of the first state involved.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub step: usize,
    pub section: String,
    pub formula: String,
}

/// Largest gap between visits of one system goal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Recurrence {
    pub goal: String,
    pub visits: usize,
    pub max_gap: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Verdict {
    /// Violations of system guarantees.
    pub safety: Vec<Violation>,
    /// Violations of environment assumptions.
    pub assumptions: Vec<Violation>,
    pub liveness: Vec<Recurrence>,
    pub warnings: Vec<String>,
}

impl Verdict {
    /// No guarantee violated. Liveness on a finite trace can only be
    /// refuted, so a pass here is not a proof.
    pub fn passed(&self) -> bool {
        self.safety.is_empty() && self.liveness.iter().all(|r| r.ok)
    }
}

/// Checks a trace: initial and safety formulas exactly, each system goal
/// as recurring at least once every `window` steps.
pub fn check_trace(spec: &Gr1Spec, trace: &Trace, window: usize) -> Verdict {
    let mut v = Verdict::default();
    if trace.steps.is_empty() {
        v.warnings.push("empty trace: nothing checked".into());
        return v;
    }
    let p = &trace.props;
    let text = crate::specformat::formula_to_string;
    let section = |k: SectionKind| spec.section(k).formulas().cloned().collect::<Vec<_>>();
    for (k, out) in [(SectionKind::EnvInit, 0), (SectionKind::SysInit, 1)] {
        for f in section(k) {
            if !eval_state(&f, p, &trace.steps[0]) {
                let viol = Violation { step: 0, section: k.header().into(), formula: text(&f) };
                if out == 0 { v.assumptions.push(viol) } else { v.safety.push(viol) }
            }
        }
    }
    let env_trans = section(SectionKind::EnvTrans);
    let sys_trans: Vec<(SectionKind, Formula)> = [SectionKind::SysTrans, SectionKind::SysTransHard]
        .into_iter()
        .flat_map(|k| section(k).into_iter().map(move |f| (k, f)))
        .collect();
    for (t, w) in trace.steps.windows(2).enumerate() {
        for f in &env_trans {
            if !eval_step(f, p, &w[0], &w[1]) {
                v.assumptions.push(Violation { step: t, section: SectionKind::EnvTrans.header().into(), formula: text(f) });
            }
        }
        for (k, f) in &sys_trans {
            if !eval_step(f, p, &w[0], &w[1]) {
                v.safety.push(Violation { step: t, section: k.header().into(), formula: text(f) });
            }
        }
    }
    let n = trace.steps.len();
    if n <= window {
        v.warnings.push(format!("trace of {n} states is within one window of {window}; liveness not refutable"));
    }
    for g in section(SectionKind::SysLiveness) {
        let hits: Vec<usize> = (0..n).filter(|&t| eval_state(&g, p, &trace.steps[t])).collect();
        let mut gaps = Vec::new();
        let mut last = 0usize;
        for &h in &hits {
            gaps.push(h - last);
            last = h;
        }
        gaps.push(n - 1 - last);
        let max_gap = gaps.into_iter().max().unwrap_or(0);
        let ok = n <= window || (!hits.is_empty() && max_gap <= window);
        v.liveness.push(Recurrence { goal: text(&g), visits: hits.len(), max_gap, ok });
    }
    v
}
