//! GR(1) games: construction from a specification, the winning region,
//! strategy and counter-strategy extraction.
//!
//! The environment moves first (chooses the next inputs), then the system
//! responds (chooses the next outputs).

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bdd::{Bdd, Manager, VarId};
use crate::encoder::{is_encoded, split_generated};
use crate::logic::{compile, Formula, Gr1Spec, Owner, VarMap};
use crate::{Error, Result};

/// Bound on explicit counter-strategy size.
pub const MAX_CS_STATES: usize = 100_000;
/// Bound on system responses enumerated per environment move.
pub const MAX_RESPONSES: usize = 4096;

/// Symbolic game with an owned BDD manager.
pub struct GameStructure {
    pub map: VarMap,
    pub mgr: Manager,
    /// Environment propositions are `0..n_env`, system ones follow.
    pub n_env: usize,
    pub env_init: Bdd,
    pub sys_init: Bdd,
    pub tau_e: Bdd,
    /// Full system safety: soft and hard.
    pub tau_s: Bdd,
    pub tau_s_hard: Bdd,
    /// Generated skill model part of `tau_s`.
    pub tau_s_model: Bdd,
    /// Task-authored part of `tau_s`.
    pub tau_task: Bdd,
    pub env_goals: Vec<Bdd>,
    pub sys_goals: Vec<Bdd>,
    pub(crate) cur_all: Bdd,
    pub(crate) cur_sys: Bdd,
    pub(crate) next_env: Bdd,
    pub(crate) next_sys: Bdd,
}

fn conj(fs: impl IntoIterator<Item = Formula>, map: &VarMap, mgr: &mut Manager) -> Result<Bdd> {
    let t = mgr.tt();
    conj_in(t, fs, map, mgr)
}

/// Conjunction built inside `care`, which keeps intermediate results small.
fn conj_in(care: Bdd, fs: impl IntoIterator<Item = Formula>, map: &VarMap, mgr: &mut Manager) -> Result<Bdd> {
    let mut acc = care;
    for f in fs {
        let b = compile(&f, map, mgr)?;
        acc = mgr.and(acc, b);
    }
    Ok(acc)
}

fn goals(fs: Vec<Formula>, map: &VarMap, mgr: &mut Manager) -> Result<Vec<Bdd>> {
    if fs.is_empty() {
        return Ok(vec![mgr.tt()]);
    }
    fs.iter().map(|f| compile(f, map, mgr)).collect()
}

/// Compiles a specification into a game.
pub fn build_game(spec: &Gr1Spec) -> Result<GameStructure> {
    let map = VarMap::from_spec(spec);
    let mut mgr = Manager::new(map.num_vars().max(2));
    let n = map.num_props() as u32;
    let n_env = map.props_owned_by(Owner::Environment).len();
    let formulas = |s: &crate::logic::Section| s.formulas().cloned().collect::<Vec<_>>();

    let all: Vec<VarId> = (0..n).map(|p| VarId(2 * p)).collect();
    let cur_all = mgr.cube(&all);
    let env_init = conj(formulas(&spec.env_init), &map, &mut mgr)?;
    let sys_init = conj(formulas(&spec.sys_init), &map, &mut mgr)?;
    let tau_e = conj(formulas(&spec.env_trans), &map, &mut mgr)?;
    // Primed inputs the environment can produce at all. System relations are
    // only consulted under `tau_e`, so restricting them to this set changes
    // no game outcome but avoids enumerating impossible input combinations.
    let care = mgr.exists_cube(cur_all, tau_e);
    let tau_s_hard = conj_in(care, formulas(&spec.sys_trans_hard), &map, &mut mgr)?;
    let soft = conj_in(care, formulas(&spec.sys_trans), &map, &mut mgr)?;
    let tau_s = mgr.and(soft, tau_s_hard);
    let (tau_s_model, tau_task) = if is_encoded(spec) {
        let (g1, t1) = split_generated(&spec.sys_trans);
        let (g2, t2) = split_generated(&spec.sys_trans_hard);
        let model = conj_in(care, g1.into_iter().chain(g2), &map, &mut mgr)?;
        let task = conj_in(care, t1.into_iter().chain(t2), &map, &mut mgr)?;
        (model, task)
    } else {
        (tau_s, care)
    };
    let env_goals = goals(formulas(&spec.env_liveness), &map, &mut mgr)?;
    let sys_goals = goals(formulas(&spec.sys_liveness), &map, &mut mgr)?;

    let sys: Vec<VarId> = (n_env as u32..n).map(|p| VarId(2 * p)).collect();
    let env_next: Vec<VarId> = (0..n_env as u32).map(|p| VarId(2 * p + 1)).collect();
    let sys_next: Vec<VarId> = (n_env as u32..n).map(|p| VarId(2 * p + 1)).collect();
    let cur_sys = mgr.cube(&sys);
    let next_env = mgr.cube(&env_next);
    let next_sys = mgr.cube(&sys_next);
    Ok(GameStructure {
        map,
        mgr,
        n_env,
        env_init,
        sys_init,
        tau_e,
        tau_s,
        tau_s_hard,
        tau_s_model,
        tau_task,
        env_goals,
        sys_goals,
        cur_all,
        cur_sys,
        next_env,
        next_sys,
    })
}

/// System winning region with the layers needed for extraction.
#[derive(Clone, Debug)]
pub struct Winning {
    pub z: Bdd,
    /// Per system goal, increasing Y layers.
    pub y: Vec<Vec<Bdd>>,
    /// Per system goal and Y layer, one X set per environment goal.
    pub x: Vec<Vec<Vec<Bdd>>>,
}

/// One rank of the environment's attractor-style winning region.
#[derive(Clone, Debug)]
pub struct EnvLayer {
    /// Region of all lower ranks.
    pub below: Bdd,
    /// Per system goal, the ν-fixpoint at this rank.
    pub y: Vec<Bdd>,
    /// Per system goal and environment goal, increasing X layers.
    pub x: Vec<Vec<Vec<Bdd>>>,
}

#[derive(Clone, Debug)]
pub struct EnvWinning {
    pub region: Bdd,
    pub layers: Vec<EnvLayer>,
}

impl GameStructure {
    pub fn num_props(&self) -> usize {
        self.map.num_props()
    }

    pub fn num_sys(&self) -> usize {
        self.num_props() - self.n_env
    }

    /// States from which every environment move has a system answer in `z`:
    /// `∀E'. (τ_e → ∃S'. (τ_s ∧ z'))`.
    pub fn cpre(&mut self, z: Bdd) -> Bdd {
        let zp = self.mgr.swap(z);
        let t = self.mgr.and_exists(self.tau_s, zp, self.next_sys);
        let imp = self.mgr.implies(self.tau_e, t);
        self.mgr.forall_cube(self.next_env, imp)
    }

    /// States where the environment can force `z` against every system
    /// answer: `∃E'. (τ_e ∧ ∀S'. (τ_s → z'))`.
    pub fn cox(&mut self, z: Bdd) -> Bdd {
        let zp = self.mgr.swap(z);
        let imp = self.mgr.implies(self.tau_s, zp);
        let fa = self.mgr.forall_cube(self.next_sys, imp);
        self.mgr.and_exists(self.tau_e, fa, self.next_env)
    }

    /// The GR(1) fixpoint
    /// `νZ. ⋀_j μY. ⋁_i νX. (J^s_j ∧ cpre Z) ∨ cpre Y ∨ (¬J^e_i ∧ cpre X)`.
    pub fn compute_winning(&mut self) -> Winning {
        let mut z = self.mgr.tt();
        loop {
            let mut z_new = self.mgr.tt();
            let mut ys = Vec::new();
            let mut xs = Vec::new();
            let cz = self.cpre(z);
            for j in 0..self.sys_goals.len() {
                let goal = self.mgr.and(self.sys_goals[j], cz);
                let (layers, xl) = self.mu_y(goal);
                let y = *layers.last().unwrap_or(&self.mgr.ff());
                z_new = self.mgr.and(z_new, y);
                ys.push(layers);
                xs.push(xl);
            }
            if z_new == z {
                return Winning { z, y: ys, x: xs };
            }
            z = z_new;
        }
    }

    /// Successive outer iterates `Z_1 ⊇ Z_2 ⊇ … ⊇ Z_∞` of the winning
    /// region computation. `Z_1` holds the states from which every goal
    /// can be reached once.
    pub fn winning_iterates(&mut self) -> Vec<Bdd> {
        let mut z = self.mgr.tt();
        let mut out = Vec::new();
        loop {
            let cz = self.cpre(z);
            let mut z_new = self.mgr.tt();
            for j in 0..self.sys_goals.len() {
                let goal = self.mgr.and(self.sys_goals[j], cz);
                let (layers, _) = self.mu_y(goal);
                let y = *layers.last().unwrap_or(&self.mgr.ff());
                z_new = self.mgr.and(z_new, y);
            }
            if z_new == z {
                return out;
            }
            out.push(z_new);
            z = z_new;
        }
    }

    fn mu_y(&mut self, goal: Bdd) -> (Vec<Bdd>, Vec<Vec<Bdd>>) {
        let mut y = self.mgr.ff();
        let mut layers = Vec::new();
        let mut xl = Vec::new();
        loop {
            let cy = self.cpre(y);
            let start = self.mgr.or(goal, cy);
            let mut y_new = self.mgr.ff();
            let mut row = Vec::new();
            for i in 0..self.env_goals.len() {
                let not_ji = self.mgr.not(self.env_goals[i]);
                let mut x = self.mgr.tt();
                loop {
                    let cx = self.cpre(x);
                    let stay = self.mgr.and(not_ji, cx);
                    let x_new = self.mgr.or(start, stay);
                    if x_new == x {
                        break;
                    }
                    x = x_new;
                }
                y_new = self.mgr.or(y_new, x);
                row.push(x);
            }
            if y_new == y {
                return (layers, xl);
            }
            y = y_new;
            layers.push(y);
            xl.push(row);
        }
    }

    /// The environment's winning region by the dual fixpoint
    /// `μZ. ⋁_j νY. ⋀_i μX. cox Z ∨ (¬J^s_j ∧ ((J^e_i ∧ cox Y) ∨ cox X))`.
    pub fn compute_env_winning(&mut self) -> EnvWinning {
        let mut z = self.mgr.ff();
        let mut layers = Vec::new();
        loop {
            let cz = self.cox(z);
            let mut z_new = z;
            let mut ys = Vec::new();
            let mut xs = Vec::new();
            for j in 0..self.sys_goals.len() {
                let not_js = self.mgr.not(self.sys_goals[j]);
                let mut y = self.mgr.tt();
                loop {
                    let cy = self.cox(y);
                    let mut y_new = self.mgr.tt();
                    let mut row = Vec::new();
                    for i in 0..self.env_goals.len() {
                        let push = self.mgr.and(self.env_goals[i], cy);
                        let mut x = self.mgr.ff();
                        let mut xl = Vec::new();
                        loop {
                            let cx = self.cox(x);
                            let inner = self.mgr.or(push, cx);
                            let guarded = self.mgr.and(not_js, inner);
                            let x_new = self.mgr.or(cz, guarded);
                            if x_new == x {
                                break;
                            }
                            x = x_new;
                            xl.push(x);
                        }
                        y_new = self.mgr.and(y_new, x);
                        row.push(xl);
                    }
                    if y_new == y {
                        ys.push(y);
                        xs.push(row);
                        break;
                    }
                    y = y_new;
                }
                z_new = self.mgr.or(z_new, y);
            }
            if z_new == z {
                return EnvWinning { region: z, layers };
            }
            layers.push(EnvLayer { below: z, y: ys, x: xs });
            z = z_new;
        }
    }

    /// Every initial input valuation admits an initial output valuation
    /// inside `z`. Output atoms in the environment's initial condition
    /// restrict the system's choice.
    pub fn is_realizable(&mut self, w: &Winning) -> bool {
        let s = self.mgr.and(self.sys_init, w.z);
        let s = self.mgr.and(s, self.env_init);
        let ok = self.mgr.exists_cube(self.cur_sys, s);
        let possible = self.mgr.exists_cube(self.cur_sys, self.env_init);
        self.mgr.leq(possible, ok)
    }

    /// Convenience: solve and decide.
    pub fn realizable(&mut self) -> bool {
        let w = self.compute_winning();
        self.is_realizable(&w)
    }

    fn cur_env_cube(&mut self) -> Bdd {
        let vars: Vec<VarId> = (0..self.n_env as u32).map(|p| VarId(2 * p)).collect();
        self.mgr.cube(&vars)
    }

    fn vars(&self, props: std::ops::Range<usize>, primed: bool) -> Vec<VarId> {
        props.map(|p| VarId(2 * p as u32 + primed as u32)).collect()
    }

    /// Minterm fixing the current copies of all propositions.
    pub fn state_bdd(&mut self, v: &[bool]) -> Bdd {
        let vars = self.vars(0..self.num_props(), false);
        self.mgr.minterm(&vars, v)
    }

    fn next_env_bdd(&mut self, e: &[bool]) -> Bdd {
        let vars = self.vars(0..self.n_env, true);
        self.mgr.minterm(&vars, e)
    }

    /// Full variable assignment with the current copies set to `v`.
    pub fn assignment(&self, v: &[bool]) -> Vec<bool> {
        let mut a = vec![false; self.mgr.num_vars() as usize];
        for (p, &b) in v.iter().enumerate() {
            a[2 * p] = b;
        }
        a
    }

    /// Full assignment with current copies `v` and primed copies `w`.
    pub fn step_assignment(&self, v: &[bool], w: &[bool]) -> Vec<bool> {
        let mut a = self.assignment(v);
        for (p, &b) in w.iter().enumerate() {
            a[2 * p + 1] = b;
        }
        a
    }

    pub fn holds(&self, f: Bdd, v: &[bool]) -> bool {
        self.mgr.eval(f, &self.assignment(v))
    }

    /// Environment moves allowed from `v`, as next input valuations.
    pub fn env_moves(&mut self, v: &[bool]) -> Vec<Vec<bool>> {
        let vb = self.state_bdd(v);
        let m = self.mgr.and_exists(self.tau_e, vb, self.cur_all);
        let m = self.mgr.exists_cube(self.next_sys, m);
        let vars = self.vars(0..self.n_env, true);
        self.mgr.all_sat(m, &vars)
    }

    /// Restriction of a relation to the step `v → e'`, as a set over the
    /// primed system variables.
    fn responses_bdd(&mut self, rel: Bdd, v: &[bool], e: &[bool]) -> Bdd {
        let vb = self.state_bdd(v);
        let eb = self.next_env_bdd(e);
        let r = self.mgr.and(rel, vb);
        let r = self.mgr.and_exists(r, eb, self.cur_all);
        self.mgr.exists_cube(self.next_env, r)
    }

    /// Least next system valuation in `s` (a set over primed system vars).
    fn pick_sys(&self, s: Bdd) -> Option<Vec<bool>> {
        let a = self.mgr.pick_assignment(s)?;
        Some((self.n_env..self.num_props()).map(|p| a[2 * p + 1]).collect())
    }

    /// System responses to `e'` from `v` under `rel`, capped.
    pub fn responses(&mut self, rel: Bdd, v: &[bool], e: &[bool]) -> Vec<Vec<bool>> {
        let s = self.responses_bdd(rel, v, e);
        let vars = self.vars(self.n_env..self.num_props(), true);
        let mut all = self.mgr.all_sat(s, &vars);
        if all.len() > MAX_RESPONSES {
            log::warn!("truncating {} system responses to {MAX_RESPONSES}", all.len());
            all.truncate(MAX_RESPONSES);
        }
        all
    }

    /// Responses to `e'` from `v` that land in `target` (current-state set).
    fn responses_into(&mut self, v: &[bool], e: &[bool], target: Bdd) -> Bdd {
        let tp = self.mgr.swap(target);
        let rel = self.mgr.and(self.tau_s, tp);
        self.responses_bdd(rel, v, e)
    }

    /// Initial valuations of the environment inputs.
    fn env_inits(&mut self) -> Vec<Vec<bool>> {
        let e = self.mgr.exists_cube(self.cur_sys, self.env_init);
        let vars = self.vars(0..self.n_env, false);
        self.mgr.all_sat(e, &vars)
    }

    fn env_bdd(&mut self, e: &[bool]) -> Bdd {
        let vars = self.vars(0..self.n_env, false);
        self.mgr.minterm(&vars, e)
    }

    fn pick_cur_sys(&self, s: Bdd) -> Option<Vec<bool>> {
        let a = self.mgr.pick_assignment(s)?;
        Some((self.n_env..self.num_props()).map(|p| a[2 * p]).collect())
    }

    /// Builds an explicit winning strategy.
    pub fn extract_strategy(&mut self, w: &Winning) -> Result<Strategy> {
        if !self.is_realizable(w) {
            return Err(Error::SpecUnrealizable);
        }
        let ng = self.sys_goals.len();
        let primed_layers: Vec<Vec<Bdd>> = w.y.iter().map(|ls| ls.iter().map(|&l| self.mgr.swap(l)).collect()).collect();
        let mut cpre_x: HashMap<(usize, usize, usize), Bdd> = HashMap::new();
        let mut st = Strategy::new(self);
        let mut queue = VecDeque::new();

        for e in self.env_inits() {
            let eb = self.env_bdd(&e);
            let c = self.mgr.and(self.sys_init, self.env_init);
            let c = self.mgr.and(c, w.z);
            let c = self.mgr.and(c, eb);
            let s = self.pick_cur_sys(c).expect("realizable game has a winning initial state");
            let v = [e, s].concat();
            let (id, fresh) = st.intern(v, 0);
            st.initial.push(id);
            if fresh {
                queue.push_back(id);
            }
        }

        while let Some(q) = queue.pop_front() {
            let v = st.states[q].valuation.clone();
            let j = st.states[q].memory;
            let reached = self.holds(self.sys_goals[j], &v);
            let (goal, bound) = if reached {
                let g = (j + 1) % ng;
                (g, w.y[g].len())
            } else {
                (j, rank(&self.mgr, &w.y[j], &self.assignment(&v)).expect("strategy state outside the winning region"))
            };
            let mut stay: Option<Bdd> = None;
            for e in self.env_moves(&v) {
                let resp = self.responses_bdd(self.tau_s, &v, &e);
                let eb = self.next_env_bdd(&e);
                let mut choice = None;
                for lp in primed_layers[goal].iter().take(bound) {
                    let t = self.mgr.and_exists(*lp, eb, self.next_env);
                    let c = self.mgr.and(resp, t);
                    if !c.is_false() {
                        choice = self.pick_sys(c);
                        break;
                    }
                }
                if choice.is_none() && !reached {
                    let x = match stay {
                        Some(x) => x,
                        None => {
                            let r = bound;
                            let i = (0..self.env_goals.len())
                                .find(|&i| {
                                    let xs = w.x[goal][r][i];
                                    let cx = *cpre_x.entry((goal, r, i)).or_insert_with(|| self.cpre(xs));
                                    let a = self.assignment(&v);
                                    !self.mgr.eval(self.env_goals[i], &a) && self.mgr.eval(cx, &a)
                                })
                                .ok_or_else(|| Error::InvalidSpec("strategy extraction found no progress set".into()))?;
                            stay = Some(w.x[goal][r][i]);
                            w.x[goal][r][i]
                        }
                    };
                    let c = self.responses_into(&v, &e, x);
                    choice = self.pick_sys(c);
                }
                let s = choice.ok_or_else(|| Error::InvalidSpec("strategy extraction found no winning response".into()))?;
                let (id, fresh) = st.intern([e.clone(), s].concat(), goal);
                if fresh {
                    queue.push_back(id);
                }
                st.edges.push(Edge { src: q, env: e, dst: id });
            }
        }
        st.index_edges();
        Ok(st)
    }

    /// Builds an explicit environment counter-strategy. System answers are
    /// drawn from the skill model; an answer the task forbids, or an
    /// environment move with no legal answer, leads to a dead-end state.
    pub fn extract_counterstrategy(&mut self) -> Result<CounterStrategy> {
        let w = self.compute_winning();
        if self.is_realizable(&w) {
            return Err(Error::SpecRealizable);
        }
        let ew = self.compute_env_winning();
        let mut cs = CounterStrategy::new(self);
        let mut queue = VecDeque::new();

        for e in self.env_inits() {
            let eb = self.env_bdd(&e);
            let c = self.mgr.and(self.sys_init, self.env_init);
            let c = self.mgr.and(c, eb);
            let in_z = self.mgr.and(c, w.z);
            if !in_z.is_false() {
                continue;
            }
            let vars = self.vars(self.n_env..self.num_props(), false);
            let ce = self.cur_env_cube();
            let s_all = self.mgr.exists_cube(ce, c);
            let inits = self.mgr.all_sat(s_all, &vars);
            if inits.is_empty() {
                let id = cs.dead(e);
                cs.initial.push(id);
                continue;
            }
            for s in inits.into_iter().take(MAX_RESPONSES) {
                let (id, fresh) = cs.intern(e.clone(), s, (0, 0));
                cs.initial.push(id);
                if fresh {
                    queue.push_back(id);
                }
            }
        }

        let mut primed_cache: HashMap<u32, Bdd> = HashMap::new();
        while let Some(q) = queue.pop_front() {
            if cs.states.len() >= MAX_CS_STATES {
                log::warn!("counter-strategy truncated at {MAX_CS_STATES} states");
                cs.truncated = true;
                break;
            }
            let v = cs.states[q].valuation();
            let (mut j, mut i) = cs.states[q].memory;
            let a = self.assignment(&v);
            let k = ew.layers.iter().position(|l| l.y.iter().any(|&y| self.mgr.eval(y, &a)));
            let Some(k) = k else {
                return Err(Error::InvalidSpec("counter-strategy state outside the environment region".into()));
            };
            let layer = &ew.layers[k];
            let target;
            let cb = self.cox(layer.below);
            if self.mgr.eval(cb, &a) {
                target = layer.below;
            } else {
                if !self.mgr.eval(layer.y[j], &a) {
                    j = (0..layer.y.len()).find(|&jj| self.mgr.eval(layer.y[jj], &a)).expect("state in some Y");
                    i = 0;
                }
                let xl = &layer.x[j][i];
                let m = rank(&self.mgr, xl, &a).expect("state in its X layers");
                let cy = self.cox(layer.y[j]);
                let push = self.mgr.and(self.env_goals[i], cy);
                if m > 0 && {
                    let cx = self.cox(xl[m - 1]);
                    self.mgr.eval(cx, &a)
                } {
                    target = xl[m - 1];
                } else if self.mgr.eval(push, &a) {
                    target = layer.y[j];
                    i = (i + 1) % self.env_goals.len();
                } else {
                    return Err(Error::InvalidSpec("counter-strategy extraction found no forcing move".into()));
                }
            }
            let tp = *primed_cache.entry(target.root()).or_insert_with(|| self.mgr.swap(target));
            let e = self.forcing_move(&v, tp).ok_or_else(|| Error::InvalidSpec("no forcing environment move".into()))?;
            // No legal answer at all: the input move itself is the dead end.
            if self.responses_bdd(self.tau_s, &v, &e).is_false() {
                let d = cs.dead(e.clone());
                cs.edges.push(CsEdge { src: q, env: e, sys: None, dst: d });
                continue;
            }
            for s in self.responses(self.tau_s_model, &v, &e) {
                let step = self.step_assignment(&v, &[e.clone(), s.clone()].concat());
                let d = if self.mgr.eval(self.tau_s, &step) {
                    let (d, fresh) = cs.intern(e.clone(), s.clone(), (j, i));
                    if fresh {
                        queue.push_back(d);
                    }
                    d
                } else {
                    // An answer the skills allow but the task forbids.
                    cs.dead(e.clone())
                };
                cs.edges.push(CsEdge { src: q, env: e.clone(), sys: Some(s), dst: d });
            }
        }
        cs.index_edges();
        Ok(cs)
    }

    /// Least next input valuation such that every legal answer lands in
    /// the primed target `tp`.
    fn forcing_move(&mut self, v: &[bool], tp: Bdd) -> Option<Vec<bool>> {
        let vb = self.state_bdd(v);
        let ts = self.mgr.and(self.tau_s, vb);
        let imp = self.mgr.implies(ts, tp);
        let fa = self.mgr.forall_cube(self.next_sys, imp);
        let g = self.mgr.and(fa, self.tau_e);
        let g = self.mgr.and_exists(g, vb, self.cur_all);
        let g = self.mgr.exists_cube(self.next_sys, g);
        let a = self.mgr.pick_assignment(g)?;
        Some((0..self.n_env).map(|p| a[2 * p + 1]).collect())
    }
}

/// Index of the first layer containing the assignment.
fn rank(mgr: &Manager, layers: &[Bdd], a: &[bool]) -> Option<usize> {
    layers.iter().position(|&l| mgr.eval(l, a))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyState {
    pub id: usize,
    /// Current values of all propositions, inputs first.
    pub valuation: Vec<bool>,
    /// Index of the system goal being pursued.
    pub memory: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub env: Vec<bool>,
    pub dst: usize,
}

/// Explicit Mealy-style controller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub props: Vec<String>,
    pub n_env: usize,
    pub states: Vec<StrategyState>,
    pub initial: Vec<usize>,
    pub edges: Vec<Edge>,
    index: HashMap<(Vec<bool>, usize), usize>,
    out: Vec<Vec<usize>>,
}

impl Strategy {
    fn new(g: &GameStructure) -> Self {
        Strategy {
            props: g.map.names().to_vec(),
            n_env: g.n_env,
            states: Vec::new(),
            initial: Vec::new(),
            edges: Vec::new(),
            index: HashMap::new(),
            out: Vec::new(),
        }
    }

    fn intern(&mut self, valuation: Vec<bool>, memory: usize) -> (usize, bool) {
        if let Some(&id) = self.index.get(&(valuation.clone(), memory)) {
            return (id, false);
        }
        let id = self.states.len();
        self.index.insert((valuation.clone(), memory), id);
        self.states.push(StrategyState { id, valuation, memory });
        (id, true)
    }

    fn index_edges(&mut self) {
        self.out = vec![Vec::new(); self.states.len()];
        for (k, e) in self.edges.iter().enumerate() {
            self.out[e.src].push(k);
        }
    }

    /// Successor of `state` when the environment picks `env`.
    pub fn step(&self, state: usize, env: &[bool]) -> Option<usize> {
        self.out[state].iter().map(|&k| &self.edges[k]).find(|e| e.env == env).map(|e| e.dst)
    }

    /// Environment valuations the strategy answers from `state`.
    pub fn env_choices(&self, state: usize) -> Vec<&[bool]> {
        self.out[state].iter().map(|&k| self.edges[k].env.as_slice()).collect()
    }

    pub fn prop_index(&self, name: &str) -> Option<usize> {
        self.props.iter().position(|p| p == name)
    }

    pub fn to_json(&self) -> Result<String> {
        let named = |v: &[bool], off: usize| -> BTreeMap<String, bool> {
            v.iter().enumerate().map(|(k, &b)| (self.props[off + k].clone(), b)).collect()
        };
        let wire = StrategyWire {
            props: self.props.clone(),
            n_env: self.n_env,
            states: self.states.iter().map(|s| StateWire { id: s.id, valuation: named(&s.valuation, 0), memory: s.memory }).collect(),
            initial: self.initial.clone(),
            edges: self.edges.iter().map(|e| EdgeWire { src: e.src, env: named(&e.env, 0), dst: e.dst }).collect(),
        };
        Ok(serde_json::to_string_pretty(&wire)?)
    }

    pub fn from_json(text: &str) -> Result<Strategy> {
        let w: StrategyWire = serde_json::from_str(text)?;
        let vec_of = |m: &BTreeMap<String, bool>, names: &[String]| -> Result<Vec<bool>> {
            names.iter().map(|n| m.get(n).copied().ok_or_else(|| Error::InvalidSpec(format!("missing value for `{n}`")))).collect()
        };
        let mut st = Strategy {
            props: w.props.clone(),
            n_env: w.n_env,
            states: Vec::new(),
            initial: w.initial,
            edges: Vec::new(),
            index: HashMap::new(),
            out: Vec::new(),
        };
        for s in &w.states {
            let v = vec_of(&s.valuation, &w.props)?;
            let (id, _) = st.intern(v, s.memory);
            if id != s.id {
                return Err(Error::InvalidSpec("strategy state ids are not dense".into()));
            }
        }
        for e in &w.edges {
            if e.src >= st.states.len() || e.dst >= st.states.len() {
                return Err(Error::InvalidSpec("strategy edge out of range".into()));
            }
            st.edges.push(Edge { src: e.src, env: vec_of(&e.env, &w.props[..w.n_env])?, dst: e.dst });
        }
        st.index_edges();
        Ok(st)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph strategy {\n");
        for q in &self.states {
            let on: Vec<&str> = q.valuation.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| self.props[k].as_str()).collect();
            s += &format!("  q{} [label=\"{}\\n{}\"];\n", q.id, q.memory, on.join(" "));
        }
        for e in &self.edges {
            s += &format!("  q{} -> q{};\n", e.src, e.dst);
        }
        s + "}\n"
    }
}

#[derive(Serialize, Deserialize)]
struct StateWire {
    id: usize,
    valuation: BTreeMap<String, bool>,
    memory: usize,
}

#[derive(Serialize, Deserialize)]
struct EdgeWire {
    src: usize,
    env: BTreeMap<String, bool>,
    dst: usize,
}

#[derive(Serialize, Deserialize)]
struct StrategyWire {
    props: Vec<String>,
    n_env: usize,
    states: Vec<StateWire>,
    initial: Vec<usize>,
    edges: Vec<EdgeWire>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsState {
    pub id: usize,
    pub env: Vec<bool>,
    /// `None` marks a dead end: the system has no valid move here.
    pub sys: Option<Vec<bool>>,
    /// (system goal blocked, environment goal pursued).
    pub memory: (usize, usize),
}

impl CsState {
    pub fn is_dead(&self) -> bool {
        self.sys.is_none()
    }

    /// Full valuation; dead ends get all system propositions false.
    pub fn valuation(&self) -> Vec<bool> {
        match &self.sys {
            Some(s) => [self.env.clone(), s.clone()].concat(),
            None => self.env.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsEdge {
    pub src: usize,
    pub env: Vec<bool>,
    /// The system answer taken, or `None` when no answer exists.
    pub sys: Option<Vec<bool>>,
    pub dst: usize,
}

/// Counter-strategy state identity: input valuation, system answer, memory.
type CsKey = (Vec<bool>, Option<Vec<bool>>, (usize, usize));

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterStrategy {
    pub props: Vec<String>,
    pub n_env: usize,
    pub states: Vec<CsState>,
    pub initial: Vec<usize>,
    pub edges: Vec<CsEdge>,
    /// Exploration stopped at the state bound.
    pub truncated: bool,
    #[serde(skip)]
    index: HashMap<CsKey, usize>,
}

impl CounterStrategy {
    fn new(g: &GameStructure) -> Self {
        CounterStrategy {
            props: g.map.names().to_vec(),
            n_env: g.n_env,
            states: Vec::new(),
            initial: Vec::new(),
            edges: Vec::new(),
            truncated: false,
            index: HashMap::new(),
        }
    }

    fn intern(&mut self, env: Vec<bool>, sys: Vec<bool>, memory: (usize, usize)) -> (usize, bool) {
        self.intern_any(env, Some(sys), memory)
    }

    fn intern_any(&mut self, env: Vec<bool>, sys: Option<Vec<bool>>, memory: (usize, usize)) -> (usize, bool) {
        let key = (env.clone(), sys.clone(), memory);
        if let Some(&id) = self.index.get(&key) {
            return (id, false);
        }
        let id = self.states.len();
        self.index.insert(key, id);
        self.states.push(CsState { id, env, sys, memory });
        (id, true)
    }

    fn dead(&mut self, env: Vec<bool>) -> usize {
        self.intern_any(env, None, (0, 0)).0
    }

    fn index_edges(&mut self) {
        self.edges.sort_by_key(|e| (e.src, e.dst));
        self.edges.dedup();
    }

    /// Dead-end states (Q_not).
    pub fn q_not(&self) -> Vec<usize> {
        self.states.iter().filter(|s| s.is_dead()).map(|s| s.id).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph counterstrategy {\n");
        for q in &self.states {
            let v = q.valuation();
            let on: Vec<&str> = v.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| self.props[k].as_str()).collect();
            let shape = if q.is_dead() { ",shape=box" } else { "" };
            s += &format!("  q{} [label=\"{}\"{shape}];\n", q.id, on.join(" "));
        }
        for e in &self.edges {
            s += &format!("  q{} -> q{};\n", e.src, e.dst);
        }
        s + "}\n"
    }
}

/// Solves a specification: realizability plus strategy or counter-strategy.
pub enum Outcome {
    Realizable(Strategy),
    Unrealizable(CounterStrategy),
}

pub fn solve(spec: &Gr1Spec) -> Result<Outcome> {
    let mut g = build_game(spec)?;
    let w = g.compute_winning();
    if g.is_realizable(&w) {
        Ok(Outcome::Realizable(g.extract_strategy(&w)?))
    } else {
        Ok(Outcome::Unrealizable(g.extract_counterstrategy()?))
    }
}

/// Realizability only.
pub fn is_realizable(spec: &Gr1Spec) -> Result<bool> {
    Ok(build_game(spec)?.realizable())
}
