//! Shared test support: a random small-spec generator and an explicit-state
//! GR(1) solver used as an oracle for the symbolic one.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skillsynth::logic::{Atom, Formula, Gr1Spec, SectionKind};
use skillsynth::specformat::{formula_to_string, parse};

/// Random formula over the named atoms. `primed` lists atoms that may
/// appear primed.
pub fn random_formula(rng: &mut ChaCha8Rng, names: &[String], primed: &[String], depth: u32) -> Formula {
    if depth == 0 || rng.random_bool(0.3) {
        if rng.random_bool(0.05) {
            return Formula::Const(rng.random_bool(0.5));
        }
        let use_primed = !primed.is_empty() && rng.random_bool(0.5);
        let a = if use_primed {
            Formula::next(&primed[rng.random_range(0..primed.len())])
        } else {
            Formula::atom(&names[rng.random_range(0..names.len())])
        };
        return if rng.random_bool(0.3) { Formula::not(a) } else { a };
    }
    let mut sub = || random_formula(rng, names, primed, depth - 1);
    let (l, r) = (sub(), sub());
    match rng.random_range(0..5) {
        0 => Formula::and([l, r]),
        1 => Formula::or([l, r]),
        2 => Formula::implies(l, r),
        3 => Formula::iff(l, r),
        _ => Formula::not(Formula::and([l, r])),
    }
}

/// Random well-formed spec with at most `max_props` propositions.
pub fn random_spec(seed: u64, max_props: usize) -> Gr1Spec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_props);
    let n_env = rng.random_range(1..n);
    let env: Vec<String> = (0..n_env).map(|i| format!("e{i}")).collect();
    let sys: Vec<String> = (0..n - n_env).map(|i| format!("s{i}")).collect();
    let all: Vec<String> = env.iter().chain(&sys).cloned().collect();
    let mut text = format!("[INPUT]\n{}\n\n[OUTPUT]\n{}\n\n", env.join("\n"), sys.join("\n"));
    let mut section = |rng: &mut ChaCha8Rng, k: SectionKind, count: usize, primed: &[String], depth: u32| {
        text += &format!("[{}]\n", k.header());
        for _ in 0..count {
            text += &format!("{}\n", formula_to_string(&random_formula(rng, &all, primed, depth)));
        }
        text += "\n";
    };
    let c = rng.random_range(0..2);
    section(&mut rng, SectionKind::EnvInit, c, &[], 1);
    let c = rng.random_range(0..2);
    section(&mut rng, SectionKind::SysInit, c, &[], 1);
    let c = rng.random_range(0..3);
    section(&mut rng, SectionKind::EnvTrans, c, &env, 2);
    let c = rng.random_range(0..3);
    section(&mut rng, SectionKind::SysTrans, c, &all, 2);
    let c = rng.random_range(0..2);
    section(&mut rng, SectionKind::SysTransHard, c, &all, 2);
    let c = rng.random_range(0..3);
    section(&mut rng, SectionKind::SysLiveness, c, &[], 2);
    let c = rng.random_range(0..3);
    section(&mut rng, SectionKind::EnvLiveness, c, &[], 2);
    parse(&text).expect("generated spec parses")
}

/// Explicit game: states are bitmasks over the propositions, inputs first.
pub struct Explicit {
    pub n: usize,
    pub n_env: usize,
    env_init: Vec<bool>,
    sys_init: Vec<bool>,
    /// `moves[v]` lists (input part of next state, legal system answers).
    moves: Vec<Vec<(usize, Vec<usize>)>>,
    env_goals: Vec<Vec<bool>>,
    sys_goals: Vec<Vec<bool>>,
}

fn holds(fs: &[&Formula], names: &[String], cur: usize, next: usize) -> bool {
    let val = |a: &Atom| {
        let k = names.iter().position(|n| *n == a.name).expect("declared");
        let bits = if a.primed { next } else { cur };
        bits >> k & 1 == 1
    };
    fs.iter().all(|f| f.eval(&val))
}

impl Explicit {
    pub fn new(spec: &Gr1Spec) -> Explicit {
        let names: Vec<String> = spec.inputs.decls().chain(spec.outputs.decls()).map(|s| s.to_string()).collect();
        let n = names.len();
        let n_env = spec.inputs.decls().count();
        let size = 1usize << n;
        let sec = |k: SectionKind| spec.section(k).formulas().collect::<Vec<_>>();
        let (ei, si, et) = (sec(SectionKind::EnvInit), sec(SectionKind::SysInit), sec(SectionKind::EnvTrans));
        let mut st = sec(SectionKind::SysTrans);
        st.extend(sec(SectionKind::SysTransHard));
        let goals = |k: SectionKind| -> Vec<Vec<bool>> {
            let fs = sec(k);
            if fs.is_empty() {
                return vec![vec![true; size]];
            }
            fs.iter().map(|f| (0..size).map(|v| holds(&[f], &names, v, 0)).collect()).collect()
        };
        let env_mask = (1usize << n_env) - 1;
        let moves = (0..size)
            .map(|v| {
                (0..1usize << n_env)
                    .filter(|&e| holds(&et, &names, v, e))
                    .map(|e| {
                        let answers = (0..1usize << (n - n_env))
                            .map(|s| e | s << n_env)
                            .filter(|&w| holds(&st, &names, v, w))
                            .collect();
                        (e & env_mask, answers)
                    })
                    .collect()
            })
            .collect();
        Explicit {
            n,
            n_env,
            env_init: (0..size).map(|v| holds(&ei, &names, v, 0)).collect(),
            sys_init: (0..size).map(|v| holds(&si, &names, v, 0)).collect(),
            moves,
            env_goals: goals(SectionKind::EnvLiveness),
            sys_goals: goals(SectionKind::SysLiveness),
        }
    }

    fn size(&self) -> usize {
        1 << self.n
    }

    /// States where every input move has an answer inside `z`.
    pub fn cpre(&self, z: &[bool]) -> Vec<bool> {
        (0..self.size()).map(|v| self.moves[v].iter().all(|(_, ans)| ans.iter().any(|&w| z[w]))).collect()
    }

    pub fn winning(&self) -> Vec<bool> {
        let size = self.size();
        let mut z = vec![true; size];
        loop {
            let mut z_new = vec![true; size];
            let cz = self.cpre(&z);
            for goal in &self.sys_goals {
                let start: Vec<bool> = (0..size).map(|v| goal[v] && cz[v]).collect();
                let mut y = vec![false; size];
                loop {
                    let cy = self.cpre(&y);
                    let mut y_new = vec![false; size];
                    for eg in &self.env_goals {
                        let mut x = vec![true; size];
                        loop {
                            let cx = self.cpre(&x);
                            let x_new: Vec<bool> = (0..size).map(|v| start[v] || cy[v] || (!eg[v] && cx[v])).collect();
                            if x_new == x {
                                break;
                            }
                            x = x_new;
                        }
                        for v in 0..size {
                            y_new[v] |= x[v];
                        }
                    }
                    if y_new == y {
                        break;
                    }
                    y = y_new;
                }
                for v in 0..size {
                    z_new[v] &= y[v];
                }
            }
            if z_new == z {
                return z;
            }
            z = z_new;
        }
    }

    pub fn realizable(&self) -> bool {
        let z = self.winning();
        let env_mask = (1usize << self.n_env) - 1;
        (0..1usize << self.n_env).all(|e| {
            let candidates: Vec<usize> = (0..self.size()).filter(|&v| v & env_mask == e && self.env_init[v]).collect();
            candidates.is_empty() || candidates.iter().any(|&v| self.sys_init[v] && z[v])
        })
    }
}

/// Bitmask of a valuation vector, inputs first.
pub fn mask(v: &[bool]) -> usize {
    v.iter().enumerate().map(|(k, &b)| (b as usize) << k).sum()
}
