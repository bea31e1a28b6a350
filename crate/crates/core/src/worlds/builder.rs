//! Hand construction of abstractions with Gaussian groundings.

use crate::abstraction::{Abstraction, Factor, Grounding, Outcome, Skill, Symbol, SymbolSource};

/// Standard deviation of every hand-placed grounding.
pub const GROUNDING_SD: f64 = 0.01;

/// Builds an [`Abstraction`] symbol by symbol. Effect sets are derived the
/// same way the learner derives them: touched factors lose every other
/// symbol, untouched factors stay.
#[derive(Default)]
pub struct Builder {
    dim: usize,
    factors: Vec<Factor>,
    symbols: Vec<Symbol>,
    skills: Vec<Skill>,
}

impl Builder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a factor over `dims` fresh state variables.
    pub fn factor(&mut self, dims: usize) -> usize {
        let vars = (self.dim..self.dim + dims).collect();
        self.dim += dims;
        self.factors.push(Factor { id: self.factors.len(), vars });
        self.factors.len() - 1
    }

    pub fn symbol(&mut self, name: &str, factor: usize, mean: &[f64]) -> &mut Self {
        assert_eq!(mean.len(), self.factors[factor].vars.len(), "grounding of `{name}` has the wrong dimension");
        let id = self.symbols.len();
        self.symbols.push(Symbol {
            id,
            name: name.to_string(),
            factor,
            sources: Vec::new(),
            grounding: Grounding::Gaussian { mean: mean.to_vec(), std: vec![GROUNDING_SD; mean.len()] },
        });
        self
    }

    fn id(&self, name: &str) -> usize {
        self.symbols.iter().position(|s| s.name == name).unwrap_or_else(|| panic!("unknown symbol `{name}`"))
    }

    /// Adds a skill from precondition combinations and, per outcome, the
    /// symbols it makes true.
    pub fn skill<P: AsRef<str>, Q: AsRef<str>>(&mut self, name: &str, pre: &[Vec<P>], outcomes: &[Vec<Q>]) -> &mut Self {
        let mut premask = vec![false; self.dim];
        let pre: Vec<Vec<usize>> = pre
            .iter()
            .map(|c| {
                let mut ids: Vec<usize> = c.iter().map(|s| self.id(s.as_ref())).collect();
                ids.sort_unstable();
                for &i in &ids {
                    for &v in &self.factors[self.symbols[i].factor].vars {
                        premask[v] = true;
                    }
                }
                ids
            })
            .collect();
        let outcomes = outcomes
            .iter()
            .enumerate()
            .map(|(j, eff)| {
                let eff_true: Vec<usize> = eff.iter().map(|s| self.id(s.as_ref())).collect();
                let touched: Vec<usize> = eff_true.iter().map(|&i| self.symbols[i].factor).collect();
                let mut effmask = vec![false; self.dim];
                for &f in &touched {
                    for &v in &self.factors[f].vars {
                        effmask[v] = true;
                    }
                }
                let (mut eff_false, mut eff_stay) = (Vec::new(), Vec::new());
                for s in &self.symbols {
                    if touched.contains(&s.factor) {
                        if !eff_true.contains(&s.id) {
                            eff_false.push(s.id);
                        }
                    } else {
                        eff_stay.push(s.id);
                    }
                }
                for &i in &eff_true {
                    self.symbols[i].sources.push(SymbolSource { skill: name.to_string(), outcome: j + 1 });
                }
                Outcome { effmask, eff_true, eff_false, eff_stay }
            })
            .collect();
        self.skills.push(Skill { name: name.to_string(), premask, pre, outcomes });
        self
    }

    pub fn build(&self) -> Abstraction {
        let a = Abstraction {
            dim: self.dim,
            factors: self.factors.clone(),
            symbols: self.symbols.clone(),
            skills: self.skills.clone(),
            support_sigmas: 5.0,
        };
        a.check().expect("builder produced an inconsistent abstraction");
        a
    }
}
