//! Learns a propositional abstraction of skills from transition data:
//! masks, factors, grounded symbols, skill partitions, and the lifted
//! precondition and effect sets the encoder consumes.
//!
//! A sample whose skill is not listed in its own `applicable` set is an
//! inapplicable attempt. Such samples only train applicability classifiers.

pub mod classifier;
pub mod stats;

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};
use classifier::Tree;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionSample {
    pub pre: Vec<f64>,
    pub skill: String,
    pub post: Vec<f64>,
    pub applicable: Vec<String>,
}

impl TransitionSample {
    pub fn executed(&self) -> bool {
        self.applicable.contains(&self.skill)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct LearnConfig {
    pub min_samples: usize,
    pub importance_tol: f64,
    pub permutation_repeats: usize,
    pub max_tree_depth: usize,
    /// Overrides the estimated per-dimension change threshold.
    pub change_epsilon: Option<f64>,
    pub cluster_gap: f64,
    pub max_outcomes: usize,
    pub variance_floor: f64,
    pub normality_alpha: f64,
    pub ks_alpha: f64,
    pub mean_tol: f64,
    pub std_ratio: f64,
    pub support_sigmas: f64,
    pub n_check: usize,
    pub accept_frac: f64,
    pub seed: u64,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig {
            min_samples: 20,
            importance_tol: 0.01,
            permutation_repeats: 5,
            max_tree_depth: 10,
            change_epsilon: None,
            cluster_gap: 4.0,
            max_outcomes: 8,
            variance_floor: 1e-6,
            normality_alpha: 0.05,
            ks_alpha: 0.05,
            mean_tol: 0.5,
            std_ratio: 2.0,
            support_sigmas: 5.0,
            n_check: 100,
            accept_frac: 0.95,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub id: usize,
    pub vars: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Grounding {
    Gaussian { mean: Vec<f64>, std: Vec<f64> },
    Kde { points: Vec<Vec<f64>>, bandwidth: Vec<f64> },
}

impl Grounding {
    pub fn mean(&self) -> Vec<f64> {
        match self {
            Grounding::Gaussian { mean, .. } => mean.clone(),
            Grounding::Kde { points, bandwidth } => {
                (0..bandwidth.len()).map(|d| stats::mean(&points.iter().map(|p| p[d]).collect::<Vec<_>>())).collect()
            }
        }
    }

    pub fn std(&self) -> Vec<f64> {
        match self {
            Grounding::Gaussian { std, .. } => std.clone(),
            Grounding::Kde { points, bandwidth } => (0..bandwidth.len())
                .map(|d| {
                    let col: Vec<f64> = points.iter().map(|p| p[d]).collect();
                    (stats::variance(&col) + bandwidth[d] * bandwidth[d]).sqrt()
                })
                .collect(),
        }
    }

    /// Whether `x` lies within `k` standard deviations in every dimension.
    pub fn contains(&self, x: &[f64], k: f64) -> bool {
        let (m, s) = (self.mean(), self.std());
        x.iter().zip(m.iter().zip(&s)).all(|(x, (m, s))| (x - m).abs() <= k * s)
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        match self {
            Grounding::Gaussian { mean, std } => {
                mean.iter().zip(std).map(|(m, s)| m + s * rng.sample::<f64, _>(StandardNormal)).collect()
            }
            Grounding::Kde { points, bandwidth } => {
                let p = &points[rng.random_range(0..points.len())];
                p.iter().zip(bandwidth).map(|(m, h)| m + h * rng.sample::<f64, _>(StandardNormal)).collect()
            }
        }
    }

    /// Whether the `k`-sigma supports are disjoint in some dimension.
    pub fn disjoint(&self, other: &Grounding, k: f64) -> bool {
        let (ma, sa, mb, sb) = (self.mean(), self.std(), other.mean(), other.std());
        (0..ma.len()).any(|d| (ma[d] - mb[d]).abs() > k * (sa[d] + sb[d]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymbolSource {
    pub skill: String,
    /// 1-based outcome index.
    pub outcome: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Symbol {
    pub id: usize,
    pub name: String,
    pub factor: usize,
    pub sources: Vec<SymbolSource>,
    pub grounding: Grounding,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub effmask: Vec<bool>,
    pub eff_true: Vec<usize>,
    pub eff_false: Vec<usize>,
    pub eff_stay: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Skill {
    pub name: String,
    pub premask: Vec<bool>,
    /// Precondition combinations, each a sorted list of symbol ids.
    pub pre: Vec<Vec<usize>>,
    pub outcomes: Vec<Outcome>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Abstraction {
    pub dim: usize,
    pub factors: Vec<Factor>,
    pub symbols: Vec<Symbol>,
    pub skills: Vec<Skill>,
    #[serde(default = "default_sigmas")]
    pub support_sigmas: f64,
}

fn default_sigmas() -> f64 {
    5.0
}

impl Abstraction {
    pub fn symbol_by_name(&self, name: &str) -> Option<&Symbol> {
        self.symbols.iter().find(|s| s.name == name)
    }

    pub fn skill(&self, name: &str) -> Option<&Skill> {
        self.skills.iter().find(|s| s.name == name)
    }

    /// Provenance label such as `a1_2_x1` built from the first source.
    pub fn symbol_label(&self, id: usize) -> String {
        let s = &self.symbols[id];
        let vars: Vec<String> = self.factors[s.factor].vars.iter().map(|v| format!("x{}", v + 1)).collect();
        match s.sources.first() {
            Some(src) => format!("{}_{}_{}", src.skill, src.outcome, vars.join("")),
            None => s.name.clone(),
        }
    }

    pub fn symbols_of_factor(&self, factor: usize) -> Vec<usize> {
        self.symbols.iter().filter(|s| s.factor == factor).map(|s| s.id).collect()
    }

    pub fn overlapping(&self, a: usize, b: usize) -> bool {
        let (sa, sb) = (&self.symbols[a], &self.symbols[b]);
        sa.factor == sb.factor && !sa.grounding.disjoint(&sb.grounding, self.support_sigmas)
    }

    /// Symbol ids whose support contains the state `x`.
    pub fn symbols_holding(&self, x: &[f64]) -> Vec<usize> {
        self.symbols
            .iter()
            .filter(|s| {
                let vars = &self.factors[s.factor].vars;
                let proj: Vec<f64> = vars.iter().map(|&v| x[v]).collect();
                s.grounding.contains(&proj, self.support_sigmas)
            })
            .map(|s| s.id)
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Abstraction> {
        let a: Abstraction = serde_json::from_str(s)?;
        a.check()?;
        Ok(a)
    }

    /// Structural checks on a loaded abstraction.
    pub fn check(&self) -> Result<()> {
        let mut seen = vec![false; self.dim];
        for f in &self.factors {
            for &v in &f.vars {
                if v >= self.dim || seen[v] {
                    return Err(Error::Dataset(format!("factor {} does not partition the state", f.id)));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Dataset("factors do not cover every state variable".into()));
        }
        for (i, s) in self.symbols.iter().enumerate() {
            if s.id != i || s.factor >= self.factors.len() {
                return Err(Error::Dataset(format!("symbol `{}` has an inconsistent id or factor", s.name)));
            }
        }
        let n = self.symbols.len();
        for sk in &self.skills {
            let ids = sk.pre.iter().flatten().chain(sk.outcomes.iter().flat_map(|o| {
                o.eff_true.iter().chain(&o.eff_false).chain(&o.eff_stay)
            }));
            if ids.into_iter().any(|&i| i >= n) {
                return Err(Error::Dataset(format!("skill `{}` references an unknown symbol", sk.name)));
            }
            if sk.outcomes.is_empty() {
                return Err(Error::Dataset(format!("skill `{}` has no outcomes", sk.name)));
            }
        }
        Ok(())
    }
}

pub fn read_dataset(reader: impl BufRead) -> Result<Vec<TransitionSample>> {
    let mut out: Vec<TransitionSample> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let s: TransitionSample =
            serde_json::from_str(&line).map_err(|e| Error::Dataset(format!("line {}: {e}", i + 1)))?;
        out.push(s);
    }
    validate_dataset(&out)?;
    Ok(out)
}

pub fn write_dataset(mut w: impl Write, data: &[TransitionSample]) -> Result<()> {
    for s in data {
        serde_json::to_writer(&mut w, s)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn validate_dataset(data: &[TransitionSample]) -> Result<usize> {
    let Some(first) = data.first() else {
        return Err(Error::Dataset("empty dataset".into()));
    };
    let n = first.pre.len();
    for (i, s) in data.iter().enumerate() {
        if s.pre.len() != n || s.post.len() != n {
            return Err(Error::Dataset(format!("sample {}: expected {n} state variables", i + 1)));
        }
        if s.pre.iter().chain(&s.post).any(|x| !x.is_finite()) {
            return Err(Error::Dataset(format!("sample {}: non-finite value", i + 1)));
        }
    }
    Ok(n)
}

/// Noise level and change threshold estimated from `|post - pre|`.
///
/// For every (skill, variable) pair the median absolute change is taken.
/// Sorted medians are split at the largest ratio between neighbours; a ratio
/// of at least 5 separates pairs that only see sensor noise from pairs that
/// really move. The noise standard deviation comes from the medians of the
/// quiet pairs and the threshold is three of them. Without such a gap every
/// nonzero change counts.
#[derive(Clone, Copy, Debug)]
pub struct ChangeModel {
    pub noise_sd: f64,
    pub epsilon: f64,
}

/// Median of a half-normal variable divided by its scale.
const HALF_NORMAL_MEDIAN: f64 = 0.674_489_750_196_081_7;

pub fn estimate_change_model(data: &[TransitionSample], cfg: &LearnConfig) -> ChangeModel {
    let mut cols: BTreeMap<(&str, usize), Vec<f64>> = BTreeMap::new();
    for s in data {
        for (d, (a, b)) in s.pre.iter().zip(&s.post).enumerate() {
            cols.entry((s.skill.as_str(), d)).or_default().push((b - a).abs());
        }
    }
    let mut medians: Vec<f64> = cols.values().map(|c| stats::median(c)).collect();
    medians.sort_by(f64::total_cmp);
    let mut best: Option<(f64, usize)> = None;
    for k in 1..medians.len() {
        let r = if medians[k - 1] <= 1e-12 {
            if medians[k] > 1e-12 { f64::INFINITY } else { 1.0 }
        } else {
            medians[k] / medians[k - 1]
        };
        if best.is_none_or(|b| r > b.0) {
            best = Some((r, k));
        }
    }
    let noise_sd = match best {
        Some((r, k)) if r >= 5.0 => {
            let q = &medians[..k];
            (q.iter().map(|m| (m / HALF_NORMAL_MEDIAN).powi(2)).sum::<f64>() / q.len() as f64).sqrt()
        }
        _ => {
            if medians.last().is_some_and(|&m| m > 1e-12) && cfg.change_epsilon.is_none() {
                log::warn!("no quiet variables found; every nonzero change counts as an effect");
            }
            0.0
        }
    };
    ChangeModel { noise_sd, epsilon: cfg.change_epsilon.unwrap_or(3.0 * noise_sd) }
}

/// One outcome of a skill: the change mask and member sample indices
/// (into the slice passed to [`cluster_outcomes`]).
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeCluster {
    pub mask: Vec<bool>,
    pub members: Vec<usize>,
}

/// Groups executed samples of one skill into outcomes: first by which
/// variables changed, then by Ward clustering of post-states over those
/// variables. Members of clusters smaller than `max(3, n/20)` are moved one
/// by one to the large cluster that explains them best.
pub fn cluster_outcomes(samples: &[&TransitionSample], cm: ChangeModel, cfg: &LearnConfig) -> Vec<OutcomeCluster> {
    let n = samples.first().map_or(0, |s| s.pre.len());
    let mut groups: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
    for (i, s) in samples.iter().enumerate() {
        let m: Vec<bool> = s.pre.iter().zip(&s.post).map(|(a, b)| (b - a).abs() > cm.epsilon).collect();
        groups.entry(m).or_default().push(i);
    }
    let floor = cm.noise_sd.max(cfg.variance_floor.sqrt());
    let mut clusters = Vec::new();
    for (mask, members) in groups {
        let dims: Vec<usize> = (0..n).filter(|&d| mask[d]).collect();
        if dims.is_empty() {
            clusters.push(OutcomeCluster { mask, members });
            continue;
        }
        let pts: Vec<Vec<f64>> = members.iter().map(|&i| dims.iter().map(|&d| samples[i].post[d]).collect()).collect();
        let labels = stats::ward_clusters(&pts, cfg.cluster_gap, floor, cfg.max_outcomes);
        let k = labels.iter().max().map_or(0, |m| m + 1);
        for c in 0..k {
            let mem: Vec<usize> = members.iter().zip(&labels).filter(|(_, l)| **l == c).map(|(m, _)| *m).collect();
            clusters.push(OutcomeCluster { mask: mask.clone(), members: mem });
        }
    }

    let min_size = 3.max(samples.len() / 20);
    let (mut big, small): (Vec<OutcomeCluster>, Vec<OutcomeCluster>) =
        clusters.into_iter().partition(|c| c.members.len() >= min_size);
    if big.is_empty() {
        big = small;
    } else {
        let col = |c: &OutcomeCluster, d: usize| -> Vec<f64> { c.members.iter().map(|&i| samples[i].post[d]).collect() };
        let fits: Vec<Vec<(f64, f64)>> = big
            .iter()
            .map(|c| (0..n).map(|d| (stats::mean(&col(c, d)), stats::variance(&col(c, d)).sqrt().max(floor))).collect())
            .collect();
        let noise = floor.max(1e-9);
        for i in small.into_iter().flat_map(|c| c.members) {
            let s = samples[i];
            let cost = |k: usize| -> f64 {
                (0..n)
                    .map(|d| {
                        if big[k].mask[d] {
                            let (m, sd) = fits[k][d];
                            ((s.post[d] - m) / sd).powi(2)
                        } else {
                            ((s.post[d] - s.pre[d]) / noise).powi(2)
                        }
                    })
                    .sum()
            };
            let best = (0..big.len()).min_by(|&a, &b| cost(a).total_cmp(&cost(b))).unwrap();
            big[best].members.push(i);
        }
        for c in &mut big {
            c.members.sort_unstable();
        }
    }

    let post_mean = |c: &OutcomeCluster| -> Vec<f64> {
        (0..n).map(|d| stats::mean(&c.members.iter().map(|&i| samples[i].post[d]).collect::<Vec<_>>())).collect()
    };
    big.sort_by(|a, b| {
        let ca = a.mask.iter().filter(|x| **x).count();
        let cb = b.mask.iter().filter(|x| **x).count();
        cb.cmp(&ca)
            .then_with(|| b.mask.cmp(&a.mask))
            .then_with(|| post_mean(a).partial_cmp(&post_mean(b)).unwrap_or(std::cmp::Ordering::Equal))
    });
    big
}

/// Applicability labels of every sample for `skill`.
fn labels_for(data: &[TransitionSample], skill: &str) -> Vec<bool> {
    data.iter().map(|s| s.applicable.iter().any(|a| a == skill)).collect()
}

/// Precondition mask from permutation importance of a tree trained on all
/// features.
fn premask_from(data: &[TransitionSample], labels: &[bool], cfg: &LearnConfig, seed: u64) -> Vec<bool> {
    let xs: Vec<Vec<f64>> = data.iter().map(|s| s.pre.clone()).collect();
    let n = xs[0].len();
    let all: Vec<usize> = (0..n).collect();
    let tree = classifier::fit(&xs, labels, &all, cfg.max_tree_depth);
    let imp = classifier::permutation_importance(&tree, &xs, labels, cfg.permutation_repeats, seed);
    imp.iter().map(|&v| v > cfg.importance_tol).collect()
}

fn executed_of<'a>(data: &'a [TransitionSample], skill: &str, cfg: &LearnConfig) -> Result<Vec<&'a TransitionSample>> {
    let ex: Vec<&TransitionSample> = data.iter().filter(|s| s.skill == skill && s.executed()).collect();
    if ex.len() < cfg.min_samples {
        return Err(Error::InsufficientData { skill: skill.to_string(), found: ex.len(), needed: cfg.min_samples });
    }
    Ok(ex)
}

/// Precondition mask and per-outcome effect masks of an unpartitioned skill.
pub fn estimate_masks(data: &[TransitionSample], skill: &str, cfg: &LearnConfig) -> Result<(Vec<bool>, Vec<Vec<bool>>)> {
    validate_dataset(data)?;
    let ex = executed_of(data, skill, cfg)?;
    let cm = estimate_change_model(data, cfg);
    let outcomes = cluster_outcomes(&ex, cm, cfg);
    let labels = labels_for(data, skill);
    let premask = premask_from(data, &labels, cfg, cfg.seed ^ name_hash(skill));
    Ok((premask, outcomes.into_iter().map(|o| o.mask).collect()))
}

/// Finest partition of the variables in which two variables share a factor
/// iff every mask contains both or neither.
pub fn compute_factors(masks: &[Vec<bool>], n: usize) -> Vec<Factor> {
    let mut by_sig: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let sig: Vec<bool> = masks.iter().map(|m| m[v]).collect();
        by_sig.entry(sig).or_default().push(v);
    }
    let mut groups: Vec<Vec<usize>> = by_sig.into_values().collect();
    groups.sort_by_key(|g| g[0]);
    groups.into_iter().enumerate().map(|(id, vars)| Factor { id, vars }).collect()
}

/// A symbol before merging: raw post-state points projected on one factor.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub factor: usize,
    pub sources: Vec<SymbolSource>,
    pub points: Vec<Vec<f64>>,
}

pub fn fit_grounding(points: &[Vec<f64>], cfg: &LearnConfig) -> Grounding {
    let dim = points.first().map_or(0, |p| p.len());
    let cols: Vec<Vec<f64>> = (0..dim).map(|d| points.iter().map(|p| p[d]).collect()).collect();
    let normal = cols.iter().all(|c| stats::jarque_bera_pvalue(c) >= cfg.normality_alpha);
    if normal {
        Grounding::Gaussian {
            mean: cols.iter().map(|c| stats::mean(c)).collect(),
            std: cols.iter().map(|c| stats::variance(c).max(cfg.variance_floor).sqrt()).collect(),
        }
    } else {
        Grounding::Kde { points: points.to_vec(), bandwidth: stats::kde_bandwidth_cv(points, cfg.variance_floor) }
    }
}

fn similar(a: &Candidate, b: &Candidate, cfg: &LearnConfig) -> bool {
    if a.factor != b.factor {
        return false;
    }
    let dim = a.points[0].len();
    let col = |c: &Candidate, d: usize| -> Vec<f64> { c.points.iter().map(|p| p[d]).collect() };
    if dim == 1 {
        return stats::ks_pvalue(&col(a, 0), &col(b, 0)) >= cfg.ks_alpha;
    }
    (0..dim).all(|d| {
        let (ca, cb) = (col(a, d), col(b, d));
        let (sa, sb) = (
            stats::variance(&ca).max(cfg.variance_floor).sqrt(),
            stats::variance(&cb).max(cfg.variance_floor).sqrt(),
        );
        let pooled = ((sa * sa + sb * sb) / 2.0).sqrt();
        let ratio = sa / sb;
        (stats::mean(&ca) - stats::mean(&cb)).abs() <= cfg.mean_tol * pooled
            && ratio >= 1.0 / cfg.std_ratio
            && ratio <= cfg.std_ratio
    })
}

/// Merges candidates on the same factor whose data look alike, taking
/// connected components of the similarity graph and repeating until no
/// merge applies.
pub fn merge_symbols(candidates: Vec<Candidate>, cfg: &LearnConfig) -> Vec<Candidate> {
    let mut cur = candidates;
    loop {
        let n = cur.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut merged_any = false;
        for i in 0..n {
            for j in i + 1..n {
                if similar(&cur[i], &cur[j], cfg) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                        merged_any = true;
                    }
                }
            }
        }
        if !merged_any {
            return cur;
        }
        let mut comps: BTreeMap<usize, Candidate> = BTreeMap::new();
        for (i, c) in cur.into_iter().enumerate() {
            let r = find(&mut parent, i);
            match comps.get_mut(&r) {
                Some(acc) => {
                    acc.sources.extend(c.sources);
                    acc.points.extend(c.points);
                }
                None => {
                    comps.insert(r, c);
                }
            }
        }
        cur = comps
            .into_values()
            .map(|mut c| {
                c.sources.sort();
                c
            })
            .collect();
    }
}

/// Effect sets of one outcome: its own symbols become true, disjoint
/// symbols on the same factors become false, and symbols on untouched
/// factors keep their value. Overlapping symbols land in none of the sets.
pub fn compute_effect_sets(
    effmask: &[bool],
    own: &[usize],
    factors: &[Factor],
    symbols: &[Symbol],
    sigmas: f64,
) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut eff_true: Vec<usize> = own.to_vec();
    eff_true.sort_unstable();
    let mut eff_false = Vec::new();
    let mut eff_stay = Vec::new();
    for f in factors {
        let touched = f.vars.iter().all(|&v| effmask[v]);
        let syms: Vec<&Symbol> = symbols.iter().filter(|s| s.factor == f.id).collect();
        if !touched {
            eff_stay.extend(syms.iter().map(|s| s.id));
            continue;
        }
        let mine: Vec<&Symbol> = syms.iter().filter(|s| own.contains(&s.id)).copied().collect();
        for s in syms {
            if own.contains(&s.id) {
                continue;
            }
            if mine.iter().all(|m| m.grounding.disjoint(&s.grounding, sigmas)) {
                eff_false.push(s.id);
            }
        }
    }
    eff_false.sort_unstable();
    eff_stay.sort_unstable();
    (eff_true, eff_false, eff_stay)
}

/// Symbol combinations (one symbol per factor that meets the precondition
/// mask) whose sampled groundings the classifier accepts often enough.
#[allow(clippy::too_many_arguments)]
pub fn lift_preconditions(
    premask: &[bool],
    factors: &[Factor],
    symbols: &[Symbol],
    classifier: &dyn Fn(&[f64]) -> bool,
    fill: &[f64],
    cfg: &LearnConfig,
    rng: &mut impl Rng,
) -> Vec<Vec<usize>> {
    let covered: Vec<&Factor> = factors
        .iter()
        .filter(|f| f.vars.iter().any(|&v| premask[v]))
        .filter(|f| symbols.iter().any(|s| s.factor == f.id))
        .collect();
    if covered.is_empty() {
        let ok = (0..cfg.n_check).filter(|_| classifier(fill)).count();
        return if ok as f64 >= cfg.accept_frac * cfg.n_check as f64 { vec![vec![]] } else { vec![] };
    }
    let per: Vec<Vec<&Symbol>> =
        covered.iter().map(|f| symbols.iter().filter(|s| s.factor == f.id).collect()).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; per.len()];
    'outer: loop {
        let combo: Vec<&Symbol> = idx.iter().zip(&per).map(|(&i, p)| p[i]).collect();
        let mut ok = 0;
        for _ in 0..cfg.n_check {
            let mut x = fill.to_vec();
            for (s, f) in combo.iter().zip(&covered) {
                let v = s.grounding.sample(rng);
                for (k, &d) in f.vars.iter().enumerate() {
                    x[d] = v[k];
                }
            }
            if classifier(&x) {
                ok += 1;
            }
        }
        if ok as f64 >= cfg.accept_frac * cfg.n_check as f64 {
            let mut ids: Vec<usize> = combo.iter().map(|s| s.id).collect();
            ids.sort_unstable();
            out.push(ids);
        }
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < per[k].len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    out.sort();
    out
}

fn name_hash(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

/// A partitioned skill before symbols exist.
#[derive(Clone, Debug)]
pub struct SkillPart {
    pub name: String,
    pub base: String,
    /// Executed samples (indices into the dataset), per outcome.
    pub outcomes: Vec<OutcomeCluster>,
    /// Padded bounding box of the pre-states the part fired from.
    pub region: Vec<(f64, f64)>,
}

fn pre_box(samples: &[&TransitionSample], pad: f64) -> Vec<(f64, f64)> {
    let n = samples[0].pre.len();
    (0..n)
        .map(|d| {
            let lo = samples.iter().map(|s| s.pre[d]).fold(f64::INFINITY, f64::min);
            let hi = samples.iter().map(|s| s.pre[d]).fold(f64::NEG_INFINITY, f64::max);
            (lo - pad, hi + pad)
        })
        .collect()
}

fn boxes_overlap(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.0 <= y.1 && y.0 <= x.1)
}

fn box_distance(b: &[(f64, f64)], x: &[f64]) -> f64 {
    b.iter().zip(x).map(|((lo, hi), v)| (lo - v).max(v - hi).max(0.0)).fold(0.0, f64::max)
}

/// Splits each skill whose outcomes come from separable start regions: two
/// outcomes stay in one part when the bounding boxes of their pre-states
/// overlap in every variable. Split parts are named `<skill>_<index>`; each
/// part keeps the box of its pre-states, padded by four noise deviations.
pub fn partition_skills(data: &[TransitionSample], skills: &[String], cfg: &LearnConfig) -> Result<Vec<SkillPart>> {
    let cm = estimate_change_model(data, cfg);
    let pad = 4.0 * cm.noise_sd;
    let mut parts = Vec::new();
    for skill in skills {
        let ex_idx: Vec<usize> =
            data.iter().enumerate().filter(|(_, s)| &s.skill == skill && s.executed()).map(|(i, _)| i).collect();
        let ex: Vec<&TransitionSample> = ex_idx.iter().map(|&i| &data[i]).collect();
        if ex.len() < cfg.min_samples {
            return Err(Error::InsufficientData { skill: skill.clone(), found: ex.len(), needed: cfg.min_samples });
        }
        let mut outcomes = cluster_outcomes(&ex, cm, cfg);
        for o in &mut outcomes {
            for m in &mut o.members {
                *m = ex_idx[*m];
            }
        }
        let boxes: Vec<Vec<(f64, f64)>> = outcomes
            .iter()
            .map(|o| pre_box(&o.members.iter().map(|&i| &data[i]).collect::<Vec<_>>(), 0.0))
            .collect();
        let k = outcomes.len();
        let mut comp: Vec<usize> = (0..k).collect();
        for i in 0..k {
            for j in i + 1..k {
                if boxes_overlap(&boxes[i], &boxes[j]) {
                    let (a, b) = (comp[i], comp[j]);
                    for c in comp.iter_mut() {
                        if *c == b {
                            *c = a;
                        }
                    }
                }
            }
        }
        let mut roots: Vec<usize> = comp.clone();
        roots.sort_unstable();
        roots.dedup();
        for (pi, r) in roots.iter().enumerate() {
            let outs: Vec<OutcomeCluster> = (0..k).filter(|&i| comp[i] == *r).map(|i| outcomes[i].clone()).collect();
            let members: Vec<&TransitionSample> = outs.iter().flat_map(|o| o.members.iter().map(|&i| &data[i])).collect();
            let region = pre_box(&members, pad);
            let name = if roots.len() == 1 { skill.clone() } else { format!("{skill}_{pi}") };
            parts.push(SkillPart { name, base: skill.clone(), outcomes: outs, region });
        }
    }
    Ok(parts)
}

/// Applicability labels for one part: the base skill must be applicable and
/// the state must be closer to this part's region than to its siblings'.
fn part_labels(data: &[TransitionSample], part: &SkillPart, siblings: &[&SkillPart]) -> Vec<bool> {
    let base = labels_for(data, &part.base);
    data.iter()
        .zip(base)
        .map(|(s, ok)| {
            if !ok {
                return false;
            }
            if siblings.len() <= 1 {
                return true;
            }
            let dist: Vec<(f64, &str)> =
                siblings.iter().map(|o| (box_distance(&o.region, &s.pre), o.name.as_str())).collect();
            let best = dist.iter().min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(b.1))).unwrap();
            best.1 == part.name
        })
        .collect()
}

/// Full pipeline from samples to an [`Abstraction`].
pub fn learn(data: &[TransitionSample], cfg: &LearnConfig) -> Result<Abstraction> {
    let n = validate_dataset(data)?;
    let skills: Vec<String> =
        data.iter().map(|s| s.skill.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let parts = partition_skills(data, &skills, cfg)?;

    let masks: Vec<Vec<bool>> = parts.iter().flat_map(|p| p.outcomes.iter().map(|o| o.mask.clone())).collect();
    let factors = compute_factors(&masks, n);

    let mut candidates = Vec::new();
    for p in &parts {
        for (j, o) in p.outcomes.iter().enumerate() {
            for f in &factors {
                if f.vars.iter().all(|&v| o.mask[v]) {
                    let points = o.members.iter().map(|&i| f.vars.iter().map(|&v| data[i].post[v]).collect()).collect();
                    candidates.push(Candidate {
                        factor: f.id,
                        sources: vec![SymbolSource { skill: p.name.clone(), outcome: j + 1 }],
                        points,
                    });
                }
            }
        }
    }
    let mut merged = merge_symbols(candidates, cfg);
    merged.sort_by(|a, b| a.factor.cmp(&b.factor).then_with(|| a.sources.cmp(&b.sources)));
    let symbols: Vec<Symbol> = merged
        .iter()
        .enumerate()
        .map(|(id, c)| Symbol {
            id,
            name: format!("s{id}"),
            factor: c.factor,
            sources: c.sources.clone(),
            grounding: fit_grounding(&c.points, cfg),
        })
        .collect();

    let mut out_skills = Vec::new();
    for p in &parts {
        let siblings: Vec<&SkillPart> = parts.iter().filter(|q| q.base == p.base).collect();
        let labels = part_labels(data, p, &siblings);
        let seed = cfg.seed ^ name_hash(&p.name);
        let premask = premask_from(data, &labels, cfg, seed);

        let feats: Vec<usize> = (0..n).filter(|&d| premask[d]).collect();
        let xs: Vec<Vec<f64>> = data.iter().map(|s| s.pre.clone()).collect();
        let tree: Tree = if feats.is_empty() {
            Tree::Leaf(labels.iter().filter(|l| **l).count() * 2 >= labels.len())
        } else {
            classifier::fit(&xs, &labels, &feats, cfg.max_tree_depth)
        };
        let positives: Vec<&TransitionSample> = data.iter().zip(&labels).filter(|(_, l)| **l).map(|(s, _)| s).collect();
        let fill: Vec<f64> =
            (0..n).map(|d| stats::median(&positives.iter().map(|s| s.pre[d]).collect::<Vec<_>>())).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pre = lift_preconditions(&premask, &factors, &symbols, &|x| tree.predict(x), &fill, cfg, &mut rng);
        if pre.is_empty() {
            log::warn!("skill `{}` has an empty symbolic precondition", p.name);
        }

        let outcomes = p
            .outcomes
            .iter()
            .enumerate()
            .map(|(j, o)| {
                let own: Vec<usize> = symbols
                    .iter()
                    .filter(|s| s.sources.iter().any(|src| src.skill == p.name && src.outcome == j + 1))
                    .map(|s| s.id)
                    .collect();
                let (eff_true, eff_false, eff_stay) =
                    compute_effect_sets(&o.mask, &own, &factors, &symbols, cfg.support_sigmas);
                Outcome { effmask: o.mask.clone(), eff_true, eff_false, eff_stay }
            })
            .collect();
        out_skills.push(Skill { name: sanitize(&p.name), premask, pre, outcomes });
    }
    Ok(Abstraction { dim: n, factors, symbols, skills: out_skills, support_sigmas: cfg.support_sigmas })
}

/// Maps a skill name onto the identifier alphabet of the spec format.
pub fn sanitize(name: &str) -> String {
    let mut s: String =
        name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect();
    if s.is_empty() || !s.as_bytes()[0].is_ascii_alphabetic() && s.as_bytes()[0] != b'_' {
        s.insert(0, '_');
    }
    s
}

/// Text table of symbol groundings.
pub fn grounding_summary(a: &Abstraction) -> String {
    let mut out = String::from("symbol  factor  vars        kind      mean / std\n");
    for s in &a.symbols {
        let vars = format!("{:?}", a.factors[s.factor].vars);
        let kind = match s.grounding {
            Grounding::Gaussian { .. } => "gaussian",
            Grounding::Kde { .. } => "kde",
        };
        let ms: Vec<String> =
            s.grounding.mean().iter().zip(s.grounding.std()).map(|(m, sd)| format!("{m:.3}±{sd:.3}")).collect();
        out.push_str(&format!("{:<7} {:<7} {:<11} {:<9} {}\n", s.name, s.factor, vars, kind, ms.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests;
