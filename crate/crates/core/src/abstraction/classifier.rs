//! Axis-aligned decision tree used as the applicability classifier, plus
//! permutation feature importance for precondition masks.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Tree {
    Leaf(bool),
    Split { feature: usize, threshold: f64, below: Box<Tree>, above: Box<Tree> },
}

impl Tree {
    pub fn predict(&self, x: &[f64]) -> bool {
        match self {
            Tree::Leaf(v) => *v,
            Tree::Split { feature, threshold, below, above } => {
                if x[*feature] <= *threshold {
                    below.predict(x)
                } else {
                    above.predict(x)
                }
            }
        }
    }

    /// Features the tree actually tests.
    pub fn features(&self, out: &mut Vec<usize>) {
        if let Tree::Split { feature, below, above, .. } = self {
            if !out.contains(feature) {
                out.push(*feature);
            }
            below.features(out);
            above.features(out);
        }
    }
}

fn gini(pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    2.0 * p * (1.0 - p)
}

/// Fits a Gini tree on the given features only.
pub fn fit(xs: &[Vec<f64>], ys: &[bool], features: &[usize], max_depth: usize) -> Tree {
    let idx: Vec<usize> = (0..xs.len()).collect();
    grow(xs, ys, &idx, features, max_depth)
}

fn grow(xs: &[Vec<f64>], ys: &[bool], idx: &[usize], features: &[usize], depth: usize) -> Tree {
    let pos = idx.iter().filter(|&&i| ys[i]).count();
    let majority = pos * 2 >= idx.len() && pos > 0;
    if pos == 0 || pos == idx.len() || depth == 0 {
        return Tree::Leaf(majority);
    }
    let parent = gini(pos, idx.len());
    let mut best: Option<(f64, usize, f64)> = None;
    for &f in features {
        let mut order: Vec<usize> = idx.to_vec();
        order.sort_by(|&a, &b| xs[a][f].total_cmp(&xs[b][f]));
        let mut left_pos = 0;
        for k in 0..order.len() - 1 {
            if ys[order[k]] {
                left_pos += 1;
            }
            let (v, w) = (xs[order[k]][f], xs[order[k + 1]][f]);
            if v == w {
                continue;
            }
            let nl = k + 1;
            let nr = order.len() - nl;
            let imp = (nl as f64 * gini(left_pos, nl) + nr as f64 * gini(pos - left_pos, nr)) / order.len() as f64;
            if best.is_none_or(|b| imp < b.0 - 1e-12) {
                best = Some((imp, f, 0.5 * (v + w)));
            }
        }
    }
    match best {
        Some((imp, f, t)) if imp < parent - 1e-12 => {
            let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| xs[i][f] <= t);
            Tree::Split {
                feature: f,
                threshold: t,
                below: Box::new(grow(xs, ys, &l, features, depth - 1)),
                above: Box::new(grow(xs, ys, &r, features, depth - 1)),
            }
        }
        _ => Tree::Leaf(majority),
    }
}

pub fn accuracy(tree: &Tree, xs: &[Vec<f64>], ys: &[bool]) -> f64 {
    if xs.is_empty() {
        return 1.0;
    }
    xs.iter().zip(ys).filter(|(x, y)| tree.predict(x) == **y).count() as f64 / xs.len() as f64
}

/// Mean accuracy drop when one feature column is shuffled, per feature.
pub fn permutation_importance(tree: &Tree, xs: &[Vec<f64>], ys: &[bool], repeats: usize, seed: u64) -> Vec<f64> {
    let dim = xs.first().map_or(0, |x| x.len());
    let base = accuracy(tree, xs, ys);
    let mut used = Vec::new();
    tree.features(&mut used);
    (0..dim)
        .map(|f| {
            if !used.contains(&f) {
                return 0.0;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (f as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut drop = 0.0;
            for _ in 0..repeats {
                let mut col: Vec<f64> = xs.iter().map(|x| x[f]).collect();
                col.shuffle(&mut rng);
                let permuted: Vec<Vec<f64>> = xs
                    .iter()
                    .zip(&col)
                    .map(|(x, v)| {
                        let mut x = x.clone();
                        x[f] = *v;
                        x
                    })
                    .collect();
                drop += base - accuracy(tree, &permuted, ys);
            }
            drop / repeats as f64
        })
        .collect()
}
