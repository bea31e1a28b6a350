//! Small statistics kit: two-sample Kolmogorov-Smirnov, Jarque-Bera,
//! cross-validated KDE bandwidths and Ward-linkage clustering.

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population variance.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Two-sample KS statistic `D = sup |F_a - F_b|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Survival function of the Kolmogorov distribution.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = 2.0 * (-1f64).powi(j - 1) * (-2.0 * jf * jf * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

/// Asymptotic p-value of the two-sample KS test (with the usual
/// small-sample correction on the scaling factor).
pub fn ks_pvalue(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 1.0;
    }
    let d = ks_statistic(a, b);
    let ne = (a.len() * b.len()) as f64 / (a.len() + b.len()) as f64;
    let s = ne.sqrt();
    kolmogorov_q((s + 0.12 + 0.11 / s) * d)
}

/// Jarque-Bera normality test p-value (chi-square with two degrees of
/// freedom, whose survival function is `exp(-x/2)`).
pub fn jarque_bera_pvalue(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 8 {
        return 1.0;
    }
    let m = mean(xs);
    let m2 = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    if m2 <= 0.0 {
        return 1.0;
    }
    let m3 = xs.iter().map(|x| (x - m).powi(3)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
    let skew = m3 / m2.powf(1.5);
    let kurt = m4 / (m2 * m2);
    let jb = n / 6.0 * (skew * skew + (kurt - 3.0).powi(2) / 4.0);
    (-jb / 2.0).exp()
}

/// Mean held-out log-likelihood of a product-Gaussian KDE with bandwidths
/// `h` under k-fold splitting by index modulo `k`.
fn kde_cv_loglik(points: &[Vec<f64>], h: &[f64], k: usize) -> f64 {
    let dim = h.len();
    let log_norm: f64 = h.iter().map(|hd| -(hd * (2.0 * std::f64::consts::PI).sqrt()).ln()).sum();
    let mut total = 0.0;
    let mut count = 0usize;
    for fold in 0..k {
        let train: Vec<&Vec<f64>> = points.iter().enumerate().filter(|(i, _)| i % k != fold).map(|(_, p)| p).collect();
        if train.is_empty() {
            continue;
        }
        for (_, p) in points.iter().enumerate().filter(|(i, _)| i % k == fold) {
            // log-sum-exp over training kernels
            let logs: Vec<f64> = train
                .iter()
                .map(|t| {
                    let mut e = 0.0;
                    for d in 0..dim {
                        let z = (p[d] - t[d]) / h[d];
                        e -= 0.5 * z * z;
                    }
                    e + log_norm
                })
                .collect();
            let mx = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let s: f64 = logs.iter().map(|l| (l - mx).exp()).sum();
            total += mx + (s / train.len() as f64).ln();
            count += 1;
        }
    }
    if count == 0 {
        f64::NEG_INFINITY
    } else {
        total / count as f64
    }
}

/// Per-dimension KDE bandwidths: Silverman's rule scaled by the factor from
/// a fixed grid that maximises 3-fold cross-validated likelihood.
pub fn kde_bandwidth_cv(points: &[Vec<f64>], floor: f64) -> Vec<f64> {
    let dim = points.first().map_or(0, |p| p.len());
    let n = points.len().max(1) as f64;
    let base: Vec<f64> = (0..dim)
        .map(|d| {
            let col: Vec<f64> = points.iter().map(|p| p[d]).collect();
            let sd = variance(&col).sqrt().max(floor.sqrt());
            1.06 * sd * n.powf(-0.2)
        })
        .collect();
    const GRID: [f64; 9] = [0.125, 0.25, 0.4, 0.6, 0.8, 1.0, 1.5, 2.0, 3.0];
    let mut best = (f64::NEG_INFINITY, 1.0);
    for &g in &GRID {
        let h: Vec<f64> = base.iter().map(|b| b * g).collect();
        let ll = kde_cv_loglik(points, &h, 3);
        if ll > best.0 {
            best = (ll, g);
        }
    }
    base.iter().map(|b| b * best.1).collect()
}

/// Ward-linkage agglomerative clustering that keeps the finest cut in which
/// every pair of clusters is separated: for some dimension the centroid gap
/// exceeds `gap` times the pair's pooled standard deviation (floored at
/// `sd_floor`) and no two points of the pair lie closer than one pooled
/// standard deviation. Returns cluster labels in order of first appearance.
pub fn ward_clusters(points: &[Vec<f64>], gap: f64, sd_floor: f64, max_k: usize) -> Vec<usize> {
    let n = points.len();
    if n <= 1 {
        return vec![0; n];
    }
    let dim = points[0].len();
    // Full dendrogram, recording the membership after each merge.
    let mut members: Vec<Option<Vec<usize>>> = (0..n).map(|i| Some(vec![i])).collect();
    let mut cent: Vec<Vec<f64>> = points.to_vec();
    let mut size: Vec<f64> = vec![1.0; n];
    let mut cuts: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut active = n;
    while active > 1 {
        if active <= max_k {
            cuts.push(members.iter().flatten().cloned().collect());
        }
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..n {
            if members[a].is_none() {
                continue;
            }
            for b in a + 1..n {
                if members[b].is_none() {
                    continue;
                }
                let d2: f64 = (0..dim).map(|d| (cent[a][d] - cent[b][d]).powi(2)).sum();
                let cost = size[a] * size[b] / (size[a] + size[b]) * d2;
                if cost < best.0 {
                    best = (cost, a, b);
                }
            }
        }
        let (_, a, b) = best;
        let mb = members[b].take().unwrap();
        let total = size[a] + size[b];
        let cb = cent[b].clone();
        for (x, y) in cent[a].iter_mut().zip(&cb) {
            *x = (*x * size[a] + y * size[b]) / total;
        }
        size[a] = total;
        members[a].as_mut().unwrap().extend(mb);
        active -= 1;
    }
    cuts.push(members.iter().flatten().cloned().collect());

    let separated = |x: &[usize], y: &[usize]| -> bool {
        (0..dim).any(|d| {
            let cx: Vec<f64> = x.iter().map(|&i| points[i][d]).collect();
            let cy: Vec<f64> = y.iter().map(|&i| points[i][d]).collect();
            let pooled = ((variance(&cx) * cx.len() as f64 + variance(&cy) * cy.len() as f64)
                / (cx.len() + cy.len()) as f64)
                .sqrt()
                .max(sd_floor);
            let (lo, hi) = if mean(&cx) < mean(&cy) { (&cx, &cy) } else { (&cy, &cx) };
            let inner = hi.iter().copied().fold(f64::INFINITY, f64::min) - lo.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (mean(&cx) - mean(&cy)).abs() > gap * pooled && inner > pooled
        })
    };
    // `cuts` runs from finest to coarsest.
    let chosen = cuts
        .iter()
        .find(|cut| (0..cut.len()).all(|i| (i + 1..cut.len()).all(|j| separated(&cut[i], &cut[j]))))
        .cloned()
        .unwrap_or_else(|| vec![(0..n).collect()]);

    let mut label = vec![usize::MAX; n];
    let mut order: Vec<&Vec<usize>> = chosen.iter().collect();
    order.sort_by_key(|c| *c.iter().min().unwrap());
    for (k, c) in order.iter().enumerate() {
        for &i in c.iter() {
            label[i] = k;
        }
    }
    label
}
