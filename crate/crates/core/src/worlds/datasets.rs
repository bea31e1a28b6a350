//! Synthetic transition datasets with known generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::abstraction::TransitionSample;

/// Sensor noise added to every recorded coordinate.
pub const MEASUREMENT_SD: f64 = 0.005;
/// Spread of each landing location.
pub const LANDING_SD: f64 = 0.02;

fn gauss(rng: &mut ChaCha8Rng, mean: f64, sd: f64) -> f64 {
    Normal::new(mean, sd).unwrap().sample(rng)
}

fn measure(rng: &mut ChaCha8Rng, v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| gauss(rng, x, MEASUREMENT_SD)).collect()
}

fn sample(pre: Vec<f64>, skill: &str, post: Vec<f64>, applicable: &[&str]) -> TransitionSample {
    TransitionSample {
        pre,
        skill: skill.to_string(),
        post,
        applicable: applicable.iter().map(|s| s.to_string()).collect(),
    }
}

/// Two-dimensional world with skills `a1` and `a2`.
///
/// `a1` fires when x1 is near 0.2 and x2 is low. Half of its executions move
/// to (0.5, 0.85); the rest move x1 to 0.8 and leave x2 alone. `a2` fires
/// whenever x1 is at 0.5 or 0.8 and returns to (0.2, 0.15). Attempts of `a1`
/// with a high x2 are recorded as inapplicable.
pub fn fig1(seed: u64) -> Vec<TransitionSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..60 {
        let pre = vec![gauss(&mut rng, 0.2, LANDING_SD), rng.random_range(0.1..0.4)];
        let post = if rng.random_bool(0.5) {
            vec![gauss(&mut rng, 0.5, LANDING_SD), gauss(&mut rng, 0.85, LANDING_SD)]
        } else {
            vec![gauss(&mut rng, 0.8, LANDING_SD), pre[1]]
        };
        let (pre, post) = (measure(&mut rng, &pre), measure(&mut rng, &post));
        out.push(sample(pre, "a1", post, &["a1"]));
    }
    for _ in 0..60 {
        let x1 = if rng.random_bool(0.5) { 0.5 } else { 0.8 };
        let pre = vec![gauss(&mut rng, x1, LANDING_SD), rng.random_range(0.3..0.95)];
        let post = vec![gauss(&mut rng, 0.2, LANDING_SD), gauss(&mut rng, 0.15, LANDING_SD)];
        let (pre, post) = (measure(&mut rng, &pre), measure(&mut rng, &post));
        out.push(sample(pre, "a2", post, &["a2"]));
    }
    for _ in 0..30 {
        let pre = vec![gauss(&mut rng, 0.2, LANDING_SD), rng.random_range(0.5..0.95)];
        let (m, post) = (measure(&mut rng, &pre), measure(&mut rng, &pre));
        out.push(sample(m, "a1", post, &[]));
    }
    out
}

/// Named locations on the x track of [`track`].
pub const LOC_A: f64 = 0.1;
pub const LOC_C: f64 = 0.3;
pub const LOC_D: f64 = 0.5;
pub const LOC_E: f64 = 0.7;

/// A block on a track (x) with a gripper height (y) and a lid (z).
///
/// * `to_a` from D moves x to A; from E it also opens the lid.
/// * `to_d` from A moves x to D; from C it also lowers the gripper.
/// * `to_c` moves A to C, `to_e` moves D to E.
/// * `c_to_b` raises the gripper and only works with the block at C.
pub fn track(seed: u64, per_case: usize) -> Vec<TransitionSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let applicable = |x: f64| -> Vec<&'static str> {
        let near = |l: f64| (x - l).abs() < 0.1;
        let mut v = Vec::new();
        if near(LOC_D) || near(LOC_E) {
            v.push("to_a");
        }
        if near(LOC_A) || near(LOC_C) {
            v.push("to_d");
        }
        if near(LOC_A) {
            v.push("to_c");
        }
        if near(LOC_D) {
            v.push("to_e");
        }
        if near(LOC_C) {
            v.push("c_to_b");
        }
        v
    };
    let mut out = Vec::new();
    let mut push = |rng: &mut ChaCha8Rng, skill: &str, pre: Vec<f64>, post: Vec<f64>| {
        let app = applicable(pre[0]);
        let (pre, post) = (measure(rng, &pre), measure(rng, &post));
        out.push(sample(pre, skill, post, &app));
    };
    for _ in 0..per_case {
        let (y, z) = (rng.random_range(0.2..0.9), rng.random_range(0.1..0.9));
        let pre = vec![gauss(&mut rng, LOC_D, LANDING_SD), y, z];
        let post = vec![gauss(&mut rng, LOC_A, LANDING_SD), y, z];
        push(&mut rng, "to_a", pre, post);

        let (y, z) = (rng.random_range(0.2..0.9), rng.random_range(0.1..0.4));
        let pre = vec![gauss(&mut rng, LOC_E, LANDING_SD), y, z];
        let post = vec![gauss(&mut rng, LOC_A, LANDING_SD), y, gauss(&mut rng, 0.8, LANDING_SD)];
        push(&mut rng, "to_a", pre, post);

        let (y, z) = (rng.random_range(0.2..0.9), rng.random_range(0.1..0.9));
        let pre = vec![gauss(&mut rng, LOC_A, LANDING_SD), y, z];
        let post = vec![gauss(&mut rng, LOC_D, LANDING_SD), y, z];
        push(&mut rng, "to_d", pre, post);

        let (y, z) = (rng.random_range(0.2..0.9), rng.random_range(0.1..0.9));
        let pre = vec![gauss(&mut rng, LOC_C, LANDING_SD), y, z];
        let post = vec![gauss(&mut rng, LOC_D, LANDING_SD), gauss(&mut rng, 0.05, LANDING_SD), z];
        push(&mut rng, "to_d", pre, post);

        let (y, z) = (rng.random_range(0.2..0.9), rng.random_range(0.1..0.9));
        let pre = vec![gauss(&mut rng, LOC_A, LANDING_SD), y, z];
        let post = vec![gauss(&mut rng, LOC_C, LANDING_SD), y, z];
        push(&mut rng, "to_c", pre, post);

        let (y, z) = (rng.random_range(0.2..0.9), rng.random_range(0.1..0.9));
        let pre = vec![gauss(&mut rng, LOC_D, LANDING_SD), y, z];
        let post = vec![gauss(&mut rng, LOC_E, LANDING_SD), y, z];
        push(&mut rng, "to_e", pre, post);

        let (y, z) = (rng.random_range(0.2..0.7), rng.random_range(0.1..0.9));
        let pre = vec![gauss(&mut rng, LOC_C, LANDING_SD), y, z];
        let post = vec![pre[0], gauss(&mut rng, 0.95, LANDING_SD), z];
        push(&mut rng, "c_to_b", pre, post);
    }
    out
}

/// Skill `hop` whose landing site on x is one of two modes `sep` standard
/// deviations apart; y only carries sensor noise. Returns the samples and
/// the generating mode of each.
pub fn bimodal(seed: u64, n: usize, sep: f64) -> (Vec<TransitionSample>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sd = LANDING_SD;
    let mut data = Vec::new();
    let mut modes = Vec::new();
    for _ in 0..n {
        let mode = usize::from(rng.random_bool(0.5));
        let y = rng.random_range(0.0..1.0);
        let pre = [gauss(&mut rng, 0.0, sd), y];
        let post = [gauss(&mut rng, 0.5 + mode as f64 * sep * sd, sd), y];
        let (pre, post) = (measure(&mut rng, &pre), measure(&mut rng, &post));
        data.push(sample(pre, "hop", post, &["hop"]));
        modes.push(mode);
    }
    (data, modes)
}
