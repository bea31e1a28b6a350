//! Three vials (green, red, yellow) moved between a yellow rack with four
//! slots and a white rack with two. Symbol `s{6v + l}` means vial `v` is at
//! location `l`: 0 right-bottom, 1 right-top, 2 top-left, 3 top-right
//! (yellow rack), 4 rack-left, 5 rack-right (white rack).

use super::builder::Builder;
use super::{literals, TaskText, World};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Realizable base task.
    Base,
    /// Red and green may not share the white rack either.
    Apart,
}

pub const VIALS: [&str; 3] = ["green", "red", "yellow"];
const LOC_NAMES: [&str; 6] = ["rb", "rt", "tl", "tr", "wl", "wr"];
const LOC_XY: [[f64; 2]; 6] = [[0.8, 0.1], [0.8, 0.3], [0.3, 0.8], [0.5, 0.8], [0.1, 0.1], [0.3, 0.1]];

pub fn sym(vial: usize, loc: usize) -> String {
    format!("s{}", 6 * vial + loc)
}

pub fn skill_name(vial: usize, src: usize, dst: usize) -> String {
    format!("{}_{}_to_{}", VIALS[vial], LOC_NAMES[src], LOC_NAMES[dst])
}

pub fn abstraction() -> crate::abstraction::Abstraction {
    let mut b = Builder::new();
    for v in 0..3 {
        let f = b.factor(2);
        for (l, xy) in LOC_XY.iter().enumerate() {
            b.symbol(&sym(v, l), f, xy);
        }
    }
    for v in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&o| o != v).collect();
        let moves = (0..4).flat_map(|y| [(y, 4), (y, 5), (4, y), (5, y)]);
        let mut all: Vec<(usize, usize)> = moves.collect();
        all.sort_unstable();
        for (src, dst) in all {
            let free: Vec<usize> = (0..6).filter(|&l| l != src && l != dst).collect();
            let mut pre = Vec::new();
            for &a in &free {
                for &c in &free {
                    if a != c {
                        pre.push(vec![sym(v, src), sym(others[0], a), sym(others[1], c)]);
                    }
                }
            }
            b.skill(&skill_name(v, src, dst), &pre, &[vec![sym(v, dst)]]);
        }
    }
    b.build()
}

fn pair(a: &str, b: &str) -> [String; 2] {
    [format!("!({a} & {b})"), format!("!({a}' & {b}')")]
}

pub fn world(variant: Variant) -> World {
    let abstraction = abstraction();
    let symbols: Vec<String> = abstraction.symbols.iter().map(|s| s.name.clone()).collect();
    let skills: Vec<String> = abstraction.skills.iter().map(|s| s.name.clone()).collect();
    let mut env_init = literals(&symbols, &["s0", "s15", "s8"]);
    env_init += "!react\n";
    let mut hard = Vec::new();
    // Red and green never share a yellow rack.
    for (g, r) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
        hard.extend(pair(&sym(0, g), &sym(1, r)));
    }
    // One vial per location.
    for l in 0..6 {
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            hard.extend(pair(&sym(a, l), &sym(b, l)));
        }
    }
    if variant == Variant::Apart {
        hard.extend(pair(&sym(0, 4), &sym(1, 5)));
        hard.extend(pair(&sym(0, 5), &sym(1, 4)));
    }
    let task = TaskText {
        inputs: &["react"],
        outputs: &["extra1", "extra2", "extra3"],
        env_init,
        skills,
        hard: &hard,
        sys_liveness: &["react -> s8 & s15 & s0", "!react -> s2 & s13 & s6"],
        env_liveness: &[],
    }
    .render();
    World { name: format!("vials-{variant:?}").to_lowercase(), abstraction, task }
}
