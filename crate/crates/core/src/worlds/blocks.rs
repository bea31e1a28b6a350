//! Three blocks on a table. Red and blue move between D, E, A and the top
//! of A (AT); green moves around F, G, C and B. Green positions are split
//! over two factors (x, and y/z), so B, C, F and G are combinations:
//! B = (x_B, yz_F), C = (x_C, yz_C), F = (x_F, yz_F), G = (x_C, yz_F).

use super::builder::Builder;
use super::{literals, TaskText, World};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Realizable base task.
    Base,
    /// Green may never be at B.
    NoB,
    /// Skill `green_c_to_b` may never run.
    NoCToB,
    /// Skill `green_c_to_b` removed.
    Missing,
    /// Skill `green_c_to_b` and symbol `green_x_b` removed.
    MissingB,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::Base, Variant::NoB, Variant::NoCToB, Variant::Missing, Variant::MissingB];
}

const LOCS: [&str; 4] = ["d", "e", "a", "at"];
const COORD: [f64; 4] = [0.1, 0.3, 0.5, 0.7];

fn other(c: &str) -> &'static str {
    if c == "red" {
        "blue"
    } else {
        "red"
    }
}

fn sym(c: &str, l: &str) -> String {
    format!("{c}_{l}")
}

/// Names of the red and blue skills with their precondition and landing.
fn color_skills(c: &str) -> Vec<(String, Vec<Vec<String>>, String)> {
    let o = other(c);
    let mut out = Vec::new();
    let pair = |src: &str, other_at: &str| vec![sym(c, src), sym(o, other_at)];
    // To A: the other block waits at the other table spot.
    for (src, o_at) in [("d", "e"), ("e", "d")] {
        out.push((format!("{c}_{src}_to_a"), vec![pair(src, o_at)], sym(c, "a")));
        out.push((format!("{c}_{src}_to_at"), vec![pair(src, "a")], sym(c, "at")));
    }
    // From A: the other block is not on top and the destination is free.
    for (dst, o_at) in [("d", "e"), ("e", "d")] {
        out.push((format!("{c}_a_to_{dst}"), vec![pair("a", o_at)], sym(c, dst)));
        out.push((format!("{c}_at_to_{dst}"), vec![pair("at", "a")], sym(c, dst)));
    }
    out
}

pub fn abstraction(variant: Variant) -> crate::abstraction::Abstraction {
    let mut b = Builder::new();
    for c in ["red", "blue"] {
        let f = b.factor(1);
        for (l, x) in LOCS.iter().zip(COORD) {
            b.symbol(&sym(c, l), f, &[x]);
        }
    }
    let gx = b.factor(1);
    if variant != Variant::MissingB {
        b.symbol("green_x_b", gx, &[0.1]);
    }
    b.symbol("green_x_c", gx, &[0.4]).symbol("green_x_f", gx, &[0.7]);
    let gyz = b.factor(2);
    b.symbol("green_yz_c", gyz, &[0.2, 0.05]).symbol("green_yz_f", gyz, &[0.5, 0.05]);

    for c in ["red", "blue"] {
        for (name, pre, eff) in color_skills(c) {
            b.skill(&name, &pre, &[vec![eff]]);
        }
    }
    b.skill(
        "green_f_to_c",
        &[vec!["green_x_f", "green_yz_f"]],
        &[vec!["green_x_c", "green_yz_c"], vec!["green_x_c"]],
    );
    b.skill("green_g_to_c", &[vec!["green_x_c", "green_yz_f"]], &[vec!["green_x_c", "green_yz_c"], vec!["green_x_c"]]);
    if matches!(variant, Variant::Base | Variant::NoB | Variant::NoCToB) {
        b.skill("green_c_to_b", &[vec!["green_x_c", "green_yz_c"]], &[vec!["green_x_b", "green_yz_f"]]);
    }
    if variant == Variant::MissingB {
        b.skill("green_b_to_f", &[] as &[Vec<&str>], &[vec!["green_x_f"]]);
    } else {
        b.skill("green_b_to_f", &[vec!["green_x_b", "green_yz_f"]], &[vec!["green_x_f"]]);
    }
    b.build()
}

pub fn world(variant: Variant) -> World {
    let abstraction = abstraction(variant);
    let symbols: Vec<String> = abstraction.symbols.iter().map(|s| s.name.clone()).collect();
    let skills: Vec<String> = abstraction.skills.iter().map(|s| s.name.clone()).collect();
    let mut env_init = literals(&symbols, &["red_d", "blue_e", "green_x_f", "green_yz_f"]);
    env_init += "!switch\n";
    let hard = match variant {
        Variant::NoB => vec!["!(green_x_b & green_yz_f)".to_string(), "!(green_x_b' & green_yz_f')".to_string()],
        Variant::NoCToB => vec!["!green_c_to_b".to_string(), "!green_c_to_b'".to_string()],
        _ => Vec::new(),
    };
    let task = TaskText {
        inputs: &["switch"],
        outputs: &["extra1"],
        env_init,
        skills,
        hard: &hard,
        sys_liveness: &[
            "switch -> red_a & blue_at & green_x_f & green_yz_f",
            "!switch -> red_at & blue_a & green_x_c & green_yz_c",
        ],
        env_liveness: &["green_g_to_c -> green_x_c & green_yz_c"],
    }
    .render();
    World { name: format!("blocks-{variant:?}").to_lowercase(), abstraction, task }
}
