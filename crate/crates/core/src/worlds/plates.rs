//! Two plates, blue and green, each clean, set on the table, or dirty. A
//! person of each colour may sit down or leave; a plate should be set
//! while its person is present and not set otherwise.

use super::builder::Builder;
use super::{literals, TaskText, World};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Realizable base task.
    Base,
    /// A plate must stay set while its person stays.
    Keep,
    /// As `Keep`, with setting skills that always succeed.
    KeepReliable,
}

const STATES: [&str; 3] = ["clean", "set", "dirty"];

pub fn abstraction(variant: Variant) -> crate::abstraction::Abstraction {
    let mut b = Builder::new();
    for c in ["blue", "green"] {
        let f = b.factor(2);
        for (i, s) in STATES.iter().enumerate() {
            b.symbol(&format!("{c}_{s}"), f, &[0.2 + 0.3 * i as f64, if c == "blue" { 0.2 } else { 0.6 }]);
        }
    }
    let flaky = variant != Variant::KeepReliable;
    let set_outcomes = |c: &str| {
        let mut o = vec![vec![format!("{c}_set")]];
        if flaky {
            o.push(Vec::new());
        }
        o
    };

    let bo = set_outcomes("blue");
    b.skill("blue_clean_to_set", &[vec!["blue_clean"]], &bo);
    b.skill("blue_set_to_dirty", &[vec!["blue_set", "green_clean"], vec!["blue_set", "green_dirty"]], &[vec!["blue_dirty"]]);
    b.skill("blue_dirty_to_clean", &[vec!["blue_dirty"]], &[vec!["blue_clean"]]);
    let go = set_outcomes("green");
    b.skill("green_clean_to_set", &[vec!["green_clean", "blue_clean"], vec!["green_clean", "blue_dirty"]], &go);
    b.skill("green_set_to_dirty", &[vec!["green_set"]], &[vec!["green_dirty"]]);
    b.skill("green_dirty_to_clean", &[vec!["green_dirty", "blue_set"]], &[vec!["green_clean"]]);
    b.build()
}

pub fn world(variant: Variant) -> World {
    let abstraction = abstraction(variant);
    let symbols: Vec<String> = abstraction.symbols.iter().map(|s| s.name.clone()).collect();
    let skills: Vec<String> = abstraction.skills.iter().map(|s| s.name.clone()).collect();
    let mut env_init = literals(&symbols, &["blue_clean", "green_clean"]);
    env_init += "!blue_person\n!green_person\n";
    let hard = match variant {
        Variant::Base => Vec::new(),
        _ => vec![
            "blue_person & blue_person' & blue_set -> blue_set'".to_string(),
            "green_person & green_person' & green_set -> green_set'".to_string(),
        ],
    };
    let task = TaskText {
        inputs: &["blue_person", "green_person"],
        outputs: &[],
        env_init,
        skills,
        hard: &hard,
        sys_liveness: &["blue_person -> blue_set", "green_person -> green_set", "!blue_person -> !blue_set", "!green_person -> !green_set"],
        env_liveness: &["blue_clean_to_set -> blue_set", "green_clean_to_set -> green_set"],
    }
    .render();
    World { name: format!("plates-{variant:?}").to_lowercase(), abstraction, task }
}
