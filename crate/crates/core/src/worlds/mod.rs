//! Pinned example worlds: small synthetic datasets for the learner and
//! hand-built abstractions with task files for synthesis and repair.

pub mod blocks;
pub mod builder;
pub mod datasets;
pub mod plates;
pub mod vials;

use crate::abstraction::Abstraction;
use crate::encoder::{assemble, Domain, EncodeOptions};
use crate::logic::Gr1Spec;
use crate::specformat::parse_task;
use crate::Result;

/// An abstraction paired with a task file.
#[derive(Clone, Debug)]
pub struct World {
    pub name: String,
    pub abstraction: Abstraction,
    pub task: String,
}

impl World {
    pub fn domain(&self) -> Domain {
        Domain::from_abstraction(&self.abstraction)
    }

    pub fn task_spec(&self) -> Result<Gr1Spec> {
        Ok(parse_task(&self.task)?)
    }

    /// The assembled specification with default options.
    pub fn spec(&self) -> Result<Gr1Spec> {
        assemble(&self.domain(), &self.task_spec()?, EncodeOptions::default())
    }
}

/// One literal per line, true for names in `holding`.
fn literals(names: &[String], holding: &[&str]) -> String {
    names
        .iter()
        .map(|n| if holding.contains(&n.as_str()) { format!("{n}\n") } else { format!("!{n}\n") })
        .collect()
}

/// Section text shared by every world: declarations, initial state with
/// every skill idle, and generated-region placeholders.
struct TaskText<'a> {
    inputs: &'a [&'a str],
    outputs: &'a [&'a str],
    env_init: String,
    skills: Vec<String>,
    hard: &'a [String],
    sys_liveness: &'a [&'a str],
    env_liveness: &'a [&'a str],
}

impl TaskText<'_> {
    fn render(&self) -> String {
        let lines = |v: &[&str]| v.iter().map(|l| format!("{l}\n")).collect::<String>();
        let mut idle: Vec<String> = self.skills.clone();
        idle.extend(self.outputs.iter().map(|s| s.to_string()));
        let mut t = String::new();
        t += &format!("[INPUT]\n# auto:symbols\n{}\n", lines(self.inputs));
        t += &format!("[OUTPUT]\n# auto:skills\n{}\n", lines(self.outputs));
        t += &format!("[ENV_INIT]\n{}\n", self.env_init);
        t += &format!("[SYS_INIT]\n{}\n", literals(&idle, &[]));
        t += "[ENV_TRANS]\n# auto:eff\n# auto:noact\n# auto:mutex\n\n";
        t += "[SYS_TRANS]\n# auto:pre\n\n";
        t += "[SYS_TRANS_HARD]\n# auto:mutex\n";
        for h in self.hard {
            t += &format!("{h}\n");
        }
        t += &format!("\n[SYS_LIVENESS]\n{}\n", lines(self.sys_liveness));
        t += &format!("[ENV_LIVENESS]\n{}", lines(self.env_liveness));
        t
    }
}
