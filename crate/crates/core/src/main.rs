//! Command-line front end: learn, encode, synthesize, repair, simulate.
//!
//! Exit codes: 0 realizable or ok, 2 unrealizable or no repair found,
//! 1 error.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use skillsynth::abstraction::{learn, read_dataset, Abstraction};
use skillsynth::config::Config;
use skillsynth::encoder::{annotate, assemble, is_encoded, Domain, EncodeOptions};
use skillsynth::logic::Gr1Spec;
use skillsynth::repair_enum::{self, EnumConfig, Suggestion};
use skillsynth::repair_synth::{self, RepairConfig, SynthSuggestion};
use skillsynth::runtime::{check_trace, execute, EnvSource, FairEnv, RandomEnv, ScriptedEnv};
use skillsynth::specformat::{parse, parse_task, serialize};
use skillsynth::synthesis::{solve, Outcome, Strategy};
use skillsynth::{Error, Result};

#[derive(Parser)]
#[command(name = "skillsynth", version, about = "Learn skill abstractions, synthesize and repair GR(1) controllers")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Log progress to stderr (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Learn an abstraction from a JSON-lines transition dataset.
    Learn {
        dataset: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compile an abstraction and a task file into a full specification.
    Encode {
        abstraction: PathBuf,
        task: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Decide realizability; write a strategy or counter-strategy.
    Synth {
        spec: PathBuf,
        #[arg(long)]
        strategy: Option<PathBuf>,
        #[arg(long)]
        counterstrategy: Option<PathBuf>,
        /// Graphviz output of whichever automaton was built.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Enumeration-based repair.
    RepairEnum {
        spec: PathBuf,
        #[arg(long)]
        n_skills: Option<usize>,
        #[arg(long)]
        max: Option<usize>,
        /// Seconds.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Synthesis-based repair.
    RepairSynth {
        spec: PathBuf,
        #[arg(long)]
        extra_skills: Option<usize>,
        #[arg(long)]
        max: Option<usize>,
        /// Seconds.
        #[arg(long)]
        budget: Option<f64>,
        /// Restrict without user-variable neutrality.
        #[arg(long)]
        legacy: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a strategy against an environment and write a JSON-lines trace.
    Simulate {
        strategy: PathBuf,
        /// `random`, `fair`, or a JSON file of observations.
        #[arg(long, default_value = "random")]
        env: String,
        #[arg(long)]
        steps: Option<usize>,
        /// Specification, needed for `fair` and for checking the trace.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Abstraction for grounding continuous observations.
        #[arg(long)]
        abstraction: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render a suggestion file.
    Report {
        suggestions: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AnySuggestion {
    Synthesis(SynthSuggestion),
    Enumeration(Suggestion),
}

/// Suggestion report as written by the repair commands.
#[derive(Serialize, Deserialize)]
struct SuggestionFile {
    domain: Domain,
    suggestions: Vec<AnySuggestion>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Parses a full specification and restores proposition roles.
fn load_spec(path: &Path) -> Result<Gr1Spec> {
    let mut spec = parse(&read(path)?)?;
    if is_encoded(&spec) {
        annotate(&mut spec);
    }
    Ok(spec)
}

fn secs(s: Option<f64>) -> Option<Duration> {
    s.map(Duration::from_secs_f64)
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    match cli.cmd {
        Cmd::Learn { dataset, output } => {
            let f = fs::File::open(&dataset).map_err(|e| Error::Config(format!("{}: {e}", dataset.display())))?;
            let data = read_dataset(BufReader::new(f))?;
            let mut lc = cfg.learn.clone();
            lc.seed = seed;
            let a = learn(&data, &lc)?;
            write(&output, &a.to_json()?)?;
            eprintln!("{} symbols, {} skills", a.symbols.len(), a.skills.len());
        }
        Cmd::Encode { abstraction, task, output } => {
            let a = Abstraction::from_json(&read(&abstraction)?)?;
            let t = parse_task(&read(&task)?)?;
            let spec = assemble(&Domain::from_abstraction(&a), &t, EncodeOptions::default())?;
            write(&output, &serialize(&spec))?;
        }
        Cmd::Synth { spec, strategy, counterstrategy, dot } => match solve(&load_spec(&spec)?)? {
            Outcome::Realizable(st) => {
                println!("realizable: strategy with {} states", st.states.len());
                if let Some(p) = strategy {
                    write(&p, &st.to_json()?)?;
                }
                if let Some(p) = dot {
                    write(&p, &st.to_dot())?;
                }
            }
            Outcome::Unrealizable(cs) => {
                println!("unrealizable: counter-strategy with {} states, {} dead ends", cs.states.len(), cs.q_not().len());
                if let Some(p) = counterstrategy {
                    write(&p, &cs.to_json()?)?;
                }
                if let Some(p) = dot {
                    write(&p, &cs.to_dot())?;
                }
                return Ok(ExitCode::from(2));
            }
        },
        Cmd::RepairEnum { spec, n_skills, max, budget, output } => {
            let spec = load_spec(&spec)?;
            let ec = EnumConfig {
                n_new_skills: n_skills.unwrap_or(cfg.repair_enum.n_skills),
                max_suggestions: max.or(cfg.repair_enum.max),
                budget: secs(budget.or(cfg.repair_enum.budget_secs)),
            };
            let r = repair_enum::repair(&spec, &ec)?;
            eprintln!("{} suggestions from {} combinations{}", r.suggestions.len(), r.combinations_checked, if r.timed_out { " (budget reached)" } else { "" });
            let found = !r.suggestions.is_empty();
            let file = SuggestionFile { domain: Domain::from_spec(&spec)?, suggestions: r.suggestions.into_iter().map(AnySuggestion::Enumeration).collect() };
            emit(&output, &(serde_json::to_string_pretty(&file)? + "\n"))?;
            return Ok(ExitCode::from(if found { 0 } else { 2 }));
        }
        Cmd::RepairSynth { spec, extra_skills, max, budget, legacy, output } => {
            let spec = load_spec(&spec)?;
            let rc = RepairConfig {
                n_extra_skills: extra_skills.unwrap_or(cfg.repair_synth.extra_skills),
                max_suggestions: max.or(cfg.repair_synth.max),
                budget: secs(budget.or(cfg.repair_synth.budget_secs)),
                legacy: legacy || cfg.repair_synth.legacy,
            };
            let r = repair_synth::enumerate_suggestions(&spec, &rc)?;
            eprintln!("{} suggestions after {} attempts", r.suggestions.len(), r.attempts);
            if r.irreparable.is_some() {
                eprintln!("no repair found that leaves the environment assumptions intact");
            }
            let found = !r.suggestions.is_empty();
            let file = SuggestionFile { domain: Domain::from_spec(&spec)?, suggestions: r.suggestions.into_iter().map(AnySuggestion::Synthesis).collect() };
            emit(&output, &(serde_json::to_string_pretty(&file)? + "\n"))?;
            return Ok(ExitCode::from(if found { 0 } else { 2 }));
        }
        Cmd::Simulate { strategy, env, steps, spec, abstraction, output } => {
            let st = Strategy::from_json(&read(&strategy)?)?;
            let spec = spec.map(|p| load_spec(&p)).transpose()?;
            let abs = abstraction.map(|p| read(&p).and_then(|t| Abstraction::from_json(&t))).transpose()?;
            let mut source: Box<dyn EnvSource> = match env.as_str() {
                "random" => Box::new(RandomEnv::new(seed)),
                "fair" => {
                    let s = spec.as_ref().ok_or_else(|| Error::Config("--env fair needs --spec".into()))?;
                    Box::new(FairEnv::new(s, seed, cfg.simulate.fair_k))
                }
                path => Box::new(ScriptedEnv::from_json(&read(Path::new(path))?)?),
            };
            let trace = execute(&st, source.as_mut(), steps.unwrap_or(cfg.simulate.steps), abs.as_ref())?;
            emit(&output, &trace.to_jsonl())?;
            if let Some(v) = &trace.violation {
                eprintln!("stopped: {v}");
            }
            if let Some(s) = &spec {
                let v = check_trace(s, &trace, cfg.simulate.window);
                for w in &v.warnings {
                    eprintln!("warning: {w}");
                }
                for x in &v.safety {
                    eprintln!("violation at step {}: [{}] {}", x.step, x.section, x.formula);
                }
                for r in v.liveness.iter().filter(|r| !r.ok) {
                    eprintln!("goal `{}` not seen within {} steps", r.goal, cfg.simulate.window);
                }
                if !v.passed() {
                    return Ok(ExitCode::from(2));
                }
            }
        }
        Cmd::Report { suggestions, format } => {
            let file: SuggestionFile = serde_json::from_str(&read(&suggestions)?)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&file)?),
                Format::Text => {
                    for (k, s) in file.suggestions.iter().enumerate() {
                        let (text, verified) = match s {
                            AnySuggestion::Synthesis(s) => (s.render(&file.domain), s.verified),
                            AnySuggestion::Enumeration(s) => (s.render(), s.verified),
                        };
                        println!("suggestion {}{}:\n{text}", k + 1, if verified { "" } else { " (unverified)" });
                    }
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
