//! File formats, workspace loading and the commands behind the `troplift`
//! binary. Commands return typed reports; `run` renders them.

pub mod commands;
pub mod format;
pub mod report;
pub mod workspace;

pub use commands::*;
pub use report::{exit_code, Render};
pub use workspace::Workspace;

use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    Lift,
    Index,
    PushSub,
    PullSub,
    Hilbert,
    Monoid,
    Wall,
    ScatterPush,
    MirrorCheck,
}

/// Outcome of one invocation: exit code, text for stdout, JSON for --out
/// and a diagnostic for stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Option<String>,
    pub error: Option<String>,
}

fn done<R: Render>(r: troplift_core::Result<R>) -> Outcome {
    match r {
        Ok(r) => Outcome { code: r.code(), text: r.text(), json: Some(r.json()), error: None },
        Err(e) => Outcome { code: exit_code(&e), text: String::new(), json: None, error: Some(e.to_string()) },
    }
}

pub fn run_on(cmd: Command, ws: &Workspace, sel: &Selection) -> Outcome {
    match cmd {
        Command::Validate => done(cmd_validate(ws)),
        Command::Lift => done(cmd_lift(ws, sel)),
        Command::Index => done(cmd_index(ws, sel)),
        Command::PushSub => done(cmd_push_sub(ws, sel)),
        Command::PullSub => done(cmd_pull_sub(ws, sel)),
        Command::Hilbert => done(cmd_hilbert(ws, sel)),
        Command::Monoid => done(cmd_monoid(ws, sel)),
        Command::Wall => done(cmd_wall(ws, sel)),
        Command::ScatterPush => done(cmd_scatter_push(ws, sel)),
        Command::MirrorCheck => done(cmd_mirror_check(ws, sel)),
    }
}

/// Loads every file, then runs the command. Nothing is rendered when
/// loading fails.
pub fn run<P: AsRef<Path>>(cmd: Command, files: &[P], sel: &Selection) -> Outcome {
    match Workspace::load_files(files) {
        Ok(ws) => run_on(cmd, &ws, sel),
        Err(e) => Outcome { code: exit_code(&e), text: String::new(), json: None, error: Some(e.to_string()) },
    }
}
