//! Command-line front end: runs verification suites and renders reports.

#![deny(unsafe_code)]

pub mod args;
pub mod cache;
pub mod commands;
pub mod error;
pub mod report;

use std::time::Instant;

use serde_json::{json, Map, Value};
use spcodes_core::moments::WeightsRoute;

use args::{Cli, Command, RouteArg};
use commands::Session;
pub use error::CliError;

/// What a run prints and how it exits.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: Vec<String>,
    pub code: u8,
}

fn params(cli: &Cli) -> Map<String, Value> {
    let f = cli.command.field();
    let mut p = Map::new();
    p.insert("r".into(), json!(f.r));
    p.insert("modulus".into(), json!(f.modulus));
    match &cli.command {
        Command::Kloosterman { hmax, .. } => {
            p.insert("hmax".into(), json!(hmax));
        }
        Command::Group { which, .. } => {
            p.insert("which".into(), json!(spcodes_core::Which::from(*which).name()));
            p.insert("seed".into(), json!(cli.global.seed));
        }
        Command::Code { which, jmax, hmax, .. } => {
            p.insert("which".into(), json!(spcodes_core::Which::from(*which).name()));
            p.insert("jmax".into(), json!(jmax));
            p.insert("hmax".into(), json!(hmax));
        }
        Command::Moments { hmax, weights_route, .. } => {
            p.insert("hmax".into(), json!(hmax));
            p.insert("weights_route".into(), json!(route(*weights_route).name()));
        }
        Command::VerifyAll(_) => {
            p.insert("seed".into(), json!(cli.global.seed));
        }
        Command::Field(_) => {}
    }
    p
}

fn route(r: RouteArg) -> WeightsRoute {
    match r {
        RouteArg::SmallWeight => WeightsRoute::SmallWeight,
        RouteArg::Macwilliams => WeightsRoute::MacWilliams,
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let f = cli.command.field();
    let mut session = match Session::new(f.r, f.modulus.as_deref(), cli.global.seed, cli.global.cache_dir.clone()) {
        Ok(s) => s,
        Err(e) => return failure(e, Vec::new()),
    };
    let res = match &cli.command {
        Command::Field(_) => commands::field(&mut session),
        Command::Kloosterman { hmax, .. } => commands::kloosterman(&mut session, *hmax),
        Command::Group { which, .. } => commands::group(&mut session, (*which).into()),
        Command::Code { which, jmax, hmax, .. } => commands::code(&mut session, (*which).into(), *jmax, *hmax),
        Command::Moments { hmax, weights_route, .. } => commands::moments(&mut session, *hmax, route(*weights_route)),
        Command::VerifyAll(_) => commands::verify_all(&mut session),
    };
    let report = match res {
        Ok(r) => r,
        Err(e) => return failure(e, session.log),
    };
    let code = report.exit_code();
    let mut stderr = session.log;
    stderr.extend(report.notices.iter().map(|n| format!("notice: {n}")));
    let envelope = report.into_envelope(cli.command.name(), params(cli), start.elapsed().as_millis());
    Outcome {
        stdout: report::render(&envelope, cli.global.format),
        stderr,
        code,
    }
}

fn failure(e: CliError, mut stderr: Vec<String>) -> Outcome {
    stderr.push(format!("error: {e}"));
    Outcome {
        stdout: String::new(),
        stderr,
        code: e.exit_code(),
    }
}
