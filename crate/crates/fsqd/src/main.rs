// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let outcome = fsqd::cli::run(std::env::args_os());
    if outcome.exit_code == 1 {
        eprint!("{}", outcome.summary);
    } else {
        print!("{}", outcome.summary);
    }
    for path in &outcome.artifacts {
        log::info!("artifact {}", path.display());
    }
    ExitCode::from(outcome.exit_code as u8)
}
