use std::process::ExitCode;

use clap::error::ErrorKind;
use symdyn::sweep::{emit, emit_detail, parse_config, run_sweep, ConfigError};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let config = match parse_config(std::env::args_os()) {
        Ok(c) => c,
        Err(ConfigError::Cli(e))
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(ConfigError::Cli(e)) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    let result = match run_sweep(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    if let Err(e) = emit(&result, config.format, config.out.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if let Some(path) = &config.detail {
        if let Err(e) = emit_detail(&result, path) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }

    match result.lyapunov_bits {
        Some(l) => eprintln!("lyapunov exponent: {l:.4} bits/step"),
        None => eprintln!("lyapunov exponent: undefined (zero derivative on trajectory)"),
    }
    if let Some(i) = result.argmax_expected_info() {
        let row = &result.rows[i];
        eprintln!(
            "max entropy rate: {:.4} bits/symbol at d = {:.4} (k = {})",
            row.h_expected_bits.unwrap_or(f64::NAN),
            row.d,
            row.k_selected.unwrap_or_default()
        );
    }
    let truncated = result.truncated_rows();
    if truncated > 0 {
        eprintln!(
            "warning: {truncated} of {} rows selected k = {}; the order range may be truncating the memory of the data",
            result.rows.len(),
            config.k_max
        );
    }
    let failed = result.rows.iter().filter(|r| !r.is_ok()).count();
    if failed > 0 {
        eprintln!("warning: {failed} rows failed");
    }
    ExitCode::SUCCESS
}
