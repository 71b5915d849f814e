use std::process::ExitCode;

use banded_spectra_cli::{run_args, Args};
use clap::Parser;

fn main() -> ExitCode {
    let args = Args::parse();
    match run_args(&args) {
        Ok(report) => {
            for row in &report.rows {
                let hausdorff = row.hausdorff.map_or("-".to_string(), |d| format!("{d:.6}"));
                let components = row.components.map_or("-".to_string(), |c| c.to_string());
                println!(
                    "n={:<5} eps_n={:.7} superset={:<7} subset={:<7} components={:<3} hausdorff={}",
                    row.n, row.eps_n, row.superset_cells, row.subset_cells, components, hausdorff
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("bandspec: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
