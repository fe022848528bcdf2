//! Instance language, runner and reports for the `amalgrade` command.

pub mod corpus;
pub mod dsl;
pub mod report;
pub mod runner;

pub use dsl::{parse_instance, pretty_print, InstanceFile, ParseError};
pub use report::{InstanceReport, RunReport, Status};
pub use runner::{build, run_checks, Environment, Options, RunError};

/// Parse and run one instance text. Parse failures become an error report.
pub fn run_text(text: &str, fallback_name: &str, opts: &Options) -> InstanceReport {
    match parse_instance(text) {
        Ok(file) => {
            let mut rep = run_checks(&file, opts);
            if file.name().is_none() {
                rep.instance = fallback_name.to_string();
            }
            rep
        }
        Err(e) => {
            let mut rep = InstanceReport::new(fallback_name.to_string(), opts);
            rep.status = Status::Error;
            rep.error = Some(e.to_string());
            rep
        }
    }
}
