mod args;
mod report;
mod run;

use clap::Parser;

use args::{Cli, Format};

fn main() {
    let cli = Cli::parse();
    let report = run::run(&cli.verb, &cli.opts);
    match cli.opts.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    std::process::exit(run::exit_code(&report));
}
