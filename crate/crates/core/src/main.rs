//! `enriques-phi` command-line entry point.

fn main() {
    std::process::exit(enriques_phi::cli::run(std::env::args_os()));
}
