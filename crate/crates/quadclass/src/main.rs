use std::process::exit;

fn main() {
    exit(quadclass::cli::run(std::env::args_os()));
}
