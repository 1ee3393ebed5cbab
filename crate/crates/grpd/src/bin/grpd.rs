//! Thin binary entry point; everything lives in [`grpd::cli`].

fn main() {
    std::process::exit(grpd::cli::run_from(std::env::args_os().skip(1)));
}
