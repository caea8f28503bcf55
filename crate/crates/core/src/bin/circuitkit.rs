fn main() {
    let code =
        circuitkit::cli::run(std::env::args_os(), std::env::var("CIRCUITKIT_CAPS").ok(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
