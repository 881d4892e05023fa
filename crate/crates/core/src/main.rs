fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = beckdiff::cli::run_command(&argv, &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code);
}
