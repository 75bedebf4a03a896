fn main() {
    let code = gauss_dioph::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
