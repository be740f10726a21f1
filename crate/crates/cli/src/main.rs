fn main() {
    let seed = std::env::var("KAPPA_SEED").ok();
    let code = kappa_cli::run(
        std::env::args_os(),
        seed.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
