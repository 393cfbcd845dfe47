use std::io;

fn main() {
    poisson_entropy::cli::configure_threads();
    let code = poisson_entropy::cli::run(
        std::env::args_os(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    std::process::exit(code);
}
