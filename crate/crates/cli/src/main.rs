use std::io;

fn main() {
    let seed = std::env::var(hyperseq_cli::SEED_ENV).ok();
    let code = hyperseq_cli::run(std::env::args_os(), seed, &mut io::stdin(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
