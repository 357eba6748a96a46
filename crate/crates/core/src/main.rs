use std::io::Write;

fn main() {
    if let Err(e) = mckaykit::cli::init_threads() {
        eprintln!("mckaykit: {e}");
        std::process::exit(mckaykit::cli::EXIT_USAGE);
    }
    let out = mckaykit::cli::run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
