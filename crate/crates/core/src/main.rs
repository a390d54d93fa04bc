use std::io::Write;

fn main() {
    if let Err(msg) = rootdatum::config::load_from_env() {
        eprintln!("error: {msg}");
        std::process::exit(1);
    }
    let out = rootdatum::cli::run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
