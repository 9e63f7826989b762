use std::io::Write;

fn main() {
    let res = trilab::cli::run(std::env::args_os());
    print!("{}", res.stdout);
    eprint!("{}", res.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(res.exit_code);
}
