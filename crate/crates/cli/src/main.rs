use std::io::Write;

fn main() {
    let inv = holorec_cli::run(std::env::args_os());
    print!("{}", inv.stdout);
    eprint!("{}", inv.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(inv.code);
}
