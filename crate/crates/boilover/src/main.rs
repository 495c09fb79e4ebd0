use std::io::{self, IsTerminal, Write};

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let stdout = io::stdout();
    let is_tty = stdout.is_terminal();
    let mut out = stdout.lock();
    let mut err = io::stderr().lock();
    let code = boilover::cli::run(&argv, &mut out, &mut err, is_tty);
    let _ = out.flush();
    std::process::exit(code);
}
