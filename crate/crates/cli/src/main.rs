use std::io::Write;

fn main() {
    let (code, report) = strength_fano_cli::run(std::env::args_os());
    // A closed pipe is not worth a panic.
    let _ = writeln!(std::io::stdout().lock(), "{report}");
    std::process::exit(code);
}
