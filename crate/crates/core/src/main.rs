use std::io;

fn main() {
    let code = stratal::frontend::cli::main_with(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
