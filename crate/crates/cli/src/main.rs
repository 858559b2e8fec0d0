fn main() {
    let code = flatlink_cli::run(
        std::env::args_os(),
        std::io::stdin(),
        std::io::stdout(),
        std::io::stderr(),
    );
    std::process::exit(code);
}
