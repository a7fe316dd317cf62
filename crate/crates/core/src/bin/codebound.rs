fn main() {
    std::process::exit(codebound::cli::run(std::env::args_os()));
}
