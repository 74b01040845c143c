fn main() {
    std::process::exit(jrl::cli::run(std::env::args_os()));
}
