fn main() {
    std::process::exit(qberry_cli::run(std::env::args_os()));
}
