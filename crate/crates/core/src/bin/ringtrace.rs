fn main() {
    std::process::exit(ringtrace::cli::run(std::env::args_os()));
}
