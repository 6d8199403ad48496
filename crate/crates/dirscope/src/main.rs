fn main() {
    std::process::exit(dirscope::cli::run(std::env::args_os()));
}
