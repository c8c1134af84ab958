fn main() {
    std::process::exit(ccf::cli::run(std::env::args_os()));
}
