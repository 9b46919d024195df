fn main() {
    std::process::exit(isocount::cli::run(std::env::args_os()));
}
