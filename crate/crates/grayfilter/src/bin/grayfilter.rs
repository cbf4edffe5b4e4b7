fn main() {
    std::process::exit(grayfilter::cli::run(std::env::args_os()));
}
