fn main() {
    std::process::exit(defexp::cli::run(std::env::args_os()));
}
