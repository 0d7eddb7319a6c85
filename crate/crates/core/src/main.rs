fn main() {
    std::process::exit(zeta_mellin::cli::run(std::env::args_os()));
}
