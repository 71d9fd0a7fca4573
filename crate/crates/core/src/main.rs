fn main() {
    std::process::exit(hypspectrum::cli::run(std::env::args_os()));
}
