fn main() {
    std::process::exit(equicom::cli::run(std::env::args_os()));
}
