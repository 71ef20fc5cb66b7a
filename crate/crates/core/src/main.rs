fn main() {
    std::process::exit(matdom::cli::dispatch(std::env::args()));
}
