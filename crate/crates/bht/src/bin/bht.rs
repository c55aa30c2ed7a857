fn main() { std::process::exit(bht::cli::run(std::env::args().collect())); }
