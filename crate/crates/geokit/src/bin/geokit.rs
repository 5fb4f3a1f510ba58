fn main() {
    std::process::exit(geokit::cli::run(std::env::args()));
}
