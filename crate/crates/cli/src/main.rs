fn main() {
    std::process::exit(catenoid_cli::run(std::env::args_os()));
}
