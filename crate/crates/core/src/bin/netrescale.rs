fn main() {
    std::process::exit(netrescale::cli::main());
}
