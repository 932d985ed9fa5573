fn main() {
    std::process::exit(milnor_galois::cli::main_from_env());
}
