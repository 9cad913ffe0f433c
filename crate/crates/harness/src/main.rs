fn main() {
    std::process::exit(dynevo_harness::cli::main());
}
