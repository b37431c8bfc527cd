fn main() {
    std::process::exit(mws_core::cli::main());
}
