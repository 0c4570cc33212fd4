fn main() {
    std::process::exit(folgrade_service::cli::main());
}
