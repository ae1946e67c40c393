fn main() {
    std::process::exit(dirac_degen_cli::run());
}
