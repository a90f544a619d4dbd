fn main() {
    std::process::exit(glsm_stab::cli::run());
}
