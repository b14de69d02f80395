fn main() {
    std::process::exit(nodal_quartic::cli::main_with_args(std::env::args_os()));
}
