fn main() {
    std::process::exit(preperiodic_cli::app::main_with_args(std::env::args_os()));
}
