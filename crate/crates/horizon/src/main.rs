fn main() {
    std::process::exit(euler_horizon::commands::main_with_args(std::env::args_os()));
}
