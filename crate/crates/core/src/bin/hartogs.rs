fn main() {
    std::process::exit(cartan_hartogs::jobs::main_with_args(std::env::args_os()));
}
