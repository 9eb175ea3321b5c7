fn main() {
    std::process::exit(diproperm::cli::main_with_exit_code());
}
