fn main() {
    std::process::exit(orishell::cli::main_with(std::env::args_os()));
}
