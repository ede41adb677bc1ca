fn main() {
    std::process::exit(mularith::cli::main_entry(std::env::args_os()));
}
