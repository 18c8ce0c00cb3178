fn main() {
    std::process::exit(hyperpath::cli::main_entry(std::env::args_os()));
}
