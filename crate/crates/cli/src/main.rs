fn main() {
    std::process::exit(puncvol_cli::run(std::env::args_os()));
}
