fn main() {
    std::process::exit(sharedcanvas::cli::run(std::env::args_os()));
}
