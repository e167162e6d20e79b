fn main() {
    std::process::exit(tetrarotor::cli::run(std::env::args_os()));
}
