fn main() {
    std::process::exit(llplan_cli::app::run(std::env::args_os()));
}
