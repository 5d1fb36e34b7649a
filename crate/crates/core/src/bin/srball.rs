fn main() -> std::process::ExitCode {
    srball::cli::run(std::env::args_os())
}
