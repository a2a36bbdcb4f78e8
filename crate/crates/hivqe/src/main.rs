fn main() -> std::process::ExitCode {
    hivqe::cli::main()
}
