fn main() -> std::process::ExitCode {
    lexibridge::cli::main()
}
