fn main() -> std::process::ExitCode {
    resolvent_lab::cli::main()
}
