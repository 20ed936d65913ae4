fn main() -> std::process::ExitCode {
    kickclock::cli::main()
}
