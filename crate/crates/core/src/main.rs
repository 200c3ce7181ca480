fn main() -> std::process::ExitCode {
    probe_derand::cli::main()
}
