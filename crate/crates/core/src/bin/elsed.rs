fn main() -> std::process::ExitCode {
    elsed::cli::main()
}
