fn main() -> std::process::ExitCode {
    powerball_cli::main_entry()
}
