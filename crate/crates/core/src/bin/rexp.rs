use std::process::ExitCode;

fn main() -> ExitCode {
    recursive_experts::cli::main()
}
