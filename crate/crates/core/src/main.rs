use std::process::ExitCode;

fn main() -> ExitCode {
    relq::cli::main()
}
