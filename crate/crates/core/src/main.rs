use std::process::ExitCode;

fn main() -> ExitCode {
    let out = lowrankdm::cli::run_args(std::env::args_os());
    if out.code == 0 {
        println!("{}", out.output.trim_end());
    } else {
        eprintln!("{}", out.output);
    }
    ExitCode::from(out.code as u8)
}
