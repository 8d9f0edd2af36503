use std::io::Write;

fn main() {
    let mut result = bincay_cli::run(std::env::args_os());
    let text = bincay_cli::render(&mut result);
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
    std::process::exit(result.exit_code);
}
