use brjuno_lab::cli;
use brjuno_lab::Error;

fn main() {
    match cli::run() {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parse(_) | Error::InvalidInput(_) => 2,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}
