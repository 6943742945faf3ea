use clap::Parser;
use motifpix::cli::{run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = run(cli, &mut stdout) {
        // sources are often already part of their parent's message
        let mut msg = String::new();
        for cause in e.chain().map(|c| c.to_string()) {
            if !msg.ends_with(&cause) {
                if !msg.is_empty() {
                    msg.push_str(": ");
                }
                msg.push_str(&cause);
            }
        }
        eprintln!("error: {msg}");
        std::process::exit(1);
    }
}
