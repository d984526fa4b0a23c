use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = dqpt_cli::Cli::parse();
    match dqpt_cli::run(&cli) {
        Ok(manifest) => {
            let out = manifest.config.out.display();
            let n = manifest.files.len();
            let plural = if n == 1 { "" } else { "s" };
            println!(
                "{}: wrote {n} file{plural} and a manifest to {out}",
                cli.command.name()
            );
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
