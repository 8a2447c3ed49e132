//! Read a system description and run the `analyze` command on it, as the
//! `lvstab` binary does.

use lvstab::cli::{run, Command, RunConfig};
use lvstab::config::{parse_config, print_config};
use lvstab::error::Result;

const TEXT: &str = "\
[system]
T = 0.5

[a]
kind = trig
c0 = 2.0102
harmonic = 1, 0, 0.01

[b]
kind = const
value = 1

[c]
kind = const
value = 0.0051

[d]
kind = const
value = 2.0203

[e]
kind = const
value = 0.9898

[f]
kind = const
value = 2
";

fn main() -> Result<()> {
    let spec = parse_config(TEXT)?;
    print!("{}", print_config(&spec));

    let dir = std::env::temp_dir().join("lvstab-example");
    std::fs::create_dir_all(&dir).map_err(|source| lvstab::error::Error::Io { path: dir.clone(), source })?;
    let path = dir.join("system.cfg");
    std::fs::write(&path, TEXT).map_err(|source| lvstab::error::Error::Io { path: path.clone(), source })?;

    let cfg = RunConfig {
        system_file: Some(path),
        command: Command::Analyze,
        p_list: Some(lvstab::cli::parse_p_list("1,2,inf")?),
        output_dir: dir,
        emit_csv: false,
    };
    let code = run(&cfg, &mut std::io::stdout())?;
    println!("exit code {code}");
    Ok(())
}
