use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rootadj_cli::{
    parse_group_spec, run, tolerance_scale, CliError, Command, RootSpec, EXIT_INPUT,
};
use rootadj_core::{IeReading, Role};

/// Discreteness decisions for two-generator groups with adjoined roots.
#[derive(Parser)]
#[command(name = "rootadj", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Input {
    /// Group spec JSON file; reads standard input when omitted or "-".
    spec: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RoleArg {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reading {
    General,
    NthRoot,
}

#[derive(Args)]
struct RootArgs {
    #[arg(long, value_enum)]
    role: Option<RoleArg>,
    #[arg(long)]
    num: Option<u64>,
    #[arg(long)]
    den: Option<u64>,
}

#[derive(Subcommand)]
enum Sub {
    /// Classify A, B and A^-1 B.
    Classify(Input),
    /// Build the hexagon and recognize stopping configurations.
    Hexagon(Input),
    /// Decide the group with an adjoined rational power.
    Adjoin {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        root: RootArgs,
        /// Reading of the clause for elliptic X^-1 Y.
        #[arg(long, value_enum, default_value = "general")]
        ie_reading: Reading,
    },
    /// Decide and cross-check the verdict independently.
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        root: RootArgs,
    },
    /// Draw the hexagon (and root-line fan) in the disc model.
    Render {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        root: RootArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

impl RootArgs {
    fn spec(&self) -> Result<Option<RootSpec>, CliError> {
        if self.role.is_none() && self.num.is_none() && self.den.is_none() {
            return Ok(None);
        }
        let role = match self.role.unwrap_or(RoleArg::B) {
            RoleArg::A => Role::A,
            RoleArg::B => Role::B,
        };
        let (num, den) = (self.num.unwrap_or(1), self.den.unwrap_or(1));
        for (field, v) in [("--num", num), ("--den", den)] {
            if v < 1 {
                return Err(CliError::Validation {
                    field: field.into(),
                    message: "must be at least 1".into(),
                });
            }
        }
        Ok(Some(RootSpec { role, num, den }))
    }
}

fn read_input(input: &Input) -> Result<String, CliError> {
    let mut text = String::new();
    match &input.spec {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(text)
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let (input, cmd, out) = match cli.command {
        Sub::Classify(input) => (input, Command::Classify, None),
        Sub::Hexagon(input) => (input, Command::Hexagon, None),
        Sub::Adjoin {
            input,
            root,
            ie_reading,
        } => {
            let ie_reading = match ie_reading {
                Reading::General => IeReading::GeneralFormulation,
                Reading::NthRoot => IeReading::NthRootSection,
            };
            let root = root.spec()?;
            (input, Command::Adjoin { root, ie_reading }, None)
        }
        Sub::Verify { input, root } => (input, Command::Verify { root: root.spec()? }, None),
        Sub::Render { input, root, out } => {
            (input, Command::Render { root: root.spec()? }, Some(out))
        }
    };
    let spec = parse_group_spec(&read_input(&input)?)?;
    let output = run(&cmd, &spec, tolerance_scale()?)?;
    match out {
        Some(path) => std::fs::write(&path, &output.body)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{}", output.body),
    }
    Ok(output.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
