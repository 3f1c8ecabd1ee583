mod commands;
mod report;

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quiverkit::field::{is_prime, Field, Fp, Rational};
use quiverkit::workspace::{parse_workspace, Workspace};

use commands::{Failure, Outcome};
use report::Report;

/// Exact invariants of quiver representations and the pushout chain of a
/// codimension-two degeneration.
#[derive(Parser, Debug)]
#[command(name = "quiverkit", version)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Leave the timestamp out of the JSON report.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Scalars: `q` for the rationals or `fp:<prime>` for a prime field.
    #[arg(long, global = true, default_value = "q", value_parser = parse_field)]
    pub field: FieldChoice,
    /// Comma-separated representation names used as probes.
    #[arg(long, global = true, value_delimiter = ',')]
    pub probes: Option<Vec<String>>,
    /// Maximum number of sequences in the pushout chain.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
}

/// `[FILE] NAME...`: the file is optional, stdin is read when it is omitted or `-`.
#[derive(Args, Debug, Clone)]
pub struct Operands {
    #[arg(value_name = "ARGS", required = true)]
    pub args: Vec<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// `[FILE] X Y`: dim Hom(X, Y)
    Hom(Operands),
    /// `[FILE] V U`: dim Ext^1(V, U)
    Ext(Operands),
    /// `[FILE] F G`: defects of the sequence 0 -> . -F-> . -G-> . -> 0
    Delta(Operands),
    /// `[FILE] M N`: [N, N] - [M, M]
    Codim(Operands),
    /// `[FILE] M N`: necessary hom-order conditions for M degenerating to N
    Homorder(Operands),
    /// `[FILE] M U V`: hypotheses for the degeneration of M to U + V
    CheckHyp(Operands),
    /// `[FILE] M U V`: singularity type of the degeneration of M to U + V
    SingType(Operands),
    /// `[FILE] M U V`: chain invariants, rank-one and span checks
    VerifyChain {
        #[command(flatten)]
        operands: Operands,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Generate a workspace for a built-in family.
    #[command(subcommand)]
    Gen(Family),
}

#[derive(Subcommand, Debug, Clone)]
pub enum Family {
    /// Star quiver with n arms and representations U, V, M, N and maps f, g.
    Star {
        #[arg(long)]
        n: usize,
        /// Projective points `a:b`, comma separated.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<String>>,
    },
}

/// Primes accepted by `--field fp:<p>`.
pub const PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 101, 1009, 32003, 2147483647];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldChoice {
    Q,
    Fp(u64),
}

fn parse_field(s: &str) -> Result<FieldChoice, String> {
    if s.eq_ignore_ascii_case("q") {
        return Ok(FieldChoice::Q);
    }
    let p = s
        .strip_prefix("fp:")
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| format!("expected `q` or `fp:<prime>`, got {s:?}"))?;
    if !is_prime(p) {
        return Err(format!("{p} is not prime"));
    }
    if !PRIMES.contains(&p) {
        return Err(format!("prime {p} is not built in; choose one of {PRIMES:?}"));
    }
    Ok(FieldChoice::Fp(p))
}

impl FieldChoice {
    fn label(self) -> String {
        match self {
            FieldChoice::Q => Rational::label(),
            FieldChoice::Fp(p) => format!("GF({p})"),
        }
    }
}

fn arity(command: &Command) -> usize {
    match command {
        Command::Hom(_) | Command::Ext(_) | Command::Delta(_) | Command::Codim(_) | Command::Homorder(_) => 2,
        Command::CheckHyp(_) | Command::SingType(_) | Command::VerifyChain { .. } => 3,
        Command::Gen(_) => 0,
    }
}

fn operands(command: &Command) -> &[String] {
    match command {
        Command::Hom(o)
        | Command::Ext(o)
        | Command::Delta(o)
        | Command::Codim(o)
        | Command::Homorder(o)
        | Command::CheckHyp(o)
        | Command::SingType(o)
        | Command::VerifyChain { operands: o, .. } => &o.args,
        Command::Gen(_) => &[],
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Hom(_) => "hom",
        Command::Ext(_) => "ext",
        Command::Delta(_) => "delta",
        Command::Codim(_) => "codim",
        Command::Homorder(_) => "homorder",
        Command::CheckHyp(_) => "check-hyp",
        Command::SingType(_) => "sing-type",
        Command::VerifyChain { .. } => "verify-chain",
        Command::Gen(Family::Star { .. }) => "gen star",
    }
}

fn read_input(file: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if file == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Input(format!("cannot read stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(file).map_err(|e| Failure::Input(format!("cannot read {file}: {e}")))?;
    }
    Ok(text)
}

fn with_field<G: Field>(ws: &Workspace, run: &commands::Run) -> Result<Outcome, Failure> {
    let ws = ws.to_field::<G>().map_err(|e| Failure::Input(e.to_string()))?;
    commands::run(&ws, run)
}

fn dispatch(ws: &Workspace, field: FieldChoice, run: &commands::Run) -> Result<Outcome, Failure> {
    match field {
        FieldChoice::Q => commands::run(ws, run),
        FieldChoice::Fp(2) => with_field::<Fp<2>>(ws, run),
        FieldChoice::Fp(3) => with_field::<Fp<3>>(ws, run),
        FieldChoice::Fp(5) => with_field::<Fp<5>>(ws, run),
        FieldChoice::Fp(7) => with_field::<Fp<7>>(ws, run),
        FieldChoice::Fp(11) => with_field::<Fp<11>>(ws, run),
        FieldChoice::Fp(13) => with_field::<Fp<13>>(ws, run),
        FieldChoice::Fp(101) => with_field::<Fp<101>>(ws, run),
        FieldChoice::Fp(1009) => with_field::<Fp<1009>>(ws, run),
        FieldChoice::Fp(32003) => with_field::<Fp<32003>>(ws, run),
        FieldChoice::Fp(2147483647) => with_field::<Fp<2147483647>>(ws, run),
        FieldChoice::Fp(p) => Err(Failure::Input(format!("prime {p} is not built in"))),
    }
}

fn execute(cli: &Cli) -> (serde_json::Value, Result<Outcome, Failure>) {
    let mut inputs = serde_json::Map::new();
    inputs.insert("field".into(), cli.opts.field.label().into());
    if let Command::Gen(Family::Star { n, points }) = &cli.command {
        inputs.insert("n".into(), (*n).into());
        inputs.insert("points".into(), serde_json::json!(points));
        return (inputs.into(), commands::gen_star(*n, points.as_deref()));
    }

    let args = operands(&cli.command);
    let k = arity(&cli.command);
    let (file, names) = match args.len() {
        n if n == k => ("-", args),
        n if n == k + 1 => (args[0].as_str(), &args[1..]),
        n => {
            let msg = format!("{} expects [FILE] and {k} names, got {n} arguments", command_name(&cli.command));
            return (inputs.into(), Err(Failure::Input(msg)));
        }
    };
    inputs.insert("file".into(), file.into());
    inputs.insert("names".into(), serde_json::json!(names));
    if let Some(p) = &cli.opts.probes {
        inputs.insert("probes".into(), serde_json::json!(p));
    }
    if let Some(c) = cli.opts.cap {
        inputs.insert("cap".into(), c.into());
    }

    let result = read_input(file)
        .and_then(|text| parse_workspace(&text).map_err(|e| Failure::Input(e.to_string())))
        .and_then(|ws| {
            let run = commands::Run { command: cli.command.clone(), names: names.to_vec(), opts: cli.opts.clone() };
            dispatch(&ws, cli.opts.field, &run)
        });
    (inputs.into(), result)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (inputs, result) = execute(&cli);
    let exit = match &result {
        Ok(o) => o.exit_code,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    };
    let text = if cli.opts.json {
        let report = Report::new(command_name(&cli.command), inputs, cli.opts.seed, &result, !cli.opts.no_timestamp);
        format!("{}\n", report.to_json())
    } else {
        result.map(|o| o.text).unwrap_or_default()
    };
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(exit)
}
