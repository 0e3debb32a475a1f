//! Presentation files, command dispatch and report output.

pub mod expr;
pub mod presentation;

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::dcd::{check_appendix_identities, check_cd_axioms};
use crate::double_bracket::{check_double_jacobi, Convention};
use crate::dpva::check_dpva;
use crate::equivalence::{cd_to_dpva, dpva_to_cd, roundtrip_check, roundtrip_check_rev};
use crate::rep_kr::{induced_cd, induced_lambda, induced_poisson, MAX_N};
use crate::report::Report;
use crate::sample::CheckOptions;

pub use presentation::{parse_presentation, print_presentation, Kind, Options, ParseError, Presentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Convert,
    Roundtrip,
    Rep,
    Appendix,
}

impl FromStr for Command {
    type Err = String;
    fn from_str(s: &str) -> Result<Command, String> {
        match s {
            "check" => Ok(Command::Check),
            "convert" => Ok(Command::Convert),
            "roundtrip" => Ok(Command::Roundtrip),
            "rep" => Ok(Command::Rep),
            "appendix" => Ok(Command::Appendix),
            _ => Err(format!("unknown command `{}`", s)),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub n: Option<usize>,
    pub convention: Option<Convention>,
    pub json: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Outcome {
        Outcome { stdout: String::new(), stderr: format!("error: {}\n", msg.into()), code: 2 }
    }

    fn report(r: &Report, json: bool, table: Option<&[(String, String, String)]>) -> Outcome {
        let code = if r.passed() { 0 } else { 1 };
        let stdout = if json {
            #[derive(Serialize)]
            struct Row<'a> {
                op: &'a str,
                args: &'a str,
                value: &'a str,
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(skip_serializing_if = "Option::is_none")]
                table: Option<Vec<Row<'a>>>,
                report: &'a Report,
            }
            let rows = table.map(|t| t.iter().map(|(l, r, v)| Row { op: l, args: r, value: v }).collect());
            serde_json::to_string_pretty(&Doc { table: rows, report: r }).expect("serializes") + "\n"
        } else {
            let mut s = String::new();
            if let Some(t) = table {
                s.push_str("table:\n");
                for (l, r, v) in t {
                    let _ = writeln!(s, "  {}({}) = {}", l, r, v);
                }
            }
            s.push_str(&r.render_text());
            s
        };
        Outcome { stdout, stderr: String::new(), code }
    }
}

fn options(p: &Presentation, f: &Flags) -> CheckOptions {
    let d = CheckOptions::default();
    CheckOptions {
        samples: f.samples.or(p.options.samples).unwrap_or(d.samples),
        seed: f.seed.or(p.options.seed).unwrap_or(d.seed),
        max_degree: d.max_degree,
    }
}

/// Parses and runs; parse errors exit with code 2.
pub fn run_text(cmd: Command, text: &str, flags: &Flags) -> Outcome {
    match parse_presentation(text) {
        Ok(p) => run(cmd, &p, flags),
        Err(e) => Outcome::usage(e.to_string()),
    }
}

pub fn run(cmd: Command, p: &Presentation, flags: &Flags) -> Outcome {
    match run_inner(cmd, p, flags) {
        Ok(o) => o,
        Err(e) => Outcome::usage(e.to_string()),
    }
}

fn run_inner(cmd: Command, p: &Presentation, flags: &Flags) -> crate::Result<Outcome> {
    let opts = options(p, flags);
    let json = flags.json;
    let out = match (cmd, p.kind) {
        (Command::Check, Kind::DoublePoisson) => {
            let conv = flags.convention.or(p.options.convention).unwrap_or(Convention::Paper);
            Outcome::report(&check_double_jacobi(&p.double_bracket()?, conv, &opts)?, json, None)
        }
        (Command::Check, Kind::Dpva) => Outcome::report(&check_dpva(&p.lambda_table()?, &opts)?, json, None),
        (Command::Check, Kind::Dcd) => Outcome::report(&check_cd_axioms(&p.dcd()?, &opts)?, json, None),
        (Command::Convert, Kind::Dcd) => {
            let t = cd_to_dpva(&p.dcd()?)?;
            presentation_out(&Presentation::from_lambda_table(&t, p.options.clone()), json)
        }
        (Command::Convert, Kind::Dpva) => {
            let s = dpva_to_cd(&p.lambda_table()?)?;
            presentation_out(&Presentation::from_dcd(&s, p.options.clone()), json)
        }
        (Command::Roundtrip, Kind::Dcd) => Outcome::report(&roundtrip_check(&p.dcd()?, &opts)?, json, None),
        (Command::Roundtrip, Kind::Dpva) => Outcome::report(&roundtrip_check_rev(&p.lambda_table()?, &opts)?, json, None),
        (Command::Rep, kind) => {
            let n = flags.n.or(p.options.n).unwrap_or(1);
            if n == 0 || n > MAX_N {
                return Ok(Outcome::usage(format!("--N must be between 1 and {}", MAX_N)));
            }
            let (rows, report) = match kind {
                Kind::DoublePoisson => {
                    let (b, r) = induced_poisson(&p.double_bracket()?, n, &opts)?;
                    (b.rows(), r)
                }
                Kind::Dpva => {
                    let (b, r) = induced_lambda(&p.lambda_table()?, n, &opts)?;
                    (b.rows(), r)
                }
                Kind::Dcd => {
                    let (b, r) = induced_cd(&p.dcd()?, n, &opts)?;
                    (b.rows(), r)
                }
            };
            Outcome::report(&report, json, Some(&rows))
        }
        (Command::Appendix, Kind::Dcd) => Outcome::report(&check_appendix_identities(&p.dcd()?, &opts)?, json, None),
        (cmd, kind) => return Ok(Outcome::usage(format!("`{:?}` does not apply to {} presentations", cmd, kind.name()).to_lowercase())),
    };
    Ok(out)
}

fn presentation_out(p: &Presentation, json: bool) -> Outcome {
    let text = print_presentation(p);
    let stdout = if json {
        serde_json::to_string_pretty(&serde_json::json!({ "kind": p.kind.name(), "presentation": text })).expect("serializes") + "\n"
    } else {
        text
    };
    Outcome { stdout, stderr: String::new(), code: 0 }
}
