//! Command-line front end. Exit codes: 0 success, 1 definitive negative,
//! 2 bad input, 3 resource cap, 4 internal failure.

use crate::complement::{
    global_complement, hyperplane_sections, local_complement, verify_complement_detail, ComplementCertificate,
    DEFAULT_INDEX_CAP,
};
use crate::error::Error;
use crate::exact_lattice::{fmt_vec, parse_rational, Rational};
use crate::oracle::{check_golden, fixtures_root, run_golden, GoldenCase, GoldenOutcome};
use crate::polyconv::set_cell_cap;
use crate::reduction::{qfactorial_group, ray_coordinate_u, reduce_germ, series_check, verify_reduction_detail, ReductionCertificate};
use crate::serial::{self, QStr};
use crate::toric_germ::{check_ct, moment_data, mld_fiber, mld_total, FibrationGerm};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    Fiber,
    Total,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Parse a germ and print its canonical form.
    Validate,
    /// Minimal log discrepancies over the fiber and over the whole germ.
    Mld,
    /// Whether `N ∩ int(tU) ⊆ {0}`; prints a witness when not.
    CheckCt,
    /// Quotient to a lattice where `tU′` has no interior point.
    Reduce,
    /// An n-complement with its certificate.
    Complement,
    /// Lc hyperplane sections pulled back from the base.
    Hyperplane,
    /// The `(C_t)` test through the finite group of a simplicial affine germ.
    Series,
    /// Diff oracle golden files, or verify a certificate with `--cert`.
    Oracle {
        /// Certificate to re-verify against the germ.
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Overwrite golden files instead of diffing.
        #[arg(long)]
        bless: bool,
    },
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(name = "toriclab", version, about = "Exact analysis of toric Fano fibration germs")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Germ JSON file; for `oracle`, a fixtures directory is also accepted.
    #[arg(global = true)]
    pub input_path: Option<PathBuf>,
    #[arg(long, global = true, value_parser = rational_arg, allow_hyphen_values = true)]
    pub t: Option<Rational>,
    /// Hyperstandard index.
    #[arg(long, global = true, default_value_t = 1)]
    pub r: u64,
    #[arg(long, global = true, value_enum, default_value_t = ScopeArg::Fiber)]
    pub scope: ScopeArg,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    /// Ceiling on enumerated lattice cells.
    #[arg(long, global = true)]
    pub cap_cells: Option<u64>,
    /// Ceiling on the complement index search.
    #[arg(long, global = true, default_value_t = DEFAULT_INDEX_CAP)]
    pub cap_index: u64,
}

/// What a command produced: an exit status, a JSON report and a text rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub exit: i32,
    pub json: Value,
    pub text: String,
}

impl Report {
    fn ok(json: Value, text: String) -> Report {
        Report { exit: EXIT_OK, json, text }
    }

    fn negative(json: Value, text: String) -> Report {
        Report { exit: EXIT_NEGATIVE, json, text }
    }

    fn input(msg: String) -> Report {
        Report { exit: EXIT_INPUT, json: json!({ "error": msg }), text: format!("error: {msg}") }
    }

    pub fn render(&self, output: Output) -> String {
        match output {
            Output::Json => serde_json::to_string_pretty(&self.json).expect("serializable"),
            Output::Text => self.text.clone(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    use Error::*;
    match e {
        BoxTooLarge { .. } | IndexCapExceeded(_) | CapTooSmall => EXIT_CAP,
        CtFails(_) | InteriorPointPresent(_) | MldTooSmall(_) | NotSemiample { .. } | NotRCartier { .. }
        | RequiresSemiample | NonpositiveMld | PsiDoesNotFactor | NoInteriorLatticePoint | SpecialCaseC1 => {
            EXIT_NEGATIVE
        }
        Internal(_) | InternalDualityMismatch => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

fn from_error(e: Error) -> Report {
    let mut json = json!({ "error": e.to_string() });
    if let Error::CtFails(w) | Error::InteriorPointPresent(w) = &e {
        json["witness"] = json!(serial::vec_out(w));
    }
    Report { exit: exit_code(&e), json, text: format!("error: {e}") }
}

fn need_t(config: &RunConfig) -> std::result::Result<Rational, Report> {
    config.t.clone().ok_or_else(|| Report::input("--t is required for this command".into()))
}

fn q(x: &Rational) -> Value {
    json!(QStr(x.clone()))
}

/// Runs one command on germ JSON text. `oracle` without `--cert` diffs the golden
/// file named after `input_path`.
pub fn run(config: &RunConfig, input: &str) -> Report {
    if let Some(cap) = config.cap_cells {
        set_cell_cap(cap);
    }
    let g = match FibrationGerm::from_json(input) {
        Ok(g) => g,
        Err(e) => return from_error(e),
    };
    match dispatch(config, &g) {
        Ok(r) | Err(r) => r,
    }
}

fn dispatch(config: &RunConfig, g: &FibrationGerm) -> std::result::Result<Report, Report> {
    match &config.command {
        Command::Validate => {
            let canonical: Value = serde_json::to_value(g.to_raw()).expect("serializable");
            let text = format!(
                "valid germ: dim {}, base dim {}, {} rays, {} maximal cones\n{}",
                g.dim(),
                g.base_dim(),
                g.rays().len(),
                g.fan().len(),
                g.to_json()
            );
            Ok(Report::ok(canonical, text))
        }
        Command::Mld => {
            let fiber = mld_fiber(g).map_err(from_error)?;
            let mut json = json!({
                "mld_fiber": q(&fiber.value),
                "fiber_minimizer": serial::vec_out(&fiber.minimizer),
            });
            let mut text = format!("mld over the fiber: {} at {}", fiber.value, fmt_vec(&fiber.minimizer));
            match mld_total(g) {
                Ok(total) => {
                    json["mld_total"] = q(&total.value);
                    json["total_minimizer"] = json!(serial::vec_out(&total.minimizer));
                    text += &format!("\nmld over the germ: {} at {}", total.value, fmt_vec(&total.minimizer));
                }
                Err(e) => {
                    json["mld_total_error"] = json!(e.to_string());
                    text += &format!("\nmld over the germ: {e}");
                }
            }
            Ok(Report::ok(json, text))
        }
        Command::CheckCt => {
            let t = need_t(config)?;
            let rep = check_ct(g, &t).map_err(from_error)?;
            let json = json!({
                "t": q(&t),
                "holds": rep.holds,
                "mld_fiber": q(&rep.mld_fiber.value),
                "witness": rep.witness.as_ref().map(|w| serial::vec_out(w)),
            });
            Ok(match &rep.witness {
                None => Report::ok(json, format!("N ∩ int(tU) = ∅ for t = {t}")),
                Some(w) => Report::negative(json, format!("N ∩ int(tU) ≠ ∅ for t = {t}: witness {}", fmt_vec(w))),
            })
        }
        Command::Reduce => {
            let t = need_t(config)?;
            let cert = reduce_germ(g, &t).map_err(from_error)?;
            let u = moment_data(g).map_err(from_error)?.u;
            let verified = verify_reduction_detail(&cert, g.lattice(), &u, &t);
            let json = json!({ "certificate": cert.to_raw(), "verified": verified.is_ok() });
            let text = format!(
                "reduced to dimension {} after {} quotient steps; U′ vertices {}; verified: {}",
                cert.target_dim(),
                cert.projection_chain.len(),
                cert.u_prime.vertices().iter().map(|v| fmt_vec(v)).collect::<Vec<_>>().join(" "),
                describe(&verified)
            );
            Ok(if verified.is_ok() { Report::ok(json, text) } else { Report { exit: EXIT_INTERNAL, json, text } })
        }
        Command::Complement => {
            let t = need_t(config)?;
            let cert = match config.scope {
                ScopeArg::Fiber => local_complement(g, &t, config.r),
                ScopeArg::Total => global_complement(g, &t, config.r, config.cap_index),
            }
            .map_err(from_error)?;
            let verified = verify_complement_detail(&cert, g, &t);
            let json = json!({ "certificate": cert.to_raw(), "verified": verified.is_ok() });
            let text = format!(
                "n = {}; characters {}; B⁺ coefficients {}; mld ≥ {}; verified: {}",
                cert.n,
                cert.characters.iter().map(|v| fmt_vec(v)).collect::<Vec<_>>().join(" "),
                fmt_vec(&cert.bplus_coeffs),
                cert.verified_mld,
                describe(&verified)
            );
            Ok(if verified.is_ok() { Report::ok(json, text) } else { Report { exit: EXIT_INTERNAL, json, text } })
        }
        Command::Hyperplane => {
            let t = need_t(config)?;
            let cert = reduce_germ(g, &t).map_err(from_error)?;
            let secs = hyperplane_sections(g, &t, &cert).map_err(from_error)?;
            let list: Vec<Value> = secs
                .iter()
                .map(|h| {
                    json!({
                        "m_bar": serial::vec_out(&h.m_bar),
                        "m_prime": serial::vec_out(&h.m_prime),
                        "gamma_h": q(&h.gamma_h),
                    })
                })
                .collect();
            let text = secs
                .iter()
                .map(|h| format!("H = div(χ^{}) with γ = {}", fmt_vec(&h.m_bar), h.gamma_h))
                .collect::<Vec<_>>()
                .join("\n");
            let json = json!({ "sections": list, "reduction": cert.to_raw() });
            Ok(if secs.is_empty() {
                Report::negative(json, "no dual ray of the image cone factors through the base".into())
            } else {
                Report::ok(json, text)
            })
        }
        Command::Series => {
            let t = need_t(config)?;
            let data = qfactorial_group(g).map_err(from_error)?;
            let u = ray_coordinate_u(&data.coefficients);
            let holds = series_check(&data.group, &u, &t).map_err(from_error)?;
            let direct = check_ct(g, &t).map_err(from_error)?.holds;
            let json = json!({
                "t": q(&t),
                "holds": holds,
                "agrees_with_check_ct": holds == direct,
                "dual_generators": data.group.dual_generators.iter()
                    .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "cyclic": data.cyclic.iter()
                    .map(|(v, k)| json!({ "generator": serial::vec_out(v), "order": k.to_string() })).collect::<Vec<_>>(),
            });
            let text = format!(
                "G ∩ int(tU) = ∅ for t = {t}: {holds}; group of order {}; agrees with the direct test: {}",
                data.cyclic.iter().fold(num_bigint::BigInt::from(1), |a, (_, k)| a * k),
                holds == direct
            );
            if holds != direct {
                return Ok(Report { exit: EXIT_INTERNAL, json, text });
            }
            Ok(if holds { Report::ok(json, text) } else { Report::negative(json, text) })
        }
        Command::Oracle { cert: Some(path), .. } => {
            let t = need_t(config)?;
            let text = std::fs::read_to_string(path).map_err(|e| Report::input(format!("{}: {e}", path.display())))?;
            verify_certificate(g, &t, &text)
        }
        Command::Oracle { cert: None, bless } => {
            let Some(path) = &config.input_path else {
                return Err(Report::input("oracle needs an input path to name the golden file".into()));
            };
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let root = path.parent().and_then(Path::parent).map(Path::to_path_buf).unwrap_or_else(fixtures_root);
            let case = GoldenCase::Germ { name: name.clone(), path: path.clone() };
            Ok(golden_report(&root, &[(name, check_golden(&root, &case, *bless))]))
        }
    }
}

fn describe(r: &std::result::Result<(), String>) -> String {
    match r {
        Ok(()) => "yes".into(),
        Err(e) => format!("no ({e})"),
    }
}

fn verify_certificate(g: &FibrationGerm, t: &Rational, text: &str) -> std::result::Result<Report, Report> {
    let value: Value = serde_json::from_str(text).map_err(|e| Report::input(format!("certificate: {e}")))?;
    let (kind, verdict) = if value.get("phi").is_some() {
        let cert = ReductionCertificate::from_json(text).map_err(from_error)?;
        let u = moment_data(g).map_err(from_error)?.u;
        ("reduction", verify_reduction_detail(&cert, g.lattice(), &u, t))
    } else if value.get("n").is_some() {
        let cert = ComplementCertificate::from_json(text).map_err(from_error)?;
        ("complement", verify_complement_detail(&cert, g, t))
    } else {
        return Err(Report::input("certificate is neither a reduction nor a complement".into()));
    };
    let json = json!({ "kind": kind, "valid": verdict.is_ok(), "reason": verdict.as_ref().err() });
    let text = format!("{kind} certificate valid: {}", describe(&verdict));
    Ok(if verdict.is_ok() { Report::ok(json, text) } else { Report::negative(json, text) })
}

fn golden_report(root: &Path, outcomes: &[(String, GoldenOutcome)]) -> Report {
    let mut lines = Vec::new();
    let mut entries = Vec::new();
    let mut exit = EXIT_OK;
    for (name, o) in outcomes {
        let (status, detail) = match o {
            GoldenOutcome::Match => ("match", None),
            GoldenOutcome::Blessed => ("blessed", None),
            GoldenOutcome::Missing => ("missing", None),
            GoldenOutcome::Differs { expected, actual } => ("differs", Some(format!("expected {expected}\nactual {actual}"))),
            GoldenOutcome::Failed(e) => ("failed", Some(e.clone())),
        };
        let code = match o {
            GoldenOutcome::Match | GoldenOutcome::Blessed => EXIT_OK,
            GoldenOutcome::Missing | GoldenOutcome::Differs { .. } => EXIT_NEGATIVE,
            GoldenOutcome::Failed(_) => EXIT_INPUT,
        };
        exit = exit.max(code);
        lines.push(match &detail {
            None => format!("{name}: {status}"),
            Some(d) => format!("{name}: {status}\n{d}"),
        });
        entries.push(json!({ "case": name, "status": status, "detail": detail }));
    }
    Report { exit, json: json!({ "root": root.display().to_string(), "cases": entries }), text: lines.join("\n") }
}

/// Reads the input and runs; a directory given to `oracle` diffs every golden case under it.
pub fn run_path(config: &RunConfig) -> Report {
    if let Some(cap) = config.cap_cells {
        set_cell_cap(cap);
    }
    let path = match &config.input_path {
        Some(p) => p.clone(),
        None if matches!(config.command, Command::Oracle { cert: None, .. }) => fixtures_root(),
        None => return Report::input("missing input path".into()),
    };
    if path.is_dir() {
        return match &config.command {
            Command::Oracle { cert: None, bless } => match run_golden(&path, *bless) {
                Ok(outcomes) => golden_report(&path, &outcomes),
                Err(e) => from_error(e),
            },
            _ => Report::input(format!("{} is a directory", path.display())),
        };
    }
    match std::fs::read_to_string(&path) {
        Ok(text) => run(config, &text),
        Err(e) => Report::input(format!("{}: {e}", path.display())),
    }
}

/// Parses arguments, runs, prints and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let report = run_path(&config);
    let rendered = report.render(config.output);
    if report.exit == EXIT_OK || report.exit == EXIT_NEGATIVE {
        println!("{rendered}");
    } else {
        eprintln!("{rendered}");
    }
    report.exit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_lattice::qf;

    const P1_A1: &str = r#"{"N":[["1","0"],["0","1"]],"Nbar":[["1"]],"pi":[[0,1]],"sigma_bar":[["1"]],
        "fan":[[0,1],[1,2]],"rays":[{"e":["1","0"],"a":"1"},{"e":["0","1"],"a":"1"},{"e":["-1","0"],"a":"1"}]}"#;
    const P1: &str = r#"{"N":[["1"]],"Nbar":[],"pi":[],"sigma_bar":[],"fan":[[0],[1]],
        "rays":[{"e":["1"],"a":"1/2"},{"e":["-1"],"a":"1/2"}]}"#;

    fn cfg(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("toriclab").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn check_ct_exit_codes() {
        let yes = run(&cfg(&["check-ct", "--t", "1"]), P1_A1);
        assert_eq!(yes.exit, EXIT_OK);
        assert!(yes.text.contains("N ∩ int(tU) = ∅"));
        let no = run(&cfg(&["check-ct", "--t", "3/2"]), P1_A1);
        assert_eq!(no.exit, EXIT_NEGATIVE);
        assert_eq!(no.json["witness"], json!(["0", "1"]));
    }

    #[test]
    fn global_complement_on_the_line() {
        let rep = run(&cfg(&["complement", "--t", "1/2", "--r", "1", "--scope", "total"]), P1);
        assert_eq!(rep.exit, EXIT_OK, "{}", rep.text);
        assert_eq!(rep.json["certificate"]["n"], json!("2"));
        assert_eq!(rep.json["verified"], json!(true));
    }

    #[test]
    fn input_errors_and_caps() {
        let bad = run(&cfg(&["validate"]), "{\"N\": [[\"1\"]],\n \"oops\"");
        assert_eq!(bad.exit, EXIT_INPUT);
        assert!(bad.text.contains("line 2"), "{}", bad.text);
        assert_eq!(run(&cfg(&["check-ct"]), P1_A1).exit, EXIT_INPUT);
        assert_eq!(run(&cfg(&["check-ct", "--t", "-1"]), P1_A1).exit, EXIT_INPUT);
        assert_eq!(exit_code(&Error::BoxTooLarge { cells: 10, cap: 1 }), EXIT_CAP);
        assert!(RunConfig::try_parse_from(["toriclab", "mld", "--t", "x"]).is_err());
        assert_eq!(cfg(&["mld", "--t", "3/6"]).t, Some(qf(1, 2)));
    }

    #[test]
    fn validate_emits_canonical_form() {
        let rep = run(&cfg(&["validate", "--output", "json"]), P1_A1);
        let again = run(&cfg(&["validate"]), &rep.render(Output::Json));
        assert_eq!(again.json, rep.json);
    }

    #[test]
    fn reduction_certificate_round_trips_through_oracle() {
        let rep = run(&cfg(&["reduce", "--t", "1"]), P1_A1);
        assert_eq!(rep.exit, EXIT_OK);
        let cert_text = rep.json["certificate"].to_string();
        let g = FibrationGerm::from_json(P1_A1).unwrap();
        assert_eq!(verify_certificate(&g, &qf(1, 1), &cert_text).unwrap().exit, EXIT_OK);
        assert_eq!(verify_certificate(&g, &qf(1, 2), &cert_text).unwrap().exit, EXIT_NEGATIVE);
    }
}
