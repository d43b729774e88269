//! Command-line front end: ingest group-action files, emit polynomials and
//! verification reports, evaluate polynomials at group elements, and run
//! seeded random verification campaigns.
//!
//! Exit codes: 0 on success, 1 when a closed-form construction diverges or a
//! verification fails, 2 on unparseable input, 3 on an invalid action or a
//! profile mismatch.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use csp_core::abelian_action::{
    canonicalize, compute_orbits, orbit_size_formula, stabilizer_data, validate_action,
    AbelianActionSpec, Action,
};
use csp_core::dihedral::{
    dihedral_action_polynomial, dihedral_orbits, validate_dihedral, DihedralAction,
    DihedralActionSpec,
};
use csp_core::multipoly::{EvaluationPoint, MultiPoly};
use csp_core::oracle::{
    run_abelian_campaign, run_dihedral_campaign, verify_polynomial_abelian,
    verify_polynomial_dihedral, RandomActionParams, VerificationVerdict,
};
use csp_core::rational::format_rational;
use csp_core::report::SieveReport;
use csp_core::sieving::{action_polynomial, SieveOptions};

#[derive(Parser)]
#[command(name = "csp", version, about = "Exact sieving polynomials for finite abelian and dihedral group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Abelian,
    Dihedral,
}

#[derive(Subcommand)]
enum Command {
    /// List orbits with reduced orders, minimal elements, generating sets,
    /// indices, and the size-formula cross-check
    Orbits {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Construct the action polynomial, verify it against brute force, and
    /// report per-construction agreement
    Poly {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Assemble the closed-form constructions verbatim, even where they
        /// diverge from the true counts
        #[arg(long)]
        paper_literal: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Verify a polynomial file against an action by brute force
    Verify {
        action: PathBuf,
        polynomial: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a polynomial file at a group element, exactly
    Eval {
        polynomial: PathBuf,
        /// Comma-separated exponents, e.g. "2,1,3"
        #[arg(long)]
        at: String,
    },
    /// Run a seeded random verification campaign
    Random {
        #[arg(long, value_enum, default_value_t = Kind::Abelian)]
        kind: Kind,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Bound on the total set size of each generated action
        #[arg(long)]
        max_set: Option<usize>,
        /// Abelian: maximum number of cyclic factors
        #[arg(long, default_value_t = 3)]
        max_moduli: usize,
        /// Abelian: largest allowed modulus; dihedral: largest allowed n
        #[arg(long)]
        modulus_bound: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

const EXIT_DIVERGENCE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INVALID: u8 = 3;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure { code: EXIT_PARSE, message: message.into() }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INVALID, message: message.into() }
    }
}

enum ParsedAction {
    Abelian(AbelianActionSpec),
    Dihedral(DihedralActionSpec),
}

enum ValidAction {
    Abelian(Action),
    Dihedral(DihedralAction),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Orbits { file, format, output } => cmd_orbits(&file, format, output.as_deref()),
        Command::Poly { file, format, paper_literal, output } => {
            cmd_poly(&file, format, paper_literal, output.as_deref())
        }
        Command::Verify { action, polynomial, format, output } => {
            cmd_verify(&action, &polynomial, format, output.as_deref())
        }
        Command::Eval { polynomial, at } => cmd_eval(&polynomial, &at),
        Command::Random { kind, seed, count, max_set, max_moduli, modulus_bound, format, output } => {
            cmd_random(kind, seed, count, max_set, max_moduli, modulus_bound, format, output.as_deref())
        }
    }
}

fn read_json(path: &Path) -> Result<serde_json::Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::parse(format!("invalid JSON in {}: {e}", path.display())))
}

fn parse_action_file(path: &Path) -> Result<ParsedAction, Failure> {
    let value = read_json(path)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Failure::parse("action file must be a JSON object"))?;
    let group = obj
        .get("group")
        .and_then(|g| g.as_object())
        .ok_or_else(|| Failure::parse("action file needs a \"group\" object"))?;
    let kind = group
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| Failure::parse("group needs a \"kind\" string"))?;
    let set_size = obj
        .get("set_size")
        .and_then(|n| n.as_u64())
        .ok_or_else(|| Failure::parse("action file needs a numeric \"set_size\""))? as usize;
    let generators: Vec<Vec<usize>> = obj
        .get("generators")
        .and_then(|g| g.as_array())
        .ok_or_else(|| Failure::parse("action file needs a \"generators\" array"))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Failure::parse("each generator must be an array of images"))?
                .iter()
                .map(|v| {
                    v.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| Failure::parse("generator images must be nonnegative integers"))
                })
                .collect::<Result<Vec<usize>, Failure>>()
        })
        .collect::<Result<Vec<Vec<usize>>, Failure>>()?;

    match kind {
        "abelian" => {
            let moduli: Vec<u64> = group
                .get("moduli")
                .and_then(|m| m.as_array())
                .ok_or_else(|| Failure::parse("abelian group needs a \"moduli\" array"))?
                .iter()
                .map(|v| v.as_u64().ok_or_else(|| Failure::parse("moduli must be positive integers")))
                .collect::<Result<Vec<u64>, Failure>>()?;
            Ok(ParsedAction::Abelian(AbelianActionSpec { moduli, set_size, generator_maps: generators }))
        }
        "dihedral" => {
            let n = group
                .get("n")
                .and_then(|v| v.as_u64())
                .ok_or_else(|| Failure::parse("dihedral group needs a numeric \"n\""))?;
            if generators.len() != 2 {
                return Err(Failure::parse("dihedral actions take exactly two generators: [r_map, s_map]"));
            }
            let mut it = generators.into_iter();
            let r_map = it.next().unwrap();
            let s_map = it.next().unwrap();
            Ok(ParsedAction::Dihedral(DihedralActionSpec { n, set_size, r_map, s_map }))
        }
        other => Err(Failure::parse(format!("unknown group kind \"{other}\""))),
    }
}

fn validate(parsed: ParsedAction) -> Result<ValidAction, Failure> {
    match parsed {
        ParsedAction::Abelian(spec) => validate_action(spec)
            .map(ValidAction::Abelian)
            .map_err(|e| Failure::invalid(format!("invalid action: {e}"))),
        ParsedAction::Dihedral(spec) => validate_dihedral(spec)
            .map(ValidAction::Dihedral)
            .map_err(|e| Failure::invalid(format!("invalid action: {e}"))),
    }
}

fn emit(text: String, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            // Tolerate a closed pipe (e.g. piping into head).
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{text}");
            Ok(())
        }
    }
}

fn json_u64s(v: &[u64]) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(|&x| x.into()).collect())
}

fn cmd_orbits(file: &Path, format: Format, output: Option<&Path>) -> Result<u8, Failure> {
    let action = validate(parse_action_file(file)?)?;
    let text = match action {
        ValidAction::Abelian(action) => {
            let canonical = canonicalize(&action)
                .map_err(|e| Failure::invalid(format!("canonicalization failed: {e}")))?;
            let cact = &canonical.action;
            let orbits = compute_orbits(cact);
            let mut rows = Vec::new();
            for orbit in &orbits {
                let data = stabilizer_data(cact, orbit)
                    .map_err(|e| Failure::invalid(format!("stabilizer computation failed: {e}")))?;
                let formula = orbit_size_formula(&data).ok();
                rows.push((orbit.clone(), data, formula));
            }
            match format {
                Format::Json => {
                    let mut obj = serde_json::Map::new();
                    obj.insert("moduli".into(), json_u64s(canonical.original_moduli()));
                    obj.insert("canonical_moduli".into(), json_u64s(cact.moduli()));
                    obj.insert("set_size".into(), (cact.set_size() as u64).into());
                    obj.insert(
                        "orbits".into(),
                        serde_json::Value::Array(
                            rows.iter()
                                .map(|(orbit, data, formula)| {
                                    let mut o = serde_json::Map::new();
                                    o.insert("base_point".into(), (orbit.base_point as u64).into());
                                    o.insert("size".into(), (orbit.members.len() as u64).into());
                                    o.insert("reduced_orders".into(), json_u64s(&data.reduced_orders));
                                    o.insert(
                                        "minimal_elements".into(),
                                        serde_json::Value::Array(
                                            data.minimal_elements.iter().map(|e| json_u64s(e)).collect(),
                                        ),
                                    );
                                    o.insert(
                                        "generating_set".into(),
                                        serde_json::Value::Array(
                                            data.generating_set.iter().map(|e| json_u64s(e)).collect(),
                                        ),
                                    );
                                    o.insert("indices".into(), json_u64s(&data.indices));
                                    if let Some(f) = formula {
                                        o.insert("formula_size".into(), (*f).into());
                                    }
                                    o.insert(
                                        "formula_matches".into(),
                                        (*formula == Some(orbit.members.len() as u64)).into(),
                                    );
                                    serde_json::Value::Object(o)
                                })
                                .collect(),
                        ),
                    );
                    serde_json::to_string_pretty(&serde_json::Value::Object(obj)).unwrap()
                }
                _ => {
                    let mut out = String::new();
                    out.push_str(&format!(
                        "group: {:?}{}\n",
                        canonical.original_moduli(),
                        if canonical.is_identity() {
                            String::new()
                        } else {
                            format!(" (canonicalized to {:?})", cact.moduli())
                        }
                    ));
                    out.push_str(&format!("set size: {}\norbits: {}\n", cact.set_size(), rows.len()));
                    for (orbit, data, formula) in &rows {
                        out.push_str(&format!(
                            "orbit at {}: size {} (formula {}), reduced orders {:?}\n",
                            orbit.base_point,
                            orbit.members.len(),
                            formula.map(|f| f.to_string()).unwrap_or_else(|| "inconsistent".into()),
                            data.reduced_orders,
                        ));
                        out.push_str(&format!(
                            "  minimal elements: {:?}\n  generating set: {:?} with indices {:?}\n",
                            data.minimal_elements, data.generating_set, data.indices,
                        ));
                    }
                    out
                }
            }
        }
        ValidAction::Dihedral(action) => {
            let orbits = dihedral_orbits(&action)
                .map_err(|e| Failure::invalid(format!("orbit classification failed: {e}")))?;
            match format {
                Format::Json => {
                    let mut obj = serde_json::Map::new();
                    obj.insert("n".into(), action.n().into());
                    obj.insert("set_size".into(), (action.set_size() as u64).into());
                    obj.insert(
                        "orbits".into(),
                        serde_json::Value::Array(
                            orbits
                                .iter()
                                .map(|o| {
                                    let mut m = serde_json::Map::new();
                                    m.insert("base_point".into(), (o.base as u64).into());
                                    m.insert("size".into(), o.size().into());
                                    m.insert("n1".into(), o.n1.into());
                                    m.insert("kind".into(), o.kind_label().into());
                                    serde_json::Value::Object(m)
                                })
                                .collect(),
                        ),
                    );
                    serde_json::to_string_pretty(&serde_json::Value::Object(obj)).unwrap()
                }
                _ => {
                    let mut out = format!(
                        "group: D_{}\nset size: {}\norbits: {}\n",
                        action.n(),
                        action.set_size(),
                        orbits.len()
                    );
                    for o in &orbits {
                        out.push_str(&format!(
                            "orbit at {}: size {}, n1 = {}, {}\n",
                            o.base,
                            o.size(),
                            o.n1,
                            o.kind_label()
                        ));
                    }
                    out
                }
            }
        }
    };
    emit(text, output)?;
    Ok(0)
}

fn render_report(report: &SieveReport, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => serde_json::to_string_pretty(&report.to_json()).unwrap(),
        Format::Latex => report.to_latex(),
    }
}

fn cmd_poly(
    file: &Path,
    format: Format,
    paper_literal: bool,
    output: Option<&Path>,
) -> Result<u8, Failure> {
    let report = match validate(parse_action_file(file)?)? {
        ValidAction::Abelian(action) => {
            let opts = SieveOptions { paper_literal_assembly: paper_literal, ..SieveOptions::default() };
            action_polynomial(&action, &opts)
                .map_err(|e| Failure::invalid(format!("construction failed: {e}")))?
        }
        ValidAction::Dihedral(action) => dihedral_action_polynomial(&action)
            .map_err(|e| Failure::invalid(format!("construction failed: {e}")))?,
    };
    emit(render_report(&report, format), output)?;
    if report.all_pass() && !report.paper_divergent() {
        Ok(0)
    } else {
        Ok(EXIT_DIVERGENCE)
    }
}

/// Accept either a bare polynomial JSON or a report JSON carrying one under
/// the "polynomial" key.
fn parse_polynomial_file(path: &Path) -> Result<MultiPoly, Failure> {
    let value = read_json(path)?;
    let poly_value = match value.get("polynomial") {
        Some(inner) => inner,
        None => &value,
    };
    MultiPoly::from_json(poly_value)
        .map_err(|e| Failure::parse(format!("invalid polynomial in {}: {e}", path.display())))
}

fn verdict_lines(verdicts: &[VerificationVerdict]) -> String {
    let mut out = String::new();
    for v in verdicts {
        out.push_str(&format!(
            "{} at {:?}: expected {}, got {}\n",
            if v.pass { "PASS" } else { "FAIL" },
            v.element,
            v.expected,
            v.got.as_ref().map(format_rational).unwrap_or_else(|| "non-rational".into()),
        ));
    }
    let passed = verdicts.iter().filter(|v| v.pass).count();
    out.push_str(&format!("{passed}/{} verdicts pass\n", verdicts.len()));
    out
}

fn verdicts_json(verdicts: &[VerificationVerdict]) -> serde_json::Value {
    let mut obj = serde_json::Map::new();
    obj.insert(
        "verdicts".into(),
        serde_json::Value::Array(
            verdicts
                .iter()
                .map(|v| {
                    let mut m = serde_json::Map::new();
                    m.insert("element".into(), json_u64s(&v.element));
                    m.insert("expected".into(), v.expected.into());
                    m.insert(
                        "got".into(),
                        match &v.got {
                            Some(r) => serde_json::Value::Array(vec![
                                r.numer().to_string().into(),
                                r.denom().to_string().into(),
                            ]),
                            None => serde_json::Value::Null,
                        },
                    );
                    m.insert("pass".into(), v.pass.into());
                    serde_json::Value::Object(m)
                })
                .collect(),
        ),
    );
    obj.insert(
        "all_pass".into(),
        verdicts.iter().all(|v| v.pass).into(),
    );
    serde_json::Value::Object(obj)
}

fn cmd_verify(
    action_path: &Path,
    poly_path: &Path,
    format: Format,
    output: Option<&Path>,
) -> Result<u8, Failure> {
    let poly = parse_polynomial_file(poly_path)?;
    let verdicts = match validate(parse_action_file(action_path)?)? {
        ValidAction::Abelian(action) => {
            if poly.profile().orders() == action.moduli() {
                verify_polynomial_abelian(&action, &poly)
            } else {
                // The polynomial may live over the canonicalized moduli.
                let canonical = canonicalize(&action)
                    .map_err(|e| Failure::invalid(format!("canonicalization failed: {e}")))?;
                verify_polynomial_abelian(&canonical.action, &poly)
            }
            .map_err(|e| Failure::invalid(format!("verification failed: {e}")))?
        }
        ValidAction::Dihedral(action) => verify_polynomial_dihedral(&action, &poly)
            .map_err(|e| Failure::invalid(format!("verification failed: {e}")))?,
    };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&verdicts_json(&verdicts)).unwrap(),
        _ => verdict_lines(&verdicts),
    };
    emit(text, output)?;
    if verdicts.iter().all(|v| v.pass) {
        Ok(0)
    } else {
        Ok(EXIT_DIVERGENCE)
    }
}

fn cmd_eval(poly_path: &Path, at: &str) -> Result<u8, Failure> {
    let poly = parse_polynomial_file(poly_path)?;
    let exponents: Vec<i64> = at
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|e| Failure::parse(format!("bad exponent \"{s}\": {e}"))))
        .collect::<Result<Vec<i64>, Failure>>()?;
    let value = poly
        .evaluate(&EvaluationPoint::new(exponents))
        .map_err(|e| Failure::invalid(format!("evaluation failed: {e}")))?;
    match value.as_rational() {
        Some(r) => println!("{}", format_rational(&r)),
        None => {
            let coords: Vec<String> = value
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !csp_core::rational::is_zero(c))
                .map(|(k, c)| format!("{} z^{k}", format_rational(c)))
                .collect();
            println!("non-rational in Q(zeta_{}): {}", value.order(), coords.join(" + "));
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_random(
    kind: Kind,
    seed: u64,
    count: usize,
    max_set: Option<usize>,
    max_moduli: usize,
    modulus_bound: Option<u64>,
    format: Format,
    output: Option<&Path>,
) -> Result<u8, Failure> {
    match kind {
        Kind::Abelian => {
            let template = RandomActionParams {
                max_moduli,
                modulus_bound: modulus_bound.unwrap_or(27),
                max_set_size: max_set.unwrap_or(200),
                ..RandomActionParams::abelian_defaults(seed)
            };
            let report = run_abelian_campaign(seed, count, &template)
                .map_err(|e| Failure::invalid(format!("campaign failed: {e}")))?;
            let text = match format {
                Format::Json => {
                    let mut obj = serde_json::Map::new();
                    obj.insert("kind".into(), "abelian".into());
                    obj.insert("seed".into(), seed.into());
                    obj.insert("actions".into(), (report.actions as u64).into());
                    obj.insert("elements".into(), (report.elements_total as u64).into());
                    obj.insert("exact_pass".into(), (report.exact_pass as u64).into());
                    obj.insert("exact_all_pass".into(), report.exact_all_pass().into());
                    obj.insert("paper_pass".into(), (report.paper_pass as u64).into());
                    obj.insert("paper_total".into(), (report.paper_total as u64).into());
                    obj.insert(
                        "paper_divergence_count".into(),
                        (report.paper_divergence_count as u64).into(),
                    );
                    obj.insert(
                        "failing_seeds".into(),
                        serde_json::Value::Array(
                            report
                                .paper_divergences
                                .iter()
                                .map(|f| f.seed.into())
                                .collect(),
                        ),
                    );
                    serde_json::to_string_pretty(&serde_json::Value::Object(obj)).unwrap()
                }
                _ => {
                    let mut out = format!(
                        "abelian campaign: {} actions from seed {seed}\n\
                         exact constructions: {}/{} element verdicts pass\n\
                         closed-form product: {}/{} agree ({} divergences)\n",
                        report.actions,
                        report.exact_pass,
                        report.elements_total,
                        report.paper_pass,
                        report.paper_total,
                        report.paper_divergence_count,
                    );
                    for f in report.paper_divergences.iter().take(10) {
                        out.push_str(&format!(
                            "  divergence: seed {} [{}] at {:?}, expected {}, got {}\n",
                            f.seed,
                            f.construction,
                            f.element,
                            format_rational(&f.expected),
                            f.got.as_ref().map(format_rational).unwrap_or_else(|| "non-rational".into()),
                        ));
                    }
                    if !report.exact_all_pass() {
                        out.push_str("EXACT CONSTRUCTION FAILURES:\n");
                        for f in &report.exact_failures {
                            out.push_str(&format!(
                                "  seed {} [{}] at {:?}\n",
                                f.seed, f.construction, f.element
                            ));
                        }
                    }
                    out
                }
            };
            emit(text, output)?;
            Ok(if report.exact_all_pass() { 0 } else { EXIT_DIVERGENCE })
        }
        Kind::Dihedral => {
            let report = run_dihedral_campaign(
                seed,
                count,
                modulus_bound.unwrap_or(12),
                max_set.unwrap_or(48),
            )
            .map_err(|e| Failure::invalid(format!("campaign failed: {e}")))?;
            let text = match format {
                Format::Json => {
                    let mut obj = serde_json::Map::new();
                    obj.insert("kind".into(), "dihedral".into());
                    obj.insert("seed".into(), seed.into());
                    obj.insert("actions".into(), (report.actions as u64).into());
                    obj.insert("elements".into(), (report.elements_total as u64).into());
                    obj.insert("exact_pass".into(), (report.exact_pass as u64).into());
                    obj.insert("exact_all_pass".into(), report.exact_all_pass().into());
                    obj.insert(
                        "closed_form_full_checked".into(),
                        (report.formula_b_full_checked as u64).into(),
                    );
                    obj.insert(
                        "closed_form_full_divergences".into(),
                        (report.formula_b_full_divergences.len() as u64).into(),
                    );
                    obj.insert(
                        "closed_form_partial_divergences".into(),
                        (report.formula_b_partial_divergence_count as u64).into(),
                    );
                    if let Some(c) = &report.formula_b_counterexample {
                        let mut m = serde_json::Map::new();
                        m.insert("seed".into(), c.seed.into());
                        m.insert("n".into(), c.n.into());
                        m.insert("n1".into(), c.n1.into());
                        m.insert("element".into(), json_u64s(&c.element));
                        m.insert("expected".into(), format_rational(&c.expected).into());
                        m.insert(
                            "got".into(),
                            c.got
                                .as_ref()
                                .map(|r| serde_json::Value::from(format_rational(r)))
                                .unwrap_or(serde_json::Value::Null),
                        );
                        obj.insert("counterexample".into(), serde_json::Value::Object(m));
                    }
                    serde_json::to_string_pretty(&serde_json::Value::Object(obj)).unwrap()
                }
                _ => {
                    let mut out = format!(
                        "dihedral campaign: {} actions from seed {seed} (n covering {:?})\n\
                         interpolated polynomial: {}/{} element verdicts pass\n\
                         doubled-orbit closed form: exact on {} full-orbit checks, {} divergences on partial orbits\n",
                        report.actions,
                        report.ns_covered,
                        report.exact_pass,
                        report.elements_total,
                        report.formula_b_full_checked,
                        report.formula_b_partial_divergence_count,
                    );
                    if let Some(c) = &report.formula_b_counterexample {
                        out.push_str(&format!(
                            "  counterexample: seed {}, n = {}, n1 = {}, element (i, j) = ({}, {}), true count {}, formula value {}\n",
                            c.seed,
                            c.n,
                            c.n1,
                            c.element[0],
                            c.element[1],
                            format_rational(&c.expected),
                            c.got.as_ref().map(format_rational).unwrap_or_else(|| "non-rational".into()),
                        ));
                    }
                    out
                }
            };
            emit(text, output)?;
            Ok(if report.exact_all_pass() { 0 } else { EXIT_DIVERGENCE })
        }
    }
}
