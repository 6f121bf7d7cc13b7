use std::fmt::Write as _;
use std::io::{ErrorKind, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use hodgemod::deriv::{bracket_der, epsilon, is_der0};
use hodgemod::freelie::{witt_dimension, FreeLie, DEFAULT_MAX_DEGREE};
use hodgemod::json::{DerivationJson, NumericPolyJson, PeriodSpaceJson};
use hodgemod::modforms::{cusp_basis, delta, dim_cusp_forms, eisenstein_e, eisenstein_g, SeriesJson, DEFAULT_TERMS};
use hodgemod::periodpoly::{cocycle_space, cuspidal_quotient, numeric_period_polynomial, split_parity, PeriodSpace};
use hodgemod::relations::{match_to_period_polynomials, quadratic_relations, RelationConfig};
use hodgemod::scalar::{q, rational_to_string, Rational};
use hodgemod::sl2::{raising, Sl2Z};
use hodgemod::transport::{parse_complex, EisensteinConnection};

#[derive(Parser, Debug)]
#[command(name = "hodgemod", version, about = "Free Lie derivations, period polynomials and Eisenstein monodromy for SL2(Z)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; csv is only offered for flat tables.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Worker threads (defaults to RAYON_NUM_THREADS or the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Largest Lie degree for commands that expand derivations directly.
    #[arg(long, default_value_t = DEFAULT_MAX_DEGREE, global = true)]
    max_lie_degree: usize,

    /// Tolerance used for numeric pass/fail verdicts.
    #[arg(long, default_value_t = 1e-8, global = true)]
    tolerance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Part {
    Plus,
    Minus,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quadratic relations among the eps_{2j+2} of a cusp weight, matched with period polynomials.
    Relations {
        #[arg(long)]
        weight: usize,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
        /// Accept weights 20 and 22 (degree-25 Lyndon bases; several GB of memory in the worst case).
        #[arg(long)]
        allow_large: bool,
    },
    /// Exact period polynomial space of a cusp weight.
    PeriodSpace {
        #[arg(long)]
        weight: usize,
        #[arg(long, value_enum)]
        part: Option<Part>,
        /// Quotient by the coboundary.
        #[arg(long)]
        cuspidal: bool,
    },
    /// Numeric period polynomial of an echelon cusp form.
    PeriodNumeric {
        #[arg(long)]
        weight: usize,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
        /// Which member of the echelon cusp basis.
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// q-expansion of G_{2k} (or E_{2k} with --normalized).
    Eisenstein {
        #[arg(long)]
        weight: usize,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
        #[arg(long)]
        normalized: bool,
    },
    /// Echelon basis of cusp forms.
    CuspBasis {
        #[arg(long)]
        weight: usize,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
    },
    /// The derivation eps_{2n} on the generators.
    Epsilon {
        /// The index 2n (even, >= 0).
        #[arg(long)]
        weight: usize,
    },
    /// Theta(gamma) for the Eisenstein connection.
    Transport {
        /// Word in S, T, U, I (lowercase for inverses), e.g. "S*T".
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "i")]
        base: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, value_delimiter = ',', default_value = "4,6")]
        weights: Vec<usize>,
        #[arg(long, default_value_t = 256)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
    },
    /// Residual of Theta(gamma mu) = Theta(gamma) (gamma . Theta(mu)).
    CocycleCheck {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        mu: String,
        #[arg(long, default_value = "i")]
        base: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, value_delimiter = ',', default_value = "4,6")]
        weights: Vec<usize>,
        #[arg(long, default_value_t = 256)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
    },
    /// Run the exact invariant suite.
    Selftest,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<hodgemod::Error> for Failure {
    fn from(e: hodgemod::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational_to_string).collect()
}

fn period_space(weight: usize, part: Option<Part>, cuspidal: bool) -> hodgemod::Result<PeriodSpace> {
    if weight < 4 || weight % 2 == 1 {
        return Err(hodgemod::Error::InvalidWeight(format!("weight must be even and ≥ 4, got {weight}")));
    }
    let full = cocycle_space(weight - 2)?;
    let space = match part {
        None => full,
        Some(p) => {
            let (plus, minus) = split_parity(&full)?;
            if p == Part::Plus {
                plus
            } else {
                minus
            }
        }
    };
    if cuspidal {
        cuspidal_quotient(&space)
    } else {
        Ok(space)
    }
}

fn sl2_word(s: &str) -> Result<Sl2Z, Failure> {
    Sl2Z::parse_word(s).map_err(|e| usage(e.to_string()))
}

fn base_point(s: &str) -> Result<Complex64, Failure> {
    parse_complex(s).map_err(|e| usage(e.to_string()))
}

enum Report {
    Json(Value),
    Table { header: Vec<String>, rows: Vec<Vec<String>> },
}

fn run(cli: &Cli) -> Result<(Report, bool), Failure> {
    let ok = |v: Value| Ok((Report::Json(v), true));
    match &cli.command {
        Command::Relations { weight, terms, allow_large } => {
            let cfg = RelationConfig { allow_large: *allow_large, terms: *terms, ..Default::default() };
            let n = cfg.check_weight(*weight)?;
            ok(match_to_period_polynomials(n, &cfg)?.to_json())
        }
        Command::PeriodSpace { weight, part, cuspidal } => {
            let space = period_space(*weight, *part, *cuspidal)?;
            if cli.format == Format::Csv {
                let header = ["basis_index", "exponent_of_a", "coefficient"].map(String::from).to_vec();
                let rows = space
                    .basis
                    .iter()
                    .enumerate()
                    .flat_map(|(i, p)| p.iter().map(move |(m, c)| vec![i.to_string(), m.to_string(), rational_to_string(c)]))
                    .collect();
                return Ok((Report::Table { header, rows }, true));
            }
            let mut v = serde_json::to_value(PeriodSpaceJson::from(&space)).expect("serializable");
            v["flavor"] = json!(space.flavor());
            ok(v)
        }
        Command::PeriodNumeric { weight, terms, index } => {
            let basis = cusp_basis(*weight, *terms)?;
            let f = basis.get(*index).ok_or_else(|| {
                Failure { code: 1, message: format!("weight {weight} has {} cusp forms, no index {index}", basis.len()) }
            })?;
            let r = numeric_period_polynomial::<f64>(f)?;
            let mut v = serde_json::to_value(NumericPolyJson::from(&r)).expect("serializable");
            v["cocycle_residual"] = json!(r.cocycle_residual());
            ok(v)
        }
        Command::Eisenstein { weight, terms, normalized } => {
            let s = if *normalized { eisenstein_e(*weight, *terms)? } else { eisenstein_g(*weight, *terms)? };
            ok(serde_json::to_value(SeriesJson::from(&s)).expect("serializable"))
        }
        Command::CuspBasis { weight, terms } => {
            let basis = cusp_basis(*weight, *terms)?;
            ok(json!({
                "weight": weight,
                "dimension": basis.len(),
                "basis": basis.iter().map(|f| rationals(f.coeffs())).collect::<Vec<_>>(),
            }))
        }
        Command::Epsilon { weight } => {
            if weight % 2 == 1 {
                return Err(Failure { code: 1, message: format!("eps_{{2n}} needs an even index, got {weight}") });
            }
            let alg = FreeLie::new(cli.max_lie_degree)?;
            let e = epsilon::<Rational>(&alg, weight / 2)?;
            let mut v = serde_json::to_value(DerivationJson::from(&e.derivation)).expect("serializable");
            v["der0"] = json!(is_der0(&alg, &e.derivation)?);
            v["highest_weight"] = json!(bracket_der(&alg, &raising(), &e.derivation)?.is_zero());
            ok(v)
        }
        Command::Transport { word, base, depth, weights, steps, terms } => {
            let g = sl2_word(word)?;
            let z = base_point(base)?;
            let conn = EisensteinConnection::<f64>::new(weights, *terms)?;
            ok(conn.theta(&g, z, *depth, *steps)?.to_json())
        }
        Command::CocycleCheck { gamma, mu, base, depth, weights, steps, terms } => {
            let (g, h) = (sl2_word(gamma)?, sl2_word(mu)?);
            let z = base_point(base)?;
            let conn = EisensteinConnection::<f64>::new(weights, *terms)?;
            let residual = conn.cocycle_residual(&g, &h, z, *depth, *steps)?;
            ok(json!({ "residual": residual, "tolerance": cli.tolerance, "within_tolerance": residual < cli.tolerance }))
        }
        Command::Selftest => {
            let checks = selftest(cli.max_lie_degree)?;
            let passed = checks.iter().all(|c| c.1);
            if cli.format == Format::Csv {
                let header = ["check", "passed", "detail"].map(String::from).to_vec();
                let rows = checks.into_iter().map(|(n, p, d)| vec![n, p.to_string(), d]).collect();
                return Ok((Report::Table { header, rows }, passed));
            }
            let v = json!({
                "passed": passed,
                "checks": checks.iter().map(|(n, p, d)| json!({"check": n, "passed": p, "detail": d})).collect::<Vec<_>>(),
            });
            Ok((Report::Json(v), passed))
        }
    }
}

type Check = (String, bool, String);

fn selftest(max_lie_degree: usize) -> hodgemod::Result<Vec<Check>> {
    let mut out: Vec<Check> = Vec::new();
    let alg = FreeLie::new(max_lie_degree.max(12))?;
    for d in 1..=12 {
        let got = alg.lyndon_basis(d)?.len() as u64;
        out.push((format!("witt degree {d}"), got == witt_dimension(d), format!("{got} Lyndon words")));
    }
    let alg = FreeLie::new(max_lie_degree)?;
    let e = raising::<Rational>();
    for n in 0..=8 {
        if 2 * n + 2 > max_lie_degree {
            break;
        }
        let eps = epsilon::<Rational>(&alg, n)?.derivation;
        out.push((format!("eps_{} in Der0", 2 * n), is_der0(&alg, &eps)?, String::new()));
        if n > 0 {
            out.push((format!("eps_{} highest weight", 2 * n), bracket_der(&alg, &e, &eps)?.is_zero(), String::new()));
        }
    }
    for two_n in (2..=24).step_by(2) {
        let full = cocycle_space(two_n)?;
        let s = dim_cusp_forms(two_n + 2);
        out.push((format!("cocycle dimension 2n={two_n}"), full.dim() == 2 * s + 1, format!("{} = 2*{s}+1", full.dim())));
        let plus = cuspidal_quotient(&split_parity(&full)?.0)?;
        out.push((format!("cuspidal plus dimension 2n={two_n}"), plus.dim() == s, format!("{} vs {s}", plus.dim())));
    }
    let terms = 50;
    let lhs = eisenstein_e(4, terms)?.pow(3, terms).sub(&eisenstein_e(6, terms)?.pow(2, terms))?;
    out.push(("E4^3 - E6^2 = 1728 Delta".into(), lhs == delta(terms).scale(&q(1728)), String::new()));
    let cfg = RelationConfig::default();
    for weight in (6..=14).step_by(2) {
        let n = cfg.check_weight(weight)?;
        let k = quadratic_relations(n, &cfg)?.len();
        out.push((format!("relation count weight {weight}"), k == dim_cusp_forms(weight), format!("{k} relations")));
    }
    Ok(out)
}

fn render(report: Report, format: Format) -> Result<String, Failure> {
    let mut out = String::new();
    match (report, format) {
        (Report::Json(v), Format::Json) => out = serde_json::to_string_pretty(&v).expect("serializable") + "\n",
        (Report::Json(v), Format::Text) => write_text(&mut out, &v, ""),
        (Report::Json(_), Format::Csv) => return Err(usage("csv output is only available for flat tables (period-space, selftest)")),
        (Report::Table { header, rows }, Format::Csv) => {
            out = header.join(",") + "\n";
            for r in rows {
                out += &(r.join(",") + "\n");
            }
        }
        (Report::Table { header, rows }, _) => {
            let v: Vec<Value> = rows
                .into_iter()
                .map(|r| Value::Object(header.iter().cloned().zip(r.into_iter().map(Value::String)).collect()))
                .collect();
            if format == Format::Json {
                out = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
            } else {
                write_text(&mut out, &Value::Array(v), "");
            }
        }
    }
    Ok(out)
}

fn emit(report: Report, format: Format) -> Result<(), Failure> {
    let text = render(report, format)?;
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(Failure { code: 1, message: format!("writing output: {e}") }),
        _ => Ok(()),
    }
}

fn write_text(out: &mut String, v: &Value, indent: &str) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if x.is_object() || (x.is_array() && x.as_array().is_some_and(|a| a.iter().any(|y| y.is_object() || y.is_array()))) {
                    let _ = writeln!(out, "{indent}{k}:");
                    write_text(out, x, &format!("{indent}  "));
                } else {
                    let _ = writeln!(out, "{indent}{k}: {}", scalar_text(x));
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if x.is_object() {
                    write_text(out, x, indent);
                    out.push('\n');
                } else {
                    let _ = writeln!(out, "{indent}{}", scalar_text(x));
                }
            }
        }
        _ => {
            let _ = writeln!(out, "{indent}{}", scalar_text(v));
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) if a.is_empty() => "[]".into(),
        Value::Array(a) => a.iter().map(scalar_text).collect::<Vec<_>>().join(" "),
        _ => v.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("warning: could not set thread count: {e}");
        }
    }
    if cli.tolerance <= 0.0 || cli.tolerance >= 1.0 {
        eprintln!("error: tolerance must lie in (0, 1)");
        return ExitCode::from(2);
    }
    let result = run(&cli).and_then(|(report, passed)| emit(report, cli.format).map(|_| passed));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
