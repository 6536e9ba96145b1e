//! Command-line front end. One subcommand per capability, deterministic
//! machine-readable output.
//!
//! Exit status: 0 = computed (even when claims are REFUTED), 2 = invalid
//! input, 3 = a resource budget was exceeded.
//!
//! JSON output is canonical: object keys are sorted, reruns are
//! byte-identical at any worker count, and integers above 2^53 - 1 in
//! magnitude are serialized as exact decimal strings so that consumers
//! reading doubles cannot lose precision.

use crate::arith::{ArithError, FactorBudget};
use crate::classgroup::{self, ClassGroupError, ClassGroupStructure};
use crate::family::{self, Budget, FamilyError, FieldInstance, VerificationRecord};
use crate::kishi_miyake::{self, K4Branch, KmInstance, KmVerdict};
use crate::quadforms::FormError;
use crate::rank_relation::{self, Triple, TripleError, TripleSearchResult};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Exact class groups of quadratic fields and a 3-rank verification toolkit.
#[derive(Debug, Parser)]
#[command(name = "quadclass", version, max_term_width = 100)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format. CSV applies to list-shaped results (found triples);
    /// scalar reports fall back to table.
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: Format,

    /// Box half-width for the triple search stage of `verify`.
    #[arg(long, global = true, default_value_t = 1000)]
    pub triple_bound: u64,

    /// Pollard-rho iteration allowance for squarefree decomposition.
    #[arg(long, global = true, default_value_t = FactorBudget::default().rho_iterations)]
    pub factor_budget: u64,

    /// Largest |fundamental discriminant| the class-group stages accept.
    #[arg(long, global = true, default_value_t = 1u64 << 32)]
    pub class_budget: u64,

    /// Worker threads for the enumeration kernels (default: all cores;
    /// also settable via QUADCLASS_WORKERS). Results are identical at any
    /// worker count.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Class group structure for a fundamental discriminant
    /// (negative: imaginary; positive: real, narrow sense).
    Classgroup {
        #[arg(allow_negative_numbers = true)]
        discriminant: i128,
    },
    /// 3-rank of the class group (narrow for positive discriminants).
    Rank3 {
        #[arg(allow_negative_numbers = true)]
        discriminant: i128,
    },
    /// Evaluate the Kishi-Miyake conditions (K-1)-(K-4) for (u, v).
    KmCheck {
        #[arg(allow_negative_numbers = true)]
        u: i128,
        #[arg(allow_negative_numbers = true)]
        v: i128,
    },
    /// Scan the (K-5)-(K-8) triple box for squarefree d with 3 ∤ d.
    SearchTriples {
        d: u64,
        /// Box half-width; defaults to --triple-bound.
        bound: Option<u64>,
    },
    /// Validate family parameters and build the field instance.
    Family { k: u64, l: u64, n: u64 },
    /// Full verification run for one family member.
    Verify { k: u64, l: u64, n: u64 },
}

// ---- canonical JSON helpers ----

const JS_SAFE_MAX: i128 = (1 << 53) - 1;

fn jint_i128(v: i128) -> Value {
    if v.abs() <= JS_SAFE_MAX {
        json!(v as i64)
    } else {
        Value::String(v.to_string())
    }
}

fn jint_u64(v: u64) -> Value {
    jint_i128(v as i128)
}

fn jint_big(v: &BigInt) -> Value {
    match v.to_i128() {
        Some(x) if x.abs() <= JS_SAFE_MAX => json!(x as i64),
        _ => Value::String(v.to_string()),
    }
}

fn structure_json(s: &ClassGroupStructure) -> Value {
    json!({
        "discriminant": jint_i128(s.discriminant),
        "order": jint_u64(s.order),
        "elementary_divisors": s.elementary_divisors.iter().map(|d| jint_u64(*d)).collect::<Vec<_>>(),
        "three_rank": s.three_rank,
    })
}

fn km_instance_json(i: &KmInstance) -> Value {
    json!({
        "u": jint_big(&i.u),
        "v": jint_big(&i.v),
        "poly_p": jint_big(&i.poly_p),
        "poly_q": jint_big(&i.poly_q),
        "disc_f": jint_big(&i.disc_f),
    })
}

fn km_verdict_json(v: &KmVerdict) -> Value {
    json!({
        "k1": v.k1,
        "k2": v.k2,
        "k3": v.k3,
        "k4_branch": K4Branch::label(v.k4_branch),
        "all_satisfied": v.all_satisfied,
    })
}

fn instance_json(i: &FieldInstance) -> Value {
    json!({
        "radicand_minus": jint_big(&i.radicand_minus),
        "radicand_plus": jint_big(&i.radicand_plus),
        "a": jint_big(&BigInt::from(i.a.clone())),
        "d": jint_big(&BigInt::from(i.d.clone())),
        "disc_minus": jint_big(&i.disc_minus),
        "disc_plus": jint_big(&i.disc_plus),
    })
}

fn triple_json(t: &Triple) -> Value {
    json!({"x": jint_i128(t.x), "y": jint_i128(t.y), "z": jint_i128(t.z)})
}

fn search_json(r: &TripleSearchResult) -> Value {
    json!({
        "d": jint_u64(r.d),
        "bound": jint_u64(r.bound),
        "found": r.found.iter().map(triple_json).collect::<Vec<_>>(),
        "exhausted": r.exhausted,
    })
}

fn record_json(rec: &VerificationRecord) -> Value {
    let opt = |v: Option<Value>| v.unwrap_or(Value::Null);
    let claims: Map<String, Value> = rec
        .paper_claims
        .iter()
        .map(|(k, v)| (k.to_string(), Value::String(v.label().to_string())))
        .collect();
    json!({
        "params": {"k": jint_u64(rec.k), "l": jint_u64(rec.l), "n": jint_u64(rec.n)},
        "instance": opt(rec.instance.as_ref().map(instance_json)),
        "km_instance": km_instance_json(&rec.km_instance),
        "km_verdict": km_verdict_json(&rec.km_verdict),
        "r": opt(rec.r.map(|r| json!(r))),
        "s": opt(rec.s.map(|s| json!(s))),
        "group_minus": opt(rec.group_minus.as_ref().map(structure_json)),
        "group_plus": opt(rec.group_plus.as_ref().map(structure_json)),
        "triple_search": opt(rec.triple_search.as_ref().map(search_json)),
        "paper_claims": claims,
    })
}

// ---- table rendering ----

fn render_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, val, out);
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push(format!("{prefix}: []"));
            } else if items.iter().all(|i| !i.is_object() && !i.is_array()) {
                let joined = items
                    .iter()
                    .map(render_scalar)
                    .collect::<Vec<_>>()
                    .join(", ");
                out.push(format!("{prefix}: [{joined}]"));
            } else {
                for (i, item) in items.iter().enumerate() {
                    flatten(&format!("{prefix}[{i}]"), item, out);
                }
            }
        }
        scalar => out.push(format!("{prefix}: {}", render_scalar(scalar))),
    }
}

fn render(doc: &Value, format: Format, csv: Option<String>) -> String {
    match format {
        Format::Json => doc.to_string(),
        Format::Csv => csv.unwrap_or_else(|| render(doc, Format::Table, None)),
        Format::Table => {
            let mut lines = Vec::new();
            flatten("", doc, &mut lines);
            lines.join("\n")
        }
    }
}

fn triples_csv(r: &TripleSearchResult) -> String {
    let mut s = String::from("x,y,z");
    for t in &r.found {
        s.push_str(&format!("\n{},{},{}", t.x, t.y, t.z));
    }
    s
}

// ---- dispatch ----

enum Failure {
    InvalidInput(String),
    Budget(String),
}

impl From<ClassGroupError> for Failure {
    fn from(e: ClassGroupError) -> Self {
        match e {
            ClassGroupError::Arith(a) => Failure::Budget(a.to_string()),
            other => Failure::InvalidInput(other.to_string()),
        }
    }
}

impl From<TripleError> for Failure {
    fn from(e: TripleError) -> Self {
        Failure::InvalidInput(e.to_string())
    }
}

impl From<FormError> for Failure {
    fn from(e: FormError) -> Self {
        Failure::InvalidInput(e.to_string())
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Factorization(ArithError::FactorizationBudgetExceeded(_)) => {
                Failure::Budget(e.to_string())
            }
            other => Failure::InvalidInput(other.to_string()),
        }
    }
}

fn class_budget_check(disc: i128, limit: u64) -> Result<(), Failure> {
    if disc.unsigned_abs() > limit as u128 {
        return Err(Failure::Budget(format!(
            "|{disc}| exceeds the class budget {limit}; raise --class-budget"
        )));
    }
    Ok(())
}

struct Report {
    body: String,
    status: i32,
}

fn execute(config: &RunConfig) -> Result<Report, Failure> {
    let format = config.format;
    let ok = |body: String| Ok(Report { body, status: 0 });
    match &config.command {
        Command::Classgroup { discriminant } => {
            class_budget_check(*discriminant, config.class_budget)?;
            let s = if *discriminant < 0 {
                classgroup::class_group_imaginary(*discriminant)?
            } else {
                classgroup::narrow_class_group_real(*discriminant)?
            };
            ok(render(&structure_json(&s), format, None))
        }
        Command::Rank3 { discriminant } => {
            class_budget_check(*discriminant, config.class_budget)?;
            let r = if *discriminant < 0 {
                classgroup::three_rank_imaginary(*discriminant)?
            } else {
                classgroup::three_rank_real(*discriminant)?
            };
            let doc = json!({"discriminant": jint_i128(*discriminant), "three_rank": r});
            ok(render(&doc, format, None))
        }
        Command::KmCheck { u, v } => {
            let instance = kishi_miyake::km_polynomial(&BigInt::from(*u), &BigInt::from(*v))
                .map_err(|e| Failure::InvalidInput(e.to_string()))?;
            let verdict = kishi_miyake::km_verdict(&instance);
            let doc = json!({
                "instance": km_instance_json(&instance),
                "verdict": km_verdict_json(&verdict),
            });
            ok(render(&doc, format, None))
        }
        Command::SearchTriples { d, bound } => {
            let bound = bound.unwrap_or(config.triple_bound);
            let result = rank_relation::search_triples(*d, bound)?;
            let csv = triples_csv(&result);
            ok(render(&search_json(&result), format, Some(csv)))
        }
        Command::Family { k, l, n } => {
            let violations = family::validate_params(*k, *l, *n);
            if !violations.is_empty() {
                let doc = json!({
                    "violations": violations.iter().map(|v| v.label()).collect::<Vec<_>>(),
                });
                return Ok(Report {
                    body: render(&doc, format, None),
                    status: 2,
                });
            }
            let params = family::FamilyParams::new(*k, *l, *n).expect("validated");
            let budget = FactorBudget {
                rho_iterations: config.factor_budget,
            };
            let instance = family::instantiate_with_budget(&params, &budget)?;
            ok(render(&instance_json(&instance), format, None))
        }
        Command::Verify { k, l, n } => {
            let params = family::FamilyParams::new(*k, *l, *n)?;
            let budget = Budget {
                factor: FactorBudget {
                    rho_iterations: config.factor_budget,
                },
                class_disc_limit: config.class_budget,
                triple_pairs: 100_000_000,
            };
            let record = family::verify_claims(&params, config.triple_bound, &budget)?;
            let status = if record.budget_exhausted() { 3 } else { 0 };
            Ok(Report {
                body: render(&record_json(&record), format, None),
                status,
            })
        }
    }
}

/// Parse arguments and run; returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap renders help/version on stdout with success status
            if e.use_stderr() {
                eprint!("{e}");
                return 2;
            }
            print!("{e}");
            return 0;
        }
    };
    let workers = config.workers.or_else(|| {
        std::env::var("QUADCLASS_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    let outcome = match workers {
        Some(w) if w > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .expect("worker pool");
            pool.install(|| execute(&config))
        }
        _ => execute(&config),
    };
    match outcome {
        Ok(report) => {
            println!("{}", report.body);
            report.status
        }
        Err(Failure::InvalidInput(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            3
        }
    }
}
