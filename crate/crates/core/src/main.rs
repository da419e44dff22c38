use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

use finring::dsl::{elaborate_with, parse_extended};
use finring::harness::{
    emit_report, search, verify_paper, Family, InstanceStatus, KRange, RunConfig, SearchSpec,
    Session,
};
use finring::poly::AnnPairBudget;
use finring::properties::{
    implication_audit, AuditOutcome, Profile, Property, PropertyReport, Verdict,
};
use finring::witness::Witness;
use finring::Limits;

#[derive(Parser)]
#[command(
    name = "finring",
    version,
    about = "Ring-theoretic property checks over finite rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Maximum candidate assignments examined per sweep.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Largest ring order that may be built.
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print witnesses in text output.
    #[arg(long, global = true)]
    witness: bool,
    /// JSON-lines result cache.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check one property of one ring.
    Check {
        ring: String,
        property: Property,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Check every property and audit the known implications.
    Profile {
        ring: String,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Run the verification suite.
    VerifyPaper {
        /// Case-id glob, e.g. `ex-2.7-*`.
        #[arg(long)]
        filter: Option<String>,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a construction family for instances with or without a property.
    Search {
        #[arg(long)]
        family: Family,
        /// Base ring; repeat for several.
        #[arg(long = "base", required = true)]
        bases: Vec<String>,
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Inclusive band range such as `1..n-2`.
        #[arg(long)]
        k: Option<KRange>,
        #[arg(long)]
        property: Property,
        /// Count instances where the property fails rather than holds.
        #[arg(long)]
        fails: bool,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long)]
        stop_after: Option<usize>,
    },
    /// Re-check every witness in a JSON file written by this tool.
    Eval { file: PathBuf },
}

const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_AUDIT: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = RunConfig {
        threads: cli.opts.threads,
        ..RunConfig::default()
    };
    if let Some(b) = cli.opts.budget {
        config.budgets = AnnPairBudget::with_max(b);
    }
    if let Some(c) = cli.opts.cap {
        config.caps.order_cap = c;
    }
    let opts = &cli.opts;
    let session = match &opts.cache {
        Some(p) => match Session::with_cache(config.clone(), p) {
            Ok(s) => s,
            Err(e) => return usage(opts, json!({"error": "cache", "message": e})),
        },
        None => Session::new(config.clone()),
    };
    let code = config.install(|| run(&cli.command, opts, &session));
    ExitCode::from(code)
}

fn usage(opts: &Opts, err: Json) -> ExitCode {
    emit_error(opts, &err);
    ExitCode::from(EXIT_USAGE)
}

fn emit_error(opts: &Opts, err: &Json) {
    if opts.json {
        println!("{}", serde_json::to_string_pretty(err).unwrap());
    } else {
        eprintln!("error: {}", err["message"].as_str().unwrap_or("unknown"));
    }
}

/// Parses and builds `text`, reporting failures in the chosen format.
fn ring_label(opts: &Opts, s: &Session, text: &str) -> Result<String, u8> {
    let expr = parse_extended(text).map_err(|e| {
        emit_error(
            opts,
            &json!({"error": "parse", "message": e.to_string(), "detail": e}),
        );
        EXIT_USAGE
    })?;
    let ring = elaborate_with(&expr, &s.config.caps).map_err(|e| {
        emit_error(
            opts,
            &json!({"error": "construction", "message": e.to_string()}),
        );
        EXIT_USAGE
    })?;
    Ok(ring.label())
}

fn run(cmd: &Command, opts: &Opts, s: &Session) -> u8 {
    let out = match cmd {
        Command::Check {
            ring,
            property,
            degree,
        } => check(opts, s, ring, *property, *degree),
        Command::Profile { ring, degree } => profile(opts, s, ring, *degree),
        Command::VerifyPaper { filter, out } => verify(opts, s, filter.as_deref(), out.as_ref()),
        Command::Search {
            family,
            bases,
            n,
            k,
            property,
            fails,
            degree,
            stop_after,
        } => {
            let spec = SearchSpec {
                family: *family,
                bases: bases.clone(),
                n: n.clone(),
                k: *k,
                property: *property,
                degree: *degree,
                target: !fails,
                stop_after: *stop_after,
            };
            run_search(opts, s, &spec)
        }
        Command::Eval { file } => eval(opts, file),
    };
    out.unwrap_or_else(|code| code)
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Holds | Verdict::CertifiedUpToDegree(_) => 0,
        Verdict::Fails => EXIT_FAILS,
        Verdict::BudgetExhausted { .. } => EXIT_BUDGET,
    }
}

fn print_report(opts: &Opts, rep: &PropertyReport) {
    let degree = rep.degree.map(|d| format!("({d})")).unwrap_or_default();
    println!(
        "  {:<32} {:<28} work {:>12}  {} ms",
        format!("{}{degree}", rep.property),
        rep.verdict.to_string(),
        rep.work,
        rep.ms
    );
    if opts.witness {
        if let Some(w) = &rep.witness {
            print_witness(w, "    ");
        }
    }
}

fn print_witness(w: &Witness, indent: &str) {
    println!("{indent}witness {}", w.kind);
    for e in &w.elements {
        println!("{indent}  {} = {} (#{})", e.name, e.value, e.index);
    }
}

fn check(opts: &Opts, s: &Session, text: &str, p: Property, degree: u32) -> Result<u8, u8> {
    let label = ring_label(opts, s, text)?;
    let rep = s.report(&label, p, degree).map_err(|e| {
        emit_error(opts, &json!({"error": "check", "message": e}));
        EXIT_USAGE
    })?;
    if opts.json {
        let doc = json!({"ring": label, "report": rep});
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!("{label}");
        print_report(opts, &rep);
    }
    Ok(verdict_code(rep.verdict))
}

fn profile(opts: &Opts, s: &Session, text: &str, degree: u32) -> Result<u8, u8> {
    let label = ring_label(opts, s, text)?;
    let reports = Property::ALL
        .iter()
        .map(|&p| s.report(&label, p, degree))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| {
            emit_error(opts, &json!({"error": "check", "message": e}));
            EXIT_USAGE
        })?;
    let audit = match implication_audit(&reports) {
        Ok(rules) => AuditOutcome::Consistent {
            rules_checked: rules,
        },
        Err(c) => AuditOutcome::Contradiction(c),
    };
    let p = Profile {
        ring: label,
        reports,
        audit,
    };
    if opts.json {
        println!("{}", serde_json::to_string_pretty(&p).unwrap());
    } else {
        println!("{}", p.ring);
        for r in &p.reports {
            print_report(opts, r);
        }
        match &p.audit {
            AuditOutcome::Consistent { rules_checked } => {
                println!("  audit: consistent ({rules_checked} rules applied)")
            }
            AuditOutcome::Contradiction(c) => println!("  audit: CONTRADICTION, {}", c.rule),
        }
    }
    Ok(match p.audit {
        AuditOutcome::Consistent { .. } => 0,
        AuditOutcome::Contradiction(_) => EXIT_AUDIT,
    })
}

fn verify(opts: &Opts, s: &Session, filter: Option<&str>, out: Option<&PathBuf>) -> Result<u8, u8> {
    let report = verify_paper(s, filter).map_err(|e| {
        emit_error(opts, &json!({"error": "filter", "message": e}));
        EXIT_USAGE
    })?;
    if let Some(path) = out {
        emit_report(&report, path).map_err(|e| {
            emit_error(opts, &json!({"error": "io", "message": e}));
            EXIT_USAGE
        })?;
    }
    if opts.json {
        print!("{}", report.to_json());
    } else {
        for c in &report.cases {
            let mark = if c.passed() { "PASS" } else { "FAIL" };
            println!("{mark} {:<44} {:<30} {} ms", c.id, c.observed, c.ms);
            if !c.passed() {
                println!("     expected {}; {}", c.expected, c.anchor);
            }
            if opts.witness {
                if let Some(w) = &c.witness {
                    print_witness(w, "     ");
                }
            }
        }
        let passed = report.cases.iter().filter(|c| c.passed()).count();
        println!("{passed}/{} cases pass", report.cases.len());
    }
    Ok(if report.pass { 0 } else { EXIT_FAILS })
}

fn run_search(opts: &Opts, s: &Session, spec: &SearchSpec) -> Result<u8, u8> {
    let out = search(s, spec).map_err(|e| {
        emit_error(opts, &json!({"error": "search", "message": e}));
        EXIT_USAGE
    })?;
    if opts.json {
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        for inst in &out.instances {
            match &inst.status {
                InstanceStatus::Checked { report, hit } => {
                    let mark = if *hit { "HIT " } else { "    " };
                    println!("{mark} {:<32} {}", inst.ring, report.verdict);
                    if opts.witness && *hit {
                        if let Some(w) = &report.witness {
                            print_witness(w, "       ");
                        }
                    }
                }
                InstanceStatus::Skipped { reason } => println!("skip {:<32} {reason}", inst.ring),
            }
        }
        println!("{} hits in {} instances", out.hits, out.instances.len());
    }
    Ok(0)
}

/// Every `witness` object in the document, paired with the nearest enclosing
/// `ring` field and a path for reporting.
fn collect_witnesses(
    v: &Json,
    ring: Option<&str>,
    path: String,
    out: &mut Vec<(String, Option<String>, Json)>,
) {
    match v {
        Json::Object(map) => {
            let ring = map.get("ring").and_then(Json::as_str).or(ring);
            for (k, child) in map {
                let p = format!("{path}/{k}");
                if k == "witness" && child.is_object() {
                    out.push((p, ring.map(str::to_string), child.clone()));
                } else {
                    collect_witnesses(child, ring, p, out);
                }
            }
        }
        Json::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                collect_witnesses(child, ring, format!("{path}/{i}"), out);
            }
        }
        _ => {}
    }
}

fn eval(opts: &Opts, file: &PathBuf) -> Result<u8, u8> {
    let fail = |message: String| {
        emit_error(opts, &json!({"error": "eval", "message": message}));
        EXIT_USAGE
    };
    let text =
        std::fs::read_to_string(file).map_err(|e| fail(format!("{}: {e}", file.display())))?;
    let doc: Json =
        serde_json::from_str(&text).map_err(|e| fail(format!("{}: {e}", file.display())))?;
    let mut found = Vec::new();
    collect_witnesses(&doc, None, String::new(), &mut found);
    let limits = Limits::default();
    let mut results = Vec::new();
    for (path, ring, w) in found {
        let outcome = (|| -> Result<bool, String> {
            let ring = ring.ok_or("no enclosing ring")?;
            let w: Witness = serde_json::from_value(w).map_err(|e| e.to_string())?;
            let r = finring::dsl::ring_from_str(&ring, &limits)?;
            w.recheck(&r).map_err(|e| e.to_string())
        })();
        results.push((path, outcome));
    }
    let ok = results.iter().all(|(_, o)| *o == Ok(true));
    if opts.json {
        let items: Vec<Json> = results
            .iter()
            .map(|(p, o)| match o {
                Ok(b) => json!({"path": p, "holds": b}),
                Err(e) => json!({"path": p, "error": e}),
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({"witnesses": items, "pass": ok})).unwrap()
        );
    } else {
        for (p, o) in &results {
            match o {
                Ok(true) => println!("ok    {p}"),
                Ok(false) => println!("FALSE {p}"),
                Err(e) => println!("ERROR {p}: {e}"),
            }
        }
        println!("{} witnesses checked", results.len());
    }
    Ok(if ok { 0 } else { EXIT_FAILS })
}
