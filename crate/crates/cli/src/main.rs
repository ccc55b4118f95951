//! Command-line surface: every workbench operation behind a subcommand, with
//! shipped example presets and machine-readable reports.
//!
//! Exit codes: 0 success/pass, 1 property failure, 2 input error, 3 resource
//! cap exceeded.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use weylkit::algebra::{check_local_confluence, ore_extend, tensor_product, Presentation};
use weylkit::center::{centralizer_basis, weyltype_center_check};
use weylkit::dsl::{parse_presentation, serialize_presentation, ParsedPresentation};
use weylkit::error::Error;
use weylkit::exponents::ExponentVec;
use weylkit::growth::{
    gk_estimate, gk_property_report, growth_table, module_growth_table, EstimateMethod,
    GrowthTable, DEFAULT_MONOMIAL_CAP,
};
use weylkit::morphisms::iso_decide;
use weylkit::nonassoc::{Bracketing, KappaForm, NAAlgebra};
use weylkit::presets::{load_preset, preset_document, Presets, PRESET_NAMES};

#[derive(Parser)]
#[command(name = "weylkit", version, about = "Exact workbench for Weyl-type algebras with hyperbolic and power generators")]
struct Cli {
    /// Output format for reports
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    FiniteDifference,
    LogRatio,
}

#[derive(Clone, Copy, ValueEnum)]
enum BracketingArg {
    All,
    LeftNormed,
}

#[derive(Subcommand)]
enum Command {
    /// Exact dim V^n table for a preset or document
    Growth {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value = "default")]
        subspace: String,
        #[arg(long, default_value_t = DEFAULT_MONOMIAL_CAP)]
        cap: usize,
        /// Treat the document's reductions as cyclic-module rules
        #[arg(long)]
        as_module: bool,
    },
    /// GK dimension estimate over the computed window
    Gkdim {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value = "default")]
        subspace: String,
        #[arg(long, value_enum, default_value_t = MethodArg::FiniteDifference)]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_MONOMIAL_CAP)]
        cap: usize,
    },
    /// Growth property suite over the shipped presets
    Properties {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_MONOMIAL_CAP)]
        cap: usize,
    },
    /// Bounded-degree centralizer basis
    Center {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        degree: u64,
        /// Also run the Laurent-center shape check (central-mode presets)
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = DEFAULT_MONOMIAL_CAP)]
        cap: usize,
    },
    /// Certified superset of the non-associative center on a truncation
    NaCenter {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        candidate_degree: u64,
        #[arg(long, default_value_t = 3)]
        test_degree: u64,
        #[arg(long, default_value_t = 60_000)]
        pair_budget: usize,
        #[arg(long, default_value_t = DEFAULT_MONOMIAL_CAP)]
        cap: usize,
    },
    /// Non-associative growth harness (no limit claims)
    NaGrowth {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value = "default")]
        subspace: String,
        #[arg(long, value_enum, default_value_t = BracketingArg::All)]
        bracketing: BracketingArg,
        #[arg(long, default_value_t = DEFAULT_MONOMIAL_CAP)]
        cap: usize,
    },
    /// Flexibility identity witnesses up to a degree
    Flexibility {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        degree: u64,
        #[arg(long, default_value_t = DEFAULT_MONOMIAL_CAP)]
        cap: usize,
    },
    /// Left-multiplication injectivity probe on a truncation
    Injectivity {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        /// Element expression for u
        #[arg(long)]
        u: String,
        #[arg(long, default_value_t = 3)]
        degree: u64,
        #[arg(long, default_value_t = DEFAULT_MONOMIAL_CAP)]
        cap: usize,
    },
    /// Ore extension z g = sigma(g) z + delta(g) of a pbw preset
    Ore {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        /// New generator name
        #[arg(long, default_value = "z")]
        z: String,
        /// Semicolon-separated assignments, e.g. "x=x+1;y=y"
        #[arg(long)]
        sigma: String,
        /// Semicolon-separated assignments, e.g. "x=-2*y;y=0"
        #[arg(long)]
        delta: String,
    },
    /// Tensor product of two pbw presets
    Tensor {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        with: String,
    },
    /// Fiber specialization y = lambda of a central-mode preset
    Specialize {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        lambda: String,
        /// Sample element to map into the fiber
        #[arg(long)]
        element: Option<String>,
    },
    /// Local confluence check by critical-pair enumeration
    Confluence {
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        degree: u64,
    },
    /// Isomorphism decision for the builtin family
    Iso {
        /// Module rank (checked against the coordinate lists when given)
        #[arg(long)]
        rank: Option<usize>,
        /// Comma-separated coordinates of p1
        #[arg(long, allow_hyphen_values = true)]
        p1: String,
        #[arg(long)]
        t1: String,
        #[arg(long, allow_hyphen_values = true)]
        p2: String,
        #[arg(long)]
        t2: String,
    },
    /// Parse and validate a presentation document
    Parse {
        #[arg(long)]
        file: PathBuf,
    },
    /// List the shipped presets
    Presets,
}

struct Report {
    command: String,
    source: String,
    exact: bool,
    results: Value,
    csv: Option<String>,
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli.command) {
        Ok((report, code)) => {
            emit(&report, cli.format, started);
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::CapExceeded { .. } => 3,
                _ => 2,
            };
            std::process::exit(code);
        }
    }
}

fn emit(report: &Report, format: Format, started: Instant) {
    match format {
        Format::Json => {
            let doc = json!({
                "schema": "report_v1",
                "command": report.command,
                "source": report.source,
                "exact": report.exact,
                "elapsed_ms": started.elapsed().as_millis() as u64,
                "results": report.results,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable report"));
        }
        Format::Csv => match &report.csv {
            Some(csv) => print!("{csv}"),
            None => {
                eprintln!("error: csv output is not defined for `{}`", report.command);
                std::process::exit(2);
            }
        },
        Format::Text => {
            println!("# {} ({})", report.command, report.source);
            print_text(&report.results, 0);
            println!("elapsed: {} ms, exact: {}", started.elapsed().as_millis(), report.exact);
        }
    }
}

fn print_text(v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        println!("{pad}{k}:");
                        print_text(val, indent + 1);
                    }
                    _ => println!("{pad}{k}: {val}"),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => print_text(item, indent),
                    _ => println!("{pad}- {item}"),
                }
            }
        }
        other => println!("{pad}{other}"),
    }
}

fn load_source(
    preset: &Option<String>,
    file: &Option<PathBuf>,
) -> Result<(ParsedPresentation, String), Error> {
    match (preset, file) {
        (Some(name), None) => Ok((load_preset(name)?, format!("preset:{name}"))),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
                context: path.display().to_string(),
                message: e.to_string(),
            })?;
            Ok((parse_presentation(&text)?, format!("file:{}", path.display())))
        }
        _ => Err(Error::Validation {
            path: "arguments".into(),
            message: "exactly one of --preset or --file is required".into(),
        }),
    }
}

fn table_json(t: &GrowthTable) -> Value {
    json!({
        "dims": t.dims,
        "n_max": t.n_max,
        "truncated": t.truncated,
        "fingerprint": format!("{:016x}", t.fingerprint),
    })
}

fn kappa_for(parsed: &ParsedPresentation) -> KappaForm {
    parsed.kappa.clone().unwrap_or_else(KappaForm::zero)
}

fn run(cmd: &Command) -> Result<(Report, i32), Error> {
    match cmd {
        Command::Growth { preset, file, n, subspace, cap, as_module } => {
            let (parsed, source) = load_source(preset, file)?;
            let table = if *as_module {
                let presets = Presets::load_all()?;
                let name = preset.clone().ok_or_else(|| Error::Validation {
                    path: "as_module".into(),
                    message: "--as-module requires --preset".into(),
                })?;
                let (base, rules) = presets.module_view(&name)?;
                let v_words = {
                    let t = base.tower().clone();
                    let mut words = vec![vec![(Vec::new(), t.one())]];
                    for g in 0..base.generator_names().len() {
                        words.push(vec![(vec![g as u16], t.one())]);
                    }
                    words
                };
                let (table, degenerate) = module_growth_table(&base, rules, &v_words, *n, *cap)?;
                if degenerate {
                    eprintln!("note: degenerate zero module");
                }
                table
            } else {
                let v = parsed.subspace(subspace)?;
                growth_table(&parsed.presentation, v, *n, *cap)?
            };
            let code = if table.truncated { 3 } else { 0 };
            let report = Report {
                command: "growth".into(),
                source,
                exact: !table.truncated,
                results: table_json(&table),
                csv: Some(table.csv()),
            };
            Ok((report, code))
        }
        Command::Gkdim { preset, file, n, subspace, method, cap } => {
            let (parsed, source) = load_source(preset, file)?;
            let v = parsed.subspace(subspace)?;
            let table = growth_table(&parsed.presentation, v, *n, *cap)?;
            let method = match method {
                MethodArg::FiniteDifference => EstimateMethod::FiniteDifference,
                MethodArg::LogRatio => EstimateMethod::LogRatio,
            };
            let est = gk_estimate(&table, method)?;
            let report = Report {
                command: "gkdim".into(),
                source,
                exact: est.exact,
                results: json!({
                    "table": table_json(&table),
                    "method": format!("{:?}", est.method),
                    "degree": est.degree,
                    "log_ratio": est.log_ratio,
                    "exact": est.exact,
                    "stabilized": est.stabilized,
                }),
                csv: Some(table.csv()),
            };
            Ok((report, 0))
        }
        Command::Properties { n, cap } => {
            let presets = Presets::load_all()?;
            let report = gk_property_report(&presets, *n, *cap)?;
            let pass = report.all_pass();
            let lines: Vec<Value> = report
                .lines
                .iter()
                .map(|l| json!({"property": l.property, "detail": l.detail, "pass": l.pass}))
                .collect();
            Ok((
                Report {
                    command: "properties".into(),
                    source: "presets".into(),
                    exact: true,
                    results: json!({"all_pass": pass, "lines": lines}),
                    csv: None,
                },
                if pass { 0 } else { 1 },
            ))
        }
        Command::Center { preset, file, degree, check, cap } => {
            let (parsed, source) = load_source(preset, file)?;
            let result = centralizer_basis(&parsed.presentation, *degree, *cap)?;
            let basis: Vec<String> = result
                .basis
                .iter()
                .map(|e| parsed.presentation.render_element(e))
                .collect();
            let mut results = json!({
                "degree": result.degree,
                "candidates": result.candidates,
                "rows": result.rows,
                "basis": basis,
                "dropped_unverified": result.dropped_unverified,
            });
            let mut code = 0;
            if *check {
                let check_report = weyltype_center_check(&parsed.presentation, *degree, *cap)?;
                results["center_check"] = json!({
                    "pass": check_report.pass,
                    "detail": check_report.detail,
                });
                if !check_report.pass {
                    code = 1;
                }
            }
            Ok((
                Report { command: "center".into(), source, exact: true, results, csv: None },
                code,
            ))
        }
        Command::NaCenter { preset, file, candidate_degree, test_degree, pair_budget, cap } => {
            let (parsed, source) = load_source(preset, file)?;
            let na = NAAlgebra::new(parsed.presentation.clone(), kappa_for(&parsed));
            let r = na.na_center_superset(*candidate_degree, *test_degree, *cap, *pair_budget)?;
            let basis: Vec<String> = r
                .basis
                .iter()
                .map(|e| parsed.presentation.render_element(e))
                .collect();
            let report = Report {
                command: "na-center".into(),
                source,
                exact: true,
                results: json!({
                    "candidate_degree": r.candidate_degree,
                    "test_degree": r.test_degree,
                    "candidates": r.candidates,
                    "superset_dimension": r.basis.len(),
                    "trivial": r.is_trivial(),
                    "basis": basis,
                    "pairs_imposed": r.pairs_imposed,
                    "constraints_exhausted": r.constraints_exhausted,
                }),
                csv: None,
            };
            Ok((report, 0))
        }
        Command::NaGrowth { preset, file, n, subspace, bracketing, cap } => {
            let (parsed, source) = load_source(preset, file)?;
            let na = NAAlgebra::new(parsed.presentation.clone(), kappa_for(&parsed));
            let v = parsed.subspace(subspace)?;
            let bracketing = match bracketing {
                BracketingArg::All => Bracketing::All,
                BracketingArg::LeftNormed => Bracketing::LeftNormed,
            };
            let table = na.na_growth_table(v, *n, bracketing, *cap)?;
            let code = if table.truncated { 3 } else { 0 };
            Ok((
                Report {
                    command: "na-growth".into(),
                    source,
                    exact: !table.truncated,
                    results: json!({
                        "bracketing": format!("{bracketing:?}"),
                        "table": table_json(&table),
                        "note": "experimental harness; no dimension claim",
                    }),
                    csv: Some(table.csv()),
                },
                code,
            ))
        }
        Command::Flexibility { preset, file, degree, cap } => {
            let (parsed, source) = load_source(preset, file)?;
            let na = NAAlgebra::new(parsed.presentation.clone(), kappa_for(&parsed));
            let r = na.flexibility_report(*degree, *cap)?;
            let witnesses: Vec<Value> = r
                .witnesses
                .iter()
                .map(|w| json!({"a": w.a, "b": w.b, "gap": w.associator_gap}))
                .collect();
            Ok((
                Report {
                    command: "flexibility".into(),
                    source,
                    exact: true,
                    results: json!({
                        "pairs_checked": r.pairs_checked,
                        "holds": r.witnesses.is_empty(),
                        "witnesses": witnesses,
                    }),
                    csv: None,
                },
                0,
            ))
        }
        Command::Injectivity { preset, file, u, degree, cap } => {
            let (parsed, source) = load_source(preset, file)?;
            let na = NAAlgebra::new(parsed.presentation.clone(), kappa_for(&parsed));
            let u_elem = parsed.parse_element(u)?;
            let v = na.left_mult_injectivity(&u_elem, *degree, *cap)?;
            let witness = v
                .kernel_witness
                .as_ref()
                .map(|e| parsed.presentation.render_element(e));
            Ok((
                Report {
                    command: "injectivity".into(),
                    source,
                    exact: true,
                    results: json!({
                        "u": u,
                        "degree": v.degree,
                        "candidates": v.candidates,
                        "rank": v.rank,
                        "injective_on_truncation": v.injective_on_truncation,
                        "kernel_witness": witness,
                    }),
                    csv: None,
                },
                0,
            ))
        }
        Command::Ore { preset, file, z, sigma, delta } => {
            let (parsed, source) = load_source(preset, file)?;
            let Presentation::Pbw(base) = &parsed.presentation else {
                return Err(Error::Unsupported("ore extension requires a pbw presentation".into()));
            };
            let sigma_images = parse_assignments(&parsed, sigma, "sigma")?;
            let delta_images = parse_assignments(&parsed, delta, "delta")?;
            let ext = ore_extend(base, z, &sigma_images, &delta_images)?;
            let ext_pres = Presentation::Pbw(ext.clone());
            let rules: Vec<String> = ext
                .rules()
                .iter()
                .map(|r| {
                    let rhs = ext.element_from_terms(r.rhs.clone());
                    format!("{} -> {}", ext.render_word(&r.lhs), ext_pres.render_element(&rhs))
                })
                .collect();
            Ok((
                Report {
                    command: "ore".into(),
                    source,
                    exact: true,
                    results: json!({
                        "generators": ext.generator_names(),
                        "rules": rules,
                    }),
                    csv: None,
                },
                0,
            ))
        }
        Command::Tensor { preset, with } => {
            let a = load_preset(preset)?;
            let b = load_preset(with)?;
            let (Presentation::Pbw(pa), Presentation::Pbw(pb)) =
                (&a.presentation, &b.presentation)
            else {
                return Err(Error::Unsupported("tensor requires pbw presentations".into()));
            };
            let t = tensor_product(pa, pb)?;
            Ok((
                Report {
                    command: "tensor".into(),
                    source: format!("preset:{preset} (x) preset:{with}"),
                    exact: true,
                    results: json!({
                        "generators": t.generator_names(),
                        "rule_count": t.rules().len(),
                    }),
                    csv: None,
                },
                0,
            ))
        }
        Command::Specialize { preset, file, lambda, element } => {
            let (parsed, source) = load_source(preset, file)?;
            let Presentation::Weyl(w) = &parsed.presentation else {
                return Err(Error::Unsupported(
                    "fiber specialization requires the builtin family".into(),
                ));
            };
            let lam = w.tower().parse_scalar(lambda)?;
            let fiber = w.specialize_y(lam)?;
            let mut results = json!({
                "lambda": lambda,
                "fiber": fiber.describe(),
            });
            if let Some(expr) = element {
                let e = parsed.parse_element(expr)?;
                let mapped = w.specialize_element(&fiber, &e)?;
                let fp = Presentation::Weyl(fiber.clone());
                results["element"] = json!(expr);
                results["image"] = json!(fp.render_element(&mapped));
            }
            Ok((
                Report { command: "specialize".into(), source, exact: true, results, csv: None },
                0,
            ))
        }
        Command::Confluence { preset, file, degree } => {
            let (parsed, source) = load_source(preset, file)?;
            let Presentation::Pbw(p) = &parsed.presentation else {
                return Err(Error::Unsupported(
                    "confluence checking applies to pbw presentations".into(),
                ));
            };
            let report = check_local_confluence(p, *degree);
            let failures: Vec<Value> = report
                .failures
                .iter()
                .map(|w| {
                    json!({
                        "word": w.word_rendered,
                        "normal_form_a": w.rendered_a,
                        "normal_form_b": w.rendered_b,
                    })
                })
                .collect();
            let ok = report.is_confluent();
            Ok((
                Report {
                    command: "confluence".into(),
                    source,
                    exact: true,
                    results: json!({
                        "degree_bound": report.degree_bound,
                        "words_checked": report.words_checked,
                        "confluent": ok,
                        "failures": failures,
                    }),
                    csv: None,
                },
                if ok { 0 } else { 1 },
            ))
        }
        Command::Iso { rank, p1, t1, p2, t2 } => {
            let pv1 = parse_coords(p1)?;
            let pv2 = parse_coords(p2)?;
            if let Some(r) = rank {
                if pv1.rank() != *r || pv2.rank() != *r {
                    return Err(Error::Validation {
                        path: "rank".into(),
                        message: format!("coordinate lists do not have rank {r}"),
                    });
                }
            }
            let verdict = iso_decide(&pv1, t1, &pv2, t2)?;
            let results = match &verdict {
                weylkit::morphisms::IsoVerdict::Iso { sigma, sign, mapped } => json!({
                    "iso": true,
                    "sigma": sigma.rows,
                    "sign": sign,
                    "sigma_p1": mapped.0,
                }),
                weylkit::morphisms::IsoVerdict::NotIso { reason } => {
                    json!({"iso": false, "reason": reason})
                }
            };
            Ok((
                Report {
                    command: "iso".into(),
                    source: format!("p1={p1} t1={t1} p2={p2} t2={t2}"),
                    exact: true,
                    results,
                    csv: None,
                },
                0,
            ))
        }
        Command::Parse { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| Error::Parse {
                context: file.display().to_string(),
                message: e.to_string(),
            })?;
            let parsed = parse_presentation(&text)?;
            let round = serialize_presentation(&parsed)?;
            let subspaces: BTreeMap<String, usize> =
                parsed.subspaces.iter().map(|(k, v)| (k.clone(), v.len())).collect();
            Ok((
                Report {
                    command: "parse".into(),
                    source: format!("file:{}", file.display()),
                    exact: true,
                    results: json!({
                        "describe": parsed.presentation.describe(),
                        "subspaces": subspaces,
                        "kappa": parsed.kappa.is_some(),
                        "serialized_bytes": round.len(),
                    }),
                    csv: None,
                },
                0,
            ))
        }
        Command::Presets => Ok((
            Report {
                command: "presets".into(),
                source: "builtin".into(),
                exact: true,
                results: json!({
                    "presets": PRESET_NAMES,
                    "documents_embedded": PRESET_NAMES
                        .iter()
                        .all(|n| preset_document(n).is_some()),
                }),
                csv: None,
            },
            0,
        )),
    }
}

fn parse_assignments(
    parsed: &ParsedPresentation,
    text: &str,
    what: &str,
) -> Result<Vec<weylkit::Element>, Error> {
    let Presentation::Pbw(p) = &parsed.presentation else {
        return Err(Error::Unsupported("assignments need a pbw presentation".into()));
    };
    let names = p.generator_names();
    let mut by_name: BTreeMap<String, weylkit::Element> = BTreeMap::new();
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let Some((lhs, rhs)) = part.split_once('=') else {
            return Err(Error::Validation {
                path: what.to_string(),
                message: format!("assignment `{part}` must look like gen=element"),
            });
        };
        let e = parsed.parse_element(rhs.trim())?;
        by_name.insert(lhs.trim().to_string(), e);
    }
    names
        .iter()
        .map(|n| {
            by_name.get(n).cloned().ok_or_else(|| Error::Validation {
                path: what.to_string(),
                message: format!("missing assignment for generator `{n}`"),
            })
        })
        .collect()
}

fn parse_coords(text: &str) -> Result<ExponentVec, Error> {
    let coords: Result<Vec<i64>, _> = text.split(',').map(|s| s.trim().parse::<i64>()).collect();
    coords.map(ExponentVec).map_err(|_| Error::Validation {
        path: "p".into(),
        message: format!("cannot parse coordinates `{text}`"),
    })
}
