//! Command-line front end: closed-form values, the exhaustive oracle, constructions, stability
//! reports, verification suites and tables.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sumset_minimax::arith::{is_prime, GroupParams};
use sumset_minimax::certificate::Certificate;
use sumset_minimax::coloring::{best_construction, block_partition, coset_partition, evaluate, Coloring};
use sumset_minimax::oracle::{brute_force_phi_with, default_budget, search_all, OracleValue, SearchConfig};
use sumset_minimax::stability::threshold_check;
use sumset_minimax::verify::{run_suite, Suite, ALL_SUITES};
use sumset_minimax::{
    classify, phi_exact, restricted_sumset, subgroup_of_size, Error, ResidueSet,
};

const EXIT_VIOLATION: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_REFUSED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "sumset-minimax", version, about = "Restricted sumsets and k-coloring minimax values in Z_n")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV (table only).
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    /// Oracle node budget (overrides SUMSET_MINIMAX_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Largest modulus the oracle will search.
    #[arg(long, global = true, default_value_t = sumset_minimax::oracle::DEFAULT_CAP)]
    cap: usize,
    /// Record wall-clock time in certificates.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bounds, regime and exact value of the minimax for (n, k).
    Phi {
        n: usize,
        k: usize,
        /// Compute the value by exhaustive search.
        #[arg(long)]
        oracle: bool,
        /// Include the witness coloring.
        #[arg(long)]
        witness: bool,
    },
    /// Restricted self-sumset and structure of a residue set, e.g. `sumset 0,1,4 --mod 7`.
    Sumset {
        set: String,
        #[arg(long = "mod")]
        modulus: usize,
    },
    /// Build and evaluate a coloring.
    Construct {
        n: usize,
        k: usize,
        #[arg(long, value_enum, default_value_t = Construction::Best)]
        kind: Construction,
    },
    /// Exhaustive minimax value, optionally enumerating all optimal colorings.
    Oracle {
        n: usize,
        k: usize,
        /// Enumerate optimal colorings, failing beyond this many.
        #[arg(long)]
        enumerate: Option<usize>,
    },
    /// Coset concentration report for a set and the subgroup of a given size.
    Stability {
        set: String,
        #[arg(long = "mod")]
        modulus: usize,
        /// Subgroup size t (a divisor of the modulus, at least 3).
        #[arg(long)]
        subgroup: usize,
        /// Threshold slack s.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        slack: i64,
    },
    /// Run a verification suite (or `all`).
    Verify {
        suite: String,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        pmax: Option<usize>,
    },
    /// Bounds and regimes for all 2 <= k <= n <= nmax.
    Table {
        nmax: usize,
        /// Add exhaustive oracle values.
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Construction {
    Block,
    Coset,
    Best,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } | Error::BudgetExhausted { .. } | Error::EnumerationOverflow { .. } => {
                EXIT_REFUSED
            }
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli, started) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure { code, message }) => {
            if !message.is_empty() {
                eprintln!("error: {message}");
            }
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli, started: Instant) -> Outcome {
    match &cli.command {
        Command::Phi { n, k, oracle, witness } => cmd_phi(cli, *n, *k, *oracle, *witness, started),
        Command::Sumset { set, modulus } => cmd_sumset(cli, set, *modulus),
        Command::Construct { n, k, kind } => cmd_construct(cli, *n, *k, *kind),
        Command::Oracle { n, k, enumerate } => cmd_oracle(cli, *n, *k, *enumerate, started),
        Command::Stability {
            set,
            modulus,
            subgroup,
            slack,
        } => cmd_stability(cli, set, *modulus, *subgroup, *slack),
        Command::Verify { suite, nmax, pmax } => cmd_verify(cli, suite, *nmax, *pmax),
        Command::Table { nmax, oracle } => cmd_table(cli, *nmax, *oracle),
    }
}

fn search_config(cli: &Cli, n: usize, k: usize) -> SearchConfig {
    SearchConfig {
        max_nodes: cli.budget.unwrap_or_else(default_budget),
        cap: cli.cap,
        ..SearchConfig::new(n, k, 0)
    }
}

fn run_oracle(cli: &Cli, n: usize, k: usize) -> Result<OracleValue, Failure> {
    Ok(brute_force_phi_with(&search_config(cli, n, k))?)
}

fn elapsed_ms(cli: &Cli, started: Instant) -> Option<u64> {
    cli.timing.then(|| started.elapsed().as_millis() as u64)
}

fn params_json(g: &GroupParams) -> serde_json::Value {
    json!({
        "n": g.n,
        "k": g.k,
        "m": g.m,
        "p_n": g.p_n,
        "q_nk": g.q_nk,
        "f_n_q": g.coset_value(),
    })
}

fn cmd_phi(cli: &Cli, n: usize, k: usize, oracle: bool, witness: bool, started: Instant) -> Outcome {
    let r = phi_exact(n, k)?;
    let g = r.params;
    let oracle_value = if oracle { Some(run_oracle(cli, n, k)?) } else { None };
    let shown: Option<&Coloring> = match &oracle_value {
        Some(o) => Some(&o.witness),
        None => r.witness.as_ref(),
    };
    if cli.json {
        let mut cert = Certificate::new(
            "phi",
            json!({"n": n, "k": k}),
            json!({
                "params": params_json(&g),
                "lower": r.lower,
                "upper": r.upper,
                "exact": r.exact,
                "regime": r.regime.as_str(),
                "applicable": r.applicable.iter().map(|x| x.as_str()).collect::<Vec<_>>(),
                "oracle": oracle_value.as_ref().map(|o| o.value),
            }),
        );
        if witness {
            if let Some(c) = shown {
                cert = cert.with_witness(c);
            }
        }
        cert.provenance.regime = Some(r.regime.as_str().to_string());
        cert.provenance.oracle_nodes = oracle_value.as_ref().map(|o| o.nodes);
        cert.provenance.wall_time_ms = elapsed_ms(cli, started);
        return Ok(cert.to_json_string() + "\n");
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "n={n} k={k} m={} p(n)={} q(n,k)={} f(n/q)={}",
        g.m,
        g.p_n,
        g.q_nk,
        g.coset_value()
    );
    let _ = writeln!(out, "regime: {}", r.regime);
    match r.exact {
        Some(e) => {
            let _ = writeln!(out, "exact: {e}");
        }
        None => {
            let _ = writeln!(out, "bounds: [{}, {}]", r.lower, r.upper);
        }
    }
    if let Some(o) = &oracle_value {
        let _ = writeln!(out, "oracle: {} ({} nodes)", o.value, o.nodes);
    }
    if witness {
        if let Some(c) = shown {
            let _ = writeln!(out, "witness: {}", serde_json::to_string(c).expect("json"));
        }
    }
    Ok(out)
}

fn cmd_sumset(cli: &Cli, literal: &str, modulus: usize) -> Outcome {
    let a = ResidueSet::parse(literal, modulus)?;
    let sums = restricted_sumset(&a);
    let tag = classify(&a, is_prime(modulus));
    if cli.json {
        let cert = Certificate::new(
            "sumset",
            json!({"n": modulus, "set": a}),
            json!({"sumset": sums, "size": sums.len(), "structure": tag}),
        );
        return Ok(cert.to_json_string() + "\n");
    }
    Ok(format!(
        "A = {a}\nA+^A = {sums}\nsize: {}\nstructure: {}\n",
        sums.len(),
        describe_tag(&tag)
    ))
}

fn describe_tag(tag: &sumset_minimax::StructureTag) -> String {
    let witness = serde_json::to_value(tag).expect("json");
    let params: Vec<String> = witness
        .as_object()
        .map(|o| {
            o.iter()
                .filter(|(key, _)| key.as_str() != "kind")
                .map(|(key, v)| format!("{key}={v}"))
                .collect()
        })
        .unwrap_or_default();
    if params.is_empty() {
        tag.name().to_string()
    } else {
        format!("{} ({})", tag.name(), params.join(", "))
    }
}

fn cmd_construct(cli: &Cli, n: usize, k: usize, kind: Construction) -> Outcome {
    let coloring = match kind {
        Construction::Block => block_partition(n, k)?,
        Construction::Coset => coset_partition(n, k)?,
        Construction::Best => best_construction(n, k)?.0,
    };
    let e = evaluate(&coloring);
    if cli.json {
        let cert = Certificate::new(
            "construct",
            json!({"n": n, "k": k, "kind": format!("{kind:?}").to_lowercase()}),
            serde_json::to_value(&e).expect("json"),
        )
        .with_witness(&coloring);
        return Ok(cert.to_json_string() + "\n");
    }
    let mut out = String::new();
    for (i, (class, size)) in coloring.classes().iter().zip(&e.per_class_sumset_sizes).enumerate() {
        let _ = writeln!(out, "class {i}: {class} |A+^A| = {size}");
    }
    let _ = writeln!(out, "value: {}", e.value);
    Ok(out)
}

fn cmd_oracle(cli: &Cli, n: usize, k: usize, enumerate: Option<usize>, started: Instant) -> Outcome {
    let o = run_oracle(cli, n, k)?;
    let optimal = match enumerate {
        Some(limit) => {
            let cfg = SearchConfig {
                threshold: o.value,
                enumerate_limit: limit.max(1),
                ..search_config(cli, n, k)
            };
            Some(search_all(&cfg)?)
        }
        None => None,
    };
    if cli.json {
        let mut cert = Certificate::new(
            "oracle",
            json!({"n": n, "k": k}),
            json!({
                "value": o.value,
                "optimal_count": optimal.as_ref().map(|e| e.colorings.len()),
                "optimal": optimal.as_ref().map(|e| e.colorings.iter().map(Coloring::to_json).collect::<Vec<_>>()),
            }),
        )
        .with_witness(&o.witness);
        cert.provenance.oracle_nodes = Some(o.nodes + optimal.as_ref().map_or(0, |e| e.nodes));
        cert.provenance.wall_time_ms = elapsed_ms(cli, started);
        return Ok(cert.to_json_string() + "\n");
    }
    let mut out = format!("value: {}\nnodes: {}\nwitness: {}\n", o.value, o.nodes, serde_json::to_string(&o.witness).expect("json"));
    if let Some(e) = optimal {
        let _ = writeln!(out, "optimal colorings: {}", e.colorings.len());
        for c in &e.colorings {
            let _ = writeln!(out, "{}", serde_json::to_string(c).expect("json"));
        }
    }
    Ok(out)
}

fn cmd_stability(cli: &Cli, literal: &str, modulus: usize, t: usize, s: i64) -> Outcome {
    let a = ResidueSet::parse(literal, modulus)?;
    let h = subgroup_of_size(modulus, t)?;
    let report = threshold_check(&a, &h, s)?;
    if cli.json {
        let cert = Certificate::new(
            "stability",
            json!({"n": modulus, "set": a, "subgroup_size": t, "slack": s}),
            serde_json::to_value(&report).expect("json"),
        );
        return Ok(cert.to_json_string() + "\n");
    }
    let mut out = String::new();
    let _ = writeln!(out, "t={} p(t)={} q_H={}", report.t, report.p_t, report.q_h);
    let _ = writeln!(out, "x={} r={} sigma_H={} ties={}", report.x, report.r, report.sigma_h, report.tie_count);
    let _ = writeln!(out, "alpha*={}", report.alpha_star);
    let _ = writeln!(out, "cross bound: {}{}", report.cross_bound, if report.cross_tight { " (tight)" } else { "" });
    let _ = writeln!(out, "internal bound: {}{}", report.internal_bound, if report.internal_tight { " (tight)" } else { "" });
    let _ = writeln!(out, "combined bound: {}", report.combined_bound);
    let _ = writeln!(out, "|A+^A| = {}", report.actual);
    if let Some(th) = &report.threshold {
        if !th.hypothesis_holds {
            let _ = writeln!(out, "threshold s={}: |A+^A| > t+s, nothing to conclude", th.s_slack);
        } else {
            let cap = th.r_cap.map_or("-".to_string(), |c| format!("{c:.4}"));
            let conc = match th.concentrated {
                Some(true) => "A lies in one coset",
                Some(false) => "not forced",
                None => "-",
            };
            let _ = writeln!(out, "threshold s={}: r_cap={cap}, concentration: {conc}", th.s_slack);
        }
    }
    Ok(out)
}

fn cmd_verify(cli: &Cli, name: &str, nmax: Option<usize>, pmax: Option<usize>) -> Outcome {
    let suites: Vec<Suite> = if name == "all" {
        ALL_SUITES.to_vec()
    } else {
        vec![name.parse::<Suite>()?]
    };
    let mut out = String::new();
    let mut failed = false;
    for suite in suites {
        let bound = if suite.uses_pmax() { pmax } else { nmax };
        let report = run_suite(suite, bound)?;
        failed |= !report.passed();
        if cli.json {
            let _ = writeln!(out, "{}", serde_json::to_string(&report).expect("json"));
        } else {
            let _ = writeln!(
                out,
                "{} {:<16} bound={:<3} cases={:<9} violations={}",
                if report.passed() { "PASS" } else { "FAIL" },
                report.suite,
                report.bound,
                report.cases,
                report.violations
            );
            for e in &report.examples {
                let _ = writeln!(out, "    {e}");
            }
        }
    }
    if failed {
        print!("{out}");
        return Err(Failure {
            code: EXIT_VIOLATION,
            message: String::new(),
        });
    }
    Ok(out)
}

pub const TABLE_HEADER: &str = "n,k,m,p_n,q_nk,f_n_q,lower,upper,regime,oracle";

fn cmd_table(cli: &Cli, nmax: usize, oracle: bool) -> Outcome {
    if nmax < 2 {
        return Err(Error::InvalidArgument(format!("nmax must be >= 2, got {nmax}")).into());
    }
    let mut out = String::new();
    if !cli.json {
        let _ = writeln!(out, "{TABLE_HEADER}");
    }
    for n in 2..=nmax {
        for k in 2..=n {
            let r = phi_exact(n, k)?;
            let g = r.params;
            let value = if oracle { Some(run_oracle(cli, n, k)?.value) } else { None };
            if cli.json {
                let row = json!({
                    "n": n, "k": k, "m": g.m, "p_n": g.p_n, "q_nk": g.q_nk,
                    "f_n_q": g.coset_value(), "lower": r.lower, "upper": r.upper,
                    "regime": r.regime.as_str(), "oracle": value,
                });
                let _ = writeln!(out, "{row}");
            } else {
                let _ = writeln!(
                    out,
                    "{n},{k},{},{},{},{},{},{},{},{}",
                    g.m,
                    g.p_n,
                    g.q_nk,
                    g.coset_value(),
                    r.lower,
                    r.upper,
                    r.regime,
                    value.map_or(String::new(), |v| v.to_string())
                );
            }
        }
    }
    Ok(out)
}
