//! `cyclomat` — verification sweeps, determinant tables, and k >= 3
//! exploration for the cyclotomic Gauss-sum matrices.
//!
//! Exit codes: 0 all checks pass, 1 verification failure, 2 usage error.
//! Output is byte-deterministic for a fixed config and version; wall-clock
//! data appears only behind `--timing`, and the text/csv timestamp comment
//! only without `--no-header`.

use clap::{Parser, Subcommand, ValueEnum};
use cyclomat::characters::GaussCtx;
use cyclomat::finite_field::order_mod;
use cyclomat::matrix::{det_a_via_eigen, det_b_via_eigen, eigenvalues};
use cyclomat::poly::{divisors, prime_power};
use cyclomat::verify::{
    reports_to_csv, reports_to_json, sort_reports, verify_carlitz, verify_chapman, verify_gamma,
    verify_hd_lifting, verify_hd_product, verify_lerch, verify_numeric, verify_stickelberger,
    verify_sun, verify_thm11, verify_thm12_a1, verify_thm12_a2, verify_thm13,
    VerificationReport,
};
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

const DEFAULT_HARD_BOUND: u64 = 2401;

#[derive(Parser)]
#[command(name = "cyclomat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Debug)]
#[serde(rename_all = "lowercase")]
enum Claim {
    All,
    Thm11,
    Thm12,
    Thm13,
    Carlitz,
    Stickelberger,
    Lerch,
    Hd,
    Chapman,
    Sun,
    Gamma,
    Numeric,
}

#[derive(clap::Args, Serialize)]
struct RunConfig {
    /// Explicit prime powers, comma separated (e.g. --q 5,9,27).
    #[arg(long, value_delimiter = ',')]
    q: Vec<u64>,
    /// All prime powers up to this bound (ignored when --q is given).
    #[arg(long)]
    q_max: Option<u64>,
    /// Divisor filter for k, comma separated; default: all divisors of q-1.
    #[arg(long, value_delimiter = ',')]
    k: Vec<u64>,
    /// Claim filter.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    claims: Vec<Claim>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Matrix size up to which determinants are re-derived by direct
    /// elimination as a cross-check.
    #[arg(long, default_value_t = 13)]
    cross_check_bound: usize,
    /// Field-table cache directory (or CYCLOMAT_CACHE_DIR).
    #[arg(long, env = "CYCLOMAT_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Hard upper bound on q.
    #[arg(long, default_value_t = DEFAULT_HARD_BOUND)]
    hard_bound: u64,
    /// Suppress the timestamp header comment in text/csv output.
    #[arg(long)]
    no_header: bool,
    /// Record per-check elapsed milliseconds (breaks byte-determinism).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run theorem/lemma checks and report pass/fail records.
    Verify(RunConfig),
    /// Emit one row per (q, k): m, det A, det B, singularity, o_k(p).
    Table(RunConfig),
    /// Collect det A_q(k) data for k >= 3: factorization and eigenvalue moduli.
    Explore(RunConfig),
}

fn usage_error(msg: &str) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(2);
}

fn resolve_qs(cfg: &RunConfig) -> Vec<u64> {
    let mut qs: Vec<u64> = if !cfg.q.is_empty() {
        cfg.q.clone()
    } else if let Some(max) = cfg.q_max {
        (3..=max).filter(|&q| prime_power(q).is_some()).collect()
    } else {
        usage_error("one of --q or --q-max is required");
    };
    qs.sort_unstable();
    qs.dedup();
    for &q in &qs {
        if prime_power(q).is_none() {
            usage_error(&format!("{q} is not a prime power"));
        }
        if q > cfg.hard_bound {
            usage_error(&format!("q = {q} exceeds the hard bound {}", cfg.hard_bound));
        }
    }
    qs
}

/// The k values to process for one q. Explicit --k entries must divide
/// q-1 when q was given explicitly; under --q-max they are intersected.
fn resolve_ks(cfg: &RunConfig, q: u64, explicit_q: bool) -> Vec<u64> {
    let divs = divisors(q - 1);
    if cfg.k.is_empty() {
        return divs;
    }
    let mut ks = Vec::new();
    for &k in &cfg.k {
        if divs.contains(&k) {
            ks.push(k);
        } else if explicit_q {
            usage_error(&format!("k = {k} does not divide q - 1 = {}", q - 1));
        }
    }
    ks.sort_unstable();
    ks.dedup();
    ks
}

fn build_ctx(cfg: &RunConfig, q: u64) -> GaussCtx {
    let (p, n) = prime_power(q).unwrap();
    let ctx = match &cfg.cache_dir {
        Some(dir) => GaussCtx::with_cache_dir(p, n, dir),
        None => GaussCtx::new(p, n),
    };
    ctx.unwrap_or_else(|e| usage_error(&format!("cannot build F_{q}: {e}")))
}

fn selected(claims: &[Claim], c: Claim) -> bool {
    claims.contains(&Claim::All) || claims.contains(&c)
}

fn timed<F>(timing: bool, f: F) -> Vec<VerificationReport>
where
    F: FnOnce() -> Vec<VerificationReport>,
{
    let start = Instant::now();
    let mut reports = f();
    if timing {
        let ms = start.elapsed().as_millis() as u64;
        for r in &mut reports {
            r.elapsed_ms = Some(ms);
        }
    }
    reports
}

fn verify_one_q(cfg: &RunConfig, q: u64, explicit_q: bool) -> Vec<VerificationReport> {
    let g = build_ctx(cfg, q);
    let (p, n) = (g.fq.p, g.fq.n);
    let claims = &cfg.claims;
    let mut out = Vec::new();
    let ok = |r: cyclomat::Result<Vec<VerificationReport>>| {
        r.unwrap_or_else(|e| usage_error(&format!("q={q}: {e}")))
    };

    for k in resolve_ks(cfg, q, explicit_q) {
        if selected(claims, Claim::Thm11) {
            out.extend(timed(cfg.timing, || {
                ok(verify_thm11(&g, k, cfg.cross_check_bound))
            }));
        }
        if selected(claims, Claim::Thm12) {
            if k == 1 {
                out.extend(timed(cfg.timing, || vec![verify_thm12_a1(&g).unwrap()]));
            }
            if k == 2 && q % 2 == 1 {
                out.extend(timed(cfg.timing, || {
                    verify_thm12_a2(&g).unwrap().into_iter().collect()
                }));
            }
        }
        if selected(claims, Claim::Thm13) {
            out.extend(timed(cfg.timing, || ok(verify_thm13(&g, k))));
        }
        if selected(claims, Claim::Lerch) {
            out.extend(timed(cfg.timing, || vec![verify_lerch((q - 1) / k).unwrap()]));
        }
    }
    if selected(claims, Claim::Carlitz) && n == 1 && p > 2 {
        out.extend(timed(cfg.timing, || ok(verify_carlitz(&g))));
    }
    if selected(claims, Claim::Stickelberger) {
        out.extend(timed(cfg.timing, || ok(verify_stickelberger(&g))));
    }
    if selected(claims, Claim::Hd) {
        out.extend(timed(cfg.timing, || ok(verify_hd_lifting(p, n))));
        out.extend(timed(cfg.timing, || ok(verify_hd_product(&g))));
    }
    if selected(claims, Claim::Chapman) && n == 1 && p > 2 {
        out.extend(timed(cfg.timing, || verify_chapman(p)));
    }
    if selected(claims, Claim::Sun) && n == 1 && p > 2 {
        out.extend(timed(cfg.timing, || verify_sun(p)));
    }
    if selected(claims, Claim::Numeric) {
        out.extend(timed(cfg.timing, || verify_numeric(&g)));
    }
    out
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    version: &'a str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn emit(cfg: &RunConfig, content: String) {
    match &cfg.output {
        Some(path) => std::fs::write(path, content)
            .unwrap_or_else(|e| usage_error(&format!("cannot write output: {e}"))),
        None => {
            std::io::stdout().write_all(content.as_bytes()).unwrap();
        }
    }
}

fn header_comment(cfg: &RunConfig) -> String {
    if cfg.no_header {
        String::new()
    } else {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_secs();
        format!("# cyclomat {} generated-at-unix {now}\n", env!("CARGO_PKG_VERSION"))
    }
}

fn cmd_verify(cfg: &RunConfig) -> i32 {
    let explicit_q = !cfg.q.is_empty();
    let qs = resolve_qs(cfg);
    // k-divisibility is validated eagerly so usage errors beat long runs
    for &q in &qs {
        resolve_ks(cfg, q, explicit_q);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .unwrap();
    let mut reports: Vec<VerificationReport> = pool.install(|| {
        use rayon::prelude::*;
        qs.par_iter().flat_map(|&q| verify_one_q(cfg, q, explicit_q)).collect()
    });
    if selected(&cfg.claims, Claim::Gamma) {
        for dim in 1..=10 {
            reports.extend(timed(cfg.timing, || verify_gamma(dim)));
        }
    }
    sort_reports(&mut reports);
    let all_pass = reports.iter().all(|r| r.passed());

    let content = match cfg.format {
        Format::Json => {
            let env = Envelope {
                version: env!("CARGO_PKG_VERSION"),
                config: cfg,
                body: serde_json::json!({ "reports": reports }),
            };
            serde_json::to_string_pretty(&env).unwrap() + "\n"
        }
        Format::Csv => {
            let _ = reports_to_json(&reports); // keep exactness round-trip exercised
            header_comment(cfg) + &reports_to_csv(&reports, true)
        }
        Format::Text => {
            let mut s = header_comment(cfg);
            for r in &reports {
                s.push_str(&format!(
                    "{:6} {} q={} k={} {} | expected {} | computed {}\n",
                    format!(
                        "{:?}",
                        r.status
                    )
                    .to_lowercase(),
                    r.claim,
                    r.q.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
                    r.k.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
                    r.extra.clone().unwrap_or_default(),
                    r.expected,
                    r.computed
                ));
            }
            s.push_str(&format!(
                "{} checks, {} failed\n",
                reports.len(),
                reports.iter().filter(|r| !r.passed()).count()
            ));
            s
        }
    };
    emit(cfg, content);
    if all_pass {
        0
    } else {
        1
    }
}

#[derive(Serialize)]
struct TableRow {
    q: u64,
    k: u64,
    m: u64,
    det_a: String,
    det_b: String,
    singular: bool,
    order_of_p_mod_k: u64,
}

fn cmd_table(cfg: &RunConfig) -> i32 {
    let explicit_q = !cfg.q.is_empty();
    let qs = resolve_qs(cfg);
    let mut rows = Vec::new();
    for &q in &qs {
        let g = build_ctx(cfg, q);
        for k in resolve_ks(cfg, q, explicit_q) {
            let det_a = det_a_via_eigen(&g, k).unwrap();
            let det_b = det_b_via_eigen(&g, k).unwrap();
            rows.push(TableRow {
                q,
                k,
                m: (q - 1) / k,
                det_a: det_a
                    .as_integer()
                    .map(|v| v.to_string())
                    .unwrap_or_else(|| format!("{det_a}")),
                det_b: det_b.to_string(),
                singular: det_b.is_zero(),
                order_of_p_mod_k: order_mod(g.fq.p, k).unwrap(),
            });
        }
    }
    let content = match cfg.format {
        Format::Json => {
            let env = Envelope {
                version: env!("CARGO_PKG_VERSION"),
                config: cfg,
                body: serde_json::json!({ "rows": rows }),
            };
            serde_json::to_string_pretty(&env).unwrap() + "\n"
        }
        Format::Csv => {
            let mut s = header_comment(cfg);
            s.push_str("q,k,m,det_a,det_b,singular,o_k_p\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.q, r.k, r.m, r.det_a, r.det_b, r.singular, r.order_of_p_mod_k
                ));
            }
            s
        }
        Format::Text => {
            let mut s = header_comment(cfg);
            for r in &rows {
                s.push_str(&format!(
                    "q={:<5} k={:<4} m={:<4} det A = {:<30} det B = {:<20} singular={} o_k(p)={}\n",
                    r.q, r.k, r.m, r.det_a, r.det_b, r.singular, r.order_of_p_mod_k
                ));
            }
            s
        }
    };
    emit(cfg, content);
    0
}

fn factorize(v: &cyclomat::Int) -> String {
    let mut n = v.abs();
    if n.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    let mut d = 2u64;
    while d <= 100_000 {
        let big_d = cyclomat::Int::from(d);
        let mut e = 0u32;
        while (&n % &big_d).is_zero() {
            n /= &big_d;
            e += 1;
        }
        if e == 1 {
            parts.push(format!("{d}"));
        } else if e > 1 {
            parts.push(format!("{d}^{e}"));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > cyclomat::Int::from(1u8) {
        parts.push(format!("{n}"));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" * ")
    }
}

#[derive(Serialize)]
struct ExploreRow {
    q: u64,
    k: u64,
    m: u64,
    det_a: String,
    sign: i8,
    factorization: String,
    lambda_moduli: Vec<String>,
}

fn cmd_explore(cfg: &RunConfig) -> i32 {
    let explicit_q = !cfg.q.is_empty();
    let qs = resolve_qs(cfg);
    let mut rows = Vec::new();
    for &q in &qs {
        let g = build_ctx(cfg, q);
        for k in resolve_ks(cfg, q, explicit_q).into_iter().filter(|&k| k >= 3) {
            let det = det_a_via_eigen(&g, k).unwrap();
            let det_int = det.as_integer().expect("det A is an integer");
            let eig = eigenvalues(&g, k).unwrap();
            let mut moduli: Vec<f64> = eig.lambdas.iter().map(|l| l.embed().norm()).collect();
            moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
            rows.push(ExploreRow {
                q,
                k,
                m: (q - 1) / k,
                det_a: det_int.to_string(),
                sign: if det_int.is_negative() {
                    -1
                } else if det_int.is_zero() {
                    0
                } else {
                    1
                },
                factorization: factorize(&det_int),
                lambda_moduli: moduli.iter().map(|m| format!("{m:.6}")).collect(),
            });
        }
    }
    let content = match cfg.format {
        Format::Json => {
            let env = Envelope {
                version: env!("CARGO_PKG_VERSION"),
                config: cfg,
                body: serde_json::json!({ "rows": rows }),
            };
            serde_json::to_string_pretty(&env).unwrap() + "\n"
        }
        Format::Csv => {
            let mut s = header_comment(cfg);
            s.push_str("q,k,m,det_a,sign,factorization,lambda_moduli\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},\"{}\",\"{}\"\n",
                    r.q,
                    r.k,
                    r.m,
                    r.det_a,
                    r.sign,
                    r.factorization,
                    r.lambda_moduli.join(" ")
                ));
            }
            s
        }
        Format::Text => {
            let mut s = header_comment(cfg);
            for r in &rows {
                s.push_str(&format!(
                    "q={:<5} k={:<4} m={:<4} det A = {} = {} [{}] |lambda| = {}\n",
                    r.q,
                    r.k,
                    r.m,
                    r.det_a,
                    if r.sign >= 0 { "+" } else { "-" },
                    r.factorization,
                    r.lambda_moduli.join(" ")
                ));
            }
            s
        }
    };
    emit(cfg, content);
    0
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Verify(cfg) => cmd_verify(cfg),
        Command::Table(cfg) => cmd_table(cfg),
        Command::Explore(cfg) => cmd_explore(cfg),
    };
    std::process::exit(code);
}
