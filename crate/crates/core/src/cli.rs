//! Command-line front end. Reports go to stdout as JSON (or CSV for
//! surveys); progress and timings go to stderr.
//!
//! Exit codes: 0 success, 1 a check failed or internal error, 2 usage error,
//! 3 capacity exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Caps;
use crate::cyclotomic::factor_oracle;
use crate::densities::{golomb_constant, hooley_constant, restricted_artin_product, theorem1_lower_bound};
use crate::error::{Error, Result};
use crate::matsuda::{brute_force_membership, davenport_brute, e_membership, in_m_ring, reversal, trace};
use crate::polyarith::{Poly, PrimeField};
use crate::survey::{lemma_checks, run_golomb_survey, run_survey};

#[derive(Debug, Parser)]
#[command(name = "cycloscope", version, about = "Reducibility of X^p - 1 over F_l[X; <2,3>], prime surveys and Artin-type constants")]
pub struct Cli {
    /// Largest p for which factorizations (witnesses) are computed.
    #[arg(long, global = true)]
    pub oracle_cap: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether p lies in E(ell).
    Member {
        p: u64,
        #[arg(long)]
        ell: u64,
        /// Include a factorization X^p - 1 = g * h with g, h free of an X term.
        #[arg(long)]
        witness: bool,
    },
    /// Factor Phi_p over F_ell.
    FactorPhi {
        p: u64,
        #[arg(long)]
        ell: u64,
    },
    /// Classify all primes up to a limit.
    Survey(SurveyArgs),
    /// Count primes p = 1 mod r at which a has order (p-1)/r.
    GolombSurvey {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Rigorous enclosure of a density constant.
    Constants {
        which: ConstantKind,
        #[arg(long)]
        ell: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i64>,
        #[arg(long)]
        r: Option<u64>,
        #[arg(long, default_value_t = 1e-9)]
        precision: f64,
    },
    /// Confirm D(Z/ell) = ell by enumeration.
    Davenport {
        #[arg(long)]
        ell: u64,
    },
    /// Exhaustive index/membership checks for ell in {2, 3, 5, 7}.
    LemmaChecks {
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run the built-in consistency suites.
    Selftest,
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    #[arg(long)]
    pub ell: u64,
    #[arg(long)]
    pub limit: u64,
    /// Run the trace test for 2 <= s < ell only up to this p (default: limit).
    #[arg(long)]
    pub deep_limit: Option<u64>,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstantKind {
    Artin,
    Bound,
    Hooley,
    Golomb,
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Internal(e.to_string()))
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut caps = Caps::from_env()?;
    if let Some(c) = cli.oracle_cap {
        if c == 0 {
            return crate::error::usage("--oracle-cap must be positive");
        }
        caps.oracle_cap = c;
    }
    match cli.command {
        Command::Member { p, ell, witness } => {
            emit(out, &to_json(&e_membership(p, ell, witness, &caps)?)?)?;
        }
        Command::FactorPhi { p, ell } => {
            emit(out, &to_json(&factor_oracle(p, ell, &caps)?)?)?;
        }
        Command::Survey(args) => {
            let start = Instant::now();
            let deep = args.deep_limit.unwrap_or(args.limit);
            let report = run_survey(args.ell, args.limit, deep, args.threads, &caps)?;
            let text = match args.format {
                Format::Json => to_json(&report)?,
                Format::Csv => report.to_csv()?,
            };
            match &args.out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))?
                }
                None => emit(out, &text)?,
            }
            let _ = writeln!(err, "survey finished in {:.2}s", start.elapsed().as_secs_f64());
        }
        Command::GolombSurvey { a, r, limit, threads } => {
            let start = Instant::now();
            emit(out, &to_json(&run_golomb_survey(a, r, limit, threads, &caps)?)?)?;
            let _ = writeln!(err, "golomb survey finished in {:.2}s", start.elapsed().as_secs_f64());
        }
        Command::Constants { which, ell, a, r, precision } => {
            if !(1e-12..=1e-2).contains(&precision) {
                return crate::error::usage(format!("--precision must lie in [1e-12, 1e-2], got {precision}"));
            }
            let need = |v: Option<i64>, flag: &str| v.ok_or_else(|| Error::Usage(format!("{flag} is required")));
            let est = match which {
                ConstantKind::Artin => restricted_artin_product(2, precision, &caps)?,
                ConstantKind::Bound => {
                    theorem1_lower_bound(need(ell.map(|v| v as i64), "--ell")? as u64, precision, &caps)?
                }
                ConstantKind::Hooley => hooley_constant(need(a, "--a")?, precision, &caps)?,
                ConstantKind::Golomb => golomb_constant(need(a, "--a")?, r.unwrap_or(1), precision, &caps)?,
            };
            emit(out, &to_json(&est)?)?;
        }
        Command::Davenport { ell } => {
            let report = davenport_report(ell)?;
            emit(out, &to_json(&report)?)?;
            return Ok(if report.confirmed { 0 } else { 1 });
        }
        Command::LemmaChecks { limit, threads } => {
            let start = Instant::now();
            let report = lemma_checks(limit, threads, &caps)?;
            emit(out, &to_json(&report)?)?;
            let _ = writeln!(err, "lemma checks finished in {:.2}s", start.elapsed().as_secs_f64());
            return Ok(if report.passed { 0 } else { 1 });
        }
        Command::Selftest => {
            let report = selftest(&caps)?;
            emit(out, &to_json(&report)?)?;
            return Ok(if report.passed { 0 } else { 1 });
        }
    }
    Ok(0)
}

#[derive(Debug, Serialize)]
pub struct DavenportReport {
    pub ell: u64,
    /// Every sequence of length `ell` has a nonempty zero-sum subsequence.
    pub length_ell_forced: bool,
    /// Some sequence of length `ell - 1` has none.
    pub length_ell_minus_one_avoidable: bool,
    pub confirmed: bool,
}

pub fn davenport_report(ell: u64) -> Result<DavenportReport> {
    let forced = davenport_brute(ell, ell)?;
    let avoidable = ell < 2 || !davenport_brute(ell, ell - 1)?;
    Ok(DavenportReport {
        ell,
        length_ell_forced: forced,
        length_ell_minus_one_avoidable: avoidable,
        confirmed: forced && avoidable,
    })
}

#[derive(Debug, Serialize)]
pub struct SelftestCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<SelftestCheck>,
    pub passed: bool,
}

/// `f` with nonzero constant term, degree in `1..=max_deg`.
fn random_poly(rng: &mut ChaCha8Rng, field: PrimeField, max_deg: usize, m_ring: bool) -> Poly {
    let l = field.modulus();
    let deg = rng.gen_range(1..=max_deg);
    let deg = if m_ring && deg == 1 { 2 } else { deg };
    let mut c: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..l)).collect();
    c[0] = rng.gen_range(1..l);
    c[deg] = rng.gen_range(1..l);
    if m_ring {
        c[1] = 0;
    }
    Poly::from_coeffs(field, c)
}

/// Reversal identities on `cases` random inputs; returns the first failure.
pub fn reversal_identities(cases: usize, seed: u64) -> Result<std::result::Result<(), String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..cases {
        let l = [2u64, 3, 5, 7, 11][i % 5];
        let field = PrimeField::new(l)?;
        let f = random_poly(&mut rng, field, 24, false);
        let g = random_poly(&mut rng, field, 24, false);
        if reversal(&reversal(&f)?)? != f {
            return Ok(Err(format!("R(R(f)) != f for f = {f} over F_{l}")));
        }
        if reversal(&(&f * &g))? != &reversal(&f)? * &reversal(&g)? {
            return Ok(Err(format!("R(fg) != R(f)R(g) for f = {f}, g = {g} over F_{l}")));
        }
        let h = random_poly(&mut rng, field, 24, true);
        if !in_m_ring(&h) || trace(&reversal(&h)?)?.value != 0 {
            return Ok(Err(format!("tr(R(h)) != 0 for h = {h} over F_{l}")));
        }
    }
    Ok(Ok(()))
}

pub fn selftest(caps: &Caps) -> Result<SelftestReport> {
    let mut checks = Vec::new();
    let lemma = lemma_checks(10_000.min(caps.lemma_cap), None, caps)?;
    checks.push(SelftestCheck {
        name: "lemma_checks_1e4",
        passed: lemma.passed,
        detail: format!("{} index classes checked", lemma.checks.len()),
    });
    let mut dav_ok = true;
    for l in [2u64, 3, 5] {
        dav_ok &= davenport_report(l)?.confirmed;
    }
    checks.push(SelftestCheck { name: "davenport_l_le_5", passed: dav_ok, detail: "ell in {2, 3, 5}".into() });
    let rev = reversal_identities(10_000, 0x5eed)?;
    checks.push(SelftestCheck {
        name: "reversal_identities",
        passed: rev.is_ok(),
        detail: rev.err().unwrap_or_else(|| "10000 cases".into()),
    });
    let mut mismatches = Vec::new();
    for l in [2u64, 3, 5, 7] {
        for p in crate::survey::sieve_primes(2, 300, caps)? {
            if p != l && e_membership(p, l, false, caps)?.is_member() != brute_force_membership(p, l, caps)? {
                mismatches.push(format!("({p}, {l})"));
            }
        }
    }
    checks.push(SelftestCheck {
        name: "membership_vs_brute_force_p_le_300",
        passed: mismatches.is_empty(),
        detail: if mismatches.is_empty() { "no mismatches".into() } else { mismatches.join(", ") },
    });
    let mut witness_ok = true;
    for (p, l) in [(7u64, 2u64), (11, 3), (31, 5), (43, 7)] {
        let m = e_membership(p, l, true, caps)?;
        witness_ok &= match &m.witness {
            Some(w) => {
                let field = PrimeField::new(l)?;
                let mut target = vec![0; p as usize + 1];
                target[0] = l - 1;
                target[p as usize] = 1;
                &w.g * &w.h == Poly::from_coeffs(field, target) && in_m_ring(&w.g) && in_m_ring(&w.h)
            }
            None => false,
        };
    }
    checks.push(SelftestCheck { name: "witnesses", passed: witness_ok, detail: "(7,2) (11,3) (31,5) (43,7)".into() });
    let passed = checks.iter().all(|c| c.passed);
    Ok(SelftestReport { checks, passed })
}
