//! Prime sieving and per-prime classification by the index of `<l>`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, factorize_with, isqrt, order_with_factors, pow_mod};
use crate::config::Caps;
use crate::cyclotomic::trace_multiset;
use crate::densities::{golomb_constant, hooley_constant, theorem1_lower_bound, ConstantEstimate};
use crate::error::{capacity, usage, Error, Result};
use crate::matsuda::{shortcut, zero_sum_subset, Reason, Verdict};

/// Integers per parallel work unit in surveys.
pub const CHUNK: u64 = 1 << 16;
const SEGMENT: u64 = 1 << 20;
/// Precision of the reference constants attached to reports.
pub const REFERENCE_PRECISION: f64 = 1e-6;

/// Primes up to `n` by a plain sieve.
pub fn base_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            for j in (i * i..=n).step_by(i) {
                composite[j] = true;
            }
        }
    }
    out
}

/// Primes in `[lo, hi]`, given every prime up to `sqrt(hi)` in `base`.
pub fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let lo = lo.max(2);
    if lo > hi {
        return Vec::new();
    }
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p > hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut m = start;
        while m <= hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    (0..len).filter(|&i| !composite[i]).map(|i| lo + i as u64).collect()
}

/// Calls `f` on each prime in `[lo, hi]` in increasing order, sieving in
/// segments.
pub fn for_each_prime(lo: u64, hi: u64, mut f: impl FnMut(u64)) {
    let base = base_primes(isqrt(hi));
    let mut start = lo.max(2);
    while start <= hi {
        let end = hi.min(start.saturating_add(SEGMENT - 1));
        for p in sieve_segment(start, end, &base) {
            f(p);
        }
        if end == u64::MAX {
            break;
        }
        start = end + 1;
    }
}

fn check_sieve_bounds(lo: u64, hi: u64, caps: &Caps) -> Result<()> {
    if lo < 2 || lo > hi {
        return usage(format!("need 2 <= lo <= hi, got [{lo}, {hi}]"));
    }
    if hi > caps.sieve_max {
        return capacity(format!("{hi} exceeds the sieve cap {}", caps.sieve_max));
    }
    Ok(())
}

/// All primes in `[lo, hi]`.
pub fn sieve_primes(lo: u64, hi: u64, caps: &Caps) -> Result<Vec<u64>> {
    check_sieve_bounds(lo, hi, caps)?;
    let mut out = Vec::new();
    for_each_prime(lo, hi, |p| out.push(p));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeClassification {
    pub p: u64,
    pub order_r: u64,
    pub index_s: u64,
    pub e_status: Verdict,
    pub reason: Reason,
}

/// Decision for `2 <= s < l` from the factor traces.
fn deep_verdict(p: u64, l: u64, caps: &Caps) -> Result<(Verdict, Reason)> {
    let traces = trace_multiset(p, l, caps)?;
    Ok(match zero_sum_subset(&traces)? {
        Some(_) => (Verdict::Member, Reason::ZeroSumSubset),
        None => (Verdict::Nonmember, Reason::NoZeroSum),
    })
}

fn classify_with(p: u64, l: u64, pm1: &[(u64, u32)], deep_limit: u64, caps: &Caps) -> Result<PrimeClassification> {
    let r = order_with_factors(l % p, p, pm1);
    let s = (p - 1) / r;
    let (e_status, reason) = match shortcut(s, l) {
        Some(v) => v,
        None if p <= deep_limit => deep_verdict(p, l, caps)?,
        None => (Verdict::Undecided, Reason::DeepTestSkipped),
    };
    Ok(PrimeClassification { p, order_r: r, index_s: s, e_status, reason })
}

/// Order, index and `E(l)` status of `p`; the trace test runs only when
/// `p <= deep_limit`.
pub fn classify_prime(p: u64, l: u64, deep_limit: u64, caps: &Caps) -> Result<PrimeClassification> {
    if !crate::arith::is_prime(p) || !crate::arith::is_prime(l) {
        return usage(format!("p = {p} and ell = {l} must both be prime"));
    }
    if p == l {
        return usage("p = ell is not classified");
    }
    classify_with(p, l, &factorize(p - 1), deep_limit, caps)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Counters {
    total: u64,
    members: u64,
    nonmembers: u64,
    undecided: u64,
    histogram: BTreeMap<u64, u64>,
    reasons: BTreeMap<&'static str, u64>,
}

impl Counters {
    fn add(&mut self, c: &PrimeClassification) {
        self.total += 1;
        match c.e_status {
            Verdict::Member => self.members += 1,
            Verdict::Nonmember => self.nonmembers += 1,
            Verdict::Undecided => self.undecided += 1,
        }
        *self.histogram.entry(c.index_s).or_insert(0) += 1;
        *self.reasons.entry(reason_name(c.reason)).or_insert(0) += 1;
    }

    fn merge(mut self, other: Counters) -> Counters {
        self.total += other.total;
        self.members += other.members;
        self.nonmembers += other.nonmembers;
        self.undecided += other.undecided;
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.reasons {
            *self.reasons.entry(k).or_insert(0) += v;
        }
        self
    }
}

fn reason_name(r: Reason) -> &'static str {
    match r {
        Reason::IndexGeEll => "index_ge_ell",
        Reason::ZeroSumSubset => "zero_sum_subset",
        Reason::PrimitiveRoot => "primitive_root",
        Reason::NoZeroSum => "no_zero_sum",
        Reason::DeepTestSkipped => "deep_test_skipped",
        Reason::SelfPrime => "self_prime",
    }
}

/// `num / den` as a decimal string with 12 digits, truncated.
pub fn ratio_string(num: u64, den: u64) -> String {
    if den == 0 {
        return "0.000000000000".into();
    }
    let scaled = num as u128 * 1_000_000_000_000 / den as u128;
    format!("{}.{:012}", scaled / 1_000_000_000_000, scaled % 1_000_000_000_000)
}

/// Interval reference value attached to a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reference {
    pub label: String,
    pub lo: String,
    pub hi: String,
}

impl From<&ConstantEstimate> for Reference {
    fn from(e: &ConstantEstimate) -> Self {
        Reference { label: e.label.clone(), lo: e.lo(), hi: e.hi() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyReport {
    pub ell: u64,
    pub limit: u64,
    pub deep_limit: u64,
    pub total_primes: u64,
    pub members: u64,
    pub nonmembers: u64,
    pub undecided: u64,
    /// `members / total`.
    pub density_lower: String,
    /// `(members + undecided) / total`.
    pub density_upper: String,
    /// `index_histogram[1] / total`, primes with `l` a primitive root.
    pub primitive_root_density: String,
    pub reasons: BTreeMap<&'static str, u64>,
    pub index_histogram: BTreeMap<u64, u64>,
    /// `1 - prod_{p >= l}(1 - 1/(p(p-1)))`.
    pub lower_bound: Reference,
    /// Hooley's `A(l)`.
    pub primitive_root_constant: Reference,
}

impl SurveyReport {
    pub fn member_fraction(&self) -> f64 {
        self.members as f64 / self.total_primes.max(1) as f64
    }

    pub fn primitive_root_fraction(&self) -> f64 {
        self.index_histogram.get(&1).copied().unwrap_or(0) as f64 / self.total_primes.max(1) as f64
    }

    /// One row per index `s`, with the summary counts on a leading row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Internal(e.to_string());
        w.write_record(["ell", "limit", "deep_limit", "total_primes", "members", "nonmembers", "undecided"])
            .map_err(io)?;
        w.write_record([self.ell, self.limit, self.deep_limit, self.total_primes, self.members, self.nonmembers, self.undecided].map(|v| v.to_string()))
            .map_err(io)?;
        w.write_record(["index_s", "count", "", "", "", "", ""]).map_err(io)?;
        for (s, c) in &self.index_histogram {
            w.write_record([s.to_string(), c.to_string(), String::new(), String::new(), String::new(), String::new(), String::new()])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return usage("thread count must be positive");
        }
        b = b.num_threads(t);
    }
    b.build().map_err(|e| Error::Internal(e.to_string()))
}

/// Chunk `[lo, hi]` ranges covering `[2, n]`.
fn chunks(n: u64) -> Vec<(u64, u64)> {
    (0..n.div_ceil(CHUNK)).map(|i| (i * CHUNK, ((i + 1) * CHUNK - 1).min(n))).collect()
}

/// Classify every prime `p <= limit`, `p != l`. Counters are merged in chunk
/// order, so the report does not depend on `threads`.
pub fn run_survey(l: u64, limit: u64, deep_limit: u64, threads: Option<usize>, caps: &Caps) -> Result<SurveyReport> {
    if !crate::arith::is_prime(l) {
        return usage(format!("ell = {l} is not prime"));
    }
    check_sieve_bounds(2, limit, caps)?;
    let base = base_primes(isqrt(limit));
    let parts: Vec<Result<Counters>> = pool(threads)?.install(|| {
        chunks(limit)
            .into_par_iter()
            .map(|(lo, hi)| {
                let mut c = Counters::default();
                for p in sieve_segment(lo, hi, &base) {
                    if p == l {
                        continue;
                    }
                    c.add(&classify_with(p, l, &factorize_with(p - 1, &base), deep_limit, caps)?);
                }
                Ok(c)
            })
            .collect()
    });
    let mut total = Counters::default();
    for part in parts {
        total = total.merge(part?);
    }
    let bound = theorem1_lower_bound(l, REFERENCE_PRECISION, caps)?;
    let hooley = hooley_constant(l as i64, REFERENCE_PRECISION, caps)?;
    let prim = total.histogram.get(&1).copied().unwrap_or(0);
    Ok(SurveyReport {
        ell: l,
        limit,
        deep_limit,
        total_primes: total.total,
        members: total.members,
        nonmembers: total.nonmembers,
        undecided: total.undecided,
        density_lower: ratio_string(total.members, total.total),
        density_upper: ratio_string(total.members + total.undecided, total.total),
        primitive_root_density: ratio_string(prim, total.total),
        reasons: total.reasons,
        index_histogram: total.histogram,
        lower_bound: Reference::from(&bound),
        primitive_root_constant: Reference::from(&hooley),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GolombReport {
    pub a: i64,
    pub r: u64,
    pub limit: u64,
    pub total_primes: u64,
    /// Primes `p <= limit` with `p = 1 mod r` and `p` not dividing `a`.
    pub congruent_primes: u64,
    /// Those among them with `ord_p(a) = (p - 1)/r`.
    pub count: u64,
    /// `count / total_primes`.
    pub density: String,
    pub reference: Reference,
}

impl GolombReport {
    pub fn density_f64(&self) -> f64 {
        self.count as f64 / self.total_primes.max(1) as f64
    }
}

/// Count primes `p = 1 mod r` up to `limit` at which `a` has order `(p-1)/r`.
pub fn run_golomb_survey(a: i64, r: u64, limit: u64, threads: Option<usize>, caps: &Caps) -> Result<GolombReport> {
    let reference = golomb_constant(a, r, REFERENCE_PRECISION, caps)?;
    check_sieve_bounds(2, limit, caps)?;
    let base = base_primes(isqrt(limit));
    let parts: Vec<(u64, u64, u64)> = pool(threads)?.install(|| {
        chunks(limit)
            .into_par_iter()
            .map(|(lo, hi)| {
                let (mut total, mut congruent, mut count) = (0, 0, 0);
                for p in sieve_segment(lo, hi, &base) {
                    total += 1;
                    let am = a.rem_euclid(p as i64) as u64;
                    if (p - 1) % r != 0 || am == 0 {
                        continue;
                    }
                    congruent += 1;
                    let k = (p - 1) / r;
                    // ord = k  iff  a^k = 1 and a^(k/q) != 1 for primes q | k
                    if pow_mod(am, k, p) == 1
                        && factorize_with(k, &base).iter().all(|&(q, _)| pow_mod(am, k / q, p) != 1)
                    {
                        count += 1;
                    }
                }
                (total, congruent, count)
            })
            .collect()
    });
    let (total, congruent, count) =
        parts.into_iter().fold((0, 0, 0), |acc, x| (acc.0 + x.0, acc.1 + x.1, acc.2 + x.2));
    Ok(GolombReport {
        a,
        r,
        limit,
        total_primes: total,
        congruent_primes: congruent,
        count,
        density: ratio_string(count, total),
        reference: Reference::from(&reference),
    })
}

/// Largest index for which lemma checks rerun the trace test on primes the
/// index shortcut already decides.
pub const LEMMA_DEEP_INDEX: u64 = 1500;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub ell: u64,
    pub primes: u64,
    /// Primes with `s >= l`.
    pub index_ge_ell: u64,
    /// Of those, how many were re-decided by the trace test.
    pub deep_verified: u64,
    /// Of those, how many had `s` above [`LEMMA_DEEP_INDEX`].
    pub shortcut_only: u64,
    /// Primes with `2 <= s < l` found in / not in `E(l)`.
    pub members_below_ell: u64,
    pub nonmembers_below_ell: u64,
    /// Primes with `s >= l` that the trace test placed outside `E(l)`.
    pub counterexamples: Vec<u64>,
    /// For `l` in {2, 3}: primes where membership and `s >= 2` disagree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characterization_counterexamples: Option<Vec<u64>>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub limit: u64,
    pub checks: Vec<LemmaCheck>,
    pub passed: bool,
}

/// For `l` in {2, 3, 5, 7} and primes `p <= limit`: `s >= l` implies
/// membership, and for `l` in {2, 3} membership holds exactly when `s >= 2`.
/// Membership here always comes from the trace test, never the shortcut,
/// except for `s > LEMMA_DEEP_INDEX`.
pub fn lemma_checks(limit: u64, threads: Option<usize>, caps: &Caps) -> Result<LemmaReport> {
    if limit > caps.lemma_cap {
        return capacity(format!("limit {limit} exceeds the lemma-check cap {}", caps.lemma_cap));
    }
    let primes = if limit >= 2 { sieve_primes(2, limit, caps)? } else { Vec::new() };
    let mut checks = Vec::new();
    for l in [2u64, 3, 5, 7] {
        let rows: Vec<Result<(u64, u64, Option<Verdict>)>> = pool(threads)?.install(|| {
            primes
                .par_iter()
                .filter(|&&p| p != l)
                .map(|&p| {
                    let r = order_with_factors(l % p, p, &factorize(p - 1));
                    let s = (p - 1) / r;
                    let deep = if s <= LEMMA_DEEP_INDEX { Some(deep_verdict(p, l, caps)?.0) } else { None };
                    Ok((p, s, deep))
                })
                .collect()
        });
        let mut check = LemmaCheck {
            ell: l,
            primes: 0,
            index_ge_ell: 0,
            deep_verified: 0,
            shortcut_only: 0,
            members_below_ell: 0,
            nonmembers_below_ell: 0,
            counterexamples: Vec::new(),
            characterization_counterexamples: (l <= 3).then(Vec::new),
            passed: true,
        };
        for row in rows {
            let (p, s, deep) = row?;
            check.primes += 1;
            if s >= l {
                check.index_ge_ell += 1;
                match deep {
                    Some(v) => {
                        check.deep_verified += 1;
                        if v != Verdict::Member {
                            check.counterexamples.push(p);
                        }
                    }
                    None => check.shortcut_only += 1,
                }
            } else if s >= 2 {
                match deep {
                    Some(Verdict::Member) => check.members_below_ell += 1,
                    _ => check.nonmembers_below_ell += 1,
                }
            }
            if let Some(list) = check.characterization_counterexamples.as_mut() {
                // s > LEMMA_DEEP_INDEX >= 2 falls under the first check
                if let Some(v) = deep {
                    if (v == Verdict::Member) != (s >= 2) {
                        list.push(p);
                    }
                }
            }
        }
        check.passed = check.counterexamples.is_empty()
            && check.characterization_counterexamples.as_ref().is_none_or(|v| v.is_empty());
        checks.push(check);
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(LemmaReport { limit, checks, passed })
}
