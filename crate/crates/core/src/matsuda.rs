//! The ring `F_l[X; M]` for `M = <2, 3>`: polynomials with no `X` term.
//!
//! `X^p - 1` is reducible there exactly when `Phi_p mod l` has a factor of
//! trace zero, which reduces membership of `p` in `E(l)` to a zero-sum
//! question on the multiset of factor traces.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::is_prime;
use crate::config::Caps;
use crate::cyclotomic::{factor_oracle, multiplicative_order, trace_multiset, TraceMultiset};
use crate::error::{capacity, usage, Result};
use crate::polyarith::{FpElem, Poly, PrimeField};

/// `X^{deg f} f(1/X)`.
pub fn reversal(f: &Poly) -> Result<Poly> {
    if f.is_zero() {
        return usage("reversal of the zero polynomial");
    }
    let mut c = f.coeffs().to_vec();
    c.reverse();
    Ok(Poly::from_coeffs(f.field(), c))
}

/// `-a_{n-1} / a_n`.
pub fn trace(f: &Poly) -> Result<FpElem> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return usage("trace of a constant polynomial"),
    };
    let field = f.field();
    let t = field.neg(field.mul(f.coeff(n - 1), field.inv(f.leading())));
    Ok(FpElem { value: t, modulus: field.modulus() })
}

/// Membership in `F_l[X; M]`: no `X` term, hence not of degree 1.
pub fn in_m_ring(f: &Poly) -> bool {
    f.coeff(1) == 0
}

/// Nonempty sub-multiset of trace values summing to zero mod `l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroSumWitness {
    pub chosen: BTreeMap<u64, usize>,
}

const MAX_ZERO_SUM_STATES: usize = 1 << 22;

/// Bounded knapsack over `Z/l`. Values are taken in increasing order and, for
/// each value, one copy at a time; the first combination to reach zero wins.
pub fn zero_sum_subset(t: &TraceMultiset) -> Result<Option<ZeroSumWitness>> {
    let l = t.ell;
    if t.count(0) > 0 {
        return Ok(Some(ZeroSumWitness { chosen: BTreeMap::from([(0, 1)]) }));
    }
    // sum -> (value, copies, previous sum or None for the empty prefix)
    let mut reached: BTreeMap<u64, (u64, usize, Option<u64>)> = BTreeMap::new();
    for (&v, &m) in &t.entries {
        let before: Vec<u64> = reached.keys().copied().collect();
        let copies = m.min(l as usize);
        for c in 1..=copies {
            let step = (v as u128 * c as u128 % l as u128) as u64;
            let bases = std::iter::once(None).chain(before.iter().map(|&b| Some(b)));
            for base in bases {
                let sum = (base.unwrap_or(0) + step) % l;
                reached.entry(sum).or_insert((v, c, base));
                if sum == 0 {
                    return Ok(Some(unwind(&reached)));
                }
            }
            if reached.len() > MAX_ZERO_SUM_STATES {
                return capacity(format!("zero-sum search over F_{l} exceeds {MAX_ZERO_SUM_STATES} states"));
            }
        }
    }
    Ok(None)
}

fn unwind(reached: &BTreeMap<u64, (u64, usize, Option<u64>)>) -> ZeroSumWitness {
    let mut chosen = BTreeMap::new();
    let mut at = Some(0);
    while let Some(sum) = at {
        let (v, c, prev) = reached[&sum];
        chosen.insert(v, c);
        at = prev;
    }
    ZeroSumWitness { chosen }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Member,
    Nonmember,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    IndexGeEll,
    ZeroSumSubset,
    PrimitiveRoot,
    NoZeroSum,
    DeepTestSkipped,
    SelfPrime,
}

/// `X^p - 1 = g * h` with `g`, `h` nonconstant and free of an `X` term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub g: Poly,
    pub h: Poly,
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Witness", 2)?;
        st.serialize_field("g", &self.g.to_string())?;
        st.serialize_field("h", &self.h.to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipResult {
    pub p: u64,
    pub ell: u64,
    /// Order of `l` mod `p` (absent when `p = l`).
    pub r: Option<u64>,
    /// Index `(p - 1) / r`.
    pub s: Option<u64>,
    pub verdict: Verdict,
    pub reason: Reason,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub traces: Option<BTreeMap<u64, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_sum: Option<BTreeMap<u64, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl MembershipResult {
    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }
}

/// Decide membership from the index alone when possible: `s = 1` gives an
/// irreducible `Phi_p` of trace `-1`, and `s >= l` forces a zero-sum subset.
pub fn shortcut(s: u64, l: u64) -> Option<(Verdict, Reason)> {
    if s == 1 {
        Some((Verdict::Nonmember, Reason::PrimitiveRoot))
    } else if s >= l {
        Some((Verdict::Member, Reason::IndexGeEll))
    } else {
        None
    }
}

/// Decide whether `p` lies in `E(l)`, optionally with a witness factorization
/// of `X^p - 1` (only when `p <= caps.oracle_cap`).
pub fn e_membership(p: u64, l: u64, want_witness: bool, caps: &Caps) -> Result<MembershipResult> {
    if !is_prime(p) {
        return usage(format!("{p} is not prime"));
    }
    if !is_prime(l) {
        return usage(format!("ell = {l} is not prime"));
    }
    let mut out = MembershipResult {
        p,
        ell: l,
        r: None,
        s: None,
        verdict: Verdict::Nonmember,
        reason: Reason::SelfPrime,
        traces: None,
        zero_sum: None,
        witness: None,
        note: None,
    };
    if p == l {
        return Ok(out);
    }
    let r = multiplicative_order(l as i64, p)?;
    let s = (p - 1) / r;
    out.r = Some(r);
    out.s = Some(s);
    if let Some((verdict, reason)) = shortcut(s, l) {
        out.verdict = verdict;
        out.reason = reason;
    } else {
        let traces = trace_multiset(p, l, caps)?;
        let zs = zero_sum_subset(&traces)?;
        out.traces = Some(traces.entries.clone());
        match zs {
            Some(w) => {
                out.verdict = Verdict::Member;
                out.reason = Reason::ZeroSumSubset;
                out.zero_sum = Some(w.chosen);
            }
            None => {
                out.verdict = Verdict::Nonmember;
                out.reason = Reason::NoZeroSum;
            }
        }
    }
    if want_witness && out.verdict == Verdict::Member {
        if p > caps.oracle_cap {
            out.note = Some(format!("witness omitted: p exceeds the oracle cap {}", caps.oracle_cap));
        } else {
            let (zero_sum, witness) = build_witness(p, l, caps)?;
            out.zero_sum = Some(zero_sum);
            out.witness = Some(witness);
        }
    }
    Ok(out)
}

fn build_witness(p: u64, l: u64, caps: &Caps) -> Result<(BTreeMap<u64, usize>, Witness)> {
    let field = PrimeField::new(l)?;
    let factors = factor_oracle(p, l, caps)?.factors;
    let traces: Vec<u64> = factors.iter().map(|f| trace(f).map(|t| t.value)).collect::<Result<_>>()?;
    let multiset = TraceMultiset::from_traces(l, traces.iter().copied());
    let chosen = match zero_sum_subset(&multiset)? {
        Some(w) => w.chosen,
        None => return Err(crate::Error::Internal(format!("no traceless factor of Phi_{p} mod {l}"))),
    };
    let mut want = chosen.clone();
    let mut big_g = Poly::one(field);
    let mut big_h = Poly::from_signed(field, &[-1, 1]);
    for (f, t) in factors.iter().zip(&traces) {
        match want.get_mut(t) {
            Some(k) if *k > 0 => {
                *k -= 1;
                big_g = &big_g * f;
            }
            _ => big_h = &big_h * f,
        }
    }
    let g = reversal(&big_h)?.monic();
    let h = reversal(&big_g)?.monic();
    Ok((chosen, Witness { g, h }))
}

/// Budget of subset products examined when the pool is too large to
/// enumerate exhaustively.
pub const BRUTE_FORCE_BUDGET: u64 = 1 << 22;
const BRUTE_FORCE_EXHAUSTIVE_POOL: usize = 24;

/// Search all splittings `X^p - 1 = g * h` into products of irreducible
/// factors for one with both sides nonconstant and free of an `X` term.
///
/// Subsets are visited by increasing size. Pools of at most 24 factors are
/// searched exhaustively; larger pools stop after [`BRUTE_FORCE_BUDGET`]
/// subsets with a capacity error if nothing was found.
pub fn brute_force_membership(p: u64, l: u64, caps: &Caps) -> Result<bool> {
    if p == l {
        return Ok(false);
    }
    let field = PrimeField::new(l)?;
    let list = factor_oracle(p, l, caps)?;
    let mut pool = vec![Poly::from_signed(field, &[-1, 1])];
    pool.extend(list.factors);
    // Only the two lowest coefficients and the degree matter.
    let low: Vec<(u64, u64, usize)> =
        pool.iter().map(|f| (f.coeff(0), f.coeff(1), f.degree().unwrap())).collect();
    let n = low.len();
    let splits = |subset: &[usize]| -> bool {
        let mut inside = vec![false; n];
        for &i in subset {
            inside[i] = true;
        }
        let (mut g, mut h) = ((1u64, 0u64, 0usize), (1u64, 0u64, 0usize));
        for (i, &(c0, c1, d)) in low.iter().enumerate() {
            let acc = if inside[i] { &mut g } else { &mut h };
            *acc = (field.mul(acc.0, c0), field.add(field.mul(acc.0, c1), field.mul(acc.1, c0)), acc.2 + d);
        }
        g.1 == 0 && h.1 == 0 && g.2 >= 2 && h.2 >= 2
    };
    let mut examined = 0u64;
    for size in 1..n {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if splits(&idx) {
                return Ok(true);
            }
            examined += 1;
            if n > BRUTE_FORCE_EXHAUSTIVE_POOL && examined >= BRUTE_FORCE_BUDGET {
                return capacity(format!(
                    "brute-force search over {n} factors of X^{p} - 1 undecided after {examined} subsets"
                ));
            }
            // next combination in lexicographic order
            let mut i = size;
            while i > 0 && idx[i - 1] == n - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(false)
}

const MAX_DAVENPORT_SEQUENCES: u64 = 50_000_000;

/// Whether every length-`n` sequence over `Z/l` has a nonempty zero-sum
/// subsequence. Enumerates nondecreasing sequences.
pub fn davenport_brute(l: u64, n: u64) -> Result<bool> {
    if !is_prime(l) {
        return usage(format!("ell = {l} is not prime"));
    }
    if n == 0 {
        return usage("sequence length must be positive");
    }
    if l > 63 || (l as f64).powf(n as f64) > MAX_DAVENPORT_SEQUENCES as f64 {
        return capacity(format!("{l}^{n} sequences exceed the enumeration cap"));
    }
    let full = (1u64 << l) - 1;
    let rotate = |mask: u64, k: u64| -> u64 {
        if k == 0 {
            mask
        } else {
            ((mask << k) | (mask >> (l - k))) & full
        }
    };
    // Depth-first over nondecreasing sequences; `sums` holds nonempty subsequence sums.
    fn walk(l: u64, n: u64, start: u64, sums: u64, rotate: &dyn Fn(u64, u64) -> u64) -> bool {
        if sums & 1 == 1 {
            return true;
        }
        if n == 0 {
            return false;
        }
        (start..l).all(|x| {
            let next = sums | rotate(sums | 1, x);
            walk(l, n - 1, x, next, rotate)
        })
    }
    Ok(walk(l, n, 0, 0, &rotate))
}
