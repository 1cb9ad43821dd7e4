//! `Phi_p` over `F_l`: multiplicative orders, `l`-cyclotomic cosets, factor
//! traces and an equal-degree factorization oracle.
//!
//! The factors of `Phi_p mod l` all have degree `r = ord_p(l)` and there are
//! `s = (p - 1) / r` of them, one per coset of `<l>` in `(Z/p)^*`. The trace
//! of the factor attached to a coset is the Gauss period over that coset,
//! which is what [`trace_multiset`] computes without ever building `F_{l^r}`.

mod oracle;
mod periods;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{factorize, is_prime, order_with_factors};
use crate::config::Caps;
use crate::error::{capacity, usage, Result};
use crate::polyarith::{PrimeField, Poly};

pub use oracle::{factor_oracle, oracle_seed, splitting_power, FactorList};

/// Largest index `s` for which the period matrix is formed (its
/// characteristic polynomial costs `O(s^3)`).
pub const MAX_PERIOD_INDEX: u64 = 3000;

/// Largest field size for which [`trace_multiset_by_gcd`] loops over every
/// residue.
pub const MAX_GCD_SCAN_FIELD: u64 = 4096;

fn require_prime(n: u64, what: &str) -> Result<()> {
    if !is_prime(n) {
        return usage(format!("{n} is not prime ({what})"));
    }
    Ok(())
}

fn require_pair(p: u64, l: u64) -> Result<()> {
    require_prime(p, "p")?;
    require_prime(l, "ell")?;
    if p == l {
        return usage(format!("p and ell must differ (both are {p})"));
    }
    Ok(())
}

/// Least `k >= 1` with `a^k = 1 (mod p)`.
pub fn multiplicative_order(a: i64, p: u64) -> Result<u64> {
    require_prime(p, "modulus")?;
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return usage(format!("{a} is divisible by {p}; it has no multiplicative order"));
    }
    Ok(order_with_factors(a, p, &factorize(p - 1)))
}

/// Orbits of multiplication by `l` on `(Z/p)^*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetPartition {
    pub p: u64,
    pub ell: u64,
    /// Multiplicative order of `l` mod `p`.
    pub r: u64,
    /// Index of `<l>` in `(Z/p)^*`.
    pub s: u64,
    /// Sorted cosets, ordered by smallest element; coset 0 contains 1.
    pub cosets: Vec<Vec<u64>>,
}

/// Coset label of every residue `1..p` (index 0 unused), plus the number of
/// cosets. Labels follow the canonical order of [`CosetPartition`].
pub(crate) fn coset_labels(p: u64, l: u64) -> (Vec<u32>, usize) {
    const UNSEEN: u32 = u32::MAX;
    let n = p as usize;
    let mut labels = vec![UNSEEN; n];
    let step = l % p;
    let mut next = 0u32;
    for x in 1..n {
        if labels[x] != UNSEEN {
            continue;
        }
        let mut y = x as u64;
        loop {
            labels[y as usize] = next;
            y = y * step % p;
            if y == x as u64 {
                break;
            }
        }
        next += 1;
    }
    labels[0] = 0;
    (labels, next as usize)
}

pub fn coset_partition(p: u64, l: u64) -> Result<CosetPartition> {
    require_pair(p, l)?;
    let (labels, s) = coset_labels(p, l);
    let mut cosets = vec![Vec::new(); s];
    for x in 1..p {
        cosets[labels[x as usize] as usize].push(x);
    }
    let r = (p - 1) / s as u64;
    Ok(CosetPartition { p, ell: l, r, s: s as u64, cosets })
}

/// `Phi_p = 1 + X + ... + X^{p-1}` over `F_l`.
pub fn cyclotomic_poly(p: u64, l: u64) -> Result<Poly> {
    require_prime(p, "p")?;
    let field = PrimeField::new(l)?;
    Ok(Poly::from_coeffs(field, vec![1; p as usize]))
}

/// Multiset of traces of the irreducible factors of `Phi_p mod l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceMultiset {
    pub ell: u64,
    /// Trace value -> multiplicity (only nonzero multiplicities are stored).
    pub entries: BTreeMap<u64, usize>,
    /// Number of factors, `s`.
    pub total: usize,
}

impl TraceMultiset {
    pub fn from_traces(ell: u64, traces: impl IntoIterator<Item = u64>) -> Self {
        let mut entries = BTreeMap::new();
        let mut total = 0;
        for t in traces {
            *entries.entry(t % ell).or_insert(0) += 1;
            total += 1;
        }
        TraceMultiset { ell, entries, total }
    }

    pub fn count(&self, t: u64) -> usize {
        self.entries.get(&t).copied().unwrap_or(0)
    }

    /// `sum t * m_t mod l`; equals `l - 1` for every trace multiset of `Phi_p`.
    pub fn weighted_sum(&self) -> u64 {
        let l = self.ell as u128;
        (self.entries.iter().map(|(&t, &m)| t as u128 * m as u128).sum::<u128>() % l) as u64
    }
}

/// Traces of the factors of `Phi_p mod l`, read off as the roots of the
/// period polynomial mod `l`.
pub fn trace_multiset(p: u64, l: u64, caps: &Caps) -> Result<TraceMultiset> {
    require_pair(p, l)?;
    if p > caps.trace_cap {
        return capacity(format!("p = {p} exceeds the trace cap {}", caps.trace_cap));
    }
    let field = PrimeField::new(l)?;
    if p == 2 {
        return Ok(TraceMultiset::from_traces(l, [l - 1]));
    }
    let (labels, s) = coset_labels(p, l);
    if s as u64 > MAX_PERIOD_INDEX {
        return capacity(format!(
            "index s = {s} of {l} mod {p} exceeds {MAX_PERIOD_INDEX} for the period matrix"
        ));
    }
    let r = (p - 1) / s as u64;
    let matrix = periods::period_matrix(&labels, s, r, field);
    let cp = periods::charpoly(matrix, field);
    let roots = periods::split_roots(&cp, oracle_seed(p, l))?;
    Ok(TraceMultiset { ell: l, entries: roots, total: s })
}

/// The same multiset via `gcd(Phi_p, u_0 - t)` for every `t` in `F_l`, where
/// `u_0 = sum_{c in C_0} X^c`. The degree of each gcd is `r` times the number
/// of factors of trace `t`. Quadratic in `p`; intended as a cross-check.
pub fn trace_multiset_by_gcd(p: u64, l: u64, caps: &Caps) -> Result<TraceMultiset> {
    require_pair(p, l)?;
    if p > caps.trace_cap {
        return capacity(format!("p = {p} exceeds the trace cap {}", caps.trace_cap));
    }
    if l > MAX_GCD_SCAN_FIELD {
        return capacity(format!("gcd scan over F_{l} exceeds {MAX_GCD_SCAN_FIELD} residues"));
    }
    let field = PrimeField::new(l)?;
    let phi = cyclotomic_poly(p, l)?;
    let part = coset_partition(p, l)?;
    let mut u0 = vec![0u64; p as usize];
    for &c in &part.cosets[0] {
        u0[c as usize] = 1;
    }
    let u0 = Poly::from_coeffs(field, u0).rem(&phi);
    let mut entries = BTreeMap::new();
    let mut seen = 0u64;
    for t in 0..l {
        if seen == part.s {
            break;
        }
        let g = phi.gcd(&(&u0 - &Poly::constant(field, t)));
        let d = g.degree().unwrap_or(0) as u64;
        if d > 0 {
            entries.insert(t, (d / part.r) as usize);
            seen += d / part.r;
        }
    }
    Ok(TraceMultiset { ell: l, entries, total: part.s as usize })
}

/// Irreducibility over `F_l` for monic nonconstant `f`: `X^{l^n} = X mod f`
/// and `gcd(X^{l^{n/q}} - X, f) = 1` for every prime `q | n`.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = match f.degree() {
        Some(n) if n >= 1 && f.is_monic() => n,
        _ => return usage("is_irreducible expects a monic nonconstant polynomial"),
    };
    if n == 1 {
        return Ok(true);
    }
    let field = f.field();
    let x = Poly::x(field);
    let frob = FrobeniusMap::new(f);
    let checkpoints: Vec<usize> = factorize(n as u64).iter().map(|&(q, _)| n / q as usize).collect();
    let mut h = x.rem(f);
    for k in 1..=n {
        h = frob.apply(&h);
        if checkpoints.contains(&k) && !f.gcd(&(&h - &x)).is_constant() {
            return Ok(false);
        }
    }
    Ok(h == x.rem(f))
}

/// The `F_l`-linear map `g -> g^l mod f`, as the images of `1, X, .., X^{n-1}`.
struct FrobeniusMap {
    rows: Vec<Poly>,
    modulus: Poly,
}

impl FrobeniusMap {
    fn new(f: &Poly) -> Self {
        let field = f.field();
        let n = f.degree().unwrap();
        let l = field.modulus();
        let x_l = Poly::x(field).pow_mod_u64(l, f);
        let mut rows = Vec::with_capacity(n);
        let mut cur = Poly::one(field);
        for _ in 0..n {
            rows.push(cur.clone());
            cur = if (l as usize) < n {
                let mut c = cur;
                for _ in 0..l {
                    c = c.shift(1).rem(f);
                }
                c
            } else {
                (&cur * &x_l).rem(f)
            };
        }
        FrobeniusMap { rows, modulus: f.clone() }
    }

    fn apply(&self, g: &Poly) -> Poly {
        let field = g.field();
        let m = field.modulus();
        let n = self.rows.len();
        let mut acc = vec![0u64; n];
        for (&c, row) in g.coeffs().iter().zip(&self.rows) {
            if c == 0 {
                continue;
            }
            for (a, &v) in acc.iter_mut().zip(row.coeffs()) {
                *a = (*a + c * v) % m;
            }
        }
        Poly::from_coeffs(field, acc).rem(&self.modulus)
    }
}
