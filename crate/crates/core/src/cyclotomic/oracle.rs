//! Equal-degree factorization of `Phi_p mod l`.
//!
//! All arithmetic for the splitting exponent happens in `R = F_l[X]/(X^p - 1)`,
//! where `u -> u^l` is the coefficient permutation `X^c -> X^{cl mod p}`. So
//! `u^{(l^r-1)/(l-1)}` is a product of `r` permuted copies of `u`, built by
//! doubling, and only the final `(l-1)/2` power is taken modulo the factor
//! being split.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{cyclotomic_poly, multiplicative_order, require_pair};
use crate::config::Caps;
use crate::error::{capacity, Error, Result};
use crate::polyarith::{mul_raw, Poly, PrimeField};

const MAX_ROUNDS: usize = 256;

/// Irreducible factors of `Phi_p mod l`, sorted by coefficients from the
/// leading term down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorList {
    pub p: u64,
    pub ell: u64,
    pub r: u64,
    #[serde(serialize_with = "serialize_polys")]
    pub factors: Vec<Poly>,
    pub seed: u64,
}

fn serialize_polys<S: serde::Serializer>(v: &[Poly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|f| f.to_string()))
}

impl FactorList {
    pub fn product(&self) -> Poly {
        let field = PrimeField::new(self.ell).expect("prime modulus");
        self.factors.iter().fold(Poly::one(field), |acc, f| &acc * f)
    }
}

/// Seed for all randomized steps on `(p, l)`: splitmix64 of `(p << 32) ^ l`.
pub fn oracle_seed(p: u64, l: u64) -> u64 {
    let mut z = (p << 32 ^ l).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Dense element of `F_l[X]/(X^p - 1)`, always of length `p`.
struct Ring {
    p: usize,
    field: PrimeField,
}

impl Ring {
    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.field.modulus();
        let full = mul_raw(a, b, m);
        let mut out = vec![0u64; self.p];
        for (i, c) in full.into_iter().enumerate() {
            let j = i % self.p;
            out[j] = (out[j] + c) % m;
        }
        out
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.field.add(x, y)).collect()
    }

    /// `a^{l^k}`: coefficient of `X^c` moves to `X^{c l^k}`.
    fn frobenius(&self, a: &[u64], k: u64) -> Vec<u64> {
        let p = self.p as u64;
        let step = crate::arith::pow_mod(self.field.modulus(), k, p);
        let mut out = vec![0u64; self.p];
        for (c, &v) in a.iter().enumerate() {
            out[(c as u64 * step % p) as usize] = v;
        }
        out
    }

    /// `sum_{i<r} a^{l^i}` if `additive`, else `prod_{i<r} a^{l^i}`.
    fn orbit_fold(&self, a: &[u64], r: u64, additive: bool) -> Vec<u64> {
        let combine = |x: &[u64], y: &[u64]| if additive { self.add(x, y) } else { self.mul(x, y) };
        let mut acc = a.to_vec();
        let mut k = 1u64;
        for bit in (0..63 - r.leading_zeros()).rev() {
            acc = combine(&acc, &self.frobenius(&acc, k));
            k *= 2;
            if r >> bit & 1 == 1 {
                acc = combine(&acc, &self.frobenius(a, k));
                k += 1;
            }
        }
        debug_assert_eq!(k, r);
        acc
    }
}

/// For odd `l`, `u^{(l^r - 1)/2} mod g`; for `l = 2`, the trace
/// `u + u^2 + .. + u^{2^{r-1}} mod g`. Requires `g | X^p - 1`.
pub fn splitting_power(u: &Poly, g: &Poly, p: u64, r: u64) -> Poly {
    let field = g.field();
    let ring = Ring { p: p as usize, field };
    let mut dense = vec![0u64; p as usize];
    for (i, &c) in u.coeffs().iter().enumerate() {
        let j = i % p as usize;
        dense[j] = field.add(dense[j], c);
    }
    let l = field.modulus();
    if l == 2 {
        let t = ring.orbit_fold(&dense, r, true);
        return Poly::from_coeffs(field, t).rem(g);
    }
    let norm = Poly::from_coeffs(field, ring.orbit_fold(&dense, r, false)).rem(g);
    norm.pow_mod_u64((l - 1) / 2, g)
}

/// Full factorization of `Phi_p mod l` into its `(p - 1)/r` irreducible
/// factors of degree `r`, by random equal-degree splitting.
pub fn factor_oracle(p: u64, l: u64, caps: &Caps) -> Result<FactorList> {
    require_pair(p, l)?;
    if p > caps.oracle_cap {
        return capacity(format!("p = {p} exceeds the oracle cap {}", caps.oracle_cap));
    }
    let field = PrimeField::new(l)?;
    let r = multiplicative_order(l as i64, p)?;
    let seed = oracle_seed(p, l);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = Vec::new();
    let mut pending = vec![cyclotomic_poly(p, l)?];
    let mut rounds = 0;
    while !pending.is_empty() {
        let (finished, open): (Vec<Poly>, Vec<Poly>) =
            pending.into_iter().partition(|g| g.degree() == Some(r as usize));
        done.extend(finished);
        if open.is_empty() {
            break;
        }
        rounds += 1;
        if rounds > MAX_ROUNDS {
            return Err(Error::Internal(format!(
                "equal-degree splitting of Phi_{p} mod {l} did not finish (seed {seed})"
            )));
        }
        let u = Poly::from_coeffs(field, (0..p).map(|_| rng.gen_range(0..l)).collect());
        pending = Vec::new();
        for g in open {
            let h = splitting_power(&u, &g, p, r);
            let probe = if l == 2 { h } else { &h - &Poly::one(field) };
            let d = g.gcd(&probe);
            match d.degree() {
                Some(k) if k > 0 && k < g.degree().unwrap() => {
                    let (q, _) = g.div_rem(&d);
                    pending.push(d);
                    pending.push(q.monic());
                }
                _ => pending.push(g),
            }
        }
    }
    done.sort_by(|a, b| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()));
    Ok(FactorList { p, ell: l, r, factors: done, seed })
}
