//! Gauss periods through their multiplication table.
//!
//! With `H = <l>` of index `s` in `(Z/p)^*` and cosets `C_0 = H, .., C_{s-1}`,
//! the periods `eta_j = sum_{c in C_j} zeta^c` satisfy
//!
//! ```text
//! eta_0 * eta_j = sum_k (j, k) eta_k + r [-1 in C_j],
//! (j, k) = #{ z in C_j : 1 + z in C_k },
//! ```
//!
//! and `1 = -sum_k eta_k`. The characteristic polynomial of the resulting
//! integer matrix is the period polynomial `prod_j (Y - eta_j)`; reduced mod
//! `l` it splits, and its roots are the traces of the irreducible factors of
//! `Phi_p mod l`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::polyarith::{PrimeField, Poly};

/// Multiplication-by-`eta_0` matrix reduced mod `l`, row `j` holding the
/// coordinates of `eta_0 * eta_j`.
pub(crate) fn period_matrix(labels: &[u32], s: usize, r: u64, field: PrimeField) -> Vec<Vec<u64>> {
    let p = labels.len();
    let mut counts = vec![vec![0u64; s]; s];
    for z in 1..p - 1 {
        counts[labels[z] as usize][labels[z + 1] as usize] += 1;
    }
    let minus_one = labels[p - 1] as usize;
    let r = r % field.modulus();
    counts
        .into_iter()
        .enumerate()
        .map(|(j, row)| {
            row.into_iter()
                .map(|c| {
                    let c = c % field.modulus();
                    if j == minus_one {
                        field.sub(c, r)
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect()
}

/// Characteristic polynomial `det(Y I - A)` over `F_l` via reduction to upper
/// Hessenberg form. `O(n^3)`.
pub(crate) fn charpoly(mut h: Vec<Vec<u64>>, field: PrimeField) -> Poly {
    let n = h.len();
    let m = field.modulus();
    for k in 0..n.saturating_sub(2) {
        let Some(piv) = (k + 1..n).find(|&i| h[i][k] != 0) else { continue };
        if piv != k + 1 {
            h.swap(piv, k + 1);
            for row in h.iter_mut() {
                row.swap(piv, k + 1);
            }
        }
        let inv = field.inv(h[k + 1][k]);
        for j in k + 2..n {
            if h[j][k] == 0 {
                continue;
            }
            let u = field.mul(h[j][k], inv);
            let neg_u = m - u;
            // row_j -= u * row_{k+1}
            let (upper, lower) = h.split_at_mut(j);
            let src = &upper[k + 1];
            for (dst, &v) in lower[0].iter_mut().zip(src.iter()) {
                *dst = (*dst + neg_u * v) % m;
            }
            // col_{k+1} += u * col_j
            for row in h.iter_mut() {
                row[k + 1] = (row[k + 1] + u * row[j]) % m;
            }
        }
    }

    // p_m = (Y - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{j=i+1}^{m} h_{j,j-1}) p_{i-1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for mm in 0..n {
        let prev = &polys[mm];
        let mut next = vec![0u64; mm + 2];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = field.add(next[i + 1], c);
            next[i] = field.sub(next[i], field.mul(c, h[mm][mm]));
        }
        let mut t = 1u64;
        for i in (0..mm).rev() {
            t = field.mul(t, h[i + 1][i]);
            if t == 0 {
                break;
            }
            let coef = field.mul(h[i][mm], t);
            if coef == 0 {
                continue;
            }
            for (slot, &c) in next.iter_mut().zip(polys[i].iter()) {
                *slot = field.sub(*slot, field.mul(coef, c));
            }
        }
        polys.push(next);
    }
    Poly::from_coeffs(field, polys.pop().unwrap())
}

/// Divides by `(Y - t)` in place when `t` is a root; returns whether it was.
fn strip_root(f: &mut Poly, t: u64) -> bool {
    if f.is_zero() || f.eval_raw(t) != 0 {
        return false;
    }
    let field = f.field();
    let c = f.coeffs();
    let n = c.len() - 1;
    let mut q = vec![0u64; n];
    let mut carry = 0u64;
    for i in (0..n).rev() {
        carry = field.add(c[i + 1], field.mul(carry, t));
        q[i] = carry;
    }
    *f = Poly::from_coeffs(field, q);
    true
}

const ENUMERATE_ROOTS_BELOW: u64 = 4096;

/// Roots with multiplicity of a polynomial expected to split into linear
/// factors over `F_l`. Errors if it does not.
pub(crate) fn split_roots(f: &Poly, seed: u64) -> Result<BTreeMap<u64, usize>> {
    let field = f.field();
    let l = field.modulus();
    let deg = f.degree().unwrap_or(0);
    let mut rest = f.monic();
    let mut roots = BTreeMap::new();
    let mut found = 0usize;
    let take = |rest: &mut Poly, t: u64, roots: &mut BTreeMap<u64, usize>| {
        let mut k = 0;
        while strip_root(rest, t) {
            k += 1;
        }
        if k > 0 {
            roots.insert(t, k);
        }
        k
    };
    if l <= ENUMERATE_ROOTS_BELOW {
        for t in 0..l {
            if found == deg {
                break;
            }
            found += take(&mut rest, t, &mut roots);
        }
    } else {
        // Distinct roots: gcd with Y^l - Y, then random equal-degree splitting.
        let y = Poly::x(field);
        let yl = y.pow_mod(&BigUint::from(l), &rest);
        let mut pending = vec![rest.gcd(&(&yl - &y))];
        let mut linear = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let half = BigUint::from((l - 1) / 2);
        let mut attempts = 0;
        while let Some(g) = pending.pop() {
            match g.degree() {
                Some(0) | None => continue,
                Some(1) => {
                    linear.push(field.neg(g.monic().coeff(0)));
                    continue;
                }
                _ => {}
            }
            attempts += 1;
            if attempts > 10_000 {
                return Err(Error::Internal(format!("root splitting stalled (seed {seed})")));
            }
            let a = rng.gen_range(0..l);
            let probe = Poly::from_coeffs(field, vec![a, 1]).pow_mod(&half, &g);
            let d = g.gcd(&(&probe - &Poly::one(field)));
            match d.degree() {
                Some(k) if k > 0 && Some(k) < g.degree() => {
                    let (q, _) = g.div_rem(&d);
                    pending.push(d);
                    pending.push(q);
                }
                _ => pending.push(g),
            }
        }
        linear.sort_unstable();
        for t in linear {
            found += take(&mut rest, t, &mut roots);
        }
    }
    if found != deg {
        return Err(Error::Internal(format!(
            "polynomial of degree {deg} over F_{l} has only {found} roots"
        )));
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_small_matrices() {
        let f = PrimeField::new(7).unwrap();
        // [[1,2],[3,4]] -> Y^2 - 5Y - 2
        let cp = charpoly(vec![vec![1, 2], vec![3, 4]], f);
        assert_eq!(cp, Poly::from_signed(f, &[-2, -5, 1]));
        // Companion-like matrix forcing a pivot swap.
        let a = vec![vec![0, 1, 0], vec![0, 0, 1], vec![6, 5, 4]];
        let cp = charpoly(a.clone(), f);
        // brute force: det(tI - A) at every t
        for t in 0..7u64 {
            let m: Vec<Vec<u64>> = (0..3)
                .map(|i| (0..3).map(|j| f.sub(if i == j { t } else { 0 }, a[i][j])).collect())
                .collect();
            let det = f.sub(
                f.add(
                    f.add(f.mul(m[0][0], f.sub(f.mul(m[1][1], m[2][2]), f.mul(m[1][2], m[2][1]))),
                          f.mul(m[0][2], f.sub(f.mul(m[1][0], m[2][1]), f.mul(m[1][1], m[2][0])))),
                    0,
                ),
                f.mul(m[0][1], f.sub(f.mul(m[1][0], m[2][2]), f.mul(m[1][2], m[2][0]))),
            );
            assert_eq!(cp.eval_raw(t), det, "t = {t}");
        }
    }

    #[test]
    fn roots_with_multiplicity() {
        let f = PrimeField::new(5).unwrap();
        // (Y-1)^2 (Y-3)
        let p = &(&Poly::from_signed(f, &[-1, 1]) * &Poly::from_signed(f, &[-1, 1]))
            * &Poly::from_signed(f, &[-3, 1]);
        let roots = split_roots(&p, 1).unwrap();
        assert_eq!(roots, BTreeMap::from([(1, 2), (3, 1)]));
        assert!(split_roots(&Poly::from_signed(f, &[2, 0, 1]), 1).is_err());
    }

    #[test]
    fn roots_large_field() {
        let f = PrimeField::new(1_000_003).unwrap();
        let lin = |t: i64| Poly::from_signed(f, &[-t, 1]);
        let p = &(&(&lin(5) * &lin(5)) * &lin(999_999)) * &lin(12_345);
        let roots = split_roots(&p, 9).unwrap();
        assert_eq!(roots, BTreeMap::from([(5, 2), (12_345, 1), (999_999, 1)]));
    }
}
