//! Multiplication kernels on raw coefficient slices (values already reduced
//! modulo `m`, `m < 2^32`).

/// Operand length at or below which schoolbook multiplication is used.
pub const DEFAULT_KARATSUBA_CUTOFF: usize = 64;

pub(crate) fn schoolbook(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (slot, &y) in acc[i..].iter_mut().zip(b) {
            *slot += (x * y) as u128;
        }
    }
    acc.into_iter().map(|v| (v % m as u128) as u64).collect()
}

fn add_into(dst: &mut [u64], src: &[u64], m: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        let t = *d + s;
        *d = if t >= m { t - m } else { t };
    }
}

fn sub_into(dst: &mut [u64], src: &[u64], m: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = if *d >= s { *d - s } else { *d + m - s };
    }
}

fn sum(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    add_into(&mut out, short, m);
    out
}

/// Product of two coefficient slices, Karatsuba above `cutoff`.
pub(crate) fn karatsuba(a: &[u64], b: &[u64], m: u64, cutoff: usize) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (la, lb) = (a.len(), b.len());
    let (short, long) = if la <= lb { (a, b) } else { (b, a) };
    if short.len() <= cutoff.max(1) {
        return schoolbook(a, b, m);
    }
    let half = (long.len() + 1) / 2;
    if short.len() <= half {
        // Unbalanced: slice the long operand into pieces the size of the short one.
        let mut out = vec![0u64; la + lb - 1];
        for (k, chunk) in long.chunks(short.len()).enumerate() {
            let part = karatsuba(chunk, short, m, cutoff);
            add_into(&mut out[k * short.len()..], &part, m);
        }
        return out;
    }
    let (a0, a1) = a.split_at(half);
    let (b0, b1) = b.split_at(half);
    let z0 = karatsuba(a0, b0, m, cutoff);
    let z2 = karatsuba(a1, b1, m, cutoff);
    let mut z1 = karatsuba(&sum(a0, a1, m), &sum(b0, b1, m), m, cutoff);
    sub_into(&mut z1, &z0, m);
    sub_into(&mut z1, &z2, m);

    let mut out = vec![0u64; la + lb - 1];
    add_into(&mut out, &z0, m);
    add_into(&mut out[half..], &z1, m);
    add_into(&mut out[2 * half..], &z2, m);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn karatsuba_matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &m in &[2u64, 3, 7, 65_521, 4_294_967_291] {
            for _ in 0..40 {
                let la = rng.gen_range(1..300);
                let lb = rng.gen_range(1..300);
                let a: Vec<u64> = (0..la).map(|_| rng.gen_range(0..m)).collect();
                let b: Vec<u64> = (0..lb).map(|_| rng.gen_range(0..m)).collect();
                for cutoff in [1, 4, 64] {
                    assert_eq!(karatsuba(&a, &b, m, cutoff), schoolbook(&a, &b, m));
                }
            }
        }
    }
}
