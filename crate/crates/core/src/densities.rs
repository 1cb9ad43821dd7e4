//! Artin-type density constants as rigorous intervals.
//!
//! Euler products are accumulated in fixed point (units of `10^-36`) with
//! `lo` rounded down and `hi` rounded up at every step. Constants of the form
//! `c * A` with `c` rational (Hooley's `A(a)`, Golomb's `A(a, r)`) scale the
//! enclosure of `A` by the exact rational `c`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{factorize, iroot, is_prime};
use crate::config::Caps;
use crate::error::{capacity, usage, Result};
use crate::survey::for_each_prime;

const SCALE: i128 = 1_000_000_000_000_000_000_000_000_000_000_000_000;
const SCALE_DIGITS: usize = 36;
/// Digits after the decimal point in rendered bounds.
const RENDER_DIGITS: usize = 20;
const ARITHMETIC: &str = "fixed-point-1e-36-directed";
/// Smallest cutoff ever used for an Euler product; also the pilot cutoff.
const MIN_CUTOFF: u64 = 100_000;

/// Closed interval `[lo, hi]` in units of `10^-36`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: i128,
    pub hi: i128,
}

impl Enclosure {
    pub fn width(&self) -> i128 {
        self.hi - self.lo
    }

    pub fn contains(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo as f64 / SCALE as f64
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi as f64 / SCALE as f64
    }

    pub fn mid_f64(&self) -> f64 {
        (self.lo_f64() + self.hi_f64()) / 2.0
    }

    /// `1 - [lo, hi]`.
    fn complement(&self) -> Enclosure {
        Enclosure { lo: SCALE - self.hi, hi: SCALE - self.lo }
    }

    /// `c * [lo, hi]` for exact rational `c`, rounded outward.
    fn scale(&self, c: &BigRational) -> Enclosure {
        let mul = |v: i128| BigRational::from_integer(BigInt::from(v)) * c;
        let (a, b) = (mul(self.lo), mul(self.hi));
        let (lo, hi) = if c.is_negative() { (b, a) } else { (a, b) };
        Enclosure { lo: to_i128(lo.floor()), hi: to_i128(hi.ceil()) }
    }
}

fn to_i128(v: BigRational) -> i128 {
    v.to_integer().to_i128().expect("enclosure bound fits in i128")
}

/// Decimal rendering of a fixed-point value, rounded down or up.
fn render(v: i128, round_up: bool) -> String {
    let drop = 10i128.pow((SCALE_DIGITS - RENDER_DIGITS) as u32);
    let mut q = v.div_euclid(drop);
    if round_up && v.rem_euclid(drop) != 0 {
        q += 1;
    }
    let neg = q < 0;
    let q = q.unsigned_abs();
    let unit = 10u128.pow(RENDER_DIGITS as u32);
    format!("{}{}.{:0width$}", if neg { "-" } else { "" }, q / unit, q % unit, width = RENDER_DIGITS)
}

/// `value` as fixed point, rounded up.
fn fixed_from_f64_up(value: f64) -> i128 {
    (value * SCALE as f64).ceil() as i128 + 1
}

/// A rigorous enclosure of a constant with its truncation data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantEstimate {
    pub label: String,
    pub enclosure: Enclosure,
    /// Prime cutoff of the Euler product, or series cutoff `K`.
    pub truncation: u64,
    /// Bound on the part of the value lost to truncation, fixed point.
    pub tail_bound: i128,
    pub arithmetic: &'static str,
}

impl ConstantEstimate {
    pub fn lo(&self) -> String {
        render(self.enclosure.lo, false)
    }

    pub fn hi(&self) -> String {
        render(self.enclosure.hi, true)
    }

    pub fn width_f64(&self) -> f64 {
        self.enclosure.width() as f64 / SCALE as f64
    }

    pub fn mid_f64(&self) -> f64 {
        self.enclosure.mid_f64()
    }
}

impl Serialize for ConstantEstimate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ConstantEstimate", 6)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("lo", &self.lo())?;
        st.serialize_field("hi", &self.hi())?;
        st.serialize_field("truncation", &self.truncation)?;
        st.serialize_field("tail_bound", &render(self.tail_bound, true))?;
        st.serialize_field("arithmetic", &self.arithmetic)?;
        st.end()
    }
}

/// Bound on `1 - prod_{p > n} (1 - 1/(p(p-1)))` for `n >= 30`, in fixed
/// point: primes above 30 are prime to 30, so the tail sum is at most
/// `8 sum_{j} 1/(m_j (m_j - 1))` over `m_j > n` in one residue class mod 30,
/// which is at most `8/(30 n) + 8/n^2`.
fn tail_factor_bound(n: u64) -> i128 {
    let n = n as i128;
    8 * SCALE / (30 * n) + 1 + 8 * (SCALE / n) / n + 1
}

fn product_cache() -> &'static Mutex<HashMap<(u64, u64), Enclosure>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), Enclosure>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `prod_{l_min <= p <= n} (1 - 1/(p(p-1)))`.
fn partial_product(l_min: u64, n: u64) -> Enclosure {
    if let Some(e) = product_cache().lock().unwrap().get(&(l_min, n)) {
        return *e;
    }
    let (mut lo, mut hi) = (SCALE as u128, SCALE as u128);
    for_each_prime(l_min.max(2), n, |p| {
        let q = p as u128 * (p as u128 - 1);
        lo -= lo.div_ceil(q);
        hi -= hi / q;
    });
    let e = Enclosure { lo: lo as i128, hi: hi as i128 };
    product_cache().lock().unwrap().insert((l_min, n), e);
    e
}

/// Enclosure of `B(l_min) = prod_{p >= l_min} (1 - 1/(p(p-1)))` from primes
/// up to the cutoff `n >= 30`.
pub fn restricted_artin_product_at(l_min: u64, n: u64) -> Result<ConstantEstimate> {
    if !is_prime(l_min) {
        return usage(format!("{l_min} is not prime"));
    }
    if n < 30 {
        return usage("the product cutoff must be at least 30");
    }
    let partial = partial_product(l_min, n);
    let t = tail_factor_bound(n);
    // tail factor lies in [1 - t, 1]
    let lo = partial.lo - mul_fixed_up(partial.lo, t);
    Ok(ConstantEstimate {
        label: if l_min == 2 { "artin".into() } else { format!("artin_restricted(l_min={l_min})") },
        enclosure: Enclosure { lo, hi: partial.hi },
        truncation: n,
        tail_bound: mul_fixed_up(partial.hi, t),
        arithmetic: ARITHMETIC,
    })
}

/// `a * b` in fixed point, rounded up; both nonnegative.
fn mul_fixed_up(a: i128, b: i128) -> i128 {
    let prod = BigInt::from(a) * BigInt::from(b);
    let (q, r) = prod.div_rem(&BigInt::from(SCALE));
    q.to_i128().unwrap() + if r.is_zero() { 0 } else { 1 }
}

fn precision_to_fixed(precision: f64) -> Result<i128> {
    if !(precision.is_finite() && precision >= 1e-12) {
        return usage(format!("precision must be at least 1e-12, got {precision}"));
    }
    Ok((precision.min(1.0) * SCALE as f64) as i128)
}

/// Smallest cutoff (a multiple of 1000) whose tail makes the enclosure of a
/// value near `magnitude` narrower than `target`.
fn cutoff_for(target: i128, magnitude: f64) -> u64 {
    // width ~ magnitude * (8/(30n) + 8/n^2); aim at 90% of the target
    let t = target as f64 / SCALE as f64 * 0.9 / magnitude.max(1e-300);
    let n = (8.0 / 30.0 / t) * (1.0 + 1e-3) + 1000.0;
    let n = n.max(MIN_CUTOFF as f64);
    ((n / 1000.0).ceil() * 1000.0) as u64
}

/// Enclosure of `B(l_min)` whose width, once multiplied by `factor`, is at
/// most `target`.
fn product_to_precision(l_min: u64, target: i128, factor: f64, caps: &Caps) -> Result<ConstantEstimate> {
    let pilot = partial_product(l_min, MIN_CUTOFF).hi_f64();
    let mut n = cutoff_for(target, pilot * factor);
    loop {
        if n > caps.constants_max_cutoff {
            return capacity(format!(
                "precision needs a prime cutoff above {} for this constant",
                caps.constants_max_cutoff
            ));
        }
        let est = restricted_artin_product_at(l_min, n)?;
        // the later rational scaling may add two units of rounding
        if (est.enclosure.width() as f64 + 2.0) * factor <= target as f64 {
            return Ok(est);
        }
        n *= 2;
    }
}

/// `B(l_min) = prod_{p >= l_min} (1 - 1/(p(p-1)))` to within `precision`.
pub fn restricted_artin_product(l_min: u64, precision: f64, caps: &Caps) -> Result<ConstantEstimate> {
    if !is_prime(l_min) {
        return usage(format!("{l_min} is not prime"));
    }
    let target = precision_to_fixed(precision)?;
    product_to_precision(l_min, target, 1.0, caps)
}

/// `1 - B(l)`, the lower density bound for `E(l)`.
pub fn theorem1_lower_bound(l: u64, precision: f64, caps: &Caps) -> Result<ConstantEstimate> {
    let b = restricted_artin_product(l, precision, caps)?;
    Ok(ConstantEstimate {
        label: format!("bound(ell={l})"),
        enclosure: b.enclosure.complement(),
        ..b
    })
}

/// `c * A` to within `precision`, `c` an exact rational.
fn rational_times_artin(label: String, c: &BigRational, precision: f64, caps: &Caps) -> Result<ConstantEstimate> {
    let target = precision_to_fixed(precision)?;
    let c_abs = c.abs().to_f64().unwrap_or(f64::MAX);
    if c.is_zero() {
        return Ok(ConstantEstimate {
            label,
            enclosure: Enclosure { lo: 0, hi: 0 },
            truncation: 0,
            tail_bound: 0,
            arithmetic: "exact-rational",
        });
    }
    let a = product_to_precision(2, target, c_abs, caps)?;
    let enclosure = a.enclosure.scale(c);
    let tail = Enclosure { lo: 0, hi: a.tail_bound }.scale(&c.abs()).hi;
    Ok(ConstantEstimate { label, enclosure, truncation: a.truncation, tail_bound: tail, arithmetic: ARITHMETIC })
}

/// Prime factorization of a nonzero integer; the sign is kept separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegerFactorization {
    pub value: i64,
    pub factors: BTreeMap<u64, u32>,
}

impl IntegerFactorization {
    pub fn new(value: i64, caps: &Caps) -> Result<Self> {
        if value == 0 {
            return usage("cannot factor 0");
        }
        if value.unsigned_abs() > caps.factor_cap {
            return capacity(format!("|{value}| exceeds the factorization cap {}", caps.factor_cap));
        }
        let factors = factorize(value.unsigned_abs()).into_iter().collect();
        Ok(IntegerFactorization { value, factors })
    }

    pub fn product(&self) -> i64 {
        let m: i64 = self.factors.iter().map(|(&p, &e)| (p as i64).pow(e)).product();
        m * self.value.signum()
    }
}

/// `a = b c^2` with `b` squarefree, sign carried by `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SquarefreeParts {
    pub b: i64,
    pub c: u64,
}

pub fn squarefree_part(a: i64, caps: &Caps) -> Result<SquarefreeParts> {
    let f = IntegerFactorization::new(a, caps)?;
    let (mut b, mut c) = (a.signum(), 1u64);
    for (&p, &e) in &f.factors {
        if e % 2 == 1 {
            b *= p as i64;
        }
        c *= p.pow(e / 2);
    }
    Ok(SquarefreeParts { b, c })
}

pub fn moebius(n: u64, caps: &Caps) -> Result<i64> {
    if n == 0 {
        return usage("moebius is defined for n >= 1");
    }
    let f = IntegerFactorization::new(n as i64, caps)?;
    if f.factors.values().any(|&e| e > 1) {
        return Ok(0);
    }
    Ok(if f.factors.len() % 2 == 0 { 1 } else { -1 })
}

pub fn euler_phi(n: u64, caps: &Caps) -> Result<u64> {
    if n == 0 {
        return usage("euler_phi is defined for n >= 1");
    }
    let f = IntegerFactorization::new(n as i64, caps)?;
    Ok(f.factors.iter().map(|(&p, &e)| (p - 1) * p.pow(e - 1)).product())
}

/// Discriminant of `Q(sqrt d)`.
pub fn fundamental_discriminant(d: i64, caps: &Caps) -> Result<i64> {
    if d >= 0 && iroot(d as u64, 2).pow(2) == d as u64 {
        return usage(format!("{d} is a perfect square"));
    }
    let b = squarefree_part(d, caps)?.b;
    Ok(if b.rem_euclid(4) == 1 { b } else { 4 * b })
}

/// Prime `q` with `a = x^q` for some integer `x`, if any (`|a| >= 2`).
fn perfect_power_exponent(a: i64) -> Option<u64> {
    let m = a.unsigned_abs();
    (2..64u32).filter(|&k| is_prime(k as u64)).find_map(|k| {
        if a < 0 && k == 2 {
            return None;
        }
        let x = iroot(m, k);
        (x.checked_pow(k) == Some(m)).then_some(k as u64)
    })
}

fn check_not_power(a: i64) -> Result<()> {
    if let Some(q) = perfect_power_exponent(a) {
        let what = if q == 2 { "a perfect square".to_string() } else { format!("a perfect {q}-th power") };
        return usage(format!("a = {a} is {what}; the constant needs a that is not an l-th power"));
    }
    Ok(())
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Hooley's correction `delta(a)` (exact).
pub fn hooley_delta(a: i64, caps: &Caps) -> Result<BigRational> {
    let b = squarefree_part(a, caps)?.b;
    if b.rem_euclid(4) != 1 {
        return Ok(BigRational::one());
    }
    let mu = moebius(b.unsigned_abs(), caps)?;
    let mut prod = BigRational::one();
    for (&p, _) in &IntegerFactorization::new(b, caps)?.factors {
        let p = p as i64;
        prod *= ratio(1, p * (p - 1) - 1);
    }
    Ok(BigRational::one() - BigRational::from_integer(mu.into()) * prod)
}

/// `A(a) = delta(a) * A`.
pub fn hooley_constant(a: i64, precision: f64, caps: &Caps) -> Result<ConstantEstimate> {
    if matches!(a, -1..=1) {
        return usage(format!("a = {a} is excluded (a must not be 0 or +-1)"));
    }
    check_not_power(a)?;
    let delta = hooley_delta(a, caps)?;
    rational_times_artin(format!("hooley(a={a})"), &delta, precision, caps)
}

/// `m(k)` for squarefree `k`: 2 when `rk` is even and the discriminant of
/// `Q(sqrt a)` divides `rk`, else 1.
pub fn golomb_m(a: i64, r: u64, k: u64, caps: &Caps) -> Result<u8> {
    let rk = r * k;
    if rk % 2 == 1 {
        return Ok(1);
    }
    let disc = fundamental_discriminant(a, caps)?.unsigned_abs();
    Ok(if rk % disc == 0 { 2 } else { 1 })
}

fn check_golomb_input(a: i64, r: u64) -> Result<()> {
    if a < 2 {
        return usage(format!("a = {a} must be an integer >= 2"));
    }
    if r == 0 {
        return usage("r must be positive");
    }
    check_not_power(a)
}

/// Exact rational `c` with `A(a, r) = c * A`.
///
/// Squarefree `k` factors as `u * v` with `u` supported on the primes of
/// `2 * disc * r` and `v` prime to them; `m(k)` depends only on `u` and
/// `phi(rk) = phi(ru) phi(v)`, so the `v`-sum is an Euler product that
/// differs from `A` by finitely many factors.
pub fn golomb_factor(a: i64, r: u64, caps: &Caps) -> Result<BigRational> {
    check_golomb_input(a, r)?;
    let disc = fundamental_discriminant(a, caps)?.unsigned_abs();
    let primes: Vec<u64> = factorize(2 * disc * r).into_iter().map(|(p, _)| p).collect();
    let mut sum = BigRational::zero();
    for mask in 0u32..(1 << primes.len()) {
        let u: u64 = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).product();
        let mu = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        let m = golomb_m(a, r, u, caps)? as i64;
        let phi = euler_phi(r * u, caps)? as i64;
        sum += ratio(mu * m, u as i64 * phi);
    }
    let mut euler = BigRational::one();
    for &q in &primes {
        let q = q as i64;
        euler *= ratio(q * (q - 1) - 1, q * (q - 1));
    }
    Ok(sum / (euler * BigRational::from_integer((r as i64).into())))
}

/// Golomb's `A(a, r)` to within `precision`.
pub fn golomb_constant(a: i64, r: u64, precision: f64, caps: &Caps) -> Result<ConstantEstimate> {
    let c = golomb_factor(a, r, caps)?;
    rational_times_artin(format!("golomb(a={a},r={r})"), &c, precision, caps)
}

/// Truncated series `sum_{k <= K squarefree} mu(k) m(k) / (r k phi(rk))`
/// with the tail bound `4 sqrt 2 / (r phi(r) sqrt K)` (from
/// `phi(rk) >= phi(r) phi(k)` and `phi(k) >= sqrt(k/2)`).
pub fn golomb_series_enclosure(a: i64, r: u64, cutoff: u64, caps: &Caps) -> Result<ConstantEstimate> {
    check_golomb_input(a, r)?;
    let disc = fundamental_discriminant(a, caps)?.unsigned_abs();
    let m = move |k: u64| if (r * k) % 2 == 0 && (r * k) % disc == 0 { 2 } else { 1 };
    let phi_r = euler_phi(r, caps)?;
    let mut est = series_enclosure(r, phi_r, cutoff, m)?;
    est.label = format!("golomb_series(a={a},r={r})");
    Ok(est)
}

/// `sum_{k <= K squarefree} mu(k)/(k phi(k))`, the series form of `A`.
pub fn artin_series_enclosure(cutoff: u64) -> Result<ConstantEstimate> {
    let mut est = series_enclosure(1, 1, cutoff, |_| 1)?;
    est.label = "artin_series".into();
    Ok(est)
}

const MAX_SERIES_CUTOFF: u64 = 50_000_000;

fn series_enclosure(r: u64, phi_r: u64, cutoff: u64, m: impl Fn(u64) -> i128) -> Result<ConstantEstimate> {
    if cutoff < 1 || cutoff > MAX_SERIES_CUTOFF {
        return capacity(format!("series cutoff must lie in [1, {MAX_SERIES_CUTOFF}]"));
    }
    let n = cutoff as usize;
    // smallest prime factor sieve
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for j in (i..=n).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    let (mut lo, mut hi) = (0i128, 0i128);
    for k in 1..=n {
        // mu(k), phi(k) and gcd-correction for phi(rk); skip non-squarefree k
        let (mut x, mut mu, mut phi_k, mut g, mut phi_g) = (k, 1i128, 1u64, 1u64, 1u64);
        let mut squarefree = true;
        while x > 1 {
            let p = spf[x] as usize;
            x /= p;
            if x % p == 0 {
                squarefree = false;
                break;
            }
            mu = -mu;
            phi_k *= p as u64 - 1;
            if r % p as u64 == 0 {
                g *= p as u64;
                phi_g *= p as u64 - 1;
            }
        }
        if !squarefree {
            continue;
        }
        // phi(rk) = phi(r) phi(k) g / phi(g)
        let den = BigInt::from(r) * BigInt::from(k) * BigInt::from(phi_r) * BigInt::from(phi_k) * BigInt::from(g);
        let num = BigInt::from(mu * m(k as u64)) * BigInt::from(phi_g) * BigInt::from(SCALE);
        let (q, rem) = num.div_mod_floor(&den);
        let q = q.to_i128().unwrap();
        lo += q;
        hi += q + if rem.is_zero() { 0 } else { 1 };
    }
    let tail_f = 4.0 * std::f64::consts::SQRT_2 / (r as f64 * phi_r as f64 * (cutoff as f64).sqrt());
    let tail = fixed_from_f64_up(tail_f * (1.0 + 1e-12));
    Ok(ConstantEstimate {
        label: String::new(),
        enclosure: Enclosure { lo: lo - tail, hi: hi + tail },
        truncation: cutoff,
        tail_bound: tail,
        arithmetic: ARITHMETIC,
    })
}
