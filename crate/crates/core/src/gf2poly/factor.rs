//! Integer factorization and primality for order tests: trial division,
//! Brent-cycle Pollard rho, Miller-Rabin, and a Lucas-Lehmer special case
//! for Mersenne-form inputs.

use super::Gf2PolyError;

/// First 13 primes: a proven-deterministic Miller-Rabin witness set for
/// n < 3_317_044_064_679_887_385_961_981 (~2^81.5).
const MR_BASES_PROVEN: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const MR_PROVEN_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

/// First 20 primes: fixed witness set used above the proven bound for
/// non-Mersenne inputs. Deterministic, heuristic beyond the bound.
const MR_BASES_WIDE: [u128; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// A positive integer with its complete prime factorization (multiset).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSet {
    value: u128,
    primes: Vec<u128>,
}

impl FactorSet {
    /// Validates that the primes multiply to `value` and are all prime.
    pub fn new(value: u128, mut primes: Vec<u128>) -> Result<Self, Gf2PolyError> {
        primes.sort_unstable();
        let mut product: u128 = 1;
        for &p in &primes {
            if !is_prime(p) {
                return Err(Gf2PolyError::BadFactorSet("listed factor is not prime"));
            }
            product = product
                .checked_mul(p)
                .ok_or(Gf2PolyError::BadFactorSet("product overflows"))?;
        }
        if product != value {
            return Err(Gf2PolyError::BadFactorSet("product does not equal value"));
        }
        Ok(Self { value, primes })
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    /// Prime factors with multiplicity, ascending.
    pub fn primes(&self) -> &[u128] {
        &self.primes
    }

    pub fn distinct_primes(&self) -> Vec<u128> {
        let mut d = self.primes.clone();
        d.dedup();
        d
    }
}

/// Complete prime factorization of `n >= 1` (empty multiset for 1).
/// Intended domain is <= 2^96; larger inputs work but may be slow.
pub fn factorize(n: u128) -> FactorSet {
    assert!(n >= 1, "factorize requires n >= 1");
    let value = n;
    let mut primes = Vec::new();
    let mut n = n;
    let mut d: u128 = 2;
    while d * d <= n && d < (1 << 20) {
        while n.is_multiple_of(d) {
            primes.push(d);
            n /= d;
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    if n > 1 {
        split(n, &mut primes);
    }
    primes.sort_unstable();
    FactorSet { value, primes }
}

fn split(n: u128, primes: &mut Vec<u128>) {
    if is_prime(n) {
        primes.push(n);
        return;
    }
    let d = find_factor(n);
    split(d, primes);
    split(n / d, primes);
}

/// Deterministic primality for the artifact's range. Below the proven
/// Miller-Rabin bound the 13-base set is exact; above it, Mersenne-form
/// inputs 2^p-1 get an exact Lucas-Lehmer test and the rest use the
/// fixed 20-base set.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_WIDE {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 73 * 73 {
        return true;
    }
    if n >= MR_PROVEN_BOUND {
        if let Some(p) = mersenne_exponent(n) {
            return is_prime(p as u128) && lucas_lehmer(p, n);
        }
        return miller_rabin(n, &MR_BASES_WIDE);
    }
    miller_rabin(n, &MR_BASES_PROVEN)
}

fn mersenne_exponent(n: u128) -> Option<u32> {
    if n == u128::MAX || n & (n + 1) != 0 {
        return None;
    }
    Some((n + 1).trailing_zeros())
}

/// Lucas-Lehmer: m = 2^p - 1 is prime iff s_{p-2} = 0 where s_0 = 4,
/// s_{k+1} = s_k^2 - 2 mod m. Requires odd prime p.
fn lucas_lehmer(p: u32, m: u128) -> bool {
    debug_assert!(p >= 3 && m == (1u128 << p) - 1);
    let mut s: u128 = 4 % m;
    for _ in 0..p - 2 {
        s = (mul_mod(s, s, m) + m - 2) % m;
    }
    s == 0
}

fn miller_rabin(n: u128, bases: &[u128]) -> bool {
    // n odd, n > 3 here
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'base: for &a in bases {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    // a, b < m < 2^127 so the sum cannot overflow
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

pub(crate) fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(m >> 127 == 0, "modulus must fit 127 bits");
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let mut a = a % m;
    let mut b = b % m;
    let mut acc: u128 = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

pub(crate) fn pow_mod(base: u128, mut exp: u128, m: u128) -> u128 {
    let mut result: u128 = 1 % m;
    let mut base = base % m;
    while exp != 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    result
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Brent-cycle Pollard rho; `n` odd composite, no small factors.
fn find_factor(n: u128) -> u128 {
    for c in 1..64u128 {
        if let Some(d) = brent(n, c) {
            return d;
        }
    }
    // With 63 polynomial increments exhausted, fall back to a slow but
    // certain method; unreachable for sane inputs.
    let mut d = 3u128;
    loop {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
}

fn brent(n: u128, c: u128) -> Option<u128> {
    let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
    let mut y: u128 = 2;
    let mut r: u64 = 1;
    let mut q: u128 = 1;
    let mut g: u128 = 1;
    let mut x = y;
    let mut ys = y;
    const BATCH: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u128(q, n);
            k += BATCH;
        }
        r <<= 1;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u128(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}
