//! Integer factorization support for the rational root theorem.
//!
//! Constant and leading coefficients of cleared-denominator polynomials can
//! grow large (characteristic polynomials of composite matrices), so divisor
//! enumeration uses trial division for small primes and Brent's variant of
//! Pollard rho beyond that. Everything stays exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Positive divisors of `n` (|n| is used), unsorted. `n` must be nonzero.
pub(crate) fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    assert!(!n.is_zero(), "divisors of zero");
    let factors = factorize(&n);
    let mut divs = vec![BigInt::one()];
    for (prime, mult) in factors {
        let base = divs.clone();
        let mut power = BigInt::one();
        for _ in 0..mult {
            power *= &prime;
            divs.extend(base.iter().map(|d| d * &power));
        }
    }
    divs
}

/// Prime factorization of a positive integer as (prime, multiplicity) pairs.
pub(crate) fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(n.is_positive(), "factorize expects a positive integer");
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = n.clone();
    for p in [2u64, 3, 5, 7, 11, 13] {
        strip(&mut rest, &BigInt::from(p), &mut out);
    }
    let mut p = 17u64;
    while p < 100_000 {
        let bp = BigInt::from(p);
        if (&bp * &bp) > rest {
            break;
        }
        strip(&mut rest, &bp, &mut out);
        p += 2;
    }
    if rest.is_one() {
        return out;
    }
    // Remaining cofactor has no prime factor below 1e5; split it with rho.
    if let Some(small) = rest.to_u128() {
        let mut primes = Vec::new();
        split_u128(small, &mut primes);
        primes.sort_unstable();
        for prime in primes {
            push_prime(&mut out, BigInt::from(prime));
        }
    } else {
        // Beyond u128: fall back to plain trial division; correct, just slow,
        // and unreachable for the matrix sizes this crate targets.
        let mut bp = BigInt::from(100_001u64);
        while (&bp * &bp) <= rest {
            strip(&mut rest, &bp, &mut out);
            bp += 2;
        }
        if !rest.is_one() {
            push_prime(&mut out, rest);
        }
    }
    out
}

fn strip(rest: &mut BigInt, p: &BigInt, out: &mut Vec<(BigInt, u32)>) {
    let mut mult = 0u32;
    while (&*rest % p).is_zero() {
        *rest /= p;
        mult += 1;
    }
    if mult > 0 {
        out.push((p.clone(), mult));
    }
}

fn push_prime(out: &mut Vec<(BigInt, u32)>, p: BigInt) {
    if let Some(last) = out.last_mut() {
        if last.0 == p {
            last.1 += 1;
            return;
        }
    }
    out.push((p, 1));
}

fn split_u128(n: u128, primes: &mut Vec<u128>) {
    if n == 1 {
        return;
    }
    if is_prime_u128(n) {
        primes.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_u128(d, primes);
    split_u128(n / d, primes);
}

/// `(a + b) mod m` without overflow; requires `a, b < m`.
fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    let mut result = 0u128;
    let mut a = a % m;
    let mut b = b;
    while b > 0 {
        if b & 1 == 1 {
            result = add_mod(result, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    result
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the magnitudes reachable here (the witness
/// set covers all n < 3.3e24, far above any cleared coefficient we produce).
fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        r += 1;
    }
    'witness: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u128) -> u128 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u128;
    loop {
        let mut x = 2u128;
        let mut y = 2u128;
        let mut d = 1u128;
        let f = |v: u128| (mul_mod(v, v, n) + c) % n;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = x.abs_diff(y);
            d = gcd_u128(diff, n);
        }
        if d != n && d != 0 {
            return d;
        }
        c += 1;
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least common multiple of two positive big integers.
pub(crate) fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}
