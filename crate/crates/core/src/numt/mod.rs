//! Exact integer arithmetic: Bezout certificates, multiplicative orders,
//! divisor counts and integer matrices.

mod matrix;
mod snf;

pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Extended Euclid: returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `x*a + y*b = g`.
///
/// When `a` divides `b` the certificate is `(|a|, sign(a), 0)`.
pub fn bezout(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::domain("bezout: both inputs are zero"));
    }
    if !a.is_zero() && b.is_multiple_of(a) {
        return Ok((a.abs(), a.signum(), BigInt::zero()));
    }
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_x, mut x) = (BigInt::one(), BigInt::zero());
    let (mut old_y, mut y) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_x = &old_x - &q * &x;
        old_x = std::mem::replace(&mut x, next_x);
        let next_y = &old_y - &q * &y;
        old_y = std::mem::replace(&mut y, next_y);
    }
    if old_r.is_negative() {
        Ok((-old_r, -old_x, -old_y))
    } else {
        Ok((old_r, old_x, old_y))
    }
}

/// `gcd(a, p)` with the convention `gcd(0, p) = p`.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Reduces a signed integer into `[0, p)`.
pub fn reduce_mod(x: i64, p: u64) -> u64 {
    (x as i128).rem_euclid(p as i128) as u64
}

/// `base^exp mod p`.
pub fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    if p == 1 {
        return 0;
    }
    let p128 = p as u128;
    let mut b = (base % p) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p128;
        }
        b = b * b % p128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `n` modulo `p`, if `gcd(n, p) = 1`.
pub fn inverse_mod(n: u64, p: u64) -> Option<u64> {
    let (g, x, _) = bezout(&BigInt::from(n % p), &BigInt::from(p)).ok()?;
    if !g.is_one() {
        return None;
    }
    let x = x.mod_floor(&BigInt::from(p));
    u64::try_from(x).ok()
}

/// Multiplicative order of `n` in `Z_p^*`: the least `k >= 1` with `n^k = 1 (mod p)`.
pub fn mult_order(n: i64, p: u64) -> Result<u64> {
    if p < 2 {
        return Err(Error::domain(format!(
            "mult_order: modulus {p} must be at least 2"
        )));
    }
    let n = reduce_mod(n, p);
    if gcd_u64(n, p) != 1 {
        return Err(Error::domain(format!(
            "mult_order: {n} is not a unit modulo {p}"
        )));
    }
    let mut k = 1;
    let mut x = n;
    while x != 1 {
        x = ((x as u128 * n as u128) % p as u128) as u64;
        k += 1;
    }
    Ok(k)
}

/// Number of positive divisors of `n`.
pub fn divisor_count(n: i64) -> Result<u64> {
    if n <= 0 {
        return Err(Error::domain(format!(
            "divisor_count: {n} is not a positive integer"
        )));
    }
    let mut n = n as u64;
    let mut count = 1;
    let mut f = 2u64;
    while f * f <= n {
        let mut e = 0;
        while n.is_multiple_of(f) {
            n /= f;
            e += 1;
        }
        count *= e + 1;
        f += 1;
    }
    if n > 1 {
        count *= 2;
    }
    Ok(count)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|f| f * f <= n)
            .all(|f| !n.is_multiple_of(f))
}

/// Adjugate of a square matrix; see [`IntMatrix::adjugate`].
pub fn adjugate(m: &IntMatrix) -> IntMatrix {
    m.adjugate()
}
