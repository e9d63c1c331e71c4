//! Exact combinatorial counts: factorials, binomials with the two-part
//! multinomial convention, Stirling numbers of the second kind, Gaussian
//! binomials and `|GL(n,q)|`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `binom(n, k)` for arbitrary-precision `n` and small `k`; zero when `k > n`.
pub fn binomial(n: &BigUint, k: u64) -> BigUint {
    if BigUint::from(k) > *n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn binomial_u64(n: u64, k: u64) -> BigUint {
    binomial(&BigUint::from(n), k)
}

/// `c! / (a! b! (c-a-b)!)`, and zero when `a + b > c`.
pub fn multinomial2(c: &BigUint, a: u64, b: u64) -> BigUint {
    if BigUint::from(a + b) > *c {
        return BigUint::zero();
    }
    // binom(c, a) · binom(c - a, b)
    binomial(c, a) * binomial(&(c - a), b)
}

/// Stirling number of the second kind from the alternating sum
/// `S(h,t) = (1/t!) Σ_j (-1)^(t-j) binom(t,j) j^h`.
pub fn stirling2(h: u64, t: u64) -> BigUint {
    let mut sum = BigInt::zero();
    for j in 0..=t {
        let term = BigInt::from(binomial_u64(t, j)) * BigInt::from(j).pow(h as u32);
        if (t - j).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (quot, rem) = sum.div_rem(&BigInt::from(factorial(t)));
    debug_assert!(rem.is_zero(), "t! must divide the alternating sum");
    quot.to_biguint().expect("Stirling numbers are nonnegative")
}

pub fn pow_u(base: u64, exp: u64) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

/// `[n r]_q = Π_{j<r} (q^(n-j) - 1) / (q^(r-j) - 1)`.
pub fn q_binomial(n: u64, r: u64, q: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..r {
        num *= pow_u(q, n - j) - 1u32;
        den *= pow_u(q, r - j) - 1u32;
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

/// `|GL(n,q)| = Π_{j<n} (q^n - q^j)`.
pub fn gl_order(n: u64, q: u64) -> BigUint {
    (0..n).fold(BigUint::one(), |acc, j| acc * (pow_u(q, n) - pow_u(q, j)))
}
