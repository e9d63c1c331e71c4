//! Character sums over `GF(3^r)` with the canonical additive character
//! `λ(x) = ω^tr(x)`.
//!
//! Every sum is accumulated as exponent tallies or directly in `Z[ω]`; no
//! floating point is involved anywhere. Only `λ` is implemented: any other
//! nontrivial additive character is `λ(b·)` and the identities used here
//! already absorb that change of variables.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::eisenstein::{Eisenstein, ExponentCounts};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};
use crate::matrix::MatrixGF;

/// Exponent of `λ(x)` as a power of `ω`.
#[inline]
pub fn lambda(ctx: &FieldCtx, x: FieldElement) -> u8 {
    ctx.trace(x)
}

/// Tallies of `tr(α + a/α)` over `α ∈ GF(q)*`.
pub fn kloosterman_counts(ctx: &FieldCtx, a: FieldElement) -> Result<ExponentCounts> {
    if a.is_zero() {
        return Err(Error::domain("Kloosterman sum needs a nonzero argument"));
    }
    let mut counts = ExponentCounts::default();
    for alpha in ctx.units() {
        let inv = ctx.inv(alpha)?;
        counts.tally(lambda(ctx, ctx.add(alpha, ctx.mul(a, inv))));
    }
    Ok(counts)
}

/// `K(λ;a)`, a rational integer in characteristic three.
pub fn kloosterman(ctx: &FieldCtx, a: FieldElement) -> Result<BigInt> {
    let c = kloosterman_counts(ctx, a)?;
    // α ↦ -α negates tr(α + a/α), so exponents 1 and 2 pair off
    if c.n1 != c.n2 {
        return Err(Error::invariant(
            "Kloosterman tallies must satisfy n1 = n2",
            c.n1,
            c.n2,
        ));
    }
    Ok(BigInt::from(c.n0) - BigInt::from(c.n1))
}

/// `K(λ;a)` for every `a`, indexed by field index. Slot 0 holds zero.
#[derive(Clone, Debug)]
pub struct KloostermanTable {
    values: Vec<BigInt>,
}

impl KloostermanTable {
    pub fn new(ctx: &FieldCtx) -> Result<Self> {
        let mut values = vec![BigInt::zero(); ctx.q() as usize];
        for a in ctx.units() {
            values[a.index()] = kloosterman(ctx, a)?;
        }
        Ok(KloostermanTable { values })
    }

    /// Panics on `a = 0`.
    pub fn get(&self, a: FieldElement) -> &BigInt {
        assert!(!a.is_zero(), "K(λ;0) is undefined");
        &self.values[a.index()]
    }

    /// `K(λ;a²)`.
    pub fn at_square(&self, ctx: &FieldCtx, a: FieldElement) -> &BigInt {
        self.get(ctx.mul(a, a))
    }
}

/// `MK^h = Σ_{a≠0} K(λ;a)^h`.
pub fn mk(ctx: &FieldCtx, h: u32) -> Result<BigInt> {
    let table = KloostermanTable::new(ctx)?;
    Ok(ctx.units().map(|a| table.get(a).pow(h)).sum())
}

/// `SK^h`, the moment over nonzero square arguments. Evaluated both as a
/// sum over the squares and as half the sum of `K(λ;b²)^h` over all units.
pub fn sk(ctx: &FieldCtx, h: u32) -> Result<BigInt> {
    let table = KloostermanTable::new(ctx)?;
    sk_with_table(ctx, &table, h)
}

pub fn sk_with_table(ctx: &FieldCtx, table: &KloostermanTable, h: u32) -> Result<BigInt> {
    let over_squares: BigInt = ctx
        .units()
        .filter(|&a| ctx.is_square(a))
        .map(|a| table.get(a).pow(h))
        .sum();
    let doubled: BigInt = ctx.units().map(|b| table.at_square(ctx, b).pow(h)).sum();
    if &over_squares * 2 != doubled {
        return Err(Error::invariant(
            "SK^h via squares vs. half-sum over b²",
            &over_squares * 2,
            doubled,
        ));
    }
    Ok(over_squares)
}

/// `δ(1,q;γ)` for every `γ`: the number of `α ≠ 0` with `α + 1/α = γ`.
fn delta_one(ctx: &FieldCtx) -> Result<Vec<BigUint>> {
    let mut d = vec![BigUint::zero(); ctx.q() as usize];
    for alpha in ctx.units() {
        let g = ctx.add(alpha, ctx.inv(alpha)?);
        d[g.index()] += 1u32;
    }
    Ok(d)
}

/// `δ(m,q;β)` for all `β`, indexed by field index.
///
/// `m = 0` gives the indicator of `β = 0`; larger `m` convolve the
/// single-variable distribution over the additive group.
pub fn delta_distribution(ctx: &FieldCtx, m: u32) -> Result<Vec<BigUint>> {
    let q = ctx.q() as usize;
    let mut acc = vec![BigUint::zero(); q];
    acc[0] = BigUint::one();
    if m == 0 {
        return Ok(acc);
    }
    let one = delta_one(ctx)?;
    let elements = ctx.enumerate_elements();
    for _ in 0..m {
        let mut next = vec![BigUint::zero(); q];
        for (i, ci) in acc.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in one.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                next[ctx.add(elements[i], elements[j]).index()] += ci * cj;
            }
        }
        acc = next;
    }
    Ok(acc)
}

pub fn delta(ctx: &FieldCtx, m: u32, beta: FieldElement) -> Result<BigUint> {
    Ok(delta_distribution(ctx, m)?.swap_remove(beta.index()))
}

/// `δ(2,q;β)` by a direct double loop over pairs of units.
pub fn delta2_brute(ctx: &FieldCtx, beta: FieldElement) -> Result<BigUint> {
    let mut count = 0u64;
    for a1 in ctx.units() {
        let s1 = ctx.add(a1, ctx.inv(a1)?);
        for a2 in ctx.units() {
            if ctx.add(s1, ctx.add(a2, ctx.inv(a2)?)) == beta {
                count += 1;
            }
        }
    }
    Ok(BigUint::from(count))
}

/// `Σ_{a≠0} λ(-aβ) K(λ;a²)^m`, evaluated in `Z[ω]`.
pub fn delta_identity_lhs(
    ctx: &FieldCtx,
    table: &KloostermanTable,
    m: u32,
    beta: FieldElement,
) -> Eisenstein {
    let mut acc = Eisenstein::zero();
    for a in ctx.units() {
        let k = table.at_square(ctx, a).pow(m);
        acc.add_scaled_root(&k, lambda(ctx, ctx.neg(ctx.mul(a, beta))));
    }
    acc
}

/// Whether `Σ_{a≠0} λ(-aβ) K(λ;a²)^m = q δ(m,q;β) - (q-1)^m`.
/// The left side must first come out a rational integer.
pub fn check_delta_identity(ctx: &FieldCtx, m: u32, beta: FieldElement) -> Result<bool> {
    let table = KloostermanTable::new(ctx)?;
    let deltas = delta_distribution(ctx, m)?;
    check_delta_identity_with(ctx, &table, &deltas, m, beta)
}

pub fn check_delta_identity_with(
    ctx: &FieldCtx,
    table: &KloostermanTable,
    deltas: &[BigUint],
    m: u32,
    beta: FieldElement,
) -> Result<bool> {
    let lhs = delta_identity_lhs(ctx, table, m, beta);
    let Some(lhs) = lhs.to_integer() else {
        return Err(Error::invariant(
            "character sum Σ λ(-aβ)K(λ;a²)^m must be a rational integer",
            "b = 0",
            lhs,
        ));
    };
    let q = BigInt::from(ctx.q());
    let rhs = &q * BigInt::from(deltas[beta.index()].clone()) - (q - 1u32).pow(m);
    Ok(lhs == rhs)
}

/// `K_GL(t,q)(λ;a)` by the three-term recursion in `t`.
pub fn kgl_recursive(ctx: &FieldCtx, t: u32, a: FieldElement) -> Result<BigInt> {
    let k = kloosterman(ctx, a)?;
    let q = BigInt::from(ctx.q());
    let mut prev = BigInt::one(); // t = 0
    if t == 0 {
        return Ok(prev);
    }
    let mut cur = k.clone(); // t = 1
    for s in 2..=t {
        let next = q.pow(s - 1) * &cur * &k + q.pow(2 * s - 2) * (q.pow(s - 1) - 1u32) * &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Sum over chains `2l-1 ≤ j_{l-1} ≤ ... ≤ j_1 ≤ t+1` of `Π_ν (q^(j_ν - 2ν) - 1)`.
fn chain_sum(q: &BigInt, t: u32, l: u32) -> BigInt {
    fn go(q: &BigInt, nu: u32, last: u32, upper: u32, lower: u32, acc: &BigInt, out: &mut BigInt) {
        if nu > last {
            *out += acc;
            return;
        }
        for j in lower..=upper {
            let factor = q.pow(j - 2 * nu) - 1u32;
            go(q, nu + 1, last, j, lower, &(acc * factor), out);
        }
    }
    let mut out = BigInt::zero();
    go(q, 1, l - 1, t + 1, 2 * l - 1, &BigInt::one(), &mut out);
    out
}

/// `K_GL(t,q)(λ;a)` by the closed double sum over `l` and chains of indices.
pub fn kgl_closed(ctx: &FieldCtx, t: u32, a: FieldElement) -> Result<BigInt> {
    if t == 0 {
        return Err(Error::domain("closed form needs t ≥ 1"));
    }
    let k = kloosterman(ctx, a)?;
    let q = BigInt::from(ctx.q());
    let mut inner = BigInt::zero();
    for l in 1..=(t + 2) / 2 {
        inner += q.pow(l) * k.pow(t + 2 - 2 * l) * chain_sum(&q, t, l);
    }
    // prefactor q^((t-2)(t+1)/2); negative only at t = 1
    let exp = (t as i64 - 2) * (t as i64 + 1) / 2;
    let prefactor = if exp >= 0 {
        BigRational::from_integer(q.pow(exp as u32))
    } else {
        BigRational::new(BigInt::one(), q.pow((-exp) as u32))
    };
    let value = prefactor * BigRational::from_integer(inner);
    if !value.is_integer() {
        return Err(Error::invariant("closed-form GL Kloosterman sum integrality", "integer", value));
    }
    Ok(value.to_integer())
}

/// `Σ_{w∈GL(t,q)} λ(Tr w + a Tr w⁻¹)` by enumerating all `t×t` matrices.
pub fn kgl_exhaustive(ctx: &FieldCtx, t: u32, a: FieldElement) -> Result<BigInt> {
    if a.is_zero() {
        return Err(Error::domain("GL Kloosterman sum needs a nonzero argument"));
    }
    let t = t as usize;
    let space = ctx.q().checked_pow((t * t) as u32);
    if space.is_none_or(|s| s > 50_000_000) {
        return Err(Error::unsupported(alloc::format!(
            "exhaustive GL({t},{}) sum scans q^{} matrices",
            ctx.q(),
            t * t
        )));
    }
    if t == 0 {
        return Ok(BigInt::one());
    }
    let mut counts = ExponentCounts::default();
    for w in MatrixGF::all(ctx, t) {
        if let Some(inv) = w.inverse(ctx) {
            let arg = ctx.add(w.trace(ctx), ctx.mul(a, inv.trace(ctx)));
            counts.tally(lambda(ctx, arg));
        }
    }
    let value = counts.value();
    value.to_integer().ok_or_else(|| {
        Error::invariant("GL Kloosterman sum must be a rational integer", "b = 0", value)
    })
}

/// `|K(λ;a)| ≤ 2√q`, checked as `K² ≤ 4q`.
pub fn within_weil_bound(ctx: &FieldCtx, k: &BigInt) -> bool {
    let k = k.abs();
    &k * &k <= BigInt::from(4 * ctx.q())
}

/// Small helper for reports: `K` values fit in `i64` at every supported `q`.
pub fn to_i64(k: &BigInt) -> i64 {
    k.to_i64().expect("Kloosterman sums are bounded by 2√q")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldCtx {
        FieldCtx::new(1, None).unwrap()
    }

    #[test]
    fn kloosterman_examples_q3() {
        let ctx = f3();
        assert_eq!(kloosterman(&ctx, ctx.from_int(1)).unwrap(), BigInt::from(-1));
        assert_eq!(kloosterman(&ctx, ctx.from_int(2)).unwrap(), BigInt::from(2));
        assert!(kloosterman(&ctx, ctx.zero()).is_err());
    }

    #[test]
    fn moments_q3() {
        let ctx = f3();
        let mks: Vec<_> = (0..3).map(|h| mk(&ctx, h).unwrap()).collect();
        assert_eq!(mks, [2, 1, 5].map(BigInt::from));
        let sks: Vec<_> = (0..3).map(|h| sk(&ctx, h).unwrap()).collect();
        assert_eq!(sks, [1, -1, 1].map(BigInt::from));
    }

    #[test]
    fn first_moment_is_one() {
        for r in 1..=3 {
            let ctx = FieldCtx::new(r, None).unwrap();
            assert_eq!(mk(&ctx, 1).unwrap(), BigInt::one());
        }
    }

    #[test]
    fn delta_examples_q3() {
        let ctx = f3();
        let one = ctx.from_int(1);
        assert_eq!(delta(&ctx, 1, one).unwrap(), BigUint::from(1u32));
        assert_eq!(delta(&ctx, 2, ctx.zero()).unwrap(), BigUint::from(2u32));
        assert_eq!(delta(&ctx, 2, one).unwrap(), BigUint::from(1u32));
        assert_eq!(delta(&ctx, 0, ctx.zero()).unwrap(), BigUint::one());
        assert_eq!(delta(&ctx, 0, one).unwrap(), BigUint::zero());
    }

    #[test]
    fn delta_convolution_matches_double_loop() {
        for r in 1..=3 {
            let ctx = FieldCtx::new(r, None).unwrap();
            let dist = delta_distribution(&ctx, 2).unwrap();
            for b in ctx.elements() {
                assert_eq!(dist[b.index()], delta2_brute(&ctx, b).unwrap());
            }
        }
    }

    #[test]
    fn delta_exhausts_unit_tuples() {
        for r in 1..=3 {
            let ctx = FieldCtx::new(r, None).unwrap();
            for m in 0..=4u32 {
                let total: BigUint = delta_distribution(&ctx, m).unwrap().into_iter().sum();
                assert_eq!(total, BigUint::from(ctx.q() - 1).pow(m));
            }
        }
    }

    #[test]
    fn delta_identity_examples() {
        let ctx = f3();
        let table = KloostermanTable::new(&ctx).unwrap();
        assert_eq!(delta_identity_lhs(&ctx, &table, 0, ctx.zero()), Eisenstein::from_int(2));
        assert_eq!(delta_identity_lhs(&ctx, &table, 1, ctx.zero()), Eisenstein::from_int(-2));
        assert!(check_delta_identity(&ctx, 0, ctx.zero()).unwrap());
        assert!(check_delta_identity(&ctx, 1, ctx.zero()).unwrap());
        let f9 = FieldCtx::new(2, Some(&[1, 0, 1])).unwrap();
        for b in f9.elements() {
            assert!(check_delta_identity(&f9, 2, b).unwrap());
        }
    }

    #[test]
    fn kgl_examples_q3() {
        let ctx = f3();
        let one = ctx.one();
        assert_eq!(kgl_recursive(&ctx, 0, one).unwrap(), BigInt::one());
        assert_eq!(kgl_recursive(&ctx, 1, one).unwrap(), BigInt::from(-1));
        assert_eq!(kgl_recursive(&ctx, 2, one).unwrap(), BigInt::from(21));
        assert_eq!(kgl_closed(&ctx, 1, one).unwrap(), BigInt::from(-1));
        assert_eq!(kgl_closed(&ctx, 2, one).unwrap(), BigInt::from(21));
        assert_eq!(kgl_exhaustive(&ctx, 2, one).unwrap(), BigInt::from(21));
        assert!(kgl_closed(&ctx, 0, one).is_err());
        assert!(kgl_recursive(&ctx, 2, ctx.zero()).is_err());
    }

    #[test]
    fn kgl_routes_agree() {
        for r in 1..=2 {
            let ctx = FieldCtx::new(r, None).unwrap();
            for a in ctx.units() {
                for t in 1..=4 {
                    assert_eq!(kgl_closed(&ctx, t, a).unwrap(), kgl_recursive(&ctx, t, a).unwrap());
                }
            }
        }
    }

    #[test]
    fn weil_bound_and_integrality() {
        for r in 1..=3 {
            let ctx = FieldCtx::new(r, None).unwrap();
            for a in ctx.units() {
                let c = kloosterman_counts(&ctx, a).unwrap();
                assert_eq!(c.n1, c.n2);
                assert!(within_weil_bound(&ctx, &kloosterman(&ctx, a).unwrap()));
            }
        }
    }
}
