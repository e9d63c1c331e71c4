//! Recursive evaluation of `SK^h` from the weight counts of the `Sp(2,q)`
//! code, and of `SK^{2h}` from those of the `Sp(4,q)` code.
//!
//! Both recursions come from the power moment identity applied to the dual
//! codes, whose weights are affine in `K(λ;a²)` and `K(λ;a²)²`
//! respectively. They are seeded with `SK^0 = (q-1)/2` and evaluated in
//! exact rationals; every assembled value must come out an integer.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::charsum::{self, KloostermanTable};
use crate::codes::{self, CodeSpec, WeightDistribution};
use crate::combinat::{binomial, binomial_u64, factorial, stirling2};
use crate::error::{Error, Result};
use crate::gf::FieldCtx;
use crate::symp::{order_sp, Which};

pub const MAX_HMAX: u32 = 10;

/// Where the low-weight counts `C_{i,j}` come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WeightsRoute {
    /// Constrained multiplicity sums over the trace distribution.
    #[default]
    SmallWeight,
    /// MacWilliams transform of the dual distribution.
    MacWilliams,
}

impl WeightsRoute {
    pub fn name(self) -> &'static str {
        match self {
            WeightsRoute::SmallWeight => "small-weight",
            WeightsRoute::MacWilliams => "macwilliams",
        }
    }
}

/// `C_{i,j}` for `j ≤ jmax` by the chosen route.
pub fn code_low_weights(spec: &CodeSpec, jmax: u64, route: WeightsRoute) -> Result<WeightDistribution> {
    match route {
        WeightsRoute::SmallWeight => codes::small_weight_counts(spec, jmax),
        WeightsRoute::MacWilliams => {
            let dual = codes::dual_weight_distribution(spec);
            codes::macwilliams_truncated(&dual, spec.length(), jmax)
        }
    }
}

/// `SK^0 = |{nonzero squares}| = (q-1)/2`.
pub fn sk_seed(ctx: &FieldCtx) -> BigInt {
    BigInt::from((ctx.q() - 1) / 2)
}

/// The denominator has no prime factor other than 2 and 3.
fn denominator_is_2q_smooth(x: &BigRational) -> bool {
    let mut d = x.denom().abs();
    for p in [2u32, 3] {
        let p = BigInt::from(p);
        while d.is_multiple_of(&p) {
            d /= &p;
        }
    }
    d.is_one()
}

/// `base^k` or `1/base^|k|`.
fn rational_pow(base: &BigInt, k: i64) -> BigRational {
    if k >= 0 {
        BigRational::from_integer(base.pow(k as u32))
    } else {
        BigRational::new(BigInt::one(), base.pow((-k) as u32))
    }
}

/// One step of either recursion:
///
/// `X_h = Σ_{j<h} (-1)^(h+j+1) binom(h,j) base^(h-j) X_j
///      + q^(1-scale·h) Σ_{j≤min(n,h)} (-1)^(h+j) C_j Σ_{t=j}^h t! S(h,t) 3^(h-t) 2^(t-h-j-1) binom(n-j, n-t)`
///
/// where `X_j` is `SK^j` (scale 1) or `SK^{2j}` (scale 4).
fn recursion_step(
    q: u64,
    scale: i64,
    base: &BigInt,
    n: u64,
    low: &WeightDistribution,
    lower: &[BigInt],
    h: u64,
) -> Result<BigInt> {
    let check = |term: &BigRational, what: &str| -> Result<()> {
        if denominator_is_2q_smooth(term) {
            Ok(())
        } else {
            Err(Error::invariant(
                alloc::format!("{what} has a denominator dividing a power of 2q"),
                "2,3-smooth denominator",
                term,
            ))
        }
    };

    let mut value = BigRational::zero();
    for (j, xj) in lower.iter().enumerate().take(h as usize) {
        let j = j as u64;
        let term = BigInt::from(binomial_u64(h, j)) * base.pow((h - j) as u32) * xj;
        if (h + j + 1).is_multiple_of(2) {
            value += BigRational::from_integer(term);
        } else {
            value -= BigRational::from_integer(term);
        }
    }

    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let mut tail = BigRational::zero();
    for j in 0..=h.min(n) {
        let cj = BigInt::from(low.count(j));
        if cj.is_zero() {
            continue;
        }
        let mut inner = BigRational::zero();
        for t in j..=h {
            if t > n {
                break;
            }
            let coeff = BigInt::from(factorial(t) * stirling2(h, t) * binomial(&BigUint::from(n - j), t - j))
                * three.pow((h - t) as u32);
            let term = BigRational::from_integer(coeff) * rational_pow(&two, t as i64 - h as i64 - j as i64 - 1);
            check(&term, "inner term")?;
            inner += term;
        }
        let term = inner * BigRational::from_integer(cj);
        if (h + j).is_multiple_of(2) {
            tail += term;
        } else {
            tail -= term;
        }
    }
    let tail = tail * rational_pow(&BigInt::from(q), 1 - scale * h as i64);
    check(&tail, "weight-count contribution")?;
    value += tail;

    if !value.is_integer() {
        return Err(Error::invariant(
            alloc::format!("recursive moment at h = {h} is an integer"),
            "integer",
            value,
        ));
    }
    Ok(value.to_integer())
}

fn require_weights(low: &WeightDistribution, n: u64) -> Result<()> {
    if low.length() != n {
        return Err(Error::domain(alloc::format!(
            "weight counts are for length {}, the code has length {n}",
            low.length()
        )));
    }
    if low.count(0) != BigUint::one() {
        return Err(Error::domain("weight counts must contain the zero word once"));
    }
    Ok(())
}

/// `SK^0, SK^1, ..., SK^hmax` from the `Sp(2,q)` code's low-weight counts.
pub fn sk_recursive_sp2_table(ctx: &FieldCtx, hmax: u32, low: &WeightDistribution) -> Result<Vec<BigInt>> {
    if hmax > MAX_HMAX {
        return Err(Error::unsupported(alloc::format!("h is limited to {MAX_HMAX}")));
    }
    let q = ctx.q();
    let n = code_length(Which::Sp2, q)?;
    require_weights(low, n)?;
    let base = BigInt::from(q * q - 1);
    let mut table = alloc::vec![sk_seed(ctx)];
    for h in 1..=hmax as u64 {
        let next = recursion_step(q, 1, &base, n, low, &table, h)?;
        table.push(next);
    }
    Ok(table)
}

pub fn sk_recursive_sp2(ctx: &FieldCtx, h: u32, low: &WeightDistribution) -> Result<BigInt> {
    Ok(sk_recursive_sp2_table(ctx, h, low)?.pop().expect("table is nonempty"))
}

/// `SK^0, SK^2, ..., SK^{2·hmax}` from the `Sp(4,q)` code's low-weight counts.
pub fn sk_even_recursive_sp4_table(ctx: &FieldCtx, hmax: u32, low: &WeightDistribution) -> Result<Vec<BigInt>> {
    if hmax > MAX_HMAX / 2 {
        return Err(Error::unsupported(alloc::format!("h is limited to {}", MAX_HMAX / 2)));
    }
    let q = ctx.q();
    let n = code_length(Which::Sp4, q)?;
    require_weights(low, n)?;
    let qb = BigInt::from(q);
    // (q²-1)(q⁴-1) - (q³-q)
    let base = qb.pow(6) - qb.pow(4) - qb.pow(3) - qb.pow(2) + &qb + 1;
    let mut table = alloc::vec![sk_seed(ctx)];
    for h in 1..=hmax as u64 {
        let next = recursion_step(q, 4, &base, n, low, &table, h)?;
        table.push(next);
    }
    Ok(table)
}

pub fn sk_even_recursive_sp4(ctx: &FieldCtx, h: u32, low: &WeightDistribution) -> Result<BigInt> {
    Ok(sk_even_recursive_sp4_table(ctx, h, low)?.pop().expect("table is nonempty"))
}

fn code_length(which: Which, q: u64) -> Result<u64> {
    use num_traits::ToPrimitive;
    let order = order_sp(which.half_rank(), q);
    order
        .to_u64()
        .ok_or_else(|| Error::unsupported(alloc::format!("code length {order} exceeds 64 bits")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentRoute {
    BruteForce,
    Sp2Recursion,
    Sp4EvenRecursion,
}

impl MomentRoute {
    pub fn name(self) -> &'static str {
        match self {
            MomentRoute::BruteForce => "brute_force",
            MomentRoute::Sp2Recursion => "recursive_sp2",
            MomentRoute::Sp4EvenRecursion => "recursive_sp4_even",
        }
    }
}

/// `(h, SK^h)` rows produced by one route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTable {
    pub q: u64,
    pub route: MomentRoute,
    pub entries: Vec<(u32, BigInt)>,
}

impl MomentTable {
    pub fn get(&self, h: u32) -> Option<&BigInt> {
        self.entries.iter().find(|(k, _)| *k == h).map(|(_, v)| v)
    }
}

#[derive(Clone, Debug)]
pub struct MomentReport {
    pub brute: MomentTable,
    pub sp2: MomentTable,
    /// Even exponents only.
    pub sp4_even: MomentTable,
    pub weights_route: WeightsRoute,
}

impl MomentReport {
    /// Every recursive entry equals the brute-force value at the same exponent.
    pub fn agrees(&self) -> bool {
        [&self.sp2, &self.sp4_even].iter().all(|t| {
            t.entries
                .iter()
                .all(|(h, v)| self.brute.get(*h) == Some(v))
        })
    }
}

/// Brute-force, `Sp(2,q)`-recursive and (even exponents) `Sp(4,q)`-recursive
/// tables of `SK^h` for `h ≤ hmax`.
pub fn moment_report(ctx: &FieldCtx, hmax: u32, route: WeightsRoute) -> Result<MomentReport> {
    if hmax > MAX_HMAX {
        return Err(Error::unsupported(alloc::format!("h is limited to {MAX_HMAX}")));
    }
    let q = ctx.q();
    let kt = KloostermanTable::new(ctx)?;
    let brute = MomentTable {
        q,
        route: MomentRoute::BruteForce,
        entries: (0..=hmax)
            .map(|h| charsum::sk_with_table(ctx, &kt, h).map(|v| (h, v)))
            .collect::<Result<_>>()?,
    };

    let spec2 = CodeSpec::closed(ctx, Which::Sp2)?;
    let low2 = code_low_weights(&spec2, hmax as u64, route)?;
    let sp2 = MomentTable {
        q,
        route: MomentRoute::Sp2Recursion,
        entries: sk_recursive_sp2_table(ctx, hmax, &low2)?
            .into_iter()
            .enumerate()
            .map(|(h, v)| (h as u32, v))
            .collect(),
    };

    let half = hmax / 2;
    let spec4 = CodeSpec::closed(ctx, Which::Sp4)?;
    let low4 = code_low_weights(&spec4, half as u64, route)?;
    let sp4_even = MomentTable {
        q,
        route: MomentRoute::Sp4EvenRecursion,
        entries: sk_even_recursive_sp4_table(ctx, half, &low4)?
            .into_iter()
            .enumerate()
            .map(|(h, v)| (2 * h as u32, v))
            .collect(),
    };

    Ok(MomentReport {
        brute,
        sp2,
        sp4_even,
        weights_route: route,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sp2_recursion_q3_small() {
        let ctx = FieldCtx::new(1, None).unwrap();
        let spec = CodeSpec::closed(&ctx, Which::Sp2).unwrap();
        let low = codes::small_weight_counts(&spec, 2).unwrap();
        let table = sk_recursive_sp2_table(&ctx, 2, &low).unwrap();
        assert_eq!(table, [1, -1, 1].map(BigInt::from));
    }

    #[test]
    fn sp4_recursion_q3_small() {
        let ctx = FieldCtx::new(1, None).unwrap();
        let spec = CodeSpec::closed(&ctx, Which::Sp4).unwrap();
        let low = codes::small_weight_counts(&spec, 3).unwrap();
        let table = sk_even_recursive_sp4_table(&ctx, 3, &low).unwrap();
        assert_eq!(table, [1, 1, 1, 1].map(BigInt::from));
    }

    #[test]
    fn wrong_weights_are_caught() {
        let ctx = FieldCtx::new(1, None).unwrap();
        let spec = CodeSpec::closed(&ctx, Which::Sp2).unwrap();
        let mut low = codes::small_weight_counts(&spec, 3).unwrap();
        low.add(1, 1u32);
        let table = sk_recursive_sp2_table(&ctx, 3, &low);
        let brute: Vec<BigInt> = (0..=3).map(|h| charsum::sk(&ctx, h).unwrap()).collect();
        assert!(table.map_or(true, |t| t != brute));
    }

    #[test]
    fn report_q3() {
        let ctx = FieldCtx::new(1, None).unwrap();
        let rep = moment_report(&ctx, 4, WeightsRoute::SmallWeight).unwrap();
        assert!(rep.agrees());
        assert_eq!(rep.sp4_even.entries.len(), 3);
        let rep0 = moment_report(&ctx, 0, WeightsRoute::MacWilliams).unwrap();
        assert_eq!(rep0.brute.entries, [(0, BigInt::one())]);
    }
}
