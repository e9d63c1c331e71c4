//! The ternary codes `C(G_i(q)) = {u ∈ GF(3)^N : u·v = 0}`, where `v` lists
//! the traces of the group elements in a fixed order, and their duals
//! `{c(a) = (tr(a Tr g_1), ..., tr(a Tr g_N)) : a ∈ GF(q)}`.
//!
//! The code itself has `3^(N-r)` words and is never materialized. Its low
//! weight counts come from three independent routes: a constrained sum over
//! symbol multiplicities per trace value, the MacWilliams transform of the
//! `q`-word dual, and (for tiny lengths) a direct walk over low-weight words.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::charsum::KloostermanTable;
use crate::combinat::{binomial, binomial_u64, factorial, multinomial2};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};
use crate::symp::{order_sp, trace_dist_closed, GroupTable, Which};

pub use crate::combinat::stirling2;

/// Code symbols are in GF(3) whatever the field `GF(3^r)` is.
pub const ALPHABET: u64 = 3;

/// `dim C^⊥ = r`: the map `a ↦ c(a)` is an isomorphism from `GF(q)`.
pub fn dual_dimension(ctx: &FieldCtx) -> u64 {
    ctx.r() as u64
}

/// Largest `j` for which the constrained-sum route is offered.
pub const MAX_SMALL_WEIGHT: u64 = 12;

#[derive(Clone, Debug)]
pub struct CodeSpec {
    which: Which,
    ctx: FieldCtx,
    length: u64,
    /// Number of coordinates carrying each trace value, by field index.
    distribution: Vec<BigUint>,
    /// `(Tr g_1, ..., Tr g_N)`; only present when the group was enumerated.
    trace_vector: Option<Vec<FieldElement>>,
}

impl CodeSpec {
    /// A code described by its closed-form trace distribution alone.
    pub fn closed(ctx: &FieldCtx, which: Which) -> Result<Self> {
        let order = order_sp(which.half_rank(), ctx.q());
        let length = order
            .to_u64()
            .ok_or_else(|| Error::unsupported(alloc::format!("code length {order} exceeds 64 bits")))?;
        Ok(CodeSpec {
            which,
            ctx: ctx.clone(),
            length,
            distribution: trace_dist_closed(ctx, which)?,
            trace_vector: None,
        })
    }

    /// A code with explicit coordinates taken from an enumerated group.
    pub fn from_table(ctx: &FieldCtx, table: &GroupTable) -> Result<Self> {
        let els = table
            .elements()
            .ok_or_else(|| Error::domain("code coordinates need the group's element list"))?;
        let vector: Vec<FieldElement> = els.iter().map(|w| w.trace(ctx)).collect();
        let mut spec = CodeSpec::closed(ctx, table.which())?;
        let mut tally = vec![BigUint::zero(); ctx.q() as usize];
        for v in &vector {
            tally[v.index()] += 1u32;
        }
        if tally != spec.distribution {
            return Err(Error::invariant(
                "trace multiset of the coordinates",
                "the closed-form distribution",
                "a different multiset",
            ));
        }
        spec.trace_vector = Some(vector);
        Ok(spec)
    }

    pub fn which(&self) -> Which {
        self.which
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn distribution(&self) -> &[BigUint] {
        &self.distribution
    }

    pub fn trace_vector(&self) -> Option<&[FieldElement]> {
        self.trace_vector.as_deref()
    }
}

/// A word over `{0, 1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TernaryWord {
    symbols: Vec<u8>,
}

impl TernaryWord {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if symbols.iter().any(|&s| s > 2) {
            return Err(Error::domain("ternary symbols must be 0, 1 or 2"));
        }
        Ok(TernaryWord { symbols })
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Hamming weight.
pub fn weight(w: &TernaryWord) -> u64 {
    w.symbols.iter().filter(|&&s| s != 0).count() as u64
}

/// `(weight, count)` pairs of a word set of the given length.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeightDistribution {
    length: u64,
    counts: BTreeMap<u64, BigUint>,
}

impl WeightDistribution {
    pub fn new(length: u64) -> Self {
        WeightDistribution {
            length,
            counts: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, weight: u64, count: impl Into<BigUint>) {
        assert!(weight <= self.length, "weight {weight} exceeds length {}", self.length);
        let count = count.into();
        if !count.is_zero() {
            *self.counts.entry(weight).or_default() += count;
        }
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    /// Count at `weight`, zero when absent.
    pub fn count(&self, weight: u64) -> BigUint {
        self.counts.get(&weight).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Nonzero entries in increasing weight.
    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigUint)> {
        self.counts.iter().map(|(&w, c)| (w, c))
    }

    /// Entries with weight `≤ jmax`.
    pub fn truncated(&self, jmax: u64) -> WeightDistribution {
        WeightDistribution {
            length: self.length,
            counts: self.counts.range(..=jmax).map(|(&w, c)| (w, c.clone())).collect(),
        }
    }

    /// `Σ_j j^h · count(j)`.
    pub fn power_moment(&self, h: u32) -> BigUint {
        self.iter().map(|(w, c)| BigUint::from(w).pow(h) * c).sum()
    }
}

/// `c(a)`, coordinate `j` being `tr(a · Tr g_j)`.
pub fn dual_codeword(spec: &CodeSpec, a: FieldElement) -> Result<TernaryWord> {
    let v = spec
        .trace_vector()
        .ok_or_else(|| Error::domain("dual codewords need explicit coordinates"))?;
    let ctx = &spec.ctx;
    Ok(TernaryWord {
        symbols: v.iter().map(|&b| ctx.trace(ctx.mul(a, b))).collect(),
    })
}

/// Weight of `c(a)` from the trace distribution: `N` minus the coordinates with `tr(aβ) = 0`.
pub fn dual_weight(spec: &CodeSpec, a: FieldElement) -> u64 {
    let ctx = &spec.ctx;
    let zeros: BigUint = ctx
        .elements()
        .filter(|&b| ctx.trace(ctx.mul(a, b)) == 0)
        .map(|b| &spec.distribution[b.index()])
        .sum();
    spec.length - zeros.to_u64().expect("bounded by the length")
}

/// Weight of `c(a)` from the Kloosterman sum `K(λ;a²)`:
/// `(2/3) q (q²-1-K)` for `Sp(2,q)` and `(2/3) q⁴ ((q²-1)(q⁴-1) - (K²+q³-q))` for `Sp(4,q)`.
pub fn kloosterman_weight(
    ctx: &FieldCtx,
    which: Which,
    kt: &KloostermanTable,
    a: FieldElement,
) -> Result<u64> {
    if a.is_zero() {
        return Err(Error::domain("weight formula needs a ≠ 0"));
    }
    let q = BigInt::from(ctx.q());
    let k = kt.at_square(ctx, a);
    let inner = match which {
        Which::Sp2 => &q * (q.pow(2) - 1u32 - k),
        Which::Sp4 => q.pow(4) * ((q.pow(2) - 1u32) * (q.pow(4) - 1u32) - (k * k + q.pow(3) - &q)),
    };
    let value = BigRational::new(BigInt::from(2) * inner, BigInt::from(3));
    if !value.is_integer() {
        return Err(Error::invariant("weight formula integrality", "integer", value));
    }
    value
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::invariant("weight formula range", "0..=N", value))
}

/// `q² - 1 - K(λ;a²) ≡ 0 (mod 3)` for every `a ≠ 0`.
pub fn weight_formula_divisible(ctx: &FieldCtx, kt: &KloostermanTable) -> bool {
    let q = BigInt::from(ctx.q());
    ctx.units().all(|a| {
        let v = q.pow(2) - 1u32 - kt.at_square(ctx, a);
        v.is_multiple_of(&BigInt::from(3))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFormulaRow {
    pub a: FieldElement,
    pub direct: u64,
    pub formula: u64,
}

impl WeightFormulaRow {
    pub fn holds(&self) -> bool {
        self.direct == self.formula
    }
}

/// Direct dual weights against the Kloosterman weight formula for every `a ≠ 0`.
/// When coordinates are available, the weight of the actual word is also required to agree.
pub fn weight_formula_check(spec: &CodeSpec) -> Result<(bool, Vec<WeightFormulaRow>)> {
    let ctx = &spec.ctx;
    let kt = KloostermanTable::new(ctx)?;
    let mut rows = Vec::new();
    for a in ctx.units() {
        let direct = dual_weight(spec, a);
        if spec.trace_vector.is_some() {
            let w = weight(&dual_codeword(spec, a)?);
            if w != direct {
                return Err(Error::invariant("weight of c(a) vs. trace distribution", direct, w));
            }
        }
        let formula = kloosterman_weight(ctx, spec.which, &kt, a)?;
        rows.push(WeightFormulaRow { a, direct, formula });
    }
    Ok((rows.iter().all(WeightFormulaRow::holds), rows))
}

/// The `q` dual codewords are pairwise distinct.
pub fn check_injective(spec: &CodeSpec) -> Result<bool> {
    let mut words = spec
        .ctx
        .elements()
        .map(|a| dual_codeword(spec, a))
        .collect::<Result<Vec<_>>>()?;
    words.sort_unstable();
    Ok(words.windows(2).all(|w| w[0] != w[1]))
}

/// Weights of the `q` words `c(a)`, including the zero word.
pub fn dual_weight_distribution(spec: &CodeSpec) -> WeightDistribution {
    let mut dist = WeightDistribution::new(spec.length);
    for a in spec.ctx.elements() {
        dist.add(dual_weight(spec, a), 1u32);
    }
    dist
}

/// `C_j` for `j ≤ jmax`, summing `Π_β binom(n(β); ν_β, μ_β)` over all
/// multiplicities with `Σ ν + Σ μ = j` and `Σ ν_β β = Σ μ_β β`.
///
/// The sum is organised as a descent over `β` whose state is the weight
/// used so far together with the running value of `Σ (ν_β - μ_β) β`.
pub fn small_weight_counts(spec: &CodeSpec, jmax: u64) -> Result<WeightDistribution> {
    if jmax > MAX_SMALL_WEIGHT {
        return Err(Error::unsupported(alloc::format!(
            "constrained weight sums are limited to j ≤ {MAX_SMALL_WEIGHT}"
        )));
    }
    let ctx = &spec.ctx;
    let q = ctx.q() as usize;
    let jm = jmax.min(spec.length) as usize;
    let elements = ctx.enumerate_elements();
    // state[w * q + s]: ways to reach weight w with running sum index s
    let mut state = vec![BigUint::zero(); (jm + 1) * q];
    state[0] = BigUint::one();
    for beta in &elements {
        let n = &spec.distribution[beta.index()];
        let shifts = [FieldElement::ZERO, *beta, ctx.scale(2, *beta)];
        let mut next = vec![BigUint::zero(); (jm + 1) * q];
        for w in 0..=jm {
            for (s, s_el) in elements.iter().enumerate() {
                let cur = &state[w * q + s];
                if cur.is_zero() {
                    continue;
                }
                for nu in 0..=(jm - w) {
                    for mu in 0..=(jm - w - nu) {
                        let ways = multinomial2(n, nu as u64, mu as u64);
                        if ways.is_zero() {
                            continue;
                        }
                        let shift = shifts[(nu + 2 * mu) % 3];
                        let t = ctx.add(*s_el, shift).index();
                        next[(w + nu + mu) * q + t] += cur * ways;
                    }
                }
            }
        }
        state = next;
    }
    let mut dist = WeightDistribution::new(spec.length);
    for w in 0..=jm {
        dist.add(w as u64, state[w * q].clone());
    }
    Ok(dist)
}

/// `C_j` for `j ≤ jmax` by walking every word of weight `≤ jmax` and testing `u·v = 0`.
pub fn brute_force_counts(spec: &CodeSpec, jmax: u64) -> Result<WeightDistribution> {
    let v = spec
        .trace_vector()
        .ok_or_else(|| Error::domain("brute-force counts need explicit coordinates"))?;
    let n = v.len() as u64;
    let jm = jmax.min(n);
    let words: BigUint = (0..=jm).map(|j| binomial_u64(n, j) << j).sum();
    if words > BigUint::from(1_000_000_000u64) {
        return Err(Error::unsupported(alloc::format!(
            "{words} words of weight ≤ {jm} is beyond exhaustive search"
        )));
    }
    let ctx = &spec.ctx;
    let steps: Vec<[FieldElement; 2]> = v.iter().map(|&b| [b, ctx.scale(2, b)]).collect();
    let mut counts = vec![0u64; jm as usize + 1];

    fn walk(
        ctx: &FieldCtx,
        steps: &[[FieldElement; 2]],
        start: usize,
        weight: usize,
        sum: FieldElement,
        jm: usize,
        counts: &mut [u64],
    ) {
        if sum.is_zero() {
            counts[weight] += 1;
        }
        if weight == jm {
            return;
        }
        for (p, step) in steps.iter().enumerate().skip(start) {
            for &d in step {
                walk(ctx, steps, p + 1, weight + 1, ctx.add(sum, d), jm, counts);
            }
        }
    }
    walk(ctx, &steps, 0, 0, FieldElement::ZERO, jm as usize, &mut counts);

    let mut dist = WeightDistribution::new(n);
    for (j, c) in counts.into_iter().enumerate() {
        dist.add(j as u64, c);
    }
    Ok(dist)
}

/// Ternary Krawtchouk value `K_j(i) = Σ_s (-1)^s binom(i,s) binom(n-i,j-s) 2^(j-s)`,
/// the coefficient of `x^(n-j) y^j` in `(x+2y)^(n-i) (x-y)^i`.
pub fn krawtchouk(n: u64, i: u64, j: u64) -> BigInt {
    let mut acc = BigInt::zero();
    for s in 0..=j.min(i) {
        if j - s > n - i {
            continue;
        }
        let term = BigInt::from(binomial(&BigUint::from(i), s) * binomial(&BigUint::from(n - i), j - s)) << (j - s);
        if s % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// One step of the three-term recurrence
/// `(j+1) K_{j+1} = ((n-j)·2 + j - 3i) K_j - 2(n-j+1) K_{j-1}`.
fn krawtchouk_step(n: u64, i: u64, j: u64, prev: &BigInt, cur: &BigInt) -> BigInt {
    let (n, i, j) = (BigInt::from(n), BigInt::from(i), BigInt::from(j));
    let coef = (&n - &j) * 2u32 + &j - &i * 3u32;
    (coef * cur - (n - &j + 1u32) * 2u32 * prev) / (j + 1u32)
}

/// Streams the MacWilliams transform of `dual` (a linear code of length `n`
/// over three symbols) up to weight `jmax`, calling `visit(j, C_j)`.
fn macwilliams_stream(
    dual: &WeightDistribution,
    n: u64,
    jmax: u64,
    mut visit: impl FnMut(u64, BigUint) -> Result<()>,
) -> Result<()> {
    let size = BigInt::from(dual.total());
    if size.is_zero() {
        return Err(Error::domain("empty dual distribution"));
    }
    let jm = jmax.min(n);
    let weights: Vec<(u64, BigInt)> = dual.iter().map(|(w, c)| (w, BigInt::from(c.clone()))).collect();
    if weights.iter().any(|&(w, _)| w > n) {
        return Err(Error::domain("dual weight exceeds the code length"));
    }
    // Krawtchouk rows are produced in lockstep so that only the current and
    // previous values of each row are live.
    let mut rows: Vec<(BigInt, BigInt)> = weights.iter().map(|_| (BigInt::zero(), BigInt::one())).collect();
    for j in 0..=jm {
        if j > 0 {
            for ((i, _), (prev, cur)) in weights.iter().zip(rows.iter_mut()) {
                let next = krawtchouk_step(n, *i, j - 1, prev, cur);
                *prev = core::mem::replace(cur, next);
            }
        }
        let mut acc = BigInt::zero();
        for ((_, m), (_, cur)) in weights.iter().zip(&rows) {
            acc += m * cur;
        }
        let (quot, rem) = acc.div_rem(&size);
        if !rem.is_zero() {
            return Err(Error::invariant(
                alloc::format!("MacWilliams division at weight {j}"),
                "exact",
                alloc::format!("remainder {rem}"),
            ));
        }
        let count = quot.to_biguint().ok_or_else(|| {
            Error::invariant(alloc::format!("MacWilliams count at weight {j}"), "≥ 0", "negative")
        })?;
        visit(j, count)?;
    }
    Ok(())
}

/// Weight distribution of the code whose dual has distribution `dual`.
pub fn macwilliams(dual: &WeightDistribution, n: u64) -> Result<WeightDistribution> {
    macwilliams_truncated(dual, n, n)
}

pub fn macwilliams_truncated(dual: &WeightDistribution, n: u64, jmax: u64) -> Result<WeightDistribution> {
    let mut out = WeightDistribution::new(n);
    macwilliams_stream(dual, n, jmax, |j, c| {
        out.add(j, c);
        Ok(())
    })?;
    Ok(out)
}

/// `Σ_j C_j` of the MacWilliams transform, without storing the distribution.
pub fn macwilliams_total(dual: &WeightDistribution, n: u64) -> Result<BigUint> {
    let mut total = BigUint::zero();
    macwilliams_stream(dual, n, n, |_, c| {
        total += c;
        Ok(())
    })?;
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlessCheck {
    pub h: u32,
    /// `Σ_j j^h B_j` over the dual.
    pub lhs: BigInt,
    /// Low-weight side, evaluated in rationals.
    pub rhs: BigRational,
}

impl PlessCheck {
    pub fn holds(&self) -> bool {
        self.rhs == BigRational::from_integer(self.lhs.clone())
    }
}

/// `Σ_{j=0}^{min(n,h)} (-1)^j C_j Σ_{t=j}^h t! S(h,t) 3^(k-t) 2^(t-j) binom(n-j, n-t)`
/// for a length-`n` ternary code whose dual has dimension `k`.
pub fn pless_rhs(n: u64, k: u64, code_low: &WeightDistribution, h: u32) -> BigRational {
    let h = h as u64;
    let three = BigInt::from(ALPHABET);
    let mut total = BigRational::zero();
    for j in 0..=h.min(n) {
        let cj = BigInt::from(code_low.count(j));
        if cj.is_zero() {
            continue;
        }
        let mut inner = BigRational::zero();
        for t in j..=h {
            if t > n {
                break;
            }
            let coeff = BigInt::from(factorial(t) * stirling2(h, t) * binomial(&BigUint::from(n - j), t - j))
                << (t - j);
            let p3 = if k >= t {
                BigRational::from_integer(three.pow((k - t) as u32))
            } else {
                BigRational::new(BigInt::one(), three.pow((t - k) as u32))
            };
            inner += p3 * BigRational::from_integer(coeff);
        }
        let term = inner * BigRational::from_integer(cj);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Power moment identity applied to the dual code `B = C^⊥`, an `[N, r]`
/// ternary code whose own dual is `C`.
pub fn pless_verify(spec: &CodeSpec, h: u32) -> Result<PlessCheck> {
    if h > 10 {
        return Err(Error::unsupported("power moment checks are limited to h ≤ 10"));
    }
    let dual = dual_weight_distribution(spec);
    let low = small_weight_counts(spec, h as u64)?;
    Ok(pless_check_with(&dual, &low, dual_dimension(&spec.ctx), h))
}

pub fn pless_check_with(
    dual: &WeightDistribution,
    code_low: &WeightDistribution,
    k: u64,
    h: u32,
) -> PlessCheck {
    PlessCheck {
        h,
        lhs: BigInt::from(dual.power_moment(h)),
        rhs: pless_rhs(dual.length(), k, code_low, h),
    }
}
