//! `Sp(2,q)` and `Sp(4,q)` as explicit matrix sets, their trace
//! distributions and Gauss sums, and the order bookkeeping of the Bruhat
//! decomposition of `Sp(2n,q)` relative to the Siegel parabolic.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::charsum::{self, lambda, KloostermanTable};
use crate::combinat::{gl_order, pow_u, q_binomial};
use crate::eisenstein::Eisenstein;
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};
use crate::matrix::MatrixGF;

/// Largest `q` for which `Sp(2,q)` is enumerated.
pub const MAX_SP2_Q: u64 = 27;
/// `Sp(4,q)` is enumerated only over the prime field.
pub const MAX_SP4_Q: u64 = 3;

/// Which of the two groups `G_1(q) = Sp(2,q)`, `G_2(q) = Sp(4,q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Which {
    Sp2,
    Sp4,
}

impl Which {
    /// `n` in `Sp(2n,q)`.
    pub fn half_rank(self) -> u64 {
        match self {
            Which::Sp2 => 1,
            Which::Sp4 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Which::Sp2 => "sp2",
            Which::Sp4 => "sp4",
        }
    }
}

impl core::str::FromStr for Which {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sp2" => Ok(Which::Sp2),
            "sp4" => Ok(Which::Sp4),
            _ => Err(Error::domain(alloc::format!("unknown group {s:?}; expected sp2 or sp4"))),
        }
    }
}

/// `J = [[0, 1_n], [-1_n, 0]]`.
pub fn symplectic_form(ctx: &FieldCtx, n: usize) -> MatrixGF {
    let mut j = MatrixGF::zero(2 * n);
    for k in 0..n {
        j.set(k, k + n, ctx.one());
        j.set(k + n, k, ctx.from_int(-1));
    }
    j
}

/// Whether `ᵗw J w = J`.
pub fn is_symplectic(ctx: &FieldCtx, w: &MatrixGF) -> Result<bool> {
    let dim = w.dim();
    if !dim.is_multiple_of(2) {
        return Err(Error::domain(alloc::format!("dimension {dim} is odd")));
    }
    let j = symplectic_form(ctx, dim / 2);
    Ok(w.transpose().mul(ctx, &j).mul(ctx, w) == j)
}

/// An enumerated group with its trace histogram.
#[derive(Clone, Debug)]
pub struct GroupTable {
    which: Which,
    q: u64,
    /// Sorted; dropped when only the histogram is needed.
    elements: Option<Vec<MatrixGF>>,
    /// Number of elements with each trace, by field index.
    trace_hist: Vec<u64>,
}

impl GroupTable {
    fn build(ctx: &FieldCtx, which: Which, mut elements: Vec<MatrixGF>) -> Self {
        elements.sort_unstable();
        let mut trace_hist = vec![0u64; ctx.q() as usize];
        for w in &elements {
            trace_hist[w.trace(ctx).index()] += 1;
        }
        GroupTable {
            which,
            q: ctx.q(),
            elements: Some(elements),
            trace_hist,
        }
    }

    /// Wraps an externally supplied element list (for example a cache),
    /// checking membership, size and the histogram against the closed form.
    pub fn from_elements(ctx: &FieldCtx, which: Which, elements: Vec<MatrixGF>) -> Result<Self> {
        let dim = 2 * which.half_rank() as usize;
        for w in &elements {
            if w.dim() != dim || !is_symplectic(ctx, w)? {
                return Err(Error::invariant("element is symplectic", "ᵗwJw = J", "a non-member"));
            }
        }
        let table = GroupTable::build(ctx, which, elements);
        let expected = order_sp(which.half_rank(), ctx.q());
        if BigUint::from(table.order()) != expected {
            return Err(Error::invariant("group order", expected, table.order()));
        }
        if let Some(els) = &table.elements {
            if els.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invariant("elements are distinct", "no repeats", "a repeat"));
            }
        }
        check_hist_against_closed(ctx, &table)?;
        Ok(table)
    }

    pub fn which(&self) -> Which {
        self.which
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn order(&self) -> u64 {
        self.trace_hist.iter().sum()
    }

    pub fn trace_hist(&self) -> &[u64] {
        &self.trace_hist
    }

    pub fn elements(&self) -> Option<&[MatrixGF]> {
        self.elements.as_deref()
    }

    pub fn without_elements(mut self) -> Self {
        self.elements = None;
        self
    }

    /// Every trace value occurs.
    pub fn is_trace_surjective(&self) -> bool {
        self.trace_hist.iter().all(|&c| c > 0)
    }

    pub fn contains(&self, w: &MatrixGF) -> Option<bool> {
        self.elements.as_ref().map(|els| els.binary_search(w).is_ok())
    }
}

fn check_hist_against_closed(ctx: &FieldCtx, table: &GroupTable) -> Result<()> {
    let closed = trace_dist_closed(ctx, table.which)?;
    for (i, (got, want)) in table.trace_hist.iter().zip(&closed).enumerate() {
        if BigUint::from(*got) != *want {
            return Err(Error::invariant(
                alloc::format!("trace count at β index {i}"),
                want,
                got,
            ));
        }
    }
    Ok(())
}

/// All of `Sp(2,q)`: the 2×2 matrices of determinant one, in lexicographic order.
pub fn enumerate_sp2(ctx: &FieldCtx) -> Result<GroupTable> {
    if ctx.q() > MAX_SP2_Q {
        return Err(Error::unsupported(alloc::format!(
            "Sp(2,{}) enumeration is limited to q ≤ {MAX_SP2_Q}",
            ctx.q()
        )));
    }
    let els = ctx.enumerate_elements();
    let one = ctx.one();
    let mut elements = Vec::new();
    for &a in &els {
        for &b in &els {
            for &c in &els {
                let bc = ctx.mul(b, c);
                for &d in &els {
                    if ctx.sub(ctx.mul(a, d), bc) == one {
                        elements.push(MatrixGF::from_entries(2, vec![a, b, c, d])?);
                    }
                }
            }
        }
    }
    let table = GroupTable::build(ctx, Which::Sp2, elements);
    let expected = order_sp(1, ctx.q());
    if BigUint::from(table.order()) != expected {
        return Err(Error::invariant("|Sp(2,q)|", expected, table.order()));
    }
    Ok(table)
}

/// `ω(x, y) = Σ_k x_k y_{k+2} - x_{k+2} y_k` on `GF(q)^4`.
fn pairing4(ctx: &FieldCtx, x: &[FieldElement; 4], y: &[FieldElement; 4]) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    for k in 0..2 {
        acc = ctx.add(acc, ctx.mul(x[k], y[k + 2]));
        acc = ctx.sub(acc, ctx.mul(x[k + 2], y[k]));
    }
    acc
}

/// All of `Sp(4,q)` for `q = 3`.
///
/// Scans the `q^16` matrices column by column: the `(i,j)` entry of `ᵗwJw`
/// is the pairing of columns `i` and `j`, so each new column is tested
/// against the earlier ones and a branch is cut on the first failure.
pub fn enumerate_sp4(ctx: &FieldCtx) -> Result<GroupTable> {
    if ctx.q() > MAX_SP4_Q {
        return Err(Error::unsupported(alloc::format!(
            "Sp(4,{}) has {} elements; only q = 3 is enumerated, use the closed-form counts",
            ctx.q(),
            order_sp(2, ctx.q())
        )));
    }
    let els = ctx.enumerate_elements();
    let mut vectors = Vec::new();
    for &a in &els {
        for &b in &els {
            for &c in &els {
                for &d in &els {
                    vectors.push([a, b, c, d]);
                }
            }
        }
    }
    let nv = vectors.len();
    // pair[i * nv + j] = ω(v_i, v_j) as a field index
    let mut pair = vec![0u8; nv * nv];
    for (i, x) in vectors.iter().enumerate() {
        for (j, y) in vectors.iter().enumerate() {
            pair[i * nv + j] = pairing4(ctx, x, y).index() as u8;
        }
    }
    let w = |i: usize, j: usize| pair[i * nv + j];
    let one = ctx.one().index() as u8;

    let mut elements = Vec::new();
    for c0 in 0..nv {
        for c1 in 0..nv {
            if w(c0, c1) != 0 {
                continue;
            }
            for c2 in 0..nv {
                if w(c0, c2) != one || w(c1, c2) != 0 {
                    continue;
                }
                for c3 in 0..nv {
                    if w(c0, c3) != 0 || w(c1, c3) != one || w(c2, c3) != 0 {
                        continue;
                    }
                    let cols = [&vectors[c0], &vectors[c1], &vectors[c2], &vectors[c3]];
                    let mut entries = Vec::with_capacity(16);
                    for row in 0..4 {
                        for col in cols {
                            entries.push(col[row]);
                        }
                    }
                    elements.push(MatrixGF::from_entries(4, entries)?);
                }
            }
        }
    }
    let table = GroupTable::build(ctx, Which::Sp4, elements);
    let expected = order_sp(2, ctx.q());
    if BigUint::from(table.order()) != expected {
        return Err(Error::invariant("|Sp(4,q)|", expected, table.order()));
    }
    Ok(table)
}

pub fn enumerate(ctx: &FieldCtx, which: Which) -> Result<GroupTable> {
    match which {
        Which::Sp2 => enumerate_sp2(ctx),
        Which::Sp4 => enumerate_sp4(ctx),
    }
}

/// `|Sp(2n,q)| = q^(n²) Π_{j=1..n} (q^(2j) - 1)`.
pub fn order_sp(n: u64, q: u64) -> BigUint {
    (1..=n).fold(pow_u(q, n * n), |acc, j| acc * (pow_u(q, 2 * j) - 1u32))
}

/// One double coset `P σ_r P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruhatRow {
    pub r: u64,
    /// `|A_r|`.
    pub stabilizer: BigUint,
    /// `|A_r \ P|`.
    pub cosets: BigUint,
    /// `|P|² / |A_r|`, the size of `P σ_r P`.
    pub double_coset: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruhatCounts {
    pub n: u64,
    pub q: u64,
    pub gl_order: BigUint,
    pub parabolic: BigUint,
    pub rows: Vec<BruhatRow>,
    pub total: BigUint,
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Order bookkeeping for `Sp(2n,q) = ⊔_r P σ_r P`.
///
/// Each row is computed twice, from `|A_r|` and `|P|` and from the closed
/// coset formulas, and the double cosets must add up to `|Sp(2n,q)|`.
pub fn bruhat_counts(n: u64, q: u64) -> Result<BruhatCounts> {
    if n == 0 {
        return Err(Error::domain("Bruhat counts need n ≥ 1"));
    }
    let g = |k: u64| gl_order(k, q);
    let parabolic = pow_u(q, choose2(n + 1)) * g(n);
    let prod_qj: BigUint = (1..=n).fold(BigUint::one(), |acc, j| acc * (pow_u(q, j) - 1u32));
    let mut rows = Vec::new();
    let mut total = BigUint::zero();
    for r in 0..=n {
        let exp = choose2(n + 1) as i64 + (r as i64) * (2 * n as i64 - 3 * r as i64 - 1) / 2;
        if exp < 0 {
            return Err(Error::invariant("|A_r| exponent is nonnegative", "≥ 0", exp));
        }
        let stabilizer = g(r) * g(n - r) * pow_u(q, exp as u64);

        let (cosets, rem) = parabolic.div_rem(&stabilizer);
        if !rem.is_zero() {
            return Err(Error::invariant("|A_r| divides |P|", 0u32, rem));
        }
        let cosets_closed = pow_u(q, choose2(r + 1)) * q_binomial(n, r, q);
        if cosets != cosets_closed {
            return Err(Error::invariant(alloc::format!("|A_{r}\\P|"), cosets_closed, cosets));
        }

        let double_coset = &parabolic * &cosets;
        let closed = pow_u(q, n * n)
            * q_binomial(n, r, q)
            * pow_u(q, choose2(r))
            * pow_u(q, r)
            * &prod_qj;
        if double_coset != closed {
            return Err(Error::invariant(alloc::format!("|P|²/|A_{r}|"), closed, double_coset));
        }
        total += &double_coset;
        rows.push(BruhatRow {
            r,
            stabilizer,
            cosets,
            double_coset,
        });
    }
    let order = order_sp(n, q);
    if total != order {
        return Err(Error::invariant("Σ_r |P σ_r P| = |Sp(2n,q)|", order, total));
    }
    Ok(BruhatCounts {
        n,
        q,
        gl_order: g(n),
        parabolic,
        rows,
        total,
    })
}

/// Number of nonsingular alternating `r×r` matrices over `GF(q)`.
pub fn alt_count(r: u64, q: u64) -> BigUint {
    if r % 2 == 1 {
        return BigUint::zero();
    }
    let half = r / 2;
    let mut acc = pow_u(q, half * half.saturating_sub(1));
    for j in 1..=half {
        acc *= pow_u(q, 2 * j - 1) - 1u32;
    }
    acc
}

/// Same count by enumerating every alternating matrix (zero diagonal, `ᵗA = -A`).
pub fn alt_count_exhaustive(ctx: &FieldCtx, r: usize) -> Result<u64> {
    if r == 0 {
        return Ok(1);
    }
    let slots = r * (r - 1) / 2;
    let q = ctx.q() as usize;
    let total = q
        .checked_pow(slots as u32)
        .filter(|&t| t <= 10_000_000)
        .ok_or_else(|| Error::unsupported("alternating-matrix space too large"))?;
    let mut count = 0;
    for mut idx in 0..total {
        let mut m = MatrixGF::zero(r);
        for i in 0..r {
            for j in i + 1..r {
                let v = ctx.element(idx % q);
                idx /= q;
                m.set(i, j, v);
                m.set(j, i, ctx.neg(v));
            }
        }
        if !m.det(ctx).is_zero() {
            count += 1;
        }
    }
    Ok(count)
}

/// `Σ_{w∈G_i(q)} λ(a Tr w)` as predicted by the closed Gauss sums:
/// `q K(λ;a²)` for `Sp(2,q)` and `q⁴(K(λ;a²)² + q³ - q)` for `Sp(4,q)`.
pub fn gauss_sum_expected(
    ctx: &FieldCtx,
    which: Which,
    kt: &KloostermanTable,
    a: FieldElement,
) -> Result<BigInt> {
    if a.is_zero() {
        return Err(Error::domain("Gauss sum needs a nonzero a"));
    }
    let q = BigInt::from(ctx.q());
    let k = kt.at_square(ctx, a);
    Ok(match which {
        Which::Sp2 => q * k,
        Which::Sp4 => q.pow(4) * (k * k + q.pow(3) - &q),
    })
}

/// `Σ_β count(β) λ(aβ)` over an arbitrary trace distribution.
pub fn gauss_sum_from_distribution(
    ctx: &FieldCtx,
    dist: &[BigUint],
    a: FieldElement,
) -> Eisenstein {
    let mut acc = Eisenstein::zero();
    for beta in ctx.elements() {
        let n = &dist[beta.index()];
        if !n.is_zero() {
            acc.add_scaled_root(&BigInt::from(n.clone()), lambda(ctx, ctx.mul(a, beta)));
        }
    }
    acc
}

/// `Σ_{w∈G} λ(a Tr w)` from the enumerated trace histogram, checked
/// against the closed Gauss sum for the group.
pub fn gauss_sum(ctx: &FieldCtx, table: &GroupTable, a: FieldElement) -> Result<Eisenstein> {
    let kt = KloostermanTable::new(ctx)?;
    gauss_sum_with(ctx, table, &kt, a)
}

pub fn gauss_sum_with(
    ctx: &FieldCtx,
    table: &GroupTable,
    kt: &KloostermanTable,
    a: FieldElement,
) -> Result<Eisenstein> {
    let dist: Vec<BigUint> = table.trace_hist.iter().map(|&c| BigUint::from(c)).collect();
    let value = gauss_sum_from_distribution(ctx, &dist, a);
    let expected = Eisenstein::from_int(gauss_sum_expected(ctx, table.which, kt, a)?);
    if value != expected {
        return Err(Error::invariant("Gauss sum over the group", expected, value));
    }
    Ok(value)
}

/// `Σ_{w∈Sp(2n,q)} λ(Tr w)` from the Bruhat decomposition,
/// `q^C(n+1,2) Σ_r |A_r\P| q^(r(n-r)) a_r K_GL(n-r,q)(λ;1)`, for `n ≤ 2`.
pub fn gauss_sum_bruhat(ctx: &FieldCtx, n: u64) -> Result<BigInt> {
    if !(1..=2).contains(&n) {
        return Err(Error::unsupported("Bruhat Gauss sums are evaluated for n ∈ {1, 2} only"));
    }
    let q = ctx.q();
    let counts = bruhat_counts(n, q)?;
    let mut sum = BigInt::zero();
    for row in &counts.rows {
        let r = row.r;
        let kgl = charsum::kgl_recursive(ctx, (n - r) as u32, ctx.one())?;
        sum += BigInt::from(&row.cosets * pow_u(q, r * (n - r)) * alt_count(r, q)) * kgl;
    }
    let value = BigInt::from(pow_u(q, choose2(n + 1))) * sum;

    // the same sum restricted to even r, with |A_r\P| a_r written out
    let mut even = BigInt::zero();
    for r in (0..=n).step_by(2) {
        let mut term = BigInt::from(q_binomial(n, r, q))
            * BigInt::from(pow_u(q, r * n - r * r / 4));
        for j in 1..=r / 2 {
            term *= BigInt::from(pow_u(q, 2 * j - 1) - 1u32);
        }
        even += term * charsum::kgl_recursive(ctx, (n - r) as u32, ctx.one())?;
    }
    let even = BigInt::from(pow_u(q, choose2(n + 1))) * even;
    if even != value {
        return Err(Error::invariant("even-r Bruhat Gauss sum", value, even));
    }
    Ok(value)
}

/// `n_1(β)` or `n_2(β)`, the number of group elements with trace `β`,
/// from the closed formulas; indexed by field index.
pub fn trace_dist_closed(ctx: &FieldCtx, which: Which) -> Result<Vec<BigUint>> {
    let q = BigUint::from(ctx.q());
    let dist: Vec<BigUint> = match which {
        Which::Sp2 => {
            let d1 = charsum::delta_distribution(ctx, 1)?;
            let one = ctx.one();
            ctx.elements()
                .map(|beta| {
                    let disc = ctx.sub(ctx.mul(beta, beta), one);
                    let q2 = &q * &q;
                    let by_cases = if disc.is_zero() {
                        q2.clone()
                    } else if ctx.is_square(disc) {
                        &q2 + &q
                    } else {
                        &q2 - &q
                    };
                    let by_delta = &q * &d1[beta.index()] + &q2 - &q;
                    if by_cases != by_delta {
                        return Err(Error::invariant("n_1(β) case split vs. δ(1,q;β)", by_delta, by_cases));
                    }
                    Ok(by_cases)
                })
                .collect::<Result<_>>()?
        }
        Which::Sp4 => {
            let d2 = charsum::delta_distribution(ctx, 2)?;
            let q = BigInt::from(ctx.q());
            let q4 = q.pow(4);
            ctx.elements()
                .map(|beta| {
                    let delta = BigInt::from(d2[beta.index()].clone());
                    let inner: BigInt = if beta.is_zero() {
                        delta + q.pow(5) - q.pow(2) - 3 * &q + 3u32
                    } else {
                        delta + q.pow(5) - q.pow(3) - q.pow(2) - 2 * &q + 3u32
                    };
                    (&q4 * inner)
                        .to_biguint()
                        .ok_or_else(|| Error::invariant("n_2(β) ≥ 0", "nonnegative", "negative"))
                })
                .collect::<Result<_>>()?
        }
    };
    let total: BigUint = dist.iter().sum();
    let order = order_sp(which.half_rank(), ctx.q());
    if total != order {
        return Err(Error::invariant("Σ_β n_i(β) = |G_i(q)|", order, total));
    }
    Ok(dist)
}

/// `q N(β) = |G| + Σ_{a≠0} λ(-aβ) Σ_w λ(a Tr w)` at every `β`, evaluated in `Z[ω]`.
pub fn check_trace_counting(ctx: &FieldCtx, table: &GroupTable) -> Result<bool> {
    let kt = KloostermanTable::new(ctx)?;
    let gauss: Vec<(FieldElement, Eisenstein)> = ctx
        .units()
        .map(|a| gauss_sum_with(ctx, table, &kt, a).map(|g| (a, g)))
        .collect::<Result<_>>()?;
    let order = BigInt::from(table.order());
    for beta in ctx.elements() {
        let mut rhs = Eisenstein::from_int(order.clone());
        for (a, g) in &gauss {
            rhs += &g.rotate(lambda(ctx, ctx.neg(ctx.mul(*a, beta))));
        }
        let Some(rhs) = rhs.to_integer() else {
            return Err(Error::invariant("trace counting sum is a rational integer", "b = 0", rhs));
        };
        let lhs = BigInt::from(ctx.q()) * BigInt::from(table.trace_hist[beta.index()]);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Products of the given index pairs must stay in the table.
pub fn closure_spot_check(
    ctx: &FieldCtx,
    table: &GroupTable,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Result<bool> {
    let els = table
        .elements()
        .ok_or_else(|| Error::domain("closure check needs the element list"))?;
    for (i, j) in pairs {
        let prod = els[i % els.len()].mul(ctx, &els[j % els.len()]);
        if els.binary_search(&prod).is_err() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldCtx {
        FieldCtx::new(1, None).unwrap()
    }

    fn m(ctx: &FieldCtx, n: usize, v: &[i64]) -> MatrixGF {
        MatrixGF::from_entries(n, v.iter().map(|&x| ctx.from_int(x)).collect()).unwrap()
    }

    #[test]
    fn membership_examples() {
        let ctx = f3();
        assert!(is_symplectic(&ctx, &MatrixGF::identity(&ctx, 2)).unwrap());
        assert!(!is_symplectic(&ctx, &m(&ctx, 2, &[1, 0, 0, 2])).unwrap());
        assert!(is_symplectic(&ctx, &MatrixGF::identity(&ctx, 3)).is_err());
        // σ_1 for n = 2
        let sigma1 = m(&ctx, 4, &[0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1]);
        assert!(is_symplectic(&ctx, &sigma1).unwrap());
        // the trace-α witness for n = 2
        let witness = m(&ctx, 4, &[2, 0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, 0]);
        assert!(is_symplectic(&ctx, &witness).unwrap());
        assert_eq!(witness.trace(&ctx), ctx.from_int(2));
    }

    #[test]
    fn det_one_is_symplectic_in_rank_two() {
        let ctx = f3();
        for w in MatrixGF::all(&ctx, 2) {
            if w.det(&ctx).is_zero() {
                continue;
            }
            assert_eq!(w.det(&ctx) == ctx.one(), is_symplectic(&ctx, &w).unwrap());
        }
    }

    #[test]
    fn sp2_q3_table() {
        let ctx = f3();
        let t = enumerate_sp2(&ctx).unwrap();
        assert_eq!(t.order(), 24);
        assert_eq!(t.trace_hist(), &[6, 9, 9]);
        assert!(t.is_trace_surjective());
        let g1 = gauss_sum(&ctx, &t, ctx.one()).unwrap();
        assert_eq!(g1, Eisenstein::from_int(-3));
        let g2 = gauss_sum(&ctx, &t, ctx.from_int(2)).unwrap();
        assert_eq!(g2, Eisenstein::from_int(-3));
        assert!(check_trace_counting(&ctx, &t).unwrap());
    }

    #[test]
    fn orders() {
        assert_eq!(order_sp(1, 3), BigUint::from(24u32));
        assert_eq!(order_sp(2, 3), BigUint::from(51840u32));
        assert_eq!(order_sp(2, 9), BigUint::from(3_443_212_800u64));
    }

    #[test]
    fn bruhat_small() {
        let b = bruhat_counts(1, 3).unwrap();
        let sizes: Vec<_> = b.rows.iter().map(|r| r.double_coset.clone()).collect();
        assert_eq!(sizes, [6u32, 18].map(BigUint::from));
        assert_eq!(bruhat_counts(2, 3).unwrap().total, BigUint::from(51840u32));
        for n in 1..=4 {
            for q in [3, 9, 27] {
                bruhat_counts(n, q).unwrap();
            }
        }
    }

    #[test]
    fn alternating_counts() {
        assert_eq!(alt_count(0, 3), BigUint::one());
        assert_eq!(alt_count(1, 3), BigUint::zero());
        assert_eq!(alt_count(2, 3), BigUint::from(2u32));
        let ctx = f3();
        for r in 0..=4 {
            assert_eq!(BigUint::from(alt_count_exhaustive(&ctx, r).unwrap()), alt_count(r as u64, 3));
        }
        let f9 = FieldCtx::new(2, None).unwrap();
        for r in 0..=3 {
            assert_eq!(BigUint::from(alt_count_exhaustive(&f9, r).unwrap()), alt_count(r as u64, 9));
        }
    }

    #[test]
    fn closed_trace_distributions_q3() {
        let ctx = f3();
        let n1 = trace_dist_closed(&ctx, Which::Sp2).unwrap();
        assert_eq!(n1, [6u32, 9, 9].map(BigUint::from));
        let n2 = trace_dist_closed(&ctx, Which::Sp4).unwrap();
        assert_eq!(n2, [18630u32, 16605, 16605].map(BigUint::from));
    }

    #[test]
    fn bruhat_gauss_sums_match_closed_forms() {
        for r in 1..=3 {
            let ctx = FieldCtx::new(r, None).unwrap();
            let kt = KloostermanTable::new(&ctx).unwrap();
            let one = ctx.one();
            assert_eq!(
                gauss_sum_bruhat(&ctx, 1).unwrap(),
                gauss_sum_expected(&ctx, Which::Sp2, &kt, one).unwrap()
            );
            assert_eq!(
                gauss_sum_bruhat(&ctx, 2).unwrap(),
                gauss_sum_expected(&ctx, Which::Sp4, &kt, one).unwrap()
            );
        }
    }

    #[test]
    fn sp4_beyond_prime_field_is_refused() {
        let f9 = FieldCtx::new(2, None).unwrap();
        assert!(matches!(enumerate_sp4(&f9), Err(Error::UnsupportedScale(_))));
    }
}
