//! Arithmetic in `GF(3^r)` in a polynomial basis.
//!
//! Elements are dense coefficient vectors over GF(3), constant term first.
//! The integer index of an element is `Σ c_i 3^i`; enumeration follows the
//! index, which is also the element ordering used everywhere else in the
//! crate (matrix ordering, histogram layout, report keys).

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 8;

/// An element of `GF(3^r)`. Coefficients past `r` are always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct FieldElement {
    coeffs: [u8; MAX_DEGREE],
}

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement {
        coeffs: [0; MAX_DEGREE],
    };

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0; MAX_DEGREE]
    }

    /// Base-3 index `Σ c_i 3^i`.
    pub fn index(&self) -> usize {
        self.coeffs
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * 3 + c as usize)
    }

    /// All `MAX_DEGREE` coefficients; use [`FieldCtx::coeffs`] for the `r` significant ones.
    pub fn raw_coeffs(&self) -> &[u8; MAX_DEGREE] {
        &self.coeffs
    }

    /// The constant coefficient, which is the element itself when it lies in GF(3).
    pub fn constant(&self) -> u8 {
        self.coeffs[0]
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The field `GF(3^r) = GF(3)[x]/(modulus)`. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCtx {
    r: usize,
    /// Monic, `r + 1` coefficients, constant term first.
    modulus: Vec<u8>,
    q: u64,
    /// Absolute trace of each element, by index.
    traces: Vec<u8>,
}

#[inline]
fn add3(a: u8, b: u8) -> u8 {
    let s = a + b;
    if s >= 3 {
        s - 3
    } else {
        s
    }
}

#[inline]
fn neg3(a: u8) -> u8 {
    if a == 0 {
        0
    } else {
        3 - a
    }
}

/// Remainder of `num` modulo monic `den` over GF(3). Both constant term first.
fn poly_rem(num: &[u8], den: &[u8]) -> Vec<u8> {
    let mut rem = num.to_vec();
    let d = den.len() - 1;
    while rem.len() > d {
        let top = rem.len() - 1;
        let c = rem[top];
        if c != 0 {
            for (i, &m) in den.iter().enumerate() {
                let k = top - d + i;
                rem[k] = (rem[k] + 3 * 3 - c * m % 3) % 3;
            }
        }
        rem.pop();
    }
    rem
}

/// Monic polynomials of the given degree, in index order of their lower coefficients.
fn monic_polys(degree: usize) -> impl Iterator<Item = Vec<u8>> {
    let count = 3usize.pow(degree as u32);
    (0..count).map(move |mut idx| {
        let mut p = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            p.push((idx % 3) as u8);
            idx /= 3;
        }
        p.push(1);
        p
    })
}

/// Smallest monic factor of degree `1..=deg/2`, by trial division.
fn find_factor(modulus: &[u8]) -> Option<Vec<u8>> {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        for f in monic_polys(d) {
            if poly_rem(modulus, &f).iter().all(|&c| c == 0) {
                return Some(f);
            }
        }
    }
    None
}

impl FieldCtx {
    /// Builds `GF(3^r)`. Without a modulus, uses the first monic irreducible
    /// of degree `r` in index order of its lower coefficients.
    pub fn new(r: usize, modulus: Option<&[u8]>) -> Result<Self> {
        if r == 0 || r > MAX_DEGREE {
            return Err(Error::InvalidDegree(r));
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != r + 1 {
                    return Err(Error::MalformedModulus(alloc::format!(
                        "expected {} coefficients for degree {r}, got {}",
                        r + 1,
                        m.len()
                    )));
                }
                if let Some(&c) = m.iter().find(|&&c| c > 2) {
                    return Err(Error::MalformedModulus(alloc::format!(
                        "coefficient {c} is not in {{0,1,2}}"
                    )));
                }
                if m[r] != 1 {
                    return Err(Error::MalformedModulus("leading coefficient must be 1".into()));
                }
                if let Some(factor) = find_factor(m) {
                    return Err(Error::ReducibleModulus { factor });
                }
                m.to_vec()
            }
            None => monic_polys(r)
                .find(|p| find_factor(p).is_none())
                .expect("an irreducible polynomial exists in every degree"),
        };
        let q = 3u64.pow(r as u32);
        let mut ctx = FieldCtx {
            r,
            modulus,
            q,
            traces: Vec::new(),
        };
        let traces = (0..q as usize)
            .map(|i| {
                let t = ctx.trace_by_frobenius(ctx.element(i));
                debug_assert!(t.index() < 3, "trace must land in GF(3)");
                t.constant()
            })
            .collect();
        ctx.traces = traces;
        Ok(ctx)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// Modulus as a comma-separated list, constant term first (`"1,0,1"` for `x²+1`).
    pub fn modulus_string(&self) -> String {
        coeff_list(&self.modulus)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Image of an integer under `Z → GF(3) ⊂ GF(q)`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let mut e = FieldElement::ZERO;
        e.coeffs[0] = n.rem_euclid(3) as u8;
        e
    }

    /// The class of `x` modulo the modulus.
    pub fn x(&self) -> FieldElement {
        if self.r == 1 {
            // x ≡ -modulus[0]
            self.from_int(-(self.modulus[0] as i64))
        } else {
            let mut e = FieldElement::ZERO;
            e.coeffs[1] = 1;
            e
        }
    }

    /// Element with the given base-3 index. Panics if `index >= q`.
    pub fn element(&self, index: usize) -> FieldElement {
        assert!((index as u64) < self.q, "index {index} out of range for q = {}", self.q);
        let mut e = FieldElement::ZERO;
        let mut idx = index;
        for c in e.coeffs.iter_mut().take(self.r) {
            *c = (idx % 3) as u8;
            idx /= 3;
        }
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u8]) -> Result<FieldElement> {
        if coeffs.len() > self.r {
            return Err(Error::domain(alloc::format!(
                "{} coefficients given for a degree-{} field",
                coeffs.len(),
                self.r
            )));
        }
        let mut e = FieldElement::ZERO;
        for (dst, &c) in e.coeffs.iter_mut().zip(coeffs) {
            if c > 2 {
                return Err(Error::domain(alloc::format!("coefficient {c} is not in {{0,1,2}}")));
            }
            *dst = c;
        }
        Ok(e)
    }

    /// The `r` significant coefficients.
    pub fn coeffs<'a>(&self, x: &'a FieldElement) -> &'a [u8] {
        &x.coeffs[..self.r]
    }

    pub fn coeff_string(&self, x: &FieldElement) -> String {
        coeff_list(self.coeffs(x))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let mut out = FieldElement::ZERO;
        for i in 0..self.r {
            out.coeffs[i] = add3(a.coeffs[i], b.coeffs[i]);
        }
        out
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let mut out = FieldElement::ZERO;
        for i in 0..self.r {
            out.coeffs[i] = neg3(a.coeffs[i]);
        }
        out
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// Multiplication by an element of GF(3).
    pub fn scale(&self, k: u8, a: FieldElement) -> FieldElement {
        let k = k % 3;
        let mut out = FieldElement::ZERO;
        for i in 0..self.r {
            out.coeffs[i] = (a.coeffs[i] * k) % 3;
        }
        out
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let r = self.r;
        let mut prod = [0u8; 2 * MAX_DEGREE - 1];
        for i in 0..r {
            let ai = a.coeffs[i];
            if ai == 0 {
                continue;
            }
            for j in 0..r {
                prod[i + j] = (prod[i + j] + ai * b.coeffs[j]) % 3;
            }
        }
        for top in (r..2 * r - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            // x^top = x^(top-r) * x^r and x^r = -(lower modulus terms)
            for i in 0..r {
                let k = top - r + i;
                prod[k] = (prod[k] + 3 * 3 - c * self.modulus[i]) % 3;
            }
            prod[top] = 0;
        }
        let mut out = FieldElement::ZERO;
        out.coeffs[..r].copy_from_slice(&prod[..r]);
        out
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::domain("inverse of zero"));
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// `tr(x) = x + x^3 + ... + x^(3^(r-1))`, computed in the field.
    fn trace_by_frobenius(&self, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut term = x;
        for _ in 0..self.r {
            acc = self.add(acc, term);
            term = self.pow(term, 3);
        }
        acc
    }

    /// Absolute trace to GF(3), as `0`, `1` or `2`.
    #[inline]
    pub fn trace(&self, x: FieldElement) -> u8 {
        self.traces[x.index()]
    }

    /// Euler's criterion; zero counts as a square.
    pub fn is_square(&self, x: FieldElement) -> bool {
        x.is_zero() || self.pow(x, (self.q - 1) / 2) == self.one()
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q as usize).map(move |i| self.element(i))
    }

    /// The `q - 1` nonzero elements in index order.
    pub fn units(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q as usize).map(move |i| self.element(i))
    }

    pub fn enumerate_elements(&self) -> Vec<FieldElement> {
        self.elements().collect()
    }

    pub fn enumerate_units(&self) -> Vec<FieldElement> {
        self.units().collect()
    }
}

fn coeff_list(c: &[u8]) -> String {
    let mut s = String::new();
    for (i, v) in c.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{v}");
    }
    s
}

/// Parses `"1,0,1"` into coefficients, constant term first.
pub fn parse_coeff_list(s: &str) -> Result<Vec<u8>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u8>()
                .map_err(|_| Error::MalformedModulus(alloc::format!("cannot parse coefficient {t:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldCtx {
        FieldCtx::new(2, Some(&[1, 0, 1])).unwrap()
    }

    #[test]
    fn prime_field_default_modulus_is_x() {
        let ctx = FieldCtx::new(1, None).unwrap();
        assert_eq!(ctx.q(), 3);
        assert_eq!(ctx.modulus(), &[0, 1]);
    }

    #[test]
    fn default_moduli_are_first_irreducibles() {
        assert_eq!(FieldCtx::new(2, None).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FieldCtx::new(3, None).unwrap().modulus(), &[1, 2, 0, 1]);
    }

    #[test]
    fn rejects_reducible_modulus_with_factor() {
        let err = FieldCtx::new(2, Some(&[2, 0, 1])).unwrap_err();
        // x^2 + 2 = (x + 1)(x + 2); x + 1 is found first
        assert_eq!(err, Error::ReducibleModulus { factor: alloc::vec![1, 1] });
    }

    #[test]
    fn rejects_malformed_modulus() {
        assert!(matches!(FieldCtx::new(2, Some(&[1, 0, 2])), Err(Error::MalformedModulus(_))));
        assert!(matches!(FieldCtx::new(2, Some(&[1, 1])), Err(Error::MalformedModulus(_))));
        assert!(matches!(FieldCtx::new(2, Some(&[1, 5, 1])), Err(Error::MalformedModulus(_))));
        assert_eq!(FieldCtx::new(0, None), Err(Error::InvalidDegree(0)));
        assert_eq!(FieldCtx::new(9, None), Err(Error::InvalidDegree(9)));
    }

    #[test]
    fn prime_field_basics() {
        let ctx = FieldCtx::new(1, None).unwrap();
        let (one, two) = (ctx.from_int(1), ctx.from_int(2));
        assert_eq!(ctx.inv(two).unwrap(), two);
        assert_eq!(ctx.add(one, two), ctx.zero());
        assert!(ctx.inv(ctx.zero()).is_err());
        assert_eq!(ctx.trace(two), 2);
        assert!(!ctx.is_square(two));
        assert!(ctx.is_square(one));
    }

    #[test]
    fn gf9_examples() {
        let ctx = f9();
        let x = ctx.x();
        assert_eq!(ctx.mul(x, x), ctx.from_int(2));
        assert_eq!(ctx.trace(x), 0);
        assert_eq!(ctx.trace(ctx.one()), 2);
        assert_eq!(ctx.units().filter(|&u| ctx.is_square(u)).count(), 4);
    }

    #[test]
    fn enumeration_sizes_and_order() {
        let ctx = FieldCtx::new(1, None).unwrap();
        let els: Vec<usize> = ctx.elements().map(|e| e.index()).collect();
        assert_eq!(els, [0, 1, 2]);
        let f9 = f9();
        assert_eq!(f9.enumerate_elements().len(), 9);
        assert_eq!(f9.enumerate_units().len(), 8);
        let f27 = FieldCtx::new(3, None).unwrap();
        let all = f27.enumerate_elements();
        assert_eq!(all.len(), 27);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn inverse_and_frobenius_invariance() {
        for r in 1..=3 {
            let ctx = FieldCtx::new(r, None).unwrap();
            for a in ctx.units() {
                assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), ctx.one());
            }
            for a in ctx.elements() {
                assert_eq!(ctx.trace(ctx.pow(a, 3)), ctx.trace(a));
            }
        }
    }

    #[test]
    fn exhaustive_ring_axioms_small_fields() {
        for r in 1..=2 {
            let ctx = FieldCtx::new(r, None).unwrap();
            for a in ctx.elements() {
                for b in ctx.elements() {
                    assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                    for c in ctx.elements() {
                        assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                        assert_eq!(
                            ctx.mul(a, ctx.add(b, c)),
                            ctx.add(ctx.mul(a, b), ctx.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn trace_functional_is_balanced() {
        for r in 1..=3 {
            let ctx = FieldCtx::new(r, None).unwrap();
            for a in ctx.units() {
                let mut tally = [0u64; 3];
                for x in ctx.elements() {
                    tally[ctx.trace(ctx.mul(a, x)) as usize] += 1;
                }
                assert_eq!(tally, [ctx.q() / 3; 3]);
            }
        }
    }

    #[test]
    fn is_square_matches_squaring_table() {
        for r in 1..=3 {
            let ctx = FieldCtx::new(r, None).unwrap();
            let mut table = alloc::vec![false; ctx.q() as usize];
            for y in ctx.elements() {
                table[ctx.mul(y, y).index()] = true;
            }
            for x in ctx.elements() {
                assert_eq!(ctx.is_square(x), table[x.index()]);
            }
        }
    }

    #[test]
    fn parses_coefficient_lists() {
        assert_eq!(parse_coeff_list("1,0,1").unwrap(), [1, 0, 1]);
        assert!(parse_coeff_list("1,a").is_err());
        assert_eq!(f9().modulus_string(), "1,0,1");
    }
}
