use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `a + bω` in `Z[ω]`, `ω² + ω + 1 = 0`. Always stored in this reduced form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Eisenstein {
    pub a: BigInt,
    pub b: BigInt,
}

impl Eisenstein {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Eisenstein {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Eisenstein::new(n, 0)
    }

    /// `ω^k`.
    pub fn omega_pow(k: u8) -> Self {
        match k % 3 {
            0 => Eisenstein::new(1, 0),
            1 => Eisenstein::new(0, 1),
            _ => Eisenstein::new(-1, -1),
        }
    }

    pub fn is_rational_integer(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_rational_integer().then(|| self.a.clone())
    }

    /// `self · ω^k`, by rotating coordinates.
    pub fn rotate(&self, k: u8) -> Self {
        match k % 3 {
            0 => self.clone(),
            // (a + bω)ω = aω + bω² = -b + (a - b)ω
            1 => Eisenstein::new(-&self.b, &self.a - &self.b),
            // (a + bω)ω² = aω² + b = (b - a) - aω
            _ => Eisenstein::new(&self.b - &self.a, -&self.a),
        }
    }

    /// Adds `n · ω^k` in place.
    pub fn add_scaled_root(&mut self, n: &BigInt, k: u8) {
        match k % 3 {
            0 => self.a += n,
            1 => self.b += n,
            _ => {
                self.a -= n;
                self.b -= n;
            }
        }
    }
}

impl Zero for Eisenstein {
    fn zero() -> Self {
        Eisenstein::new(0, 0)
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for Eisenstein {
    fn one() -> Self {
        Eisenstein::new(1, 0)
    }
}

impl Add for Eisenstein {
    type Output = Eisenstein;
    fn add(self, rhs: Eisenstein) -> Eisenstein {
        Eisenstein::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl AddAssign<&Eisenstein> for Eisenstein {
    fn add_assign(&mut self, rhs: &Eisenstein) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl Sub for Eisenstein {
    type Output = Eisenstein;
    fn sub(self, rhs: Eisenstein) -> Eisenstein {
        Eisenstein::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for Eisenstein {
    type Output = Eisenstein;
    fn neg(self) -> Eisenstein {
        Eisenstein::new(-self.a, -self.b)
    }
}

impl Mul for &Eisenstein {
    type Output = Eisenstein;
    fn mul(self, rhs: &Eisenstein) -> Eisenstein {
        // (a + bω)(c + dω) = ac + (ad + bc)ω + bdω² = (ac - bd) + (ad + bc - bd)ω
        let bd = &self.b * &rhs.b;
        Eisenstein::new(
            &self.a * &rhs.a - &bd,
            &self.a * &rhs.b + &self.b * &rhs.a - bd,
        )
    }
}

impl Mul for Eisenstein {
    type Output = Eisenstein;
    fn mul(self, rhs: Eisenstein) -> Eisenstein {
        &self * &rhs
    }
}

impl fmt::Display for Eisenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.b.sign() == num_bigint::Sign::Minus {
            write!(f, "{} - {}ω", self.a, -&self.b)
        } else {
            write!(f, "{} + {}ω", self.a, self.b)
        }
    }
}

/// Multiplicities of the exponents `0, 1, 2` in a sum of cube roots of unity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExponentCounts {
    pub n0: u64,
    pub n1: u64,
    pub n2: u64,
}

impl ExponentCounts {
    pub fn tally(&mut self, exponent: u8) {
        match exponent % 3 {
            0 => self.n0 += 1,
            1 => self.n1 += 1,
            _ => self.n2 += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.n0 + self.n1 + self.n2
    }

    /// `n0 + n1ω + n2ω² = (n0 - n2) + (n1 - n2)ω`.
    pub fn value(&self) -> Eisenstein {
        let n2 = BigInt::from(self.n2);
        Eisenstein::new(BigInt::from(self.n0) - &n2, BigInt::from(self.n1) - n2)
    }
}

impl Add for ExponentCounts {
    type Output = ExponentCounts;
    fn add(self, rhs: ExponentCounts) -> ExponentCounts {
        ExponentCounts {
            n0: self.n0 + rhs.n0,
            n1: self.n1 + rhs.n1,
            n2: self.n2 + rhs.n2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn omega_is_a_primitive_cube_root() {
        let w = Eisenstein::omega_pow(1);
        let w2 = &w * &w;
        assert_eq!(w2, Eisenstein::new(-1, -1));
        assert_eq!(&w2 * &w, Eisenstein::one());
        assert!((Eisenstein::one() + w + w2).is_zero());
    }

    #[test]
    fn exponent_counts_value() {
        let c = ExponentCounts { n0: 6, n1: 9, n2: 9 };
        assert_eq!(c.value(), Eisenstein::from_int(-3));
        assert!(ExponentCounts { n0: 1, n1: 1, n2: 0 }.value() == Eisenstein::new(1, 1));
    }

    #[test]
    fn display() {
        assert_eq!(alloc::format!("{}", Eisenstein::new(2, -3)), "2 - 3ω");
        assert_eq!(alloc::format!("{}", Eisenstein::from_int(-7)), "-7");
    }

    proptest! {
        #[test]
        fn rotate_matches_multiplication(a in -1000i64..1000, b in -1000i64..1000, k in 0u8..6) {
            let z = Eisenstein::new(a, b);
            prop_assert_eq!(z.rotate(k), &z * &Eisenstein::omega_pow(k));
        }

        #[test]
        fn add_scaled_root_matches(a in -100i64..100, b in -100i64..100, n in -100i64..100, k in 0u8..3) {
            let mut z = Eisenstein::new(a, b);
            let expected = z.clone() + &Eisenstein::from_int(n) * &Eisenstein::omega_pow(k);
            z.add_scaled_root(&BigInt::from(n), k);
            prop_assert_eq!(z, expected);
        }

        #[test]
        fn multiplication_commutes_and_associates(
            a in -50i64..50, b in -50i64..50, c in -50i64..50,
            d in -50i64..50, e in -50i64..50, f in -50i64..50,
        ) {
            let (x, y, z) = (Eisenstein::new(a, b), Eisenstein::new(c, d), Eisenstein::new(e, f));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        }
    }
}
