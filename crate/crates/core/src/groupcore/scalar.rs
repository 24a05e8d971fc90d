use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact scalar ring used for matrix entries: plain rationals or jets.
///
/// Methods take references so jets are not cloned on every operation.
/// Branching decisions (pivots, cell detection) only look at `value()`.
pub trait Scalar: Clone + Debug + Send + Sync + 'static {
    fn from_rat(r: Rat) -> Self;
    fn value(&self) -> &Rat;
    /// True when every coefficient vanishes, not only the constant term.
    fn is_exact_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, r: &Rat) -> Self;
    /// Multiplicative inverse, `None` when the constant term is zero.
    fn inv(&self) -> Option<Self>;

    fn szero() -> Self {
        Self::from_rat(<Rat as Zero>::zero())
    }
    fn sone() -> Self {
        Self::from_rat(<Rat as One>::one())
    }
    fn from_i64(n: i64) -> Self {
        Self::from_rat(rat(n))
    }
    fn value_is_zero(&self) -> bool {
        self.value().is_zero()
    }
    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }
    /// Integer power; negative exponents need an invertible value.
    fn powi(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::sone();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Some(acc)
    }
    /// Exact equality of all coefficients.
    fn exact_eq(&self, o: &Self) -> bool {
        self.sub(o).is_exact_zero()
    }
}

impl Scalar for Rat {
    fn from_rat(r: Rat) -> Self {
        r
    }
    fn value(&self) -> &Rat {
        self
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Rat) -> Self {
        self * r
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Rational square root when it exists (both numerator and denominator are
/// perfect squares); the non-negative root is returned.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Format a rational as "p/q" (or "p" for integers).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_squares() {
        assert_eq!(rat_sqrt(&frac(9, 4)), Some(frac(3, 2)));
        assert_eq!(rat_sqrt(&rat(2)), None);
        assert_eq!(rat_sqrt(&rat(-4)), None);
        assert_eq!(rat_sqrt(&rat(0)), Some(rat(0)));
    }

    #[test]
    fn powers() {
        let x = frac(2, 3);
        assert_eq!(x.powi(3).unwrap(), frac(8, 27));
        assert_eq!(x.powi(-2).unwrap(), frac(9, 4));
        assert_eq!(rat(0).powi(-1), None);
    }
}
