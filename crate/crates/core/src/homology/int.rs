//! Integers that stay machine-sized until they cannot.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    /// Only used for values outside the `i64` range.
    Big(BigInt),
}

impl Int {
    pub fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(x) => Int::Small(x),
            None => Int::Big(b),
        }
    }

    fn from_i128(x: i128) -> Int {
        match i64::try_from(x) {
            Ok(v) => Int::Small(v),
            Err(_) => Int::Big(BigInt::from(x)),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(x) => BigInt::from(*x),
            Int::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Int::Small(1) | Int::Small(-1))
    }

    pub fn abs(&self) -> Int {
        match self {
            Int::Small(x) => Int::from_i128((*x as i128).abs()),
            Int::Big(b) => Int::from_big(b.abs()),
        }
    }

    /// Compares absolute values.
    pub fn cmp_magnitude(&self, other: &Int) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.unsigned_abs().cmp(&b.unsigned_abs()),
            (Int::Small(_), Int::Big(_)) => Ordering::Less,
            (Int::Big(_), Int::Small(_)) => Ordering::Greater,
            (Int::Big(a), Int::Big(b)) => a.abs().cmp(&b.abs()),
        }
    }

    /// `floor(self / d)`.
    pub fn div_floor(&self, d: &Int) -> Int {
        match (self, d) {
            (Int::Small(a), Int::Small(b)) => Int::from_i128(Integer::div_floor(&(*a as i128), &(*b as i128))),
            _ => Int::from_big(self.to_big().div_floor(&d.to_big())),
        }
    }

    /// `self - q * y`.
    pub fn sub_mul(&self, q: &Int, y: &Int) -> Int {
        if let (Int::Small(a), Int::Small(q), Int::Small(y)) = (self, q, y) {
            if let Some(v) = (*q as i128).checked_mul(*y as i128).and_then(|p| (*a as i128).checked_sub(p)) {
                return Int::from_i128(v);
            }
        }
        Int::from_big(self.to_big() - q.to_big() * y.to_big())
    }

    pub fn divides(&self, other: &Int) -> bool {
        match (self, other) {
            (Int::Small(0), _) => other.is_zero(),
            (Int::Small(a), Int::Small(b)) => (*b as i128) % (*a as i128) == 0,
            _ => (other.to_big() % self.to_big()).is_zero(),
        }
    }

    pub fn ln(&self) -> f64 {
        match self {
            Int::Small(x) => (x.unsigned_abs() as f64).ln(),
            Int::Big(b) => {
                // ln of a big integer from its leading bits
                let bits = b.bits();
                let shift = bits.saturating_sub(52);
                let top = (b.abs() >> shift).to_f64().unwrap_or(f64::MAX);
                top.ln() + shift as f64 * std::f64::consts::LN_2
            }
        }
    }

    pub fn is_divisible_by(&self, p: u64) -> bool {
        match self {
            Int::Small(x) => x.unsigned_abs() % p == 0,
            Int::Big(b) => (b % BigInt::from(p)).is_zero(),
        }
    }
}

impl From<i64> for Int {
    fn from(x: i64) -> Self {
        Int::Small(x)
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(x) => write!(f, "{x}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

/// Turns a diagonal into invariant factors `d_1 | d_2 | ...` (absolute
/// values, units dropped).
pub fn invariant_factors(diagonal: &[Int]) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = diagonal.iter().map(|x| x.to_big().abs()).filter(|x| !x.is_one()).collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d.retain(|x| !x.is_one());
    d.sort();
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn promotes_on_overflow() {
        let big = Int::Small(i64::MAX).sub_mul(&Int::Small(-1), &Int::Small(1));
        assert!(matches!(big, Int::Big(_)));
        let back = big.sub_mul(&Int::Small(1), &Int::Small(1));
        assert_eq!(back, Int::Small(i64::MAX));
        assert_eq!(Int::Small(i64::MIN).abs().to_big(), -BigInt::from(i64::MIN));
    }

    #[test]
    fn floor_division_and_divisibility() {
        assert_eq!(Int::Small(-7).div_floor(&Int::Small(2)), Int::Small(-4));
        assert!(Int::Small(3).divides(&Int::Small(-9)));
        assert!(!Int::Small(3).divides(&Int::Small(10)));
    }

    #[test]
    fn invariant_factor_normalisation() {
        let d = invariant_factors(&[Int::Small(2), Int::Small(3), Int::Small(1), Int::Small(-4)]);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(12)]);
    }
}
