use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// Exact rational coordinate of a value-group element.
pub type Coord = Ratio<i64>;

/// Element of the value group `Λ ∪ {0}`, stored additively as a vector in
/// lex-ordered `Q^r`.
///
/// The stored order is the additive one: `v(x) <= v(y)` means `|x| >= |y|`.
/// `bottom` is the valuation of zero (additively `+∞`), which sits above every
/// other element here and below everything in the multiplicative reading.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Val {
    coords: Vec<Coord>,
    bottom: bool,
}

impl Val {
    pub fn new(coords: Vec<Coord>) -> Self {
        assert!(!coords.is_empty(), "value group rank must be at least 1");
        Val {
            coords,
            bottom: false,
        }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Val::new(coords.iter().map(|&c| Coord::from_integer(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Val::new(vec![Coord::zero(); rank])
    }

    /// The valuation of `0`.
    pub fn bottom(rank: usize) -> Self {
        Val {
            coords: vec![Coord::zero(); rank],
            bottom: true,
        }
    }

    /// Unit vector `e_i`.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Val::zero(rank);
        v.coords[i] = Coord::from_integer(1);
        v
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_bottom(&self) -> bool {
        self.bottom
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn lead(&self) -> Coord {
        self.coords[0]
    }

    pub fn is_zero(&self) -> bool {
        !self.bottom && self.coords.iter().all(Zero::is_zero)
    }

    /// Strictly above zero in the additive order (`|x| < 1`).
    pub fn is_positive(&self) -> bool {
        self.bottom
            || self
                .coords
                .iter()
                .find(|c| !c.is_zero())
                .is_some_and(|c| c.is_positive())
    }

    pub fn all_integral(&self) -> bool {
        !self.bottom && self.coords.iter().all(|c| c.is_integer())
    }

    /// `n·self`.
    pub fn scale(&self, n: i64) -> Val {
        if self.bottom {
            assert!(n > 0, "cannot scale the bottom element by {n}");
            return self.clone();
        }
        Val::new(self.coords.iter().map(|c| c * n).collect())
    }

    pub fn halve(&self) -> Val {
        assert!(!self.bottom);
        Val::new(self.coords.iter().map(|c| c / 2).collect())
    }

    pub fn min(a: &Val, b: &Val) -> Val {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max(a: &Val, b: &Val) -> Val {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Integer coordinates as `i64`, panicking on fractions.
    pub fn int_coords(&self) -> Vec<i64> {
        self.coords
            .iter()
            .map(|c| {
                assert!(c.is_integer(), "non-integral coordinate {c}");
                c.to_integer()
            })
            .collect()
    }

    /// Coordinatewise floor.
    pub fn floor(&self) -> Val {
        Val::new(self.coords.iter().map(|c| c.floor()).collect())
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator_lcm(&self) -> i64 {
        self.coords.iter().fold(1, |acc, c| acc.lcm(c.denom()))
    }
}

/// `λ` is a microbe (topologically nilpotent) iff `nλ` eventually exceeds every
/// element of `Λ`. In lex `Q^r` this happens exactly when the leading
/// coordinate is positive.
pub fn is_top_nilpotent(v: &Val) -> Result<bool, super::FieldError> {
    if v.is_bottom() {
        return Err(super::FieldError::BottomValue);
    }
    Ok(v.lead().is_positive())
}

impl PartialOrd for Val {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Val {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.rank(), other.rank(), "rank mismatch");
        match (self.bottom, other.bottom) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => self.coords.cmp(&other.coords),
        }
    }
}

impl Add for &Val {
    type Output = Val;
    fn add(self, rhs: &Val) -> Val {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        if self.bottom || rhs.bottom {
            return Val::bottom(self.rank());
        }
        Val::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &Val {
    type Output = Val;
    fn sub(self, rhs: &Val) -> Val {
        assert!(!rhs.bottom, "cannot subtract the bottom element");
        if self.bottom {
            return self.clone();
        }
        Val::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &Val {
    type Output = Val;
    fn neg(self) -> Val {
        assert!(!self.bottom, "the bottom element has no inverse");
        Val::new(self.coords.iter().map(|c| -c).collect())
    }
}

impl Add for Val {
    type Output = Val;
    fn add(self, rhs: Val) -> Val {
        &self + &rhs
    }
}

impl Sub for Val {
    type Output = Val;
    fn sub(self, rhs: Val) -> Val {
        &self - &rhs
    }
}

impl Neg for Val {
    type Output = Val;
    fn neg(self) -> Val {
        -&self
    }
}

impl Mul<i64> for &Val {
    type Output = Val;
    fn mul(self, n: i64) -> Val {
        self.scale(n)
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bottom {
            return write!(f, "[inf]");
        }
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_and_bottom() {
        let a = Val::from_ints(&[0, 5]);
        let b = Val::from_ints(&[1, -100]);
        assert!(a < b);
        assert!(b < Val::bottom(2));
        assert!(Val::zero(2) < a);
    }

    #[test]
    fn microbe_rule() {
        assert!(is_top_nilpotent(&Val::from_ints(&[1])).unwrap());
        assert!(!is_top_nilpotent(&Val::from_ints(&[0, 5])).unwrap());
        assert!(is_top_nilpotent(&Val::from_ints(&[1, -100])).unwrap());
        assert!(is_top_nilpotent(&Val::bottom(1)).is_err());
    }

    #[test]
    fn microbe_rule_matches_brute_force() {
        // n·(0,5) never passes (1,0); n·(1,-100) passes (0,M) once n >= 1.
        let bound = Val::from_ints(&[1, 0]);
        assert!((1..1000).all(|n| Val::from_ints(&[0, 5]).scale(n) < bound));
        for m in [0, 10, 1000, 1_000_000] {
            let target = Val::from_ints(&[0, m]);
            assert!((1..5).any(|n| Val::from_ints(&[1, -100]).scale(n) > target));
        }
    }

    #[test]
    fn display() {
        assert_eq!(Val::from_ints(&[2]).to_string(), "[2]");
        assert_eq!(
            Val::new(vec![Coord::new(1, 2), Coord::from_integer(3)]).to_string(),
            "[1/2,3]"
        );
    }
}
