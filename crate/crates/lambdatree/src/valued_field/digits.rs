//! Digit expansions and their truncations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::poly::{mod_inverse, Coef, Poly, RatFn};
use super::value::{Coord, Val};

fn vp_int(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// `p`-adic valuation of a non-zero rational.
pub fn vp_rational(x: &BigRational, p: u64) -> i64 {
    vp_int(x.numer(), p) - vp_int(x.denom(), p)
}

/// `p^e` as a rational.
pub fn p_power(p: u64, e: i64) -> BigRational {
    let m: BigInt = Pow::pow(&BigInt::from(p), e.unsigned_abs());
    if e >= 0 {
        BigRational::from_integer(m)
    } else {
        BigRational::new(BigInt::one(), m)
    }
}

fn ceil_int(m: Coord) -> i64 {
    m.ceil().to_integer()
}

/// Keep the `p`-adic digits of `x` of valuation strictly below `m`.
pub fn truncate_padic(x: &BigRational, p: u64, m: Coord) -> BigRational {
    if x.is_zero() {
        return x.clone();
    }
    let v = vp_rational(x, p);
    let top = ceil_int(m);
    if v >= top {
        return BigRational::zero();
    }
    let pb = BigInt::from(p);
    let scale = p_power(p, v);
    let unit = x / &scale;
    let modulus: BigInt = Pow::pow(&pb, (top - v) as u64);
    let u = unit.numer() * mod_inverse(unit.denom(), &modulus);
    let digits = u.mod_floor(&modulus);
    BigRational::from_integer(digits) * scale
}

/// Truncate the `t`-expansion of `f`. With `p = None` keep the terms of
/// `t`-degree below `r[0]`; with `p = Some(p)` (rank-2 composite) also keep the
/// `p`-adic digits of the degree-`r[0]` coefficient below `r[1]`.
pub fn truncate_series(f: &RatFn, k: Coef, r: &Val, p: Option<u64>) -> RatFn {
    let o = f.ord().expect("non-zero");
    let r0 = r.coords()[0];
    // Highest t-degree that may survive.
    let top = match p {
        Some(_) if r0.is_integer() => r0.to_integer(),
        _ => ceil_int(r0) - 1,
    };
    if top < o {
        return RatFn::from_poly(Poly::zero());
    }
    let n = (top - o) as usize;
    let series = f.series(n, k);
    let mut terms: Vec<(i64, BigRational)> = Vec::new();
    for (i, c) in series.into_iter().enumerate() {
        let e = o + i as i64;
        let c = match p {
            Some(p) if e == top && r0.is_integer() => truncate_padic(&c, p, r.coords()[1]),
            _ => c,
        };
        if !c.is_zero() {
            terms.push((e, c));
        }
    }
    let shift = terms.iter().map(|(e, _)| *e).min().unwrap_or(0).min(0);
    let mut num = Poly::zero();
    for (e, c) in terms {
        num = num.add(&Poly::monomial(c, (e - shift) as usize), k);
    }
    let den = Poly::monomial(BigRational::one(), (-shift) as usize);
    RatFn::new(num, den, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn padic_valuation() {
        assert_eq!(vp_rational(&q(12, 1), 2), 2);
        assert_eq!(vp_rational(&q(5, 18), 3), -2);
    }

    #[test]
    fn padic_truncation() {
        let one = Coord::from_integer(1);
        assert_eq!(truncate_padic(&q(10, 1), 3, one), q(1, 1));
        // -1 = 2 + 2·3 + 2·9 + ...
        assert_eq!(
            truncate_padic(&q(-1, 1), 3, Coord::from_integer(3)),
            q(26, 1)
        );
        // 1/2 = 2 + 1·3 + 1·9 + ... in Z_3
        assert_eq!(truncate_padic(&q(1, 2), 3, Coord::from_integer(2)), q(5, 1));
        // digits of valuation -1 and 0 of 1/3 + 2
        assert_eq!(truncate_padic(&q(7, 3), 3, one), q(7, 3));
        assert_eq!(truncate_padic(&q(7, 3), 3, Coord::from_integer(0)), q(1, 3));
        assert_eq!(truncate_padic(&q(9, 1), 3, Coord::new(3, 2)), q(0, 1));
    }
}
