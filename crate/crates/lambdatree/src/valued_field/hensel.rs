//! Roots of monic quadratics by Newton iteration in the valuation topology.

use num_rational::BigRational;
use num_traits::Zero;

use super::{is_top_nilpotent, Elem, Field, FieldError, Kind, Poly, RatFn, Val};

/// A root of `x^2 + b1·x + b0` close to `0`, together with the other root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenselRoot {
    pub root: Elem,
    pub cofactor: Elem,
    pub exact: bool,
    /// `v(f(root))`; bottom for exact roots.
    pub achieved: Val,
}

fn check_condition(k: &Field, b1: &Elem, b0: &Elem) -> Result<(), FieldError> {
    let zero = Val::zero(k.rank());
    let v1 = k.valuation(b1);
    if v1.is_bottom() || v1 < zero || k.valuation(b0) < zero {
        return Err(FieldError::HenselFails);
    }
    let t = &k.valuation(b0) - &v1.scale(2);
    if !t.is_bottom() && !is_top_nilpotent(&t)? {
        return Err(FieldError::HenselFails);
    }
    Ok(())
}

fn eval(k: &Field, b1: &Elem, b0: &Elem, x: &Elem) -> Elem {
    k.add(&k.mul(x, &k.add(x, b1)), b0)
}

/// Hensel lift of the root of `f = x^2 + b1·x + b0` near `0`.
///
/// Requires `v(f(0)) - 2·v(f'(0))` to be topologically nilpotent. The root is
/// exact when the discriminant is a square in the field; otherwise Newton
/// steps run (with truncation to keep sizes bounded) until
/// `v(f(α)) >= precision`.
pub fn hensel_fixed_root(
    k: &Field,
    b1: &Elem,
    b0: &Elem,
    precision: &Val,
) -> Result<HenselRoot, FieldError> {
    let rank = k.rank();
    if k.is_zero(b0) {
        return Ok(HenselRoot {
            root: k.zero(),
            cofactor: k.neg(b1),
            exact: true,
            achieved: Val::bottom(rank),
        });
    }
    check_condition(k, b1, b0)?;
    if k.characteristic() != 2 {
        let disc = k.sub(&k.mul(b1, b1), &k.mul(&k.int(4), b0));
        if let Some(s) = k.sqrt(&disc) {
            let two = k.int(2);
            let r1 = k.div(&k.sub(&s, b1), &two);
            let r2 = k.div(&k.sub(&k.neg(&s), b1), &two);
            let (root, cofactor) = if k.valuation(&r1) >= k.valuation(&r2) {
                (r1, r2)
            } else {
                (r2, r1)
            };
            return Ok(HenselRoot {
                root,
                cofactor,
                exact: true,
                achieved: Val::bottom(rank),
            });
        }
    }
    hensel_approximate_root(k, b1, b0, precision)
}

/// As [`hensel_fixed_root`] without the exact attempt: the root is always
/// an approximation within `precision` of the true root.
pub fn hensel_approximate_root(
    k: &Field,
    b1: &Elem,
    b0: &Elem,
    precision: &Val,
) -> Result<HenselRoot, FieldError> {
    if k.is_zero(b0) {
        return Ok(HenselRoot {
            root: k.zero(),
            cofactor: k.neg(b1),
            exact: true,
            achieved: Val::bottom(k.rank()),
        });
    }
    check_condition(k, b1, b0)?;
    if let Some(x) = series_root(k, b1, b0, precision) {
        // The expansion is exact up to the truncation point, so the error is
        // at least `precision` without evaluating `f`.
        let cofactor = k.sub(&k.neg(b1), &x);
        return Ok(HenselRoot {
            root: x,
            cofactor,
            exact: false,
            achieved: precision.clone(),
        });
    }
    let mut x = k.zero();
    for _ in 0..256 {
        let fx = eval(k, b1, b0, &x);
        let achieved = k.valuation(&fx);
        if &achieved >= precision {
            let cofactor = k.sub(&k.neg(b1), &x);
            return Ok(HenselRoot {
                root: x,
                cofactor,
                exact: false,
                achieved,
            });
        }
        let dfx = k.add(&k.add(&x, &x), b1);
        x = k.sub(&x, &k.div(&fx, &dfx));
        x = k.canonical_center(&x, precision);
    }
    unreachable!("Newton iteration failed to converge under the Hensel condition")
}

/// `t`-expansion of `f` as a vector indexed by degree `0..=n`; `f` must have
/// non-negative order.
fn coefficients(k: &Field, f: &RatFn, n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n + 1];
    if let Some(o) = f.ord() {
        let o = o as usize;
        if o <= n {
            for (i, c) in f.series(n - o, k.coef()).into_iter().enumerate() {
                out[o + i] = c;
            }
        }
    }
    out
}

/// Over function fields with `v(b1) = 0` the small root solves
/// `x = -(b0 + x^2)/b1`, whose `t`-coefficients follow one at a time.
fn series_root(k: &Field, b1: &Elem, b0: &Elem, precision: &Val) -> Option<Elem> {
    if !matches!(k.kind, Kind::Func(_) | Kind::Rank2(_)) {
        return None;
    }
    let (Elem::F(f1), Elem::F(f0)) = (b1, b0) else {
        return None;
    };
    if f1.ord() != Some(0) {
        return None;
    }
    let c = k.coef();
    let n = precision.lead().ceil().to_integer().max(1) as usize;
    let u = coefficients(k, &f1.inv(c), n);
    let a = coefficients(k, f0, n);
    let mut x = vec![BigRational::zero(); n + 1];
    let mut sq = vec![BigRational::zero(); n + 1];
    for m in 1..=n {
        // (x^2)_m only involves x_1..x_{m-1}.
        let mut acc = BigRational::zero();
        for i in 1..m {
            acc = c.add(&acc, &c.mul(&x[i], &x[m - i]));
        }
        sq[m] = acc;
        let mut xm = BigRational::zero();
        for j in 0..=m {
            xm = c.sub(&xm, &c.mul(&u[m - j], &c.add(&a[j], &sq[j])));
        }
        x[m] = xm;
    }
    let root = Elem::F(RatFn::from_poly(Poly(x).reduce(c)));
    Some(k.canonical_center(&root, precision))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_examples() {
        let k = Field::padic(3);
        let p = Val::from_ints(&[10]);
        let r = hensel_fixed_root(&k, &k.int(-4), &k.int(3), &p).unwrap();
        assert!(r.exact);
        assert_eq!((r.root, r.cofactor), (k.int(3), k.int(1)));
        let r = hensel_fixed_root(&k, &k.int(-1), &k.int(0), &p).unwrap();
        assert_eq!(r.root, k.int(0));
        let k5 = Field::padic(5);
        let r = hensel_fixed_root(&k5, &k5.int(-6), &k5.int(5), &p).unwrap();
        assert_eq!((r.root, r.cofactor), (k5.int(5), k5.int(1)));
    }

    #[test]
    fn approximate_root() {
        // x^2 - x + 3 has no rational root; its 3-adic root near 0 is approximated.
        let k = Field::padic(3);
        let p = Val::from_ints(&[20]);
        let r = hensel_fixed_root(&k, &k.int(-1), &k.int(3), &p).unwrap();
        assert!(!r.exact);
        assert!(r.achieved >= p);
        assert_eq!(k.valuation(&r.root), Val::from_ints(&[1]));
    }

    #[test]
    fn precondition() {
        let k = Field::padic(3);
        let p = Val::from_ints(&[5]);
        assert_eq!(
            hensel_fixed_root(&k, &k.int(3), &k.int(1), &p),
            Err(FieldError::HenselFails)
        );
        assert_eq!(
            hensel_fixed_root(&k, &k.int(0), &k.int(9), &p),
            Err(FieldError::HenselFails)
        );
    }
}
