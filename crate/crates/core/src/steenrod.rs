//! `Sq^1` on Stiefel-Whitney polynomials.
//!
//! On generators `Sq^1 w_j = w_1 w_j + (j + 1 mod 2) w_{j+1}`; on products it
//! is a derivation. Squares are therefore in the kernel and `Sq^1 Sq^1 = 0`.

use crate::error::{Error, Result};
use crate::wring::{collect_mod2, MPoly2, Namespace, RingContext, WMonomial};

/// `Sq^1 w_j`, unreduced.
pub fn sq1_generator(j: u32) -> MPoly2 {
    let mut terms = vec![WMonomial::from_exponents(Namespace::Sw, [(1, 1), (j, 1)])];
    if j % 2 == 0 {
        terms.push(WMonomial::var(Namespace::Sw, j + 1));
    }
    MPoly2::from_monomials(Namespace::Sw, terms)
}

pub fn sq1(a: &MPoly2, ctx: &RingContext) -> Result<MPoly2> {
    if a.namespace() != Namespace::Sw {
        return Err(Error::RootNamespace);
    }
    let mut out = Vec::new();
    for m in a.terms() {
        // d(x^e) = e x^(e-1) dx, only odd exponents survive
        for (j, e) in m.exponents() {
            if e % 2 == 0 {
                continue;
            }
            let rest = m.divide_var(j, 1).expect("exponent is positive");
            out.push(rest.mul(&WMonomial::from_exponents(Namespace::Sw, [(1, 1), (j, 1)])));
            if j % 2 == 0 {
                out.push(rest.mul(&WMonomial::var(Namespace::Sw, j + 1)));
            }
        }
    }
    let terms = collect_mod2(out.into_iter().filter(|m| ctx.admits(m)));
    Ok(MPoly2::from_monomials(Namespace::Sw, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    const U: RingContext = RingContext::unbounded();

    fn p(pairs: &[&[(u32, u32)]]) -> MPoly2 {
        MPoly2::from_monomials(
            Namespace::Sw,
            pairs
                .iter()
                .map(|m| WMonomial::from_exponents(Namespace::Sw, m.iter().copied())),
        )
    }

    #[test]
    fn generator_values() {
        assert_eq!(sq1(&MPoly2::w(1), &U).unwrap(), p(&[&[(1, 2)]]));
        assert_eq!(sq1(&MPoly2::w(2), &U).unwrap(), p(&[&[(1, 1), (2, 1)], &[(3, 1)]]));
        assert_eq!(sq1(&MPoly2::w(3), &U).unwrap(), p(&[&[(1, 1), (3, 1)]]));
        for j in 1..10 {
            assert_eq!(sq1(&MPoly2::w(j), &U).unwrap(), sq1_generator(j));
        }
    }

    #[test]
    fn leibniz_cancellation() {
        // Sq1(w2 w4) = w3 w4 + w2 w5, the two w1 w2 w4 terms cancel
        let x = p(&[&[(2, 1), (4, 1)]]);
        assert_eq!(sq1(&x, &U).unwrap(), p(&[&[(3, 1), (4, 1)], &[(2, 1), (5, 1)]]));
    }

    #[test]
    fn squares_are_killed() {
        let x = p(&[&[(1, 1), (2, 3)], &[(5, 1)], &[]]);
        assert!(sq1(&x.square(&U), &U).unwrap().is_zero());
    }

    #[test]
    fn rank_cap_drops_shifted_generator() {
        let ctx = RingContext::unbounded().rank(2);
        assert_eq!(sq1(&MPoly2::w(2), &ctx).unwrap(), p(&[&[(1, 1), (2, 1)]]));
    }

    #[test]
    fn roots_rejected() {
        let r = MPoly2::var(Namespace::Root, 1);
        assert_eq!(sq1(&r, &U), Err(Error::RootNamespace));
    }
}
