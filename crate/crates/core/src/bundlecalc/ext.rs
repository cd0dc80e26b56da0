//! The oracle ring `Λ(ν1, ν2, ...) ⊗ Z/2[w1, w2, ...]`, the mod-2 cohomology
//! of `U/O × BO`. Each `ν_i` has degree `i` and squares to zero.

use std::cmp::Ordering;
use std::fmt;

use rustc_hash::FxHashSet;
use smallvec::SmallVec;

use crate::error::Result;
use crate::wring::{sym_diff, write_sum, F2Algebra, MPoly2, Namespace, RingContext, WMonomial};

type NuSet = SmallVec<[u16; 6]>;

/// `ν_S · m` with `S` a set of exterior generators and `m` a Stiefel-Whitney
/// monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtMonomial {
    nu: NuSet,
    w: WMonomial,
    degree: u32,
}

impl ExtMonomial {
    pub fn one() -> Self {
        Self::from_w(WMonomial::one(Namespace::Sw))
    }

    pub fn from_w(w: WMonomial) -> Self {
        debug_assert_eq!(w.namespace(), Namespace::Sw);
        ExtMonomial {
            nu: NuSet::new(),
            degree: w.degree(),
            w,
        }
    }

    /// Returns `None` if `nu` repeats an index, since `ν_i^2 = 0`.
    pub fn new(nu: impl IntoIterator<Item = u32>, w: WMonomial) -> Option<Self> {
        let mut set: NuSet = nu
            .into_iter()
            .map(|i| {
                assert!(i > 0, "ν indices start at 1");
                u16::try_from(i).expect("ν index exceeds u16 range")
            })
            .collect();
        set.sort_unstable();
        if set.windows(2).any(|p| p[0] == p[1]) {
            return None;
        }
        let degree = w.degree() + set.iter().map(|&i| i as u32).sum::<u32>();
        Some(ExtMonomial { nu: set, w, degree })
    }

    pub fn nu(&self) -> impl ExactSizeIterator<Item = u32> + '_ {
        self.nu.iter().map(|&i| i as u32)
    }

    pub fn w_part(&self) -> &WMonomial {
        &self.w
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.nu.is_empty() && self.w.is_one()
    }

    fn admitted(&self, ctx: &RingContext) -> bool {
        ctx.admits_degree(self.degree) && ctx.admits_w_index(self.w.max_index())
    }

    /// Product, or `None` when the exterior parts overlap.
    pub fn mul(&self, other: &ExtMonomial) -> Option<ExtMonomial> {
        let (a, b) = (&self.nu, &other.nu);
        let mut nu = NuSet::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    nu.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    nu.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => return None,
            }
        }
        nu.extend_from_slice(&a[i..]);
        nu.extend_from_slice(&b[j..]);
        Some(ExtMonomial {
            nu,
            w: self.w.mul(&other.w),
            degree: self.degree + other.degree,
        })
    }
}

impl Ord for ExtMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.w.cmp(&other.w))
            .then_with(|| self.nu.cmp(&other.nu))
    }
}

impl PartialOrd for ExtMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nu.is_empty() {
            return write!(f, "{}", self.w);
        }
        for (k, i) in self.nu.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "v{i}")?;
        }
        if !self.w.is_one() {
            write!(f, "*{}", self.w)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExtPoly {
    terms: Vec<ExtMonomial>,
}

impl ExtPoly {
    pub fn zero() -> Self {
        ExtPoly { terms: vec![] }
    }

    pub fn one() -> Self {
        ExtPoly {
            terms: vec![ExtMonomial::one()],
        }
    }

    /// The exterior generator `ν_i`.
    pub fn nu(i: u32) -> Self {
        Self::from_monomial(
            ExtMonomial::new([i], WMonomial::one(Namespace::Sw)).expect("single index"),
        )
    }

    pub fn from_monomial(m: ExtMonomial) -> Self {
        ExtPoly { terms: vec![m] }
    }

    pub fn from_monomials(ms: impl IntoIterator<Item = ExtMonomial>) -> Self {
        ExtPoly {
            terms: crate::wring::collect_mod2(ms),
        }
    }

    /// Embedding `Z/2[w] -> Λ(ν) ⊗ Z/2[w]`.
    ///
    /// Panics on a root-namespace polynomial.
    pub fn from_mod2(p: &MPoly2) -> Self {
        assert_eq!(p.namespace(), Namespace::Sw, "only w-polynomials embed");
        ExtPoly {
            terms: p.terms().iter().cloned().map(ExtMonomial::from_w).collect(),
        }
    }

    pub fn terms(&self) -> &[ExtMonomial] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Number of terms is zero; same as `is_zero`.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].is_one()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|m| m.degree)
    }

    pub fn reduce(&self, ctx: &RingContext) -> ExtPoly {
        ExtPoly {
            terms: self.terms.iter().filter(|m| m.admitted(ctx)).cloned().collect(),
        }
    }

    pub fn add(&self, other: &ExtPoly, ctx: &RingContext) -> ExtPoly {
        ExtPoly {
            terms: sym_diff(&self.terms, &other.terms)
                .into_iter()
                .filter(|m| m.admitted(ctx))
                .collect(),
        }
    }

    pub fn mul(&self, other: &ExtPoly, ctx: &RingContext) -> ExtPoly {
        let a = self.reduce(ctx);
        let b = other.reduce(ctx);
        if a.is_one() {
            return b;
        }
        if b.is_one() {
            return a;
        }
        let mut set: FxHashSet<ExtMonomial> = FxHashSet::default();
        for x in &a.terms {
            for y in &b.terms {
                if !ctx.admits_degree(x.degree + y.degree) {
                    break;
                }
                if let Some(m) = x.mul(y) {
                    if !set.remove(&m) {
                        set.insert(m);
                    }
                }
            }
        }
        let mut terms: Vec<ExtMonomial> = set.into_iter().collect();
        terms.sort_unstable();
        ExtPoly { terms }
    }

    /// Frobenius square: monomials carrying a `ν` vanish, the rest double.
    pub fn square(&self, ctx: &RingContext) -> ExtPoly {
        ExtPoly {
            terms: self
                .terms
                .iter()
                .filter(|m| m.nu.is_empty() && m.admitted(ctx) && ctx.admits_degree(2 * m.degree))
                .map(|m| ExtMonomial::from_w(m.w.square()))
                .collect(),
        }
    }

    pub fn grade_component(&self, k: u32) -> ExtPoly {
        ExtPoly {
            terms: self.terms.iter().filter(|m| m.degree == k).cloned().collect(),
        }
    }

    pub fn constant_term(&self) -> u8 {
        u8::from(self.terms.first().is_some_and(ExtMonomial::is_one))
    }

    /// The summand free of exterior generators, as a `w`-polynomial.
    pub fn w_part(&self) -> MPoly2 {
        MPoly2::from_monomials(
            Namespace::Sw,
            self.terms
                .iter()
                .filter(|m| m.nu.is_empty())
                .map(|m| m.w.clone()),
        )
    }
}

impl fmt::Display for ExtPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, &self.terms)
    }
}

impl F2Algebra for ExtPoly {
    fn is_zero(&self) -> bool {
        ExtPoly::is_zero(self)
    }
    fn add_in(&self, other: &Self, ctx: &RingContext) -> Result<Self> {
        Ok(self.add(other, ctx))
    }
    fn mul_in(&self, other: &Self, ctx: &RingContext) -> Result<Self> {
        Ok(self.mul(other, ctx))
    }
    fn square_in(&self, ctx: &RingContext) -> Self {
        self.square(ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const U: RingContext = RingContext::unbounded();

    #[test]
    fn exterior_generators_square_to_zero() {
        let v1 = ExtPoly::nu(1);
        assert!(v1.mul(&v1, &U).is_zero());
        assert!(v1.square(&U).is_zero());
        let v2 = ExtPoly::nu(2);
        let p = v1.mul(&v2, &U);
        assert_eq!(p.to_string(), "v1*v2");
        assert_eq!(p.degree(), Some(3));
    }

    #[test]
    fn mixed_products() {
        let w1 = ExtPoly::from_mod2(&MPoly2::w(1));
        let x = ExtPoly::nu(1).add(&w1, &U);
        // (v1 + w1)^2 = w1^2
        assert_eq!(x.mul(&x, &U), ExtPoly::from_mod2(&MPoly2::w(1).square(&U)));
        assert_eq!(x.square(&U), x.mul(&x, &U));
        assert_eq!(x.w_part(), MPoly2::w(1));
    }

    #[test]
    fn rank_cap_applies_to_w_part_only() {
        let ctx = RingContext::unbounded().rank(1);
        let x = ExtPoly::nu(3).add(&ExtPoly::from_mod2(&MPoly2::w(3)), &U);
        assert_eq!(x.reduce(&ctx), ExtPoly::nu(3));
    }
}
