//! Sparse graded polynomials over the two-element field.
//!
//! [`MPoly2`] is the working model of `H*(BO; Z/2) = Z/2[w1, w2, ...]`
//! (namespace [`Namespace::Sw`], `deg w_i = i`) and of the splitting-principle
//! ring `Z/2[r1, r2, ...]` (namespace [`Namespace::Root`], `deg r_i = 1`).
//! Coefficients live in `{0, 1}`, so a polynomial is a set of monomials and
//! addition is symmetric difference.
//!
//! Every operation takes a [`RingContext`] and returns a reduced result:
//! monomials above the degree cap, or containing some `w_i` with `i` above the
//! rank cap, are dropped. Both truncations are ring quotients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Namespace {
    /// Stiefel-Whitney variables `w_i`, of degree `i`.
    Sw,
    /// Splitting-principle roots `r_i`, all of degree 1.
    Root,
}

impl Namespace {
    pub fn var_degree(self, index: u32) -> u32 {
        match self {
            Namespace::Sw => index,
            Namespace::Root => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Namespace::Sw => 'w',
            Namespace::Root => 'r',
        }
    }
}

/// Degree and rank truncation applied to every ring operation.
///
/// `None` means unbounded. The rank cap only affects Stiefel-Whitney
/// variables: `w_i = 0` for `i > rank_cap`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RingContext {
    pub degree_cap: Option<u32>,
    pub rank_cap: Option<u32>,
}

impl RingContext {
    pub const fn unbounded() -> Self {
        RingContext {
            degree_cap: None,
            rank_cap: None,
        }
    }

    pub const fn with_degree_cap(degree: u32) -> Self {
        RingContext {
            degree_cap: Some(degree),
            rank_cap: None,
        }
    }

    pub const fn degree(mut self, degree: u32) -> Self {
        self.degree_cap = Some(degree);
        self
    }

    pub const fn rank(mut self, rank: u32) -> Self {
        self.rank_cap = Some(rank);
        self
    }

    #[inline]
    pub fn admits_degree(&self, degree: u32) -> bool {
        self.degree_cap.is_none_or(|cap| degree <= cap)
    }

    #[inline]
    pub fn admits_w_index(&self, index: u32) -> bool {
        self.rank_cap.is_none_or(|cap| index <= cap)
    }

    /// Whether `m` survives reduction in this context.
    #[inline]
    pub fn admits(&self, m: &WMonomial) -> bool {
        self.admits_degree(m.degree)
            && (m.ns == Namespace::Root || self.admits_w_index(m.max_index()))
    }

    /// The largest `w` index that can occur in a reduced element, if bounded.
    pub fn max_w_index(&self) -> Option<u32> {
        match (self.degree_cap, self.rank_cap) {
            (Some(d), Some(r)) => Some(d.min(r)),
            (Some(d), None) => Some(d),
            (None, Some(r)) => Some(r),
            (None, None) => None,
        }
    }

    /// Check that the caps do not truncate anything at or below `degree`.
    pub fn require_exact_through(&self, degree: u32) -> Result<()> {
        if !self.admits_degree(degree) {
            return Err(Error::DegreeCapTooSmall {
                needed: degree,
                cap: self.degree_cap,
            });
        }
        if !self.admits_w_index(degree) {
            return Err(Error::RankCapTooSmall {
                needed: degree,
                cap: self.rank_cap,
            });
        }
        Ok(())
    }
}

pub(crate) type Exponents = SmallVec<[(u16, u16); 8]>;

fn narrow(x: u32) -> u16 {
    u16::try_from(x).expect("variable index or exponent exceeds u16 range")
}

/// A monomial `prod x_i^(e_i)` with strictly increasing indices and positive
/// exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WMonomial {
    ns: Namespace,
    degree: u32,
    exps: Exponents,
}

impl WMonomial {
    pub fn one(ns: Namespace) -> Self {
        WMonomial {
            ns,
            degree: 0,
            exps: Exponents::new(),
        }
    }

    pub fn var(ns: Namespace, index: u32) -> Self {
        Self::from_exponents(ns, [(index, 1)])
    }

    /// Build a monomial from `(index, exponent)` pairs in any order. Repeated
    /// indices accumulate and zero exponents are dropped.
    ///
    /// Panics if a positive exponent is attached to index 0.
    pub fn from_exponents(ns: Namespace, pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut acc: BTreeMap<u32, u32> = BTreeMap::new();
        for (i, e) in pairs {
            if e == 0 {
                continue;
            }
            assert!(i > 0, "variable indices start at 1");
            *acc.entry(i).or_default() += e;
        }
        let degree = acc.iter().map(|(&i, &e)| ns.var_degree(i) * e).sum();
        WMonomial {
            ns,
            degree,
            exps: acc.into_iter().map(|(i, e)| (narrow(i), narrow(e))).collect(),
        }
    }

    fn from_sorted(ns: Namespace, exps: Exponents) -> Self {
        let degree = exps
            .iter()
            .map(|&(i, e)| ns.var_degree(i as u32) * e as u32)
            .sum();
        WMonomial { ns, degree, exps }
    }

    pub fn namespace(&self) -> Namespace {
        self.ns
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// `(index, exponent)` pairs in increasing index order.
    pub fn exponents(&self) -> impl ExactSizeIterator<Item = (u32, u32)> + '_ {
        self.exps.iter().map(|&(i, e)| (i as u32, e as u32))
    }

    pub fn exponent(&self, index: u32) -> u32 {
        self.exps
            .iter()
            .find(|&&(i, _)| i as u32 == index)
            .map_or(0, |&(_, e)| e as u32)
    }

    /// Largest variable index present, 0 for the constant monomial.
    pub fn max_index(&self) -> u32 {
        self.exps.last().map_or(0, |&(i, _)| i as u32)
    }

    pub fn mul(&self, other: &WMonomial) -> WMonomial {
        debug_assert_eq!(self.ns, other.ns);
        let (a, b) = (&self.exps, &other.exps);
        let mut out = Exponents::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        WMonomial {
            ns: self.ns,
            degree: self.degree + other.degree,
            exps: out,
        }
    }

    pub fn square(&self) -> WMonomial {
        WMonomial {
            ns: self.ns,
            degree: 2 * self.degree,
            exps: self.exps.iter().map(|&(i, e)| (i, 2 * e)).collect(),
        }
    }

    pub fn all_exponents_even(&self) -> bool {
        self.exps.iter().all(|&(_, e)| e % 2 == 0)
    }

    /// Whether some variable occurs with exponent at least 2.
    pub fn has_squared_variable(&self) -> bool {
        self.exps.iter().any(|&(_, e)| e >= 2)
    }

    /// Smallest variable index whose exponent is at least 2.
    pub fn smallest_squared_variable(&self) -> Option<u32> {
        self.exps
            .iter()
            .find(|&&(_, e)| e >= 2)
            .map(|&(i, _)| i as u32)
    }

    /// The monomial with every exponent halved, if all are even.
    pub fn halve(&self) -> Option<WMonomial> {
        if !self.all_exponents_even() {
            return None;
        }
        Some(WMonomial::from_sorted(
            self.ns,
            self.exps.iter().map(|&(i, e)| (i, e / 2)).collect(),
        ))
    }

    /// Divide by `x_index^power`, or `None` if the exponent is too small.
    pub fn divide_var(&self, index: u32, power: u32) -> Option<WMonomial> {
        let mut exps = self.exps.clone();
        let pos = exps.iter().position(|&(i, _)| i as u32 == index)?;
        let e = exps[pos].1 as u32;
        match e.cmp(&power) {
            Ordering::Less => return None,
            Ordering::Equal => {
                exps.remove(pos);
            }
            Ordering::Greater => exps[pos].1 = narrow(e - power),
        }
        Some(WMonomial::from_sorted(self.ns, exps))
    }

    pub(crate) fn raw_exponents(&self) -> &[(u16, u16)] {
        &self.exps
    }
}

/// Lexicographic comparison of dense exponent vectors, larger first: the
/// monomial with the larger exponent at the first differing index sorts first.
fn lex_desc(a: &[(u16, u16)], b: &[(u16, u16)]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.0.cmp(&y.0) {
            Ordering::Less => return Ordering::Less,
            Ordering::Greater => return Ordering::Greater,
            Ordering::Equal => match y.1.cmp(&x.1) {
                Ordering::Equal => {}
                o => return o,
            },
        }
    }
    b.len().cmp(&a.len())
}

/// Graded-lexicographic: ascending degree, then [`lex_desc`].
impl Ord for WMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ns
            .cmp(&other.ns)
            .then(self.degree.cmp(&other.degree))
            .then_with(|| lex_desc(&self.exps, &other.exps))
    }
}

impl PartialOrd for WMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for WMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        let sym = self.ns.symbol();
        for (k, &(i, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{sym}{i}")?;
            } else {
                write!(f, "{sym}{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Merge two sorted, duplicate-free term lists, cancelling common terms.
pub(crate) fn sym_diff<T: Ord + Clone>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Toggle each item into a set (mod-2 counting) and return it sorted.
pub(crate) fn collect_mod2<T: Ord + std::hash::Hash + Eq>(items: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut set: FxHashSet<T> = FxHashSet::default();
    for t in items {
        if !set.remove(&t) {
            set.insert(t);
        }
    }
    let mut v: Vec<T> = set.into_iter().collect();
    v.sort_unstable();
    v
}

/// Variables a packed monomial has room for: one byte of exponent each.
const PACKED_VARS: u16 = 16;

fn pack(m: &WMonomial) -> u128 {
    m.exps
        .iter()
        .fold(0, |acc, &(i, e)| acc | (e as u128) << (8 * (i - 1)))
}

fn unpack(ns: Namespace, degree: u32, packed: u128) -> WMonomial {
    let exps = (0..PACKED_VARS)
        .filter_map(|k| {
            let e = (packed >> (8 * k)) as u8;
            (e > 0).then_some((k + 1, e as u16))
        })
        .collect();
    WMonomial { ns, degree, exps }
}

/// Product of sorted term lists with exponents packed into bytes of a `u128`,
/// so that multiplying monomials is adding integers. `None` when some index
/// exceeds [`PACKED_VARS`] or an exponent of the product could overflow a byte.
fn packed_product(a: &[WMonomial], b: &[WMonomial], ctx: &RingContext) -> Option<Vec<WMonomial>> {
    let bounds = |ts: &[WMonomial]| {
        ts.iter()
            .flat_map(|m| m.exps.iter())
            .fold((0, 0), |(i, e), &(x, y)| (i.max(x), e.max(y)))
    };
    let ((ia, ea), (ib, eb)) = (bounds(a), bounds(b));
    if ia.max(ib) > PACKED_VARS || ea + eb > u8::MAX as u16 {
        return None;
    }
    let ns = a[0].ns;
    let pa: Vec<(u32, u128)> = a.iter().map(|m| (m.degree, pack(m))).collect();
    let pb: Vec<(u32, u128)> = b.iter().map(|m| (m.degree, pack(m))).collect();
    let mut set: FxHashSet<(u32, u128)> =
        FxHashSet::with_capacity_and_hasher(a.len() * b.len() / 4 + 1, Default::default());
    for &(dx, x) in &pa {
        for &(dy, y) in &pb {
            if !ctx.admits_degree(dx + dy) {
                break;
            }
            let m = (dx + dy, x + y);
            if !set.remove(&m) {
                set.insert(m);
            }
        }
    }
    let mut terms: Vec<WMonomial> = set
        .into_iter()
        .map(|(d, m)| unpack(ns, d, m))
        .filter(|m| ctx.admits(m))
        .collect();
    terms.sort_unstable();
    Some(terms)
}

/// A polynomial over the two-element field: a finite set of monomials of a
/// single namespace, kept sorted in graded-lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly2 {
    ns: Namespace,
    terms: Vec<WMonomial>,
}

impl MPoly2 {
    pub fn zero(ns: Namespace) -> Self {
        MPoly2 { ns, terms: vec![] }
    }

    pub fn one(ns: Namespace) -> Self {
        MPoly2 {
            ns,
            terms: vec![WMonomial::one(ns)],
        }
    }

    pub fn var(ns: Namespace, index: u32) -> Self {
        MPoly2 {
            ns,
            terms: vec![WMonomial::var(ns, index)],
        }
    }

    /// The Stiefel-Whitney generator `w_index`.
    pub fn w(index: u32) -> Self {
        Self::var(Namespace::Sw, index)
    }

    pub fn from_monomial(m: WMonomial) -> Self {
        MPoly2 {
            ns: m.ns,
            terms: vec![m],
        }
    }

    /// Sum of the given monomials; repeated monomials cancel in pairs.
    ///
    /// Panics if a monomial is from another namespace.
    pub fn from_monomials(ns: Namespace, monomials: impl IntoIterator<Item = WMonomial>) -> Self {
        let terms = collect_mod2(monomials.into_iter().inspect(|m| {
            assert_eq!(m.ns, ns, "monomial namespace differs from polynomial namespace");
        }));
        MPoly2 { ns, terms }
    }

    pub fn namespace(&self) -> Namespace {
        self.ns
    }

    pub fn terms(&self) -> &[WMonomial] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<WMonomial> {
        self.terms
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

    pub fn contains(&self, m: &WMonomial) -> bool {
        self.terms.binary_search(m).is_ok()
    }

    /// Top degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|m| m.degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].degree == w[1].degree)
    }

    fn check_ns(&self, other: &MPoly2) -> Result<()> {
        if self.ns != other.ns {
            return Err(Error::NamespaceMismatch {
                expected: self.ns,
                found: other.ns,
            });
        }
        Ok(())
    }

    pub fn reduce(&self, ctx: &RingContext) -> MPoly2 {
        MPoly2 {
            ns: self.ns,
            terms: self.terms.iter().filter(|m| ctx.admits(m)).cloned().collect(),
        }
    }

    pub fn add(&self, other: &MPoly2, ctx: &RingContext) -> Result<MPoly2> {
        self.check_ns(other)?;
        let terms = sym_diff(&self.terms, &other.terms)
            .into_iter()
            .filter(|m| ctx.admits(m))
            .collect();
        Ok(MPoly2 { ns: self.ns, terms })
    }

    pub fn mul(&self, other: &MPoly2, ctx: &RingContext) -> Result<MPoly2> {
        self.check_ns(other)?;
        let a = self.reduce(ctx);
        let b = other.reduce(ctx);
        if a.is_zero() || b.is_zero() {
            return Ok(MPoly2::zero(self.ns));
        }
        if a.is_one() {
            return Ok(b);
        }
        if b.is_one() {
            return Ok(a);
        }
        if let Some(terms) = packed_product(&a.terms, &b.terms, ctx) {
            return Ok(MPoly2 { ns: self.ns, terms });
        }
        let mut set: FxHashSet<WMonomial> =
            FxHashSet::with_capacity_and_hasher(a.len() * b.len() / 2 + 1, Default::default());
        for x in &a.terms {
            for y in &b.terms {
                if !ctx.admits_degree(x.degree + y.degree) {
                    // terms of `b` are sorted by ascending degree
                    break;
                }
                let m = x.mul(y);
                if !set.remove(&m) {
                    set.insert(m);
                }
            }
        }
        let mut terms: Vec<WMonomial> = set.into_iter().collect();
        terms.sort_unstable();
        Ok(MPoly2 { ns: self.ns, terms })
    }

    /// Frobenius square: the sum of the squares of the monomials.
    pub fn square(&self, ctx: &RingContext) -> MPoly2 {
        MPoly2 {
            ns: self.ns,
            terms: self
                .terms
                .iter()
                .filter(|m| ctx.admits(m) && ctx.admits_degree(2 * m.degree))
                .map(WMonomial::square)
                .collect(),
        }
    }

    pub fn pow(&self, exponent: u32, ctx: &RingContext) -> MPoly2 {
        pow_in(self, exponent, &MPoly2::one(self.ns), ctx)
            .expect("powers stay inside one namespace")
    }

    /// Sum of the monomials of degree exactly `k`.
    pub fn grade_component(&self, k: u32) -> MPoly2 {
        MPoly2 {
            ns: self.ns,
            terms: self.terms.iter().filter(|m| m.degree == k).cloned().collect(),
        }
    }

    /// Value on the trivial bundle: 1 iff the constant monomial is present.
    pub fn constant_term(&self) -> u8 {
        u8::from(self.terms.first().is_some_and(WMonomial::is_one))
    }

    /// Ring homomorphism determined by `x_i -> images[i]`.
    ///
    /// The result lives in the namespace of the images, or in the namespace of
    /// `self` when no images are given.
    pub fn substitute(&self, images: &BTreeMap<u32, MPoly2>, ctx: &RingContext) -> Result<MPoly2> {
        let ns = images.values().next().map_or(self.ns, |p| p.ns);
        if let Some(p) = images.values().find(|p| p.ns != ns) {
            return Err(Error::NamespaceMismatch {
                expected: ns,
                found: p.ns,
            });
        }
        substitute_into(self, images, &MPoly2::one(ns), ctx)
    }
}

impl fmt::Display for MPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, &self.terms)
    }
}

pub(crate) fn write_sum<T: fmt::Display>(f: &mut fmt::Formatter<'_>, terms: &[T]) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (k, t) in terms.iter().enumerate() {
        if k > 0 {
            f.write_str(" + ")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

/// The operations a target ring needs for [`substitute_into`].
pub trait F2Algebra: Clone {
    fn is_zero(&self) -> bool;
    fn add_in(&self, other: &Self, ctx: &RingContext) -> Result<Self>;
    fn mul_in(&self, other: &Self, ctx: &RingContext) -> Result<Self>;
    fn square_in(&self, ctx: &RingContext) -> Self;
}

impl F2Algebra for MPoly2 {
    fn is_zero(&self) -> bool {
        MPoly2::is_zero(self)
    }
    fn add_in(&self, other: &Self, ctx: &RingContext) -> Result<Self> {
        self.add(other, ctx)
    }
    fn mul_in(&self, other: &Self, ctx: &RingContext) -> Result<Self> {
        self.mul(other, ctx)
    }
    fn square_in(&self, ctx: &RingContext) -> Self {
        self.square(ctx)
    }
}

/// `base^exponent` by square-and-multiply, with `unit` as the empty product.
pub fn pow_in<A: F2Algebra>(base: &A, exponent: u32, unit: &A, ctx: &RingContext) -> Result<A> {
    let mut result: Option<A> = None;
    let mut sq = base.clone();
    let mut e = exponent;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => sq.clone(),
                Some(r) => r.mul_in(&sq, ctx)?,
            });
        }
        e >>= 1;
        if e > 0 {
            sq = sq.square_in(ctx);
            // a higher bit of the exponent is still set, so the result is zero too
            if sq.is_zero() {
                return Ok(sq);
            }
        }
    }
    match result {
        Some(r) => Ok(r),
        None => unit.mul_in(unit, ctx),
    }
}

/// Extend `x_i -> images[i]` to a ring homomorphism and apply it to `poly`.
pub fn substitute_into<A: F2Algebra>(
    poly: &MPoly2,
    images: &BTreeMap<u32, A>,
    unit: &A,
    ctx: &RingContext,
) -> Result<A> {
    let mut powers: FxHashMap<(u16, u16), A> = FxHashMap::default();
    let mut total: Option<A> = None;
    for m in &poly.terms {
        let mut prod: Option<A> = None;
        for &(i, e) in m.raw_exponents() {
            let image = images.get(&(i as u32)).ok_or(Error::MissingImage(i as u32))?;
            let p = match powers.get(&(i, e)) {
                Some(p) => p.clone(),
                None => {
                    let p = pow_in(image, e as u32, unit, ctx)?;
                    powers.insert((i, e), p.clone());
                    p
                }
            };
            prod = Some(match prod {
                None => p,
                Some(q) => q.mul_in(&p, ctx)?,
            });
            if prod.as_ref().is_some_and(A::is_zero) {
                break;
            }
        }
        let term = match prod {
            Some(p) => p,
            None => unit.mul_in(unit, ctx)?,
        };
        total = Some(match total {
            None => term,
            Some(t) => t.add_in(&term, ctx)?,
        });
    }
    match total {
        Some(t) => Ok(t),
        // the zero of the target ring
        None => unit.add_in(unit, ctx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(i: u32) -> MPoly2 {
        MPoly2::w(i)
    }

    fn one() -> MPoly2 {
        MPoly2::one(Namespace::Sw)
    }

    #[test]
    fn packed_product_matches_pairwise() {
        let mut rng = crate::sample::rng(11);
        for cap in [None, Some(12)] {
            let ctx = RingContext { degree_cap: cap, rank_cap: None };
            for _ in 0..50 {
                let x = crate::sample::mpoly(&mut rng, 14, 16, 8).reduce(&ctx);
                let y = crate::sample::mpoly(&mut rng, 14, 16, 8).reduce(&ctx);
                let naive = MPoly2::from_monomials(
                    Namespace::Sw,
                    x.terms().iter().flat_map(|a| y.terms().iter().map(move |b| a.mul(b))),
                )
                .reduce(&ctx);
                assert_eq!(x.mul(&y, &ctx).unwrap(), naive);
            }
        }
        // index 17 and large exponents take the general path
        let big = mono(&[(17, 1), (1, 200)]);
        assert_eq!(big.mul(&big, &RingContext::unbounded()).unwrap(), mono(&[(17, 2), (1, 400)]));
    }

    fn mono(pairs: &[(u32, u32)]) -> MPoly2 {
        MPoly2::from_monomial(WMonomial::from_exponents(Namespace::Sw, pairs.iter().copied()))
    }

    fn sum(ps: &[MPoly2]) -> MPoly2 {
        let ctx = RingContext::unbounded();
        ps.iter()
            .fold(MPoly2::zero(Namespace::Sw), |acc, p| acc.add(p, &ctx).unwrap())
    }

    const U: RingContext = RingContext::unbounded();

    #[test]
    fn add_cancels_pairs() {
        let a = sum(&[w(1), w(2)]);
        let b = sum(&[w(2), w(3)]);
        assert_eq!(a.add(&b, &U).unwrap(), sum(&[w(1), w(3)]));
        assert_eq!(a.add(&MPoly2::zero(Namespace::Sw), &U).unwrap(), a);
        assert!(a.add(&a, &U).unwrap().is_zero());
    }

    #[test]
    fn add_truncates() {
        let x = sum(&[mono(&[(1, 3)]), w(2)]);
        let ctx = RingContext::with_degree_cap(2);
        assert_eq!(x.add(&MPoly2::zero(Namespace::Sw), &ctx).unwrap(), w(2));
    }

    #[test]
    fn mul_examples() {
        let a = sum(&[one(), w(1)]);
        assert_eq!(a.mul(&a, &U).unwrap(), sum(&[one(), mono(&[(1, 2)])]));
        let p = w(2).mul(&w(3), &U).unwrap();
        assert_eq!(p, mono(&[(2, 1), (3, 1)]));
        assert_eq!(p.degree(), Some(5));
        let s = sum(&[w(1), w(2)]);
        assert_eq!(
            s.mul(&s, &U).unwrap(),
            sum(&[mono(&[(1, 2)]), mono(&[(2, 2)])])
        );
        assert_eq!(s.square(&U), s.mul(&s, &U).unwrap());
    }

    #[test]
    fn namespace_mismatch_is_an_error() {
        let r = MPoly2::var(Namespace::Root, 1);
        assert!(matches!(
            w(1).add(&r, &U),
            Err(Error::NamespaceMismatch { .. })
        ));
        assert!(w(1).mul(&r, &U).is_err());
    }

    #[test]
    fn grade_component_and_constant() {
        let x = sum(&[one(), w(1), mono(&[(1, 2)]), w(2)]);
        assert_eq!(x.grade_component(2), sum(&[mono(&[(1, 2)]), w(2)]));
        assert!(w(3).grade_component(2).is_zero());
        let total = (0..=2).map(|k| x.grade_component(k)).collect::<Vec<_>>();
        assert_eq!(sum(&total), x);

        assert_eq!(sum(&[one(), mono(&[(1, 1), (2, 1)])]).constant_term(), 1);
        assert_eq!(w(1).constant_term(), 0);
        assert_eq!(MPoly2::zero(Namespace::Sw).constant_term(), 0);
    }

    #[test]
    fn substitute_examples() {
        let mut images = BTreeMap::new();
        images.insert(1, sum(&[w(1), w(2)]));
        assert_eq!(
            mono(&[(1, 2)]).substitute(&images, &U).unwrap(),
            sum(&[mono(&[(1, 2)]), mono(&[(2, 2)])])
        );

        let mut images = BTreeMap::new();
        images.insert(2, MPoly2::zero(Namespace::Sw));
        assert!(w(2).substitute(&images, &U).unwrap().is_zero());

        let mut images = BTreeMap::new();
        images.insert(1, w(1));
        images.insert(2, mono(&[(1, 2)]));
        assert_eq!(
            mono(&[(1, 1), (2, 1)]).substitute(&images, &U).unwrap(),
            mono(&[(1, 3)])
        );

        let images: BTreeMap<u32, MPoly2> = BTreeMap::new();
        assert_eq!(w(4).substitute(&images, &U), Err(Error::MissingImage(4)));
        assert_eq!(one().substitute(&images, &U).unwrap(), one());
    }

    #[test]
    fn rank_cap_kills_high_generators() {
        let ctx = RingContext::unbounded().rank(2);
        let x = sum(&[w(1), w(3), mono(&[(1, 1), (3, 1)])]);
        assert_eq!(x.reduce(&ctx), w(1));
        // roots are not affected by the rank cap
        let r = MPoly2::var(Namespace::Root, 5);
        assert_eq!(r.reduce(&ctx), r);
    }

    #[test]
    fn printing_is_graded_lex() {
        let x = sum(&[w(2), mono(&[(1, 2)]), one(), w(1), w(3), mono(&[(1, 1), (2, 1)])]);
        assert_eq!(x.to_string(), "1 + w1 + w1^2 + w2 + w1*w2 + w3");
        assert_eq!(MPoly2::zero(Namespace::Sw).to_string(), "0");
        assert_eq!(MPoly2::var(Namespace::Root, 2).to_string(), "r2");
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let x = sum(&[one(), w(1), w(2)]);
        let mut acc = one();
        for e in 0..7 {
            assert_eq!(x.pow(e, &U), acc, "exponent {e}");
            acc = acc.mul(&x, &U).unwrap();
        }
        let ctx = RingContext::with_degree_cap(5);
        assert_eq!(x.pow(5, &ctx), x.pow(5, &U).reduce(&ctx));
        assert!(w(3).pow(4, &ctx).is_zero());
    }
}
