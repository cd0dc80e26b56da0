//! Formal bundle calculus.
//!
//! A bundle is its total Stiefel-Whitney class together with a rank bound;
//! characteristic classes are determined on the universal bundle, so no base
//! space is modelled. The ambient ring of a total class is either a plain
//! mod-2 polynomial ring (Stiefel-Whitney or root variables) or the exterior
//! oracle ring [`ExtPoly`] over `U/O × BO`.

mod ext;

use std::collections::BTreeMap;
use std::fmt;

pub use ext::{ExtMonomial, ExtPoly};

use crate::error::{Error, Result};
use crate::wring::{substitute_into, F2Algebra, MPoly2, Namespace, RingContext, WMonomial};

/// An element of the ring a total class lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AmbientPoly {
    Mod2(MPoly2),
    Ext(ExtPoly),
}

impl AmbientPoly {
    pub fn one_sw() -> Self {
        AmbientPoly::Mod2(MPoly2::one(Namespace::Sw))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            AmbientPoly::Mod2(p) => p.is_zero(),
            AmbientPoly::Ext(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            AmbientPoly::Mod2(p) => p.is_one(),
            AmbientPoly::Ext(p) => p.is_one(),
        }
    }

    /// The zero of the same ring.
    pub fn zero_like(&self) -> Self {
        match self {
            AmbientPoly::Mod2(p) => AmbientPoly::Mod2(MPoly2::zero(p.namespace())),
            AmbientPoly::Ext(_) => AmbientPoly::Ext(ExtPoly::zero()),
        }
    }

    /// The unit of the same ring.
    pub fn one_like(&self) -> Self {
        match self {
            AmbientPoly::Mod2(p) => AmbientPoly::Mod2(MPoly2::one(p.namespace())),
            AmbientPoly::Ext(_) => AmbientPoly::Ext(ExtPoly::one()),
        }
    }

    pub fn grade_component(&self, k: u32) -> Self {
        match self {
            AmbientPoly::Mod2(p) => AmbientPoly::Mod2(p.grade_component(k)),
            AmbientPoly::Ext(p) => AmbientPoly::Ext(p.grade_component(k)),
        }
    }

    pub fn constant_term(&self) -> u8 {
        match self {
            AmbientPoly::Mod2(p) => p.constant_term(),
            AmbientPoly::Ext(p) => p.constant_term(),
        }
    }

    pub fn degree(&self) -> Option<u32> {
        match self {
            AmbientPoly::Mod2(p) => p.degree(),
            AmbientPoly::Ext(p) => p.degree(),
        }
    }

    pub fn reduce(&self, ctx: &RingContext) -> Self {
        match self {
            AmbientPoly::Mod2(p) => AmbientPoly::Mod2(p.reduce(ctx)),
            AmbientPoly::Ext(p) => AmbientPoly::Ext(p.reduce(ctx)),
        }
    }

    pub fn as_mod2(&self) -> Option<&MPoly2> {
        match self {
            AmbientPoly::Mod2(p) => Some(p),
            AmbientPoly::Ext(_) => None,
        }
    }

    pub fn as_ext(&self) -> Option<&ExtPoly> {
        match self {
            AmbientPoly::Ext(p) => Some(p),
            AmbientPoly::Mod2(_) => None,
        }
    }

    /// View in the exterior oracle ring; `w`-polynomials embed.
    pub fn to_ext(&self) -> Result<ExtPoly> {
        match self {
            AmbientPoly::Ext(p) => Ok(p.clone()),
            AmbientPoly::Mod2(p) if p.namespace() == Namespace::Sw => Ok(ExtPoly::from_mod2(p)),
            AmbientPoly::Mod2(_) => Err(Error::IncompatibleAmbient(
                "root polynomials do not embed into the exterior oracle ring",
            )),
        }
    }

    fn binary(
        &self,
        other: &Self,
        ctx: &RingContext,
        mod2: impl Fn(&MPoly2, &MPoly2) -> Result<MPoly2>,
        ext: impl Fn(&ExtPoly, &ExtPoly) -> ExtPoly,
    ) -> Result<Self> {
        match (self, other) {
            (AmbientPoly::Mod2(a), AmbientPoly::Mod2(b)) => Ok(AmbientPoly::Mod2(mod2(a, b)?)),
            _ => Ok(AmbientPoly::Ext(ext(&self.to_ext()?, &other.to_ext()?).reduce(ctx))),
        }
    }

    pub fn add(&self, other: &Self, ctx: &RingContext) -> Result<Self> {
        self.binary(other, ctx, |a, b| a.add(b, ctx), |a, b| a.add(b, ctx))
    }

    /// Product. A bare constant `1` acts as the unit of any ambient ring, so
    /// the trivial bundle can be combined with root bundles.
    pub fn mul(&self, other: &Self, ctx: &RingContext) -> Result<Self> {
        if self.is_one() {
            return Ok(other.reduce(ctx));
        }
        if other.is_one() {
            return Ok(self.reduce(ctx));
        }
        self.binary(other, ctx, |a, b| a.mul(b, ctx), |a, b| a.mul(b, ctx))
    }

    pub fn square(&self, ctx: &RingContext) -> Self {
        match self {
            AmbientPoly::Mod2(p) => AmbientPoly::Mod2(p.square(ctx)),
            AmbientPoly::Ext(p) => AmbientPoly::Ext(p.square(ctx)),
        }
    }
}

impl From<MPoly2> for AmbientPoly {
    fn from(p: MPoly2) -> Self {
        AmbientPoly::Mod2(p)
    }
}

impl From<ExtPoly> for AmbientPoly {
    fn from(p: ExtPoly) -> Self {
        AmbientPoly::Ext(p)
    }
}

impl fmt::Display for AmbientPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmbientPoly::Mod2(p) => p.fmt(f),
            AmbientPoly::Ext(p) => p.fmt(f),
        }
    }
}

impl F2Algebra for AmbientPoly {
    fn is_zero(&self) -> bool {
        AmbientPoly::is_zero(self)
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

/// A bundle, known through its total Stiefel-Whitney class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalBundle {
    total: AmbientPoly,
    rank_bound: Option<u32>,
}

impl FormalBundle {
    pub fn new(total: AmbientPoly, rank_bound: Option<u32>) -> Result<Self> {
        if total.constant_term() != 1 {
            return Err(Error::NotATotalClass(total.to_string()));
        }
        Ok(FormalBundle { total, rank_bound })
    }

    pub fn total(&self) -> &AmbientPoly {
        &self.total
    }

    /// `None` means unbounded.
    pub fn rank_bound(&self) -> Option<u32> {
        self.rank_bound
    }
}

/// The universal bundle over `BO` (or `BO_n` under a rank cap):
/// total class `1 + w1 + w2 + ...` up to the caps.
pub fn universal_bundle(ctx: &RingContext) -> Result<FormalBundle> {
    let top = ctx
        .max_w_index()
        .ok_or(Error::UnboundedContext("the universal bundle"))?;
    let total = MPoly2::from_monomials(
        Namespace::Sw,
        std::iter::once(WMonomial::one(Namespace::Sw))
            .chain((1..=top).map(|i| WMonomial::var(Namespace::Sw, i))),
    )
    .reduce(ctx);
    Ok(FormalBundle {
        total: total.into(),
        rank_bound: ctx.rank_cap,
    })
}

/// The trivial bundle `ε`, total class 1.
pub fn trivial_bundle() -> FormalBundle {
    FormalBundle {
        total: AmbientPoly::one_sw(),
        rank_bound: Some(0),
    }
}

/// The pullback of the universal bundle to the fibre `U/O`: total class
/// `1 + ν1 + ν2 + ...`. Its complexification is trivial.
pub fn fiber_bundle(ctx: &RingContext) -> Result<FormalBundle> {
    let top = ctx
        .degree_cap
        .ok_or(Error::UnboundedContext("the fibre bundle over U/O"))?;
    let total = (1..=top).fold(ExtPoly::one(), |acc, i| acc.add(&ExtPoly::nu(i), ctx));
    Ok(FormalBundle {
        total: total.into(),
        rank_bound: None,
    })
}

/// Splitting-principle bundle `L_1 ⊕ ... ⊕ L_m` with total class
/// `prod (1 + r_i)`.
pub fn roots_bundle(m: u32, ctx: &RingContext) -> FormalBundle {
    let one = MPoly2::one(Namespace::Root);
    let total = (1..=m).fold(one.clone(), |acc, i| {
        let factor = one
            .add(&MPoly2::var(Namespace::Root, i), ctx)
            .expect("same namespace");
        acc.mul(&factor, ctx).expect("same namespace")
    });
    FormalBundle {
        total: total.into(),
        rank_bound: Some(m),
    }
}

pub fn whitney_sum(a: &FormalBundle, b: &FormalBundle, ctx: &RingContext) -> Result<FormalBundle> {
    Ok(FormalBundle {
        total: a.total.mul(&b.total, ctx)?,
        rank_bound: a.rank_bound.zip(b.rank_bound).map(|(x, y)| x + y),
    })
}

/// `ξ ⊕ ξ`, the real bundle underlying the complexification of `ξ`.
pub fn underlying_of_complexification(a: &FormalBundle, ctx: &RingContext) -> FormalBundle {
    FormalBundle {
        total: a.total.square(ctx),
        rank_bound: a.rank_bound.map(|r| 2 * r),
    }
}

/// `w_k(a)`.
pub fn sw(a: &FormalBundle, k: u32) -> AmbientPoly {
    if a.rank_bound.is_some_and(|r| k > r) {
        return a.total.zero_like();
    }
    a.total.grade_component(k)
}

/// Mod-2 reduction of `c_k(a ⊗ C)`, namely `w_{2k}(a ⊕ a)`.
pub fn chern_mod2(a: &FormalBundle, k: u32, ctx: &RingContext) -> AmbientPoly {
    sw(&underlying_of_complexification(a, ctx), 2 * k)
}

/// Mod-2 reduction of `p_i(a) = ±c_{2i}(a ⊗ C)`.
pub fn pontrjagin_mod2(a: &FormalBundle, i: u32, ctx: &RingContext) -> AmbientPoly {
    chern_mod2(a, 2 * i, ctx)
}

/// The value `c(a)` of the characteristic class `c`, by `w_i -> w_i(a)`.
pub fn evaluate_class(c: &MPoly2, a: &FormalBundle, ctx: &RingContext) -> Result<AmbientPoly> {
    if c.namespace() != Namespace::Sw {
        return Err(Error::RootNamespace);
    }
    let mut images = BTreeMap::new();
    for m in c.terms() {
        for (i, _) in m.exponents() {
            images.entry(i).or_insert_with(|| sw(a, i));
        }
    }
    substitute_into(c, &images, &a.total.one_like(), ctx)
}

/// Restriction along the fibre inclusion `U/O -> BO`: `w_i -> ν_i`, so every
/// monomial with a repeated variable dies.
pub fn cartan_restrict(c: &MPoly2) -> Result<ExtPoly> {
    if c.namespace() != Namespace::Sw {
        return Err(Error::RootNamespace);
    }
    Ok(ExtPoly::from_monomials(c.terms().iter().filter_map(|m| {
        let mut nu = Vec::new();
        for (i, e) in m.exponents() {
            if e >= 2 {
                return None;
            }
            nu.push(i);
        }
        ExtMonomial::new(nu, WMonomial::one(Namespace::Sw))
    })))
}
