//! Complexifiable characteristic classes.
//!
//! A mod-2 class is complexifiable exactly when it lies in the subring
//! `Z/2[w_i^2]`; the decision is checked against an independent oracle that
//! evaluates the class on the canonical pair `(F ⊕ G, G)` over `U/O × BO`,
//! where `F` has trivial complexification. The integral side works through
//! the mod-2 reduction of the torsion part.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::bundlecalc::{
    evaluate_class, fiber_bundle, universal_bundle, whitney_sum, AmbientPoly, FormalBundle,
};
use crate::error::{Error, Result};
use crate::feshbach::{lex_desc, rho, IndexSet, IntClass, PMonomial};
use crate::steenrod::sq1;
use crate::wring::{MPoly2, Namespace, RingContext, WMonomial};

/// The criterion: every exponent of every monomial is even.
pub fn is_complexifiable_mod2(c: &MPoly2) -> bool {
    c.terms().iter().all(WMonomial::all_exponents_even)
}

fn require_sw(c: &MPoly2) -> Result<()> {
    if c.namespace() == Namespace::Sw {
        Ok(())
    } else {
        Err(Error::RootNamespace)
    }
}

/// An element of `Z/2[w_i^2]`, written in variables `u_i = w_i^2`
/// (degree `2i`). Internally the `u`-polynomial reuses the `w` monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquaresPoly {
    poly_in_u: MPoly2,
}

impl SquaresPoly {
    pub fn from_u(poly_in_u: MPoly2) -> Self {
        SquaresPoly { poly_in_u }
    }

    pub fn poly_in_u(&self) -> &MPoly2 {
        &self.poly_in_u
    }

    /// `u_i -> w_i^2`. Squaring in characteristic 2 is just doubling exponents.
    pub fn expand(&self) -> MPoly2 {
        MPoly2::from_monomials(
            Namespace::Sw,
            self.poly_in_u.terms().iter().map(WMonomial::square),
        )
    }
}

impl fmt::Display for SquaresPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self.poly_in_u.to_string();
        f.write_str(&text.replace('w', "u"))
    }
}

/// Write `c` as a polynomial in the squares `w_i^2`.
pub fn subring_decomposition(c: &MPoly2) -> Result<SquaresPoly> {
    require_sw(c)?;
    let halves = c
        .terms()
        .iter()
        .map(|m| {
            m.halve().ok_or_else(|| Error::NotComplexifiable {
                witness: m.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SquaresPoly::from_u(MPoly2::from_monomials(Namespace::Sw, halves)))
}

/// `c - c(ε) = Σ w_i^2 · r_i`, extracting from each monomial the square of
/// its smallest squared variable. Entries are ascending in `i`.
pub fn ideal_decomposition(c: &MPoly2) -> Result<Vec<(u32, MPoly2)>> {
    require_sw(c)?;
    let mut parts: BTreeMap<u32, Vec<WMonomial>> = BTreeMap::new();
    for m in c.terms().iter().filter(|m| !m.is_one()) {
        let i = m.smallest_squared_variable().ok_or_else(|| Error::NotInIdeal {
            witness: m.to_string(),
        })?;
        let cofactor = m.divide_var(i, 2).expect("exponent at least 2");
        parts.entry(i).or_default().push(cofactor);
    }
    Ok(parts
        .into_iter()
        .map(|(i, ms)| (i, MPoly2::from_monomials(Namespace::Sw, ms)))
        .filter(|(_, r)| !r.is_zero())
        .collect())
}

/// `Σ w_i^2 · r_i`.
pub fn reconstruct_ideal(parts: &[(u32, MPoly2)]) -> MPoly2 {
    let u = RingContext::unbounded();
    parts.iter().fold(MPoly2::zero(Namespace::Sw), |acc, (i, r)| {
        let sq = MPoly2::w(*i).square(&u);
        acc.add(&sq.mul(r, &u).expect("w namespace"), &u)
            .expect("w namespace")
    })
}

/// Whether `c(F ⊕ G) = c(G)` in the oracle ring, with `F` the fibre bundle
/// over `U/O` and `G` the universal bundle.
///
/// The caps must not truncate anything up to `deg c`, and a finite degree cap
/// is needed to materialize the bundle totals.
pub fn invariance_oracle(c: &MPoly2, ctx: &RingContext) -> Result<bool> {
    require_sw(c)?;
    let deg = c.degree().unwrap_or(0);
    ctx.require_exact_through(deg)?;
    // working at exactly deg c is enough and keeps the totals small
    let work = RingContext {
        degree_cap: Some(deg),
        rank_cap: ctx.rank_cap,
    };
    let g = universal_bundle(&work)?;
    let f = fiber_bundle(&work)?;
    let fg = whitney_sum(&f, &g, &work)?;
    let lhs = evaluate_class(c, &fg, &work)?.to_ext()?;
    let rhs = evaluate_class(c, &g, &work)?.to_ext()?;
    Ok(lhs == rhs)
}

/// Which reading of the first sum in the Lemma 3 expansion to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Lemma3Mode {
    /// First-sum factor `w_2^2`, the value forced by expanding `Sq^1` directly.
    #[default]
    Derived,
    /// First-sum factor `w_1^2`, exactly as printed.
    Verbatim,
}

impl Lemma3Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Lemma3Mode::Derived => "derived",
            Lemma3Mode::Verbatim => "verbatim",
        }
    }
}

/// `ρ(V_I^2)(b) = (Sq^1(prod_{d ∈ I} w_d))^2` evaluated on `b`.
pub fn lemma3_lhs(i: &IndexSet, b: &FormalBundle, ctx: &RingContext) -> Result<AmbientPoly> {
    let prod = MPoly2::from_monomial(i.w_product());
    let class = sq1(&prod, &RingContext::unbounded())?.square(&RingContext::unbounded());
    evaluate_class(&class, b, ctx)
}

/// The universal class whose value on `b ⊕ b` is the Lemma 3 right-hand side.
pub fn lemma3_rhs_class(i: &IndexSet, mode: Lemma3Mode) -> MPoly2 {
    let u = RingContext::unbounded();
    let others = |d: u32| {
        WMonomial::from_exponents(
            Namespace::Sw,
            i.doubled().iter().filter(|&&x| x != d).map(|&x| (2 * x, 1)),
        )
    };
    let mut terms = Vec::new();
    for &d in i.doubled() {
        let rest = others(d);
        if d == 1 {
            let factor = match mode {
                Lemma3Mode::Derived => WMonomial::from_exponents(Namespace::Sw, [(2, 2)]),
                Lemma3Mode::Verbatim => WMonomial::from_exponents(Namespace::Sw, [(1, 2)]),
            };
            terms.push(factor.mul(&rest));
        } else {
            terms.push(WMonomial::var(Namespace::Sw, 2 * d + 2).mul(&rest));
            terms.push(WMonomial::from_exponents(Namespace::Sw, [(2, 1), (2 * d, 1)]).mul(&rest));
        }
    }
    MPoly2::from_monomials(Namespace::Sw, terms).reduce(&u)
}

/// The Lemma 3 expansion, evaluated at `b ⊕ b`.
pub fn lemma3_rhs(
    i: &IndexSet,
    b: &FormalBundle,
    ctx: &RingContext,
    mode: Lemma3Mode,
) -> Result<AmbientPoly> {
    let bb = whitney_sum(b, b, ctx)?;
    evaluate_class(&lemma3_rhs_class(i, mode), &bb, ctx)
}

/// Theorem 2's criterion: the reduction of the torsion part lies in
/// `Z/2[w_i^2]`. The free part is always complexifiable.
pub fn is_complexifiable_integral(c: &IntClass, ctx: &RingContext) -> Result<bool> {
    Ok(is_complexifiable_mod2(&torsion_image(c, ctx)?))
}

fn torsion_image(c: &IntClass, ctx: &RingContext) -> Result<MPoly2> {
    let needed = c.degree().unwrap_or(0);
    if !ctx.admits_degree(needed) {
        return Err(Error::DegreeCapTooSmall {
            needed,
            cap: ctx.degree_cap,
        });
    }
    Ok(rho(&c.torsion_part(), ctx))
}

/// A monomial in the Chern symbols `c_k` (degree `2k`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CMonomial(SmallVec<[(u32, u32); 4]>);

impl CMonomial {
    pub fn from_exponents(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut acc: BTreeMap<u32, u32> = BTreeMap::new();
        for (k, e) in pairs {
            if e > 0 {
                *acc.entry(k).or_default() += e;
            }
        }
        CMonomial(acc.into_iter().collect())
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(k, e)| 2 * k * e).sum()
    }
}

impl Ord for CMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| lex_desc(&self.0, &other.0))
    }
}

impl PartialOrd for CMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (n, &(k, e)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "c{k}")?;
            } else {
                write!(f, "c{k}^{e}")?;
            }
        }
        Ok(())
    }
}

/// `C(ξ) = P((-1)^i c_{2i}(ξ^C)) + ρ|^{-1}(Q(ρ c_j(ξ^C)))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernExpr {
    free_expr: BTreeMap<CMonomial, i64>,
    /// `Q`, with `u_j` read as `ρ c_j`.
    torsion_expr: SquaresPoly,
    lift_marker: bool,
}

impl ChernExpr {
    pub fn free_expr(&self) -> impl Iterator<Item = (&CMonomial, i64)> {
        self.free_expr.iter().map(|(m, &k)| (m, k))
    }

    pub fn torsion_expr(&self) -> &SquaresPoly {
        &self.torsion_expr
    }

    /// Set when `torsion_expr` stands for the unique torsion class with this
    /// mod-2 reduction.
    pub fn lift_marker(&self) -> bool {
        self.lift_marker
    }

    /// `c_{2i} -> (-1)^i p_i`.
    pub fn expand_free(&self) -> IntClass {
        IntClass::from_parts(
            self.free_expr.iter().map(|(m, &k)| {
                let sign: i64 = m
                    .exponents()
                    .iter()
                    .map(|&(c, e)| if (c / 2) % 2 == 1 && e % 2 == 1 { -1 } else { 1 })
                    .product();
                let p = PMonomial::from_exponents(m.exponents().iter().map(|&(c, e)| (c / 2, e)));
                (p, sign * k)
            }),
            [],
        )
    }

    /// `ρ c_j -> w_j^2`.
    pub fn expand_torsion(&self) -> MPoly2 {
        self.torsion_expr.expand()
    }
}

impl fmt::Display for ChernExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, k) in self.free_expr() {
            if first {
                if k < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if k < 0 { " - " } else { " + " })?;
            }
            first = false;
            let a = k.unsigned_abs();
            match (m.is_one(), a) {
                (true, _) => write!(f, "{a}")?,
                (false, 1) => write!(f, "{m}")?,
                (false, _) => write!(f, "{a}*{m}")?,
            }
        }
        if !self.torsion_expr.poly_in_u().is_zero() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let q = self.torsion_expr.poly_in_u().to_string().replace('w', "rc");
            write!(f, "lift({q})")?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Write a complexifiable integral class through Chern classes of the
/// complexification.
pub fn express_via_chern(c: &IntClass, ctx: &RingContext) -> Result<ChernExpr> {
    let image = torsion_image(c, ctx)?;
    let torsion_expr = subring_decomposition(&image)?;
    let free_expr = c
        .free_terms()
        .map(|(m, k)| {
            let sign: i64 = m
                .exponents()
                .iter()
                .map(|&(i, e)| if i % 2 == 1 && e % 2 == 1 { -1 } else { 1 })
                .product();
            let cm = CMonomial::from_exponents(m.exponents().iter().map(|&(i, e)| (2 * i, e)));
            (cm, sign * k)
        })
        .collect();
    Ok(ChernExpr {
        free_expr,
        lift_marker: !torsion_expr.poly_in_u().is_zero(),
        torsion_expr,
    })
}
