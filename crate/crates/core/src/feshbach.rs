//! Feshbach's presentation of `H*(BO_n; Z)`.
//!
//! Generators are the Pontrjagin classes `p_i` (degree `4i`) and the 2-torsion
//! classes `V_I`, where `I` is a finite nonempty subset of `{1/2} ∪ N`.
//! Index sets are stored in doubled form (`1/2 -> 1`, `k -> 2k`), which has
//! the convenient property that `ρ(V_I) = Sq^1(prod_{d ∈ I} w_d)`.
//!
//! Torsion products are kept as formal monomials; equality of torsion classes
//! is decided through the mod-2 reduction `ρ`, which is injective on torsion.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rustc_hash::FxHashMap;
use serde_json::json;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::report::{Report, Status};
use crate::steenrod::sq1;
use crate::wring::{MPoly2, Namespace, RingContext, WMonomial};

/// Rank `n` of `BO_n`; `Infinite` is the stable `BO`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Rank {
    Finite(u32),
    #[default]
    Infinite,
}

impl Rank {
    pub fn finite(self) -> Option<u32> {
        match self {
            Rank::Finite(n) => Some(n),
            Rank::Infinite => None,
        }
    }

    /// `n` when `n > 1` is even, the rank at which the `{1/2, n/2}` proviso
    /// and relation 6 apply.
    fn even_top(self) -> Option<u32> {
        self.finite().filter(|&n| n > 1 && n % 2 == 0)
    }

    pub fn context(self, degree_cap: Option<u32>) -> RingContext {
        RingContext {
            degree_cap,
            rank_cap: self.finite(),
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Infinite => f.write_str("infinity"),
        }
    }
}

/// A nonempty set of indices from `{1/2} ∪ N`, in doubled encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(SmallVec<[u32; 4]>);

impl IndexSet {
    /// From doubled indices: `1` encodes `1/2`, `2k` encodes `k`.
    pub fn new(doubled: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut v: SmallVec<[u32; 4]> = doubled.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if let Some(&bad) = v.iter().find(|&&d| d == 0 || (d != 1 && d % 2 == 1)) {
            return Err(Error::InvalidIndexSet {
                set: format!("{v:?}"),
                rank: "any".into(),
                reason: if bad == 0 {
                    "indices must be positive"
                } else {
                    "only 1/2 and positive integers are indices"
                },
            });
        }
        if v.is_empty() {
            return Err(Error::InvalidIndexSet {
                set: "{}".into(),
                rank: "any".into(),
                reason: "index sets are nonempty",
            });
        }
        Ok(IndexSet(v))
    }

    /// The singleton `{k}` for a doubled index `d`.
    pub fn single(d: u32) -> Self {
        IndexSet::new([d]).expect("valid doubled index")
    }

    pub fn half() -> Self {
        IndexSet::single(1)
    }

    fn from_raw(v: SmallVec<[u32; 4]>) -> Option<Self> {
        (!v.is_empty()).then_some(IndexSet(v))
    }

    pub fn doubled(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, d: u32) -> bool {
        self.0.binary_search(&d).is_ok()
    }

    pub fn contains_half(&self) -> bool {
        self.0.first() == Some(&1)
    }

    pub fn min(&self) -> u32 {
        self.0[0]
    }

    /// `deg V_I = 1 + Σ 2i`, which is `1 + Σ d` in doubled form.
    pub fn degree(&self) -> u32 {
        1 + self.0.iter().sum::<u32>()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|d| other.contains(*d))
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut v: SmallVec<[u32; 4]> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }

    pub fn intersection(&self, other: &IndexSet) -> Option<IndexSet> {
        Self::from_raw(self.0.iter().copied().filter(|d| other.contains(*d)).collect())
    }

    pub fn difference(&self, other: &IndexSet) -> Option<IndexSet> {
        Self::from_raw(self.0.iter().copied().filter(|d| !other.contains(*d)).collect())
    }

    pub fn without(&self, d: u32) -> Option<IndexSet> {
        Self::from_raw(self.0.iter().copied().filter(|&x| x != d).collect())
    }

    pub fn with(&self, d: u32) -> IndexSet {
        self.union(&IndexSet::single(d))
    }

    /// Whether `V_I` is a generator of `H*(BO_n; Z)`.
    pub fn validate(&self, rank: Rank) -> Result<()> {
        let Some(n) = rank.finite() else {
            return Ok(());
        };
        let err = |reason| Error::InvalidIndexSet {
            set: self.to_string(),
            rank: rank.to_string(),
            reason,
        };
        // integer index k needs 0 < k < (n+1)/2, i.e. 2k <= n
        if self.0.iter().any(|&d| d != 1 && d > n) {
            return Err(err("integer indices k must satisfy 0 < k < (n+1)/2"));
        }
        if rank.even_top().is_some() && self.contains_half() && self.contains(n) {
            return Err(err("I may not contain both 1/2 and n/2"));
        }
        Ok(())
    }

    /// `prod_{d ∈ I} w_d`.
    pub fn w_product(&self) -> WMonomial {
        WMonomial::from_exponents(Namespace::Sw, self.0.iter().map(|&d| (d, 1)))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, &d) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            if d == 1 {
                f.write_str("1/2")?;
            } else {
                write!(f, "{}", d / 2)?;
            }
        }
        f.write_str("}")
    }
}

/// Graded-lex tie-break on sorted `(index, exponent)` lists.
pub(crate) fn lex_desc(a: &[(u32, u32)], b: &[(u32, u32)]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.0.cmp(&y.0) {
            Ordering::Equal => match y.1.cmp(&x.1) {
                Ordering::Equal => {}
                o => return o,
            },
            o => return o,
        }
    }
    b.len().cmp(&a.len())
}

/// A monomial in the Pontrjagin symbols, `prod p_i^(e_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PMonomial(SmallVec<[(u32, u32); 4]>);

impl PMonomial {
    pub fn one() -> Self {
        PMonomial::default()
    }

    pub fn from_exponents(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut acc: BTreeMap<u32, u32> = BTreeMap::new();
        for (i, e) in pairs {
            if e > 0 {
                assert!(i > 0, "Pontrjagin indices start at 1");
                *acc.entry(i).or_default() += e;
            }
        }
        PMonomial(acc.into_iter().collect())
    }

    pub fn p(i: u32) -> Self {
        Self::from_exponents([(i, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(i, e)| 4 * i * e).sum()
    }

    pub fn mul(&self, other: &PMonomial) -> PMonomial {
        Self::from_exponents(self.0.iter().chain(other.0.iter()).copied())
    }
}

impl Ord for PMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| lex_desc(&self.0, &other.0))
    }
}

impl PartialOrd for PMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, &(i, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "p{i}")?;
            } else {
                write!(f, "p{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A torsion monomial `P · prod V_I^(e_I)` with at least one `V` factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TMonomial {
    p: PMonomial,
    v: SmallVec<[(IndexSet, u32); 2]>,
}

impl TMonomial {
    /// Returns `None` when no `V` factor has a positive exponent.
    pub fn new(p: PMonomial, v: impl IntoIterator<Item = (IndexSet, u32)>) -> Option<Self> {
        let mut acc: BTreeMap<IndexSet, u32> = BTreeMap::new();
        for (i, e) in v {
            if e > 0 {
                *acc.entry(i).or_default() += e;
            }
        }
        if acc.is_empty() {
            return None;
        }
        Some(TMonomial {
            p,
            v: acc.into_iter().collect(),
        })
    }

    pub fn v_single(i: IndexSet) -> Self {
        TMonomial::new(PMonomial::one(), [(i, 1)]).expect("one V factor")
    }

    pub fn p_part(&self) -> &PMonomial {
        &self.p
    }

    pub fn v_part(&self) -> &[(IndexSet, u32)] {
        &self.v
    }

    pub fn degree(&self) -> u32 {
        self.p.degree() + self.v.iter().map(|(i, e)| i.degree() * e).sum::<u32>()
    }

    pub fn mul(&self, other: &TMonomial) -> TMonomial {
        TMonomial::new(
            self.p.mul(&other.p),
            self.v.iter().chain(other.v.iter()).cloned(),
        )
        .expect("product keeps V factors")
    }

    pub fn mul_p(&self, p: &PMonomial) -> TMonomial {
        TMonomial {
            p: self.p.mul(p),
            v: self.v.clone(),
        }
    }
}

impl Ord for TMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.p.cmp(&other.p))
            .then_with(|| self.v.cmp(&other.v))
    }
}

impl PartialOrd for TMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.p.is_one() {
            write!(f, "{}*", self.p)?;
        }
        for (k, (i, e)) in self.v.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "V{i}")?;
            } else {
                write!(f, "V{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// An integral class: a `Z`-polynomial in the `p_i` (free part) plus an
/// `F_2`-combination of torsion monomials. `2 V_I = 0` is built in.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntClass {
    free: BTreeMap<PMonomial, i64>,
    torsion: BTreeSet<TMonomial>,
}

impl IntClass {
    pub fn zero() -> Self {
        IntClass::default()
    }

    pub fn int(n: i64) -> Self {
        Self::free_term(PMonomial::one(), n)
    }

    pub fn p(i: u32) -> Self {
        Self::free_term(PMonomial::p(i), 1)
    }

    pub fn v(i: IndexSet) -> Self {
        Self::torsion_term(TMonomial::v_single(i))
    }

    pub fn free_term(m: PMonomial, coeff: i64) -> Self {
        let mut c = IntClass::zero();
        if coeff != 0 {
            c.free.insert(m, coeff);
        }
        c
    }

    pub fn torsion_term(m: TMonomial) -> Self {
        let mut c = IntClass::zero();
        c.torsion.insert(m);
        c
    }

    /// Build from parts; repeated free monomials add, repeated torsion
    /// monomials cancel in pairs.
    pub fn from_parts(
        free: impl IntoIterator<Item = (PMonomial, i64)>,
        torsion: impl IntoIterator<Item = TMonomial>,
    ) -> Self {
        let mut c = IntClass::zero();
        for (m, k) in free {
            c.add_free(m, k);
        }
        for m in torsion {
            c.toggle_torsion(m);
        }
        c
    }

    fn add_free(&mut self, m: PMonomial, k: i64) {
        self.try_add_free(m, k).expect("integer coefficient overflow");
    }

    fn try_add_free(&mut self, m: PMonomial, k: i64) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        let entry = self.free.entry(m.clone()).or_insert(0);
        *entry = entry.checked_add(k).ok_or(Error::CoefficientOverflow)?;
        if *entry == 0 {
            self.free.remove(&m);
        }
        Ok(())
    }

    fn toggle_torsion(&mut self, m: TMonomial) {
        if !self.torsion.remove(&m) {
            self.torsion.insert(m);
        }
    }

    pub fn free_terms(&self) -> impl Iterator<Item = (&PMonomial, i64)> {
        self.free.iter().map(|(m, &k)| (m, k))
    }

    pub fn torsion_terms(&self) -> impl Iterator<Item = &TMonomial> {
        self.torsion.iter()
    }

    pub fn free_part(&self) -> IntClass {
        IntClass {
            free: self.free.clone(),
            torsion: BTreeSet::new(),
        }
    }

    pub fn torsion_part(&self) -> IntClass {
        IntClass {
            free: BTreeMap::new(),
            torsion: self.torsion.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free.is_empty() && self.torsion.is_empty()
    }

    pub fn is_torsion(&self) -> bool {
        self.free.is_empty()
    }

    /// Top degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.free
            .keys()
            .map(PMonomial::degree)
            .chain(self.torsion.iter().map(TMonomial::degree))
            .max()
    }

    pub fn index_sets(&self) -> impl Iterator<Item = &IndexSet> {
        self.torsion.iter().flat_map(|m| m.v.iter().map(|(i, _)| i))
    }

    pub fn validate(&self, rank: Rank) -> Result<()> {
        self.index_sets().try_for_each(|i| i.validate(rank))
    }

    /// Panics on coefficient overflow; see [`IntClass::checked_neg`].
    pub fn neg(&self) -> IntClass {
        self.checked_neg().expect("integer coefficient overflow")
    }

    pub fn checked_neg(&self) -> Result<IntClass> {
        Ok(IntClass {
            free: self
                .free
                .iter()
                .map(|(m, &k)| Ok((m.clone(), k.checked_neg().ok_or(Error::CoefficientOverflow)?)))
                .collect::<Result<_>>()?,
            torsion: self.torsion.clone(),
        })
    }

    /// Panics on coefficient overflow; see [`IntClass::checked_add`].
    pub fn add(&self, other: &IntClass) -> IntClass {
        self.checked_add(other).expect("integer coefficient overflow")
    }

    pub fn checked_add(&self, other: &IntClass) -> Result<IntClass> {
        let mut c = self.clone();
        for (m, &k) in &other.free {
            c.try_add_free(m.clone(), k)?;
        }
        for m in &other.torsion {
            c.toggle_torsion(m.clone());
        }
        Ok(c)
    }

    pub fn sub(&self, other: &IntClass) -> IntClass {
        self.add(&other.neg())
    }

    /// Ring product, after checking every `V` index set against `rank`.
    pub fn mul(&self, other: &IntClass, rank: Rank) -> Result<IntClass> {
        self.validate(rank)?;
        other.validate(rank)?;
        self.try_mul(other)
    }

    pub(crate) fn mul_unchecked(&self, other: &IntClass) -> IntClass {
        self.try_mul(other).expect("integer coefficient overflow")
    }

    fn try_mul(&self, other: &IntClass) -> Result<IntClass> {
        let mut c = IntClass::zero();
        for (a, &x) in &self.free {
            for (b, &y) in &other.free {
                c.try_add_free(a.mul(b), x.checked_mul(y).ok_or(Error::CoefficientOverflow)?)?;
            }
        }
        for (a, &x) in &self.free {
            if x % 2 != 0 {
                for t in &other.torsion {
                    c.toggle_torsion(t.mul_p(a));
                }
            }
        }
        for (b, &y) in &other.free {
            if y % 2 != 0 {
                for t in &self.torsion {
                    c.toggle_torsion(t.mul_p(b));
                }
            }
        }
        for s in &self.torsion {
            for t in &other.torsion {
                c.toggle_torsion(s.mul(t));
            }
        }
        Ok(c)
    }

    pub fn pow(&self, e: u32, rank: Rank) -> Result<IntClass> {
        self.validate(rank)?;
        let mut result = IntClass::int(1);
        let mut sq = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.try_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.try_mul(&sq)?;
            }
        }
        Ok(result)
    }
}

impl fmt::Display for IntClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, &k) in &self.free {
            let sign = if k < 0 { "-" } else { "+" };
            if first {
                if k < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = k.unsigned_abs();
            match (m.is_one(), a) {
                (true, _) => write!(f, "{a}")?,
                (false, 1) => write!(f, "{m}")?,
                (false, _) => write!(f, "{a}*{m}")?,
            }
        }
        for t in &self.torsion {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// `ρ(V_I) = Sq^1(prod_{d ∈ I} w_d)`.
pub fn rho_v(i: &IndexSet, ctx: &RingContext) -> MPoly2 {
    sq1(&MPoly2::from_monomial(i.w_product()).reduce(ctx), ctx).expect("w namespace")
}

/// `ρ(p_i) = w_{2i}^2`.
pub fn rho_p(m: &PMonomial) -> WMonomial {
    WMonomial::from_exponents(Namespace::Sw, m.exponents().iter().map(|&(i, e)| (2 * i, 2 * e)))
}

/// Mod-2 reduction, a ring homomorphism `H*(BO_n; Z) -> H*(BO_n; Z/2)`.
pub fn rho(a: &IntClass, ctx: &RingContext) -> MPoly2 {
    let mut out = MPoly2::zero(Namespace::Sw);
    for (m, k) in a.free_terms() {
        if k % 2 != 0 {
            let t = MPoly2::from_monomial(rho_p(m));
            out = out.add(&t, ctx).expect("w namespace");
        }
    }
    let mut cache: FxHashMap<(&IndexSet, u32), MPoly2> = FxHashMap::default();
    for t in a.torsion_terms() {
        let mut prod = MPoly2::from_monomial(rho_p(&t.p)).reduce(ctx);
        for (i, e) in &t.v {
            if prod.is_zero() {
                break;
            }
            let factor = cache
                .entry((i, *e))
                .or_insert_with(|| rho_v(i, ctx).pow(*e, ctx));
            prod = prod.mul(factor, ctx).expect("w namespace");
        }
        out = out.add(&prod, ctx).expect("w namespace");
    }
    out
}

/// Equality of two classes whose difference is torsion: free parts must agree
/// exactly and torsion parts must agree after `ρ`.
///
/// Refuses to answer when the degree cap of `ctx` would truncate either class.
pub fn torsion_equal(a: &IntClass, b: &IntClass, ctx: &RingContext) -> Result<bool> {
    if a.free != b.free {
        return Ok(false);
    }
    let needed = a.degree().max(b.degree()).unwrap_or(0);
    if !ctx.admits_degree(needed) {
        return Err(Error::DegreeCapTooSmall {
            needed,
            cap: ctx.degree_cap,
        });
    }
    Ok(rho(&a.torsion_part(), ctx) == rho(&b.torsion_part(), ctx))
}

/// `V_K` read with the appendix convention: when `{1/2, n/2} ⊂ K` at even
/// finite rank, `V_K` means `V_{n/2} · V_{K \ {1/2, n/2}}`, and `V_∅ = 0`
/// (its reduction `Sq^1(1)` vanishes).
pub fn v_symbol(k: &IndexSet, rank: Rank) -> IntClass {
    if let Some(n) = rank.even_top() {
        if k.contains_half() && k.contains(n) {
            return match k.without(1).and_then(|r| r.without(n)) {
                Some(rest) => IntClass::v(IndexSet::single(n)).mul_unchecked(&IntClass::v(rest)),
                None => IntClass::zero(),
            };
        }
    }
    IntClass::v(k.clone())
}

/// `p_i` for a doubled index, with `p_{1/2}` meaning `V_{1/2}`.
pub fn p_symbol(d: u32) -> IntClass {
    if d == 1 {
        IntClass::v(IndexSet::half())
    } else {
        IntClass::p(d / 2)
    }
}

fn p_product(set: Option<&IndexSet>) -> IntClass {
    set.map_or(IntClass::int(1), |s| {
        s.doubled()
            .iter()
            .fold(IntClass::int(1), |acc, &d| acc.mul_unchecked(&p_symbol(d)))
    })
}

/// One instance of the six relation families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `2 V_I = 0`.
    TwoTorsion(IndexSet),
    /// `V_I V_J + V_{I∪J} V_{I∩J} + V_{I\J} V_{J\I} prod_{I∩J} p_i`.
    Overlap(IndexSet, IndexSet),
    /// `V_I V_J + Σ_{i∈I} V_{i} V_{(J\I)∪{i}} prod_{I\{i}} p_j`, `I ⊆ J`.
    Nested(IndexSet, IndexSet),
    /// `V_I V_J + Σ_{i∈I} V_{i} V_{(I∪J)\{i}}`, `I ∩ J = ∅`.
    Disjoint(IndexSet, IndexSet),
    /// `Σ_{i∈I} V_{i} V_{I\{i}}`.
    Split(IndexSet),
    /// `V_{1/2} p_{n/2} + V_{n/2}^2` at even rank `n`.
    TopClass,
}

impl Relation {
    pub fn number(&self) -> u8 {
        match self {
            Relation::TwoTorsion(_) => 1,
            Relation::Overlap(..) => 2,
            Relation::Nested(..) => 3,
            Relation::Disjoint(..) => 4,
            Relation::Split(_) => 5,
            Relation::TopClass => 6,
        }
    }

    /// Degree of the (homogeneous) left-hand side.
    pub fn degree(&self, rank: Rank) -> Option<u32> {
        match self {
            Relation::TwoTorsion(i) => Some(i.degree()),
            Relation::Overlap(i, j) | Relation::Nested(i, j) | Relation::Disjoint(i, j) => {
                Some(i.degree() + j.degree())
            }
            Relation::Split(i) => Some(i.degree() + 1),
            Relation::TopClass => rank.even_top().map(|n| 2 * n + 2),
        }
    }

    fn fail(&self, reason: impl Into<String>) -> Error {
        Error::SideCondition {
            relation: self.number(),
            reason: reason.into(),
        }
    }

    fn check(&self, rank: Rank) -> Result<()> {
        let sizes = |i: &IndexSet, j: &IndexSet| -> Result<()> {
            i.validate(rank)?;
            j.validate(rank)?;
            if i.len() < 2 || i.len() > j.len() {
                return Err(self.fail("need 1 < |I| <= |J|"));
            }
            Ok(())
        };
        match self {
            Relation::TwoTorsion(i) => i.validate(rank),
            Relation::Overlap(i, j) => {
                sizes(i, j)?;
                if i.intersection(j).is_none() {
                    return Err(self.fail("needs I ∩ J nonempty"));
                }
                if i.is_subset(j) {
                    return Err(self.fail("needs I not contained in J"));
                }
                Ok(())
            }
            Relation::Nested(i, j) => {
                sizes(i, j)?;
                if !i.is_subset(j) {
                    return Err(self.fail("needs I ⊆ J"));
                }
                Ok(())
            }
            Relation::Disjoint(i, j) => {
                sizes(i, j)?;
                if i.intersection(j).is_some() {
                    return Err(self.fail("needs I ∩ J empty"));
                }
                if i.len() == j.len() && i.min() >= j.min() {
                    return Err(self.fail("equal sizes need min I < min J"));
                }
                Ok(())
            }
            Relation::Split(i) => {
                i.validate(rank)?;
                if i.len() < 2 {
                    return Err(self.fail("needs |I| > 1"));
                }
                Ok(())
            }
            Relation::TopClass => match rank.even_top() {
                Some(_) => Ok(()),
                None => Err(self.fail("only at finite even rank n >= 2")),
            },
        }
    }

    /// The left-hand side as an integral class (torsion, expected to vanish
    /// under `ρ` in the rank-`n` ring).
    pub fn lhs(&self, rank: Rank) -> Result<IntClass> {
        self.check(rank)?;
        let v = |k: &IndexSet| v_symbol(k, rank);
        let vv = |a: &IndexSet, b: &IndexSet| v(a).mul_unchecked(&v(b));
        Ok(match self {
            Relation::TwoTorsion(i) => IntClass::int(2).mul_unchecked(&v(i)),
            Relation::Overlap(i, j) => {
                let meet = i.intersection(j).expect("checked");
                let only_i = i.difference(j).expect("I not inside J");
                let only_j = j.difference(i).expect("|I| <= |J| and I != J");
                vv(i, j)
                    .add(&vv(&i.union(j), &meet))
                    .add(&vv(&only_i, &only_j).mul_unchecked(&p_product(Some(&meet))))
            }
            Relation::Nested(i, j) => {
                let rest = j.difference(i);
                i.doubled().iter().fold(vv(i, j), |acc, &d| {
                    let k = rest.as_ref().map_or(IndexSet::single(d), |r| r.with(d));
                    let term = vv(&IndexSet::single(d), &k).mul_unchecked(&p_product(i.without(d).as_ref()));
                    acc.add(&term)
                })
            }
            Relation::Disjoint(i, j) => {
                let all = i.union(j);
                i.doubled().iter().fold(vv(i, j), |acc, &d| {
                    acc.add(&vv(&IndexSet::single(d), &all.without(d).expect("|I ∪ J| > 1")))
                })
            }
            Relation::Split(i) => i.doubled().iter().fold(IntClass::zero(), |acc, &d| {
                acc.add(&vv(&IndexSet::single(d), &i.without(d).expect("|I| > 1")))
            }),
            Relation::TopClass => {
                let n = rank.even_top().expect("checked");
                IntClass::v(IndexSet::half())
                    .mul_unchecked(&p_symbol(n))
                    .add(&IntClass::v(IndexSet::single(n)).pow(2, Rank::Infinite)?)
            }
        })
    }

    fn describe(&self) -> serde_json::Value {
        let s = |i: &IndexSet| i.to_string();
        match self {
            Relation::TwoTorsion(i) | Relation::Split(i) => {
                json!({"relation": self.number(), "I": s(i)})
            }
            Relation::Overlap(i, j) | Relation::Nested(i, j) | Relation::Disjoint(i, j) => {
                json!({"relation": self.number(), "I": s(i), "J": s(j)})
            }
            Relation::TopClass => json!({"relation": 6}),
        }
    }
}

/// Every valid index set at finite rank `n`, in increasing order.
pub fn valid_index_sets(n: u32) -> Vec<IndexSet> {
    let rank = Rank::Finite(n);
    let elements: Vec<u32> = std::iter::once(1).chain((1..=n / 2).map(|k| 2 * k)).collect();
    let mut out: Vec<IndexSet> = (1u32..(1 << elements.len()))
        .filter_map(|mask| {
            let set = IndexSet::new(
                elements
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask & (1 << b) != 0)
                    .map(|(_, &d)| d),
            )
            .ok()?;
            set.validate(rank).ok().map(|_| set)
        })
        .collect();
    out.sort();
    out
}

/// All instances of relations 2-6 at rank `n` whose degree is at most
/// `degree_cap`, in a fixed order.
pub fn relation_instances(n: u32, degree_cap: u32) -> Vec<Relation> {
    let rank = Rank::Finite(n);
    let sets = valid_index_sets(n);
    let mut out = Vec::new();
    let candidates = sets.iter().flat_map(|i| {
        sets.iter().flat_map(move |j| {
            [
                Relation::Overlap(i.clone(), j.clone()),
                Relation::Nested(i.clone(), j.clone()),
                Relation::Disjoint(i.clone(), j.clone()),
            ]
        })
    });
    for r in candidates
        .chain(sets.iter().map(|i| Relation::Split(i.clone())))
        .chain(std::iter::once(Relation::TopClass))
    {
        if r.check(rank).is_ok() && r.degree(rank).is_some_and(|d| d <= degree_cap) {
            out.push(r);
        }
    }
    out.sort_by_key(|r| r.number());
    out
}

/// Check `ρ(lhs) = 0` in `H*(BO_n; Z/2)` for every relation instance of
/// degree at most `degree_cap`.
pub fn verify_relations(n: u32, degree_cap: u32) -> Report {
    let rank = Rank::Finite(n);
    let ctx = rank.context(Some(degree_cap));
    let mut report = Report::new("relations");
    for (k, r) in relation_instances(n, degree_cap).into_iter().enumerate() {
        let mut params = r.describe();
        params["n"] = json!(n);
        let id = format!("n{n}/r{}/{k}", r.number());
        match r.lhs(rank) {
            Ok(lhs) => {
                let image = rho(&lhs, &ctx);
                if image.is_zero() {
                    report.push(id, params, Status::Pass, format!("rho({lhs}) = 0"));
                } else {
                    report.push(id, params, Status::Fail, format!("rho({lhs}) = {image}"));
                }
            }
            Err(e) => report.push(id, params, Status::Fail, e.to_string()),
        }
    }
    report
}
