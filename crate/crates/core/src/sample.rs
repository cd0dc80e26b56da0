//! Seeded random classes for verification sweeps and tests.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::feshbach::{IndexSet, IntClass, PMonomial, TMonomial};
use crate::wring::{MPoly2, Namespace, RingContext, WMonomial};

/// The generator every suite uses, so that a seed pins a report.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random nonconstant `w`-monomial of degree at most `max_degree`, in
/// `w_1 .. w_max_index`.
pub fn monomial<R: Rng + ?Sized>(rng: &mut R, max_degree: u32, max_index: u32) -> WMonomial {
    let target = rng.gen_range(1..=max_degree.max(1));
    let mut left = target;
    let mut pairs = Vec::new();
    while left > 0 {
        let i = rng.gen_range(1..=max_index.min(left));
        let e = rng.gen_range(1..=(left / i).min(4));
        pairs.push((i, e));
        left -= i * e;
        if rng.gen_bool(0.25) {
            break;
        }
    }
    WMonomial::from_exponents(Namespace::Sw, pairs)
}

/// A random polynomial with up to `max_terms` monomials; may include `1`.
pub fn mpoly<R: Rng + ?Sized>(rng: &mut R, max_degree: u32, max_index: u32, max_terms: usize) -> MPoly2 {
    let n = rng.gen_range(1..=max_terms.max(1));
    let mut ms: Vec<WMonomial> = (0..n).map(|_| monomial(rng, max_degree, max_index)).collect();
    if rng.gen_bool(0.2) {
        ms.push(WMonomial::one(Namespace::Sw));
    }
    MPoly2::from_monomials(Namespace::Sw, ms)
}

/// A random member of `Z/2[w_i^2]` of degree at most `max_degree`.
pub fn squares_member<R: Rng + ?Sized>(rng: &mut R, max_degree: u32, max_terms: usize) -> MPoly2 {
    let half = mpoly(rng, (max_degree / 2).max(1), max_degree / 2 + 1, max_terms);
    half.square(&RingContext::unbounded())
}

/// A random polynomial that is not in `Z/2[w_i^2]`.
pub fn squares_nonmember<R: Rng + ?Sized>(rng: &mut R, max_degree: u32, max_terms: usize) -> MPoly2 {
    loop {
        let member = squares_member(rng, max_degree, max_terms);
        let odd = loop {
            let m = monomial(rng, max_degree, max_degree);
            if !m.all_exponents_even() {
                break m;
            }
        };
        let c = member
            .add(&MPoly2::from_monomial(odd), &RingContext::unbounded())
            .expect("w namespace");
        if c.terms().iter().any(|m| !m.all_exponents_even()) {
            return c;
        }
    }
}

/// A random element `Σ w_i^2 · r_i` of the ideal generated by squares.
pub fn ideal_element<R: Rng + ?Sized>(rng: &mut R, max_degree: u32, max_terms: usize) -> MPoly2 {
    let u = RingContext::unbounded();
    let n = rng.gen_range(1..=max_terms.max(1));
    let mut acc = MPoly2::zero(Namespace::Sw);
    for _ in 0..n {
        let i = rng.gen_range(1..=(max_degree / 2).max(1));
        let sq = MPoly2::w(i).square(&u);
        let room = max_degree.saturating_sub(2 * i);
        let r = if room == 0 {
            MPoly2::one(Namespace::Sw)
        } else {
            mpoly(rng, room, room, 3)
        };
        acc = acc.add(&sq.mul(&r, &u).expect("w namespace"), &u).expect("w namespace");
    }
    acc
}

/// A random polynomial containing at least one square-free nonconstant
/// monomial.
pub fn with_square_free<R: Rng + ?Sized>(rng: &mut R, max_degree: u32, max_terms: usize) -> MPoly2 {
    let u = RingContext::unbounded();
    loop {
        let base = ideal_element(rng, max_degree, max_terms);
        let mut idx: Vec<u32> = (1..=max_degree.min(8)).collect();
        idx.shuffle(rng);
        let mut pairs = Vec::new();
        let mut deg = 0;
        for i in idx {
            if deg + i <= max_degree && (pairs.is_empty() || rng.gen_bool(0.5)) {
                pairs.push((i, 1));
                deg += i;
            }
        }
        let sf = MPoly2::from_monomial(WMonomial::from_exponents(Namespace::Sw, pairs));
        let c = base.add(&sf, &u).expect("w namespace");
        if c.terms().iter().any(|m| !m.is_one() && !m.has_squared_variable()) {
            return c;
        }
    }
}

/// A random index set with doubled entries at most `max_doubled`.
pub fn index_set<R: Rng + ?Sized>(rng: &mut R, max_doubled: u32) -> IndexSet {
    let elements: Vec<u32> = std::iter::once(1)
        .chain((1..=max_doubled / 2).map(|k| 2 * k))
        .collect();
    loop {
        let chosen: Vec<u32> = elements.iter().copied().filter(|_| rng.gen_bool(0.35)).collect();
        if let Ok(s) = IndexSet::new(chosen) {
            return s;
        }
    }
}

fn p_monomial<R: Rng + ?Sized>(rng: &mut R, max_degree: u32) -> PMonomial {
    let mut left = max_degree / 4;
    let mut pairs = Vec::new();
    while left > 0 && rng.gen_bool(0.6) {
        let i = rng.gen_range(1..=left);
        pairs.push((i, 1));
        left -= i;
    }
    PMonomial::from_exponents(pairs)
}

/// A random polynomial in `{V_I^2, V_{1/2}, p_i}` of degree at most
/// `max_degree`.
pub fn theorem2_class<R: Rng + ?Sized>(rng: &mut R, max_degree: u32, max_terms: usize) -> IntClass {
    let n = rng.gen_range(1..=max_terms.max(1));
    let mut acc = IntClass::zero();
    for _ in 0..n {
        if rng.gen_bool(0.3) {
            let p = p_monomial(rng, max_degree);
            let coeff = rng.gen_range(-5i64..=5);
            acc = acc.add(&IntClass::free_term(p, coeff));
            continue;
        }
        let mut factors: Vec<(IndexSet, u32)> = Vec::new();
        let mut deg = 0;
        while factors.is_empty() || rng.gen_bool(0.4) {
            let (set, e) = if rng.gen_bool(0.3) {
                (IndexSet::half(), rng.gen_range(1..=3))
            } else {
                (index_set(rng, 6), 2)
            };
            let d = set.degree() * e;
            if deg + d > max_degree {
                if factors.is_empty() {
                    continue;
                }
                break;
            }
            deg += d;
            factors.push((set, e));
        }
        let p = p_monomial(rng, max_degree - deg);
        acc = acc.add(&IntClass::torsion_term(TMonomial::new(p, factors).expect("nonempty")));
    }
    acc
}

/// A random integral class with both parts, free coefficients in `[-9, 9]`.
pub fn int_class<R: Rng + ?Sized>(rng: &mut R, max_degree: u32, max_terms: usize) -> IntClass {
    let n = rng.gen_range(1..=max_terms.max(1));
    let mut acc = IntClass::zero();
    for _ in 0..n {
        if rng.gen_bool(0.5) {
            let coeff = rng.gen_range(-9i64..=9);
            acc = acc.add(&IntClass::free_term(p_monomial(rng, max_degree), coeff));
        } else {
            let k = rng.gen_range(1..=2);
            let v: Vec<(IndexSet, u32)> = (0..k).map(|_| (index_set(rng, 6), rng.gen_range(1..=2))).collect();
            let p = p_monomial(rng, max_degree / 2);
            acc = acc.add(&IntClass::torsion_term(TMonomial::new(p, v).expect("nonempty")));
        }
    }
    acc
}

/// Every monomial in `w_1 .. w_max_index` of degree at most `max_degree`,
/// including `1`.
pub fn dense(max_degree: u32, max_index: u32) -> MPoly2 {
    fn go(i: u32, left: u32, max_index: u32, cur: &mut Vec<(u32, u32)>, out: &mut Vec<WMonomial>) {
        if i > max_index {
            out.push(WMonomial::from_exponents(Namespace::Sw, cur.iter().copied()));
            return;
        }
        for e in 0..=left / i {
            cur.push((i, e));
            go(i + 1, left - e * i, max_index, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, max_degree, max_index, &mut Vec::new(), &mut out);
    MPoly2::from_monomials(Namespace::Sw, out)
}
