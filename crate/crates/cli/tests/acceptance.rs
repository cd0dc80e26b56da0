//! The acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Every criterion is checked against oracles written here, not against the
//! verification suites of the core crate (those are exercised through the
//! binary in criterion 10).

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use charclass_cli::elaborate::{elaborate, Class, Mode};
use charclass_cli::json::{from_json, to_json};
use charclass_cli::parse::parse;
use charclass_core::bundlecalc::{cartan_restrict, sw, underlying_of_complexification, universal_bundle};
use charclass_core::complexifiability::{
    express_via_chern, ideal_decomposition, invariance_oracle, is_complexifiable_integral, is_complexifiable_mod2,
    lemma3_lhs, lemma3_rhs,
};
use charclass_core::feshbach::{relation_instances, rho, Rank};
use charclass_core::steenrod::sq1;
use charclass_core::{
    sample, Error, IndexSet, IntClass, Lemma3Mode, MPoly2, Namespace, PMonomial, Report, RingContext, WMonomial,
};

type Outcome = Result<String, String>;

/// Name, time limit in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn u() -> RingContext {
    RingContext::unbounded()
}

fn c1_whitney_square() -> Outcome {
    let ctx = RingContext::with_degree_cap(24).rank(12);
    let xi = universal_bundle(&ctx).map_err(|e| e.to_string())?;
    let doubled = underlying_of_complexification(&xi, &ctx);
    for n in 1..=12 {
        let even = sw(&doubled, 2 * n);
        let expected = MPoly2::from_monomial(WMonomial::from_exponents(Namespace::Sw, [(n, 2)]));
        ensure(even.as_mod2() == Some(&expected), || format!("w{}(ξ⊕ξ) = {even}", 2 * n))?;
        let odd = sw(&doubled, 2 * n + 1);
        ensure(odd.is_zero(), || format!("w{}(ξ⊕ξ) = {odd}", 2 * n + 1))?;
    }
    Ok("24 identities, n = 1..12".into())
}

/// `Sq^1 w_j = w_1 w_j + (j - 1) w_{j+1}`.
fn wu_value(j: u32) -> MPoly2 {
    let mut ms = vec![WMonomial::from_exponents(Namespace::Sw, [(1, 1), (j, 1)])];
    if j % 2 == 0 {
        ms.push(WMonomial::var(Namespace::Sw, j + 1));
    }
    MPoly2::from_monomials(Namespace::Sw, ms)
}

fn c2_sq1_laws() -> Outcome {
    let mut rng = sample::rng(2);
    let ctx = u();
    for j in 1..=16 {
        let got = sq1(&MPoly2::w(j), &ctx).map_err(|e| e.to_string())?;
        ensure(got == wu_value(j), || format!("Sq1 w{j} = {got}"))?;
    }
    for k in 0..200 {
        let x = sample::mpoly(&mut rng, 16, 16, 6);
        let y = sample::mpoly(&mut rng, 16, 16, 6);
        let s = |p: &MPoly2| sq1(p, &ctx).unwrap();
        let sx = s(&x);
        ensure(s(&sx).is_zero(), || format!("sample {k}: Sq1 Sq1 ({x}) ≠ 0"))?;
        let xy = x.mul(&y, &ctx).unwrap();
        let leibniz = sx.mul(&y, &ctx).unwrap().add(&x.mul(&s(&y), &ctx).unwrap(), &ctx).unwrap();
        ensure(s(&xy) == leibniz, || format!("sample {k}: Leibniz fails on ({x})({y})"))?;
        for d in 0..=16 {
            let part = x.grade_component(d);
            let image = s(&part);
            ensure(image.terms().iter().all(|m| m.degree() == d + 1), || {
                format!("sample {k}: Sq1 of degree-{d} part is not of degree {}", d + 1)
            })?;
        }
        ensure(s(&x.square(&ctx)).is_zero(), || format!("sample {k}: Sq1(x^2) ≠ 0 for {x}"))?;
    }
    Ok("200 samples, 4 laws".into())
}

fn square_free(m: &WMonomial) -> bool {
    !m.is_one() && m.exponents().all(|(_, e)| e == 1)
}

fn c3_cartan_kernel() -> Outcome {
    let mut rng = sample::rng(3);
    for k in 0..100 {
        let c = sample::ideal_element(&mut rng, 16, 4);
        let restricted = cartan_restrict(&c).map_err(|e| e.to_string())?;
        ensure(restricted.is_zero(), || format!("member {k}: restriction {restricted}"))?;
        let parts = ideal_decomposition(&c).map_err(|e| format!("member {k}: {e}"))?;
        let mut rebuilt = MPoly2::zero(Namespace::Sw);
        for (i, r) in &parts {
            let sq = MPoly2::from_monomial(WMonomial::from_exponents(Namespace::Sw, [(*i, 2)]));
            rebuilt = rebuilt.add(&sq.mul(r, &u()).unwrap(), &u()).unwrap();
        }
        let constant = MPoly2::from_monomials(
            Namespace::Sw,
            c.terms().iter().filter(|m| m.is_one()).cloned(),
        );
        let rebuilt = rebuilt.add(&constant, &u()).unwrap();
        ensure(rebuilt == c, || format!("member {k}: {c} rebuilt as {rebuilt}"))?;
    }
    for k in 0..100 {
        let c = sample::with_square_free(&mut rng, 16, 4);
        let restricted = cartan_restrict(&c).map_err(|e| e.to_string())?;
        ensure(!restricted.is_zero(), || format!("non-member {k}: {c} restricts to 0"))?;
        match ideal_decomposition(&c) {
            Err(Error::NotInIdeal { witness }) => {
                let ok = c.terms().iter().any(|m| square_free(m) && m.to_string() == witness);
                ensure(ok, || format!("non-member {k}: witness {witness} is not a square-free term of {c}"))?;
            }
            other => return Err(format!("non-member {k}: {c} gave {other:?}")),
        }
    }
    Ok("100 members, 100 non-members".into())
}

fn all_even(c: &MPoly2) -> bool {
    c.terms().iter().all(|m| m.exponents().all(|(_, e)| e % 2 == 0))
}

fn c4_theorem1() -> Outcome {
    let mut rng = sample::rng(4);
    let ctx = RingContext::with_degree_cap(16).rank(16);
    let mut members = 0;
    for k in 0..200 {
        let c = if k % 2 == 0 {
            sample::squares_member(&mut rng, 16, 4)
        } else {
            sample::squares_nonmember(&mut rng, 16, 4)
        };
        let criterion = is_complexifiable_mod2(&c);
        ensure(criterion == all_even(&c), || format!("sample {k}: criterion wrong on {c}"))?;
        let oracle = invariance_oracle(&c, &ctx).map_err(|e| format!("sample {k}: {e}"))?;
        ensure(oracle == criterion, || format!("sample {k}: oracle {oracle}, criterion {criterion} on {c}"))?;
        members += usize::from(criterion);
    }
    ensure((50..=150).contains(&members), || format!("unbalanced sample: {members} members"))?;
    Ok(format!("200 samples, {members} members, 0 disagreements"))
}

fn c5_lemma3() -> Outcome {
    let ctx = RingContext::with_degree_cap(40);
    let g = universal_bundle(&ctx).map_err(|e| e.to_string())?;
    let base = [1u32, 2, 4, 6];
    let mut cases = 0;
    let mut mismatches = 0;
    for mask in 1u32..16 {
        if mask.count_ones() > 3 {
            continue;
        }
        let set = IndexSet::new((0..4).filter(|b| mask >> b & 1 == 1).map(|b| base[b])).unwrap();
        let lhs = lemma3_lhs(&set, &g, &ctx).map_err(|e| e.to_string())?;
        let derived = lemma3_rhs(&set, &g, &ctx, Lemma3Mode::Derived).map_err(|e| e.to_string())?;
        ensure(lhs == derived, || format!("derived {set}: {lhs} vs {derived}"))?;
        let verbatim = lemma3_rhs(&set, &g, &ctx, Lemma3Mode::Verbatim).map_err(|e| e.to_string())?;
        if set.contains_half() {
            ensure(lhs != verbatim, || format!("verbatim {set}: expected a mismatch, got agreement"))?;
            mismatches += 1;
        } else {
            ensure(lhs == verbatim, || format!("verbatim {set}: {lhs} vs {verbatim}"))?;
        }
        cases += 1;
    }
    ensure(cases == 14, || format!("{cases} index sets"))?;
    Ok(format!("{cases} sets x 2 modes, {mismatches} expected-mismatch"))
}

fn c6_relations() -> Outcome {
    let mut total = 0;
    for n in 2..=8 {
        let rank = Rank::Finite(n);
        let ctx = rank.context(Some(24));
        let instances = relation_instances(n, 24);
        ensure(!instances.is_empty(), || format!("rank {n}: no instances"))?;
        for r in &instances {
            let deg = r.degree(rank);
            ensure(deg.is_some_and(|d| d <= 24), || format!("rank {n}: {r:?} has degree {deg:?}"))?;
            let lhs = r.lhs(rank).map_err(|e| format!("rank {n}: {r:?}: {e}"))?;
            let image = rho(&lhs, &ctx);
            ensure(image.is_zero(), || format!("rank {n}: rho({lhs}) = {image}"))?;
        }
        total += instances.len();
    }
    Ok(format!("{total} instances, ranks 2..8"))
}

fn theorem2_samples() -> Vec<IntClass> {
    let mut rng = sample::rng(7);
    (0..100).map(|_| sample::theorem2_class(&mut rng, 24, 4)).collect()
}

fn c7_theorem2() -> Outcome {
    let ctx = Rank::Infinite.context(Some(24));
    for (k, c) in theorem2_samples().iter().enumerate() {
        let yes = is_complexifiable_integral(c, &ctx).map_err(|e| format!("sample {k}: {e}"))?;
        ensure(yes, || format!("sample {k}: {c} judged not complexifiable"))?;
        let image = rho(c, &ctx);
        let inv = invariance_oracle(&image, &ctx).map_err(|e| format!("sample {k}: {e}"))?;
        ensure(inv, || format!("sample {k}: rho({c}) = {image} fails the oracle"))?;
    }
    Ok("100 samples".into())
}

fn c8_theorem3() -> Outcome {
    let ctx = Rank::Infinite.context(Some(24));
    for (k, c) in theorem2_samples().iter().enumerate() {
        let e = express_via_chern(c, &ctx).map_err(|e| format!("sample {k}: {e}"))?;
        let mut free: BTreeMap<PMonomial, i64> = BTreeMap::new();
        for (m, coeff) in e.free_expr() {
            let mut sign = 1i64;
            let mut pairs = Vec::new();
            for &(j, x) in m.exponents() {
                ensure(j % 2 == 0, || format!("sample {k}: odd Chern class c{j}"))?;
                if (j / 2) % 2 == 1 && x % 2 == 1 {
                    sign = -sign;
                }
                pairs.push((j / 2, x));
            }
            *free.entry(PMonomial::from_exponents(pairs)).or_default() += sign * coeff;
        }
        let rebuilt = IntClass::from_parts(free, []);
        ensure(rebuilt == c.free_part(), || format!("sample {k}: free part {} rebuilt as {rebuilt}", c.free_part()))?;
        let squared = MPoly2::from_monomials(
            Namespace::Sw,
            e.torsion_expr().poly_in_u().terms().iter().map(|m| m.square()),
        );
        let target = rho(&c.torsion_part(), &ctx);
        ensure(squared == target, || format!("sample {k}: torsion {target} rebuilt as {squared}"))?;
        ensure(e.lift_marker() == !target.is_zero(), || format!("sample {k}: lift marker"))?;
    }
    Ok("100 samples".into())
}

fn round_trip(c: &Class, mode: Mode) -> Result<(), String> {
    let text = c.to_string();
    let expr = parse(&text).map_err(|e| format!("`{text}`: {e}"))?;
    let back = elaborate(&expr, mode, &u()).map_err(|e| format!("`{text}`: {e}"))?;
    ensure(&back == c, || format!("`{text}` reparsed as `{back}`"))?;
    ensure(back.to_string() == text, || format!("`{text}` reprinted as `{back}`"))?;
    let j = to_json(c).map_err(|e| e.to_string())?;
    let from = from_json(&j).map_err(|e| format!("{j}: {e}"))?;
    ensure(&from == c, || format!("{j} decoded as `{from}`"))?;
    let again = to_json(&from).map_err(|e| e.to_string())?;
    ensure(again == j, || format!("{j} re-encoded as {again}"))
}

fn c9_serialization() -> Outcome {
    let mut rng = sample::rng(9);
    for k in 0..250 {
        let c = Class::Mod2(sample::mpoly(&mut rng, 16, 16, 6));
        round_trip(&c, Mode::Mod2).map_err(|e| format!("mod2 {k}: {e}"))?;
    }
    for k in 0..250 {
        let c = Class::Integral(sample::int_class(&mut rng, 24, 6));
        round_trip(&c, Mode::Integral).map_err(|e| format!("integral {k}: {e}"))?;
    }
    Ok("250 mod-2 + 250 integral classes".into())
}

fn c10_performance() -> Outcome {
    let a = sample::dense(20, 10);
    let b = a.clone();
    let start = Instant::now();
    let product = a.mul(&b, &u()).map_err(|e| e.to_string())?;
    let t_mul = start.elapsed();
    ensure(product.degree() == Some(40), || "dense product has the wrong degree".into())?;
    ensure(t_mul < Duration::from_secs(1), || format!("dense product took {t_mul:.2?}"))?;

    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_charclass"))
        .args(["verify", "--suite", "all", "--degree", "24", "--rank", "8", "--json"])
        .output()
        .map_err(|e| e.to_string())?;
    let t_verify = start.elapsed();
    ensure(out.status.code() == Some(0), || format!("verify exited with {:?}", out.status.code()))?;
    let report: Report = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(report.is_consistent(), || "inconsistent report summary".into())?;
    ensure(t_verify < Duration::from_secs(120), || format!("verify took {t_verify:.2?}"))?;
    Ok(format!(
        "{} x {} terms in {t_mul:.2?}; verify all ({} cases) in {t_verify:.2?}",
        a.len(),
        b.len(),
        report.cases().len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("squared-class reduction identity", 5, c1_whitney_square),
        ("Sq1 laws", 5, c2_sq1_laws),
        ("Cartan kernel", 5, c3_cartan_kernel),
        ("mod-2 complexifiability biconditional", 30, c4_theorem1),
        ("Lemma 3 expansion", 30, c5_lemma3),
        ("integral relations 2-6", 60, c6_relations),
        ("integral complexifiability", 30, c7_theorem2),
        ("Chern expression round trip", 10, c8_theorem3),
        ("parser and JSON round trips", 5, c9_serialization),
        ("performance floor", 120, c10_performance),
    ];
    let mut failures = 0;
    for (k, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= Duration::from_secs(*limit) {
                Ok(detail)
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit} s"))
            }
        });
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{elapsed:.2?}] {detail}", k + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} [{elapsed:.2?}] {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
