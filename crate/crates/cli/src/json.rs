//! JSON forms of classes.
//!
//! Serialization is canonical: monomials in graded-lex order, index pairs
//! ascending, `V` index sets in doubled encoding. Parsing accepts any order
//! of monomials but rejects malformed pairs.

use charclass_core::{IndexSet, IntClass, MPoly2, Namespace, PMonomial, TMonomial, WMonomial};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elaborate::{Class, MAX_DEGREE};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON class: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid JSON class: {0}")]
    Shape(String),
    #[error("root-variable polynomials have no JSON form")]
    RootNamespace,
    #[error(transparent)]
    Core(#[from] charclass_core::Error),
}

type Pairs = Vec<(u32, u32)>;

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Wire {
    Mod2 {
        monomials: Vec<Pairs>,
    },
    Integral {
        free: Vec<FreeTerm>,
        torsion: Vec<TorsionTerm>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FreeTerm {
    coeff: i64,
    p: Pairs,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TorsionTerm {
    p: Pairs,
    #[serde(rename = "V")]
    v: Vec<(Vec<u32>, u32)>,
}

pub fn to_json(c: &Class) -> Result<String, JsonError> {
    let wire = match c {
        Class::Mod2(p) => {
            if p.namespace() != Namespace::Sw {
                return Err(JsonError::RootNamespace);
            }
            Wire::Mod2 {
                monomials: p.terms().iter().map(|m| m.exponents().collect()).collect(),
            }
        }
        Class::Integral(c) => Wire::Integral {
            free: c
                .free_terms()
                .map(|(m, coeff)| FreeTerm {
                    coeff,
                    p: m.exponents().to_vec(),
                })
                .collect(),
            torsion: c
                .torsion_terms()
                .map(|t| TorsionTerm {
                    p: t.p_part().exponents().to_vec(),
                    v: t.v_part().iter().map(|(s, e)| (s.doubled().to_vec(), *e)).collect(),
                })
                .collect(),
        },
    };
    Ok(serde_json::to_string(&wire)?)
}

/// Checks `[[i, e], ...]`: positive entries, strictly ascending indices, and
/// a degree (with index weight `weight`) within [`MAX_DEGREE`].
fn check_pairs(pairs: &Pairs, weight: u64) -> Result<u64, JsonError> {
    let mut degree = 0u64;
    let mut last = 0;
    for &(i, e) in pairs {
        if i == 0 || e == 0 {
            return Err(JsonError::Shape(format!("pair [{i},{e}] must have positive entries")));
        }
        if i <= last {
            return Err(JsonError::Shape("index pairs must be strictly ascending".into()));
        }
        last = i;
        degree += weight * u64::from(i) * u64::from(e);
        if degree > MAX_DEGREE {
            return Err(JsonError::Shape(format!("degree exceeds the limit {MAX_DEGREE}")));
        }
    }
    Ok(degree)
}

pub fn from_json(text: &str) -> Result<Class, JsonError> {
    match serde_json::from_str::<Wire>(text)? {
        Wire::Mod2 { monomials } => {
            let mut ms = Vec::with_capacity(monomials.len());
            for pairs in &monomials {
                check_pairs(pairs, 1)?;
                ms.push(WMonomial::from_exponents(Namespace::Sw, pairs.iter().copied()));
            }
            let p = MPoly2::from_monomials(Namespace::Sw, ms);
            if p.len() != monomials.len() {
                return Err(JsonError::Shape("repeated monomial".into()));
            }
            Ok(Class::Mod2(p))
        }
        Wire::Integral { free, torsion } => {
            let mut fs = Vec::with_capacity(free.len());
            for t in &free {
                check_pairs(&t.p, 4)?;
                if t.coeff == 0 {
                    return Err(JsonError::Shape("free coefficients must be nonzero".into()));
                }
                fs.push((PMonomial::from_exponents(t.p.iter().copied()), t.coeff));
            }
            let mut ts = Vec::with_capacity(torsion.len());
            for t in &torsion {
                let mut degree = check_pairs(&t.p, 4)?;
                let mut factors = Vec::with_capacity(t.v.len());
                let mut last: Option<IndexSet> = None;
                for (ds, e) in &t.v {
                    let set = IndexSet::new(ds.iter().copied())?;
                    if set.doubled() != ds.as_slice() {
                        return Err(JsonError::Shape("V index sets must be strictly ascending".into()));
                    }
                    if *e == 0 {
                        return Err(JsonError::Shape("V exponents must be positive".into()));
                    }
                    degree += u64::from(set.degree()) * u64::from(*e);
                    if degree > MAX_DEGREE {
                        return Err(JsonError::Shape(format!("degree exceeds the limit {MAX_DEGREE}")));
                    }
                    if last.as_ref().is_some_and(|l| *l >= set) {
                        return Err(JsonError::Shape("V factors must be strictly ascending".into()));
                    }
                    last = Some(set.clone());
                    factors.push((set, *e));
                }
                let m = TMonomial::new(PMonomial::from_exponents(t.p.iter().copied()), factors)
                    .ok_or_else(|| JsonError::Shape("torsion terms need a V factor".into()))?;
                ts.push(m);
            }
            let c = IntClass::from_parts(fs, ts);
            if c.free_terms().count() != free.len() || c.torsion_terms().count() != torsion.len() {
                return Err(JsonError::Shape("repeated monomial".into()));
            }
            Ok(Class::Integral(c))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elaborate::{elaborate, Mode};
    use crate::parse::parse;
    use charclass_core::RingContext;

    fn class(text: &str) -> Class {
        elaborate(&parse(text).unwrap(), Mode::Auto, &RingContext::unbounded()).unwrap()
    }

    #[test]
    fn exact_forms() {
        assert_eq!(
            to_json(&class("w2^2*w1^4 + w3^2")).unwrap(),
            r#"{"type":"mod2","monomials":[[[3,2]],[[1,4],[2,2]]]}"#
        );
        assert_eq!(to_json(&class("0")).unwrap(), r#"{"type":"mod2","monomials":[]}"#);
        assert_eq!(
            to_json(&class("2*p1 - 3*p2 + p1*V{1/2,3}^2")).unwrap(),
            r#"{"type":"integral","free":[{"coeff":2,"p":[[1,1]]},{"coeff":-3,"p":[[2,1]]}],"torsion":[{"p":[[1,1]],"V":[[[1,6],2]]}]}"#
        );
    }

    #[test]
    fn round_trip() {
        for text in ["1 + w1*w2 + w3^5", "V{1}*V{2} - 7 + p3^2", "0", "1"] {
            let c = class(text);
            let j = to_json(&c).unwrap();
            let back = from_json(&j).unwrap();
            assert_eq!(back, c, "{text}");
            assert_eq!(to_json(&back).unwrap(), j);
        }
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            r#"{"type":"mod2","monomials":[[[2,1],[1,1]]]}"#,
            r#"{"type":"mod2","monomials":[[[0,1]]]}"#,
            r#"{"type":"mod2","monomials":[[[1,5000]]]}"#,
            r#"{"type":"mod2","monomials":[[[1,1]],[[1,1]]]}"#,
            r#"{"type":"integral","free":[{"coeff":0,"p":[]}],"torsion":[]}"#,
            r#"{"type":"integral","free":[],"torsion":[{"p":[],"V":[]}]}"#,
            r#"{"type":"integral","free":[],"torsion":[{"p":[],"V":[[[3],1]]}]}"#,
            r#"{"type":"integral","free":[],"torsion":[{"p":[],"V":[[[4,2],1]]}]}"#,
            r#"{"type":"other"}"#,
            "[1]",
        ] {
            assert!(from_json(bad).is_err(), "{bad}");
        }
    }
}
