//! From syntax trees to algebra elements.

use std::fmt;

use charclass_core::feshbach::Rank;
use charclass_core::{IndexSet, IntClass, MPoly2, Namespace, RingContext};
use thiserror::Error;

use crate::parse::{ClassExpr, Generator};

/// Inputs whose degree could exceed this are refused before any arithmetic.
pub const MAX_DEGREE: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ElaborateError {
    #[error("mixed expression: `w` classes cannot be combined with `p`/`V` classes")]
    Mixed,
    #[error("expected a mod-2 expression in w_i, found `{0}`")]
    NotMod2(String),
    #[error("expected an integral expression in p_i and V{{...}}, found `{0}`")]
    NotIntegral(String),
    #[error("Chern symbols `c{0}` only appear in chern-express output")]
    ChernSymbol(u32),
    #[error("the expression may reach degree {0}, above the limit {MAX_DEGREE}")]
    TooLarge(u64),
    #[error("integer literal {0} is out of range")]
    IntegerRange(u64),
    #[error(transparent)]
    Core(#[from] charclass_core::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    Mod2,
    Integral,
    /// Decided by the generators present; pure numbers are mod 2.
    #[default]
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Class {
    Mod2(MPoly2),
    Integral(IntClass),
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Class::Mod2(p) => p.fmt(f),
            Class::Integral(c) => c.fmt(f),
        }
    }
}

#[derive(Default)]
struct Census {
    w: Option<String>,
    integral: Option<String>,
    chern: Option<u32>,
}

fn census(e: &ClassExpr) -> Census {
    let mut c = Census::default();
    e.walk(&mut |node| match node {
        ClassExpr::Atom(Generator::W, _) => {
            c.w.get_or_insert_with(|| node.to_string());
        }
        ClassExpr::Atom(Generator::P, _) | ClassExpr::V(_) => {
            c.integral.get_or_insert_with(|| node.to_string());
        }
        ClassExpr::Atom(Generator::C, i) => {
            c.chern.get_or_insert(*i);
        }
        _ => {}
    });
    c
}

/// Elaborate `e` as `mode` asks; `ctx` truncates mod-2 results and its rank
/// cap is the rank against which `V` index sets are checked.
pub fn elaborate(e: &ClassExpr, mode: Mode, ctx: &RingContext) -> Result<Class, ElaborateError> {
    let seen = census(e);
    if let Some(i) = seen.chern {
        return Err(ElaborateError::ChernSymbol(i));
    }
    let bound = e.degree_bound();
    if bound > MAX_DEGREE {
        return Err(ElaborateError::TooLarge(bound));
    }
    let integral = match (mode, &seen.w, &seen.integral) {
        (Mode::Mod2, _, Some(x)) => return Err(ElaborateError::NotMod2(x.clone())),
        (Mode::Integral, Some(x), _) => return Err(ElaborateError::NotIntegral(x.clone())),
        (Mode::Auto, Some(_), Some(_)) => return Err(ElaborateError::Mixed),
        (Mode::Mod2, _, _) => false,
        (Mode::Integral, _, _) => true,
        (Mode::Auto, _, integral) => integral.is_some(),
    };
    if integral {
        let rank = ctx.rank_cap.map_or(Rank::Infinite, Rank::Finite);
        Ok(Class::Integral(integral_value(e, rank)?))
    } else {
        Ok(Class::Mod2(mod2_value(e, ctx)?))
    }
}

fn mod2_value(e: &ClassExpr, ctx: &RingContext) -> Result<MPoly2, ElaborateError> {
    let zero = MPoly2::zero(Namespace::Sw);
    Ok(match e {
        ClassExpr::Sum(ts) => ts.iter().try_fold(zero, |acc, (_, t)| {
            Ok::<_, ElaborateError>(acc.add(&mod2_value(t, ctx)?, ctx)?)
        })?,
        ClassExpr::Product(fs) => fs.iter().try_fold(MPoly2::one(Namespace::Sw).reduce(ctx), |acc, x| {
            Ok::<_, ElaborateError>(acc.mul(&mod2_value(x, ctx)?, ctx)?)
        })?,
        ClassExpr::Power(b, k) => mod2_value(b, ctx)?.pow(*k, ctx),
        ClassExpr::Group(b) => mod2_value(b, ctx)?,
        ClassExpr::Atom(_, i) => MPoly2::w(*i).reduce(ctx),
        ClassExpr::Int(n) if n % 2 == 1 => MPoly2::one(Namespace::Sw).reduce(ctx),
        ClassExpr::Int(_) => zero,
        ClassExpr::V(_) => unreachable!("rejected by the census"),
    })
}

fn integral_value(e: &ClassExpr, rank: Rank) -> Result<IntClass, ElaborateError> {
    Ok(match e {
        ClassExpr::Sum(ts) => ts.iter().try_fold(IntClass::zero(), |acc, (neg, t)| {
            let mut v = integral_value(t, rank)?;
            if *neg {
                v = v.checked_neg()?;
            }
            Ok::<_, ElaborateError>(acc.checked_add(&v)?)
        })?,
        ClassExpr::Product(fs) => fs.iter().try_fold(IntClass::int(1), |acc, x| {
            Ok::<_, ElaborateError>(acc.mul(&integral_value(x, rank)?, rank)?)
        })?,
        ClassExpr::Power(b, k) => integral_value(b, rank)?.pow(*k, rank)?,
        ClassExpr::Group(b) => integral_value(b, rank)?,
        ClassExpr::Atom(_, i) => IntClass::p(*i),
        ClassExpr::V(ds) => {
            let set = IndexSet::new(ds.iter().copied())?;
            set.validate(rank)?;
            IntClass::v(set)
        }
        ClassExpr::Int(n) => IntClass::int(i64::try_from(*n).map_err(|_| ElaborateError::IntegerRange(*n))?),
    })
}
