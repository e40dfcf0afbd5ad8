//! Strong satisfaction and refutation of atoms by a partial interpretation.
//!
//! An aggregate atom is decided from the range of values its function can
//! still take in an extension of `I`. Each instance of the set name is
//! either certain (all condition literals true in `I`), excluded (some
//! literal false) or possible. The range is an over-approximation when
//! instances share literals, so verdicts are sound but not complete.

use std::borrow::Cow;
use std::collections::HashMap;

use crate::error::Result;
use crate::model::{AggFunc, AggregateAtom, ELiteral, PartialInterpretation, Relation, Term, Truth};
use crate::semantics::{self, compare, instances, weight, Instance};

/// Body premise: an e-literal or an aggregate atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Premise {
    Lit(ELiteral),
    Agg(AggregateAtom),
}

impl std::fmt::Display for Premise {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Premise::Lit(l) => write!(f, "{l}"),
            Premise::Agg(a) => write!(f, "{a}"),
        }
    }
}

/// Range of values an aggregate function can take over the extensions of
/// a partial interpretation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AggBounds {
    pub lower: i64,
    pub upper: i64,
    /// Some extension leaves the value undefined (min/max with no certain
    /// instance).
    pub maybe_undefined: bool,
    /// Every extension leaves the value undefined.
    pub never_defined: bool,
}

/// Instance lookup for aggregate atoms over a fixed constant pool.
#[derive(Debug, Clone)]
pub struct Evaluator {
    pool: Vec<Term>,
    cache: HashMap<AggregateAtom, Vec<Instance>>,
}

impl Evaluator {
    pub fn new(pool: &[Term]) -> Evaluator {
        Evaluator {
            pool: pool.to_vec(),
            cache: HashMap::new(),
        }
    }

    /// Precomputes the instances of `atoms`.
    pub fn with_atoms<'a>(pool: &[Term], atoms: impl IntoIterator<Item = &'a AggregateAtom>) -> Evaluator {
        let mut e = Evaluator::new(pool);
        for a in atoms {
            if !e.cache.contains_key(a) {
                let inst = instances(a, &e.pool);
                e.cache.insert(a.clone(), inst);
            }
        }
        e
    }

    pub fn pool(&self) -> &[Term] {
        &self.pool
    }

    pub fn instances(&self, a: &AggregateAtom) -> Cow<'_, [Instance]> {
        match self.cache.get(a) {
            Some(v) => Cow::Borrowed(v),
            None => Cow::Owned(instances(a, &self.pool)),
        }
    }

    /// Truth in `I` itself: only instances whose condition literals are
    /// all members of `I` count.
    pub fn truth_in_partial(&self, a: &AggregateAtom, i: &PartialInterpretation) -> Result<bool> {
        let inst = self.instances(a);
        let certain = inst
            .iter()
            .filter(|x| x.literals.iter().all(|l| i.is_true(l)))
            .map(|x| x.tuple.as_slice());
        compare(a, semantics::aggregate_value(a.func, certain)?)
    }

    pub fn bounds(&self, a: &AggregateAtom, i: &PartialInterpretation) -> Result<AggBounds> {
        let inst = self.instances(a);
        let mut certain: Vec<&[Term]> = Vec::new();
        let mut possible: Vec<&[Term]> = Vec::new();
        for x in inst.iter() {
            if x.literals.iter().any(|l| i.is_false(l)) {
                continue;
            }
            if x.literals.iter().all(|l| i.is_true(l)) {
                certain.push(&x.tuple);
            } else {
                possible.push(&x.tuple);
            }
        }
        // A possible instance with a non-integer weight would make the
        // function itself undefined once true; leave it to the final
        // answer-set check to report.
        let possible_weights = |func| -> Vec<i64> { possible.iter().filter_map(|t| weight(func, t).ok()).collect() };
        let defined = |lower: i64, upper: i64| AggBounds {
            lower,
            upper,
            maybe_undefined: false,
            never_defined: false,
        };
        Ok(match a.func {
            AggFunc::Card | AggFunc::Count => defined(certain.len() as i64, (certain.len() + possible.len()) as i64),
            AggFunc::Sum => {
                let base: i64 = certain.iter().map(|t| weight(a.func, t)).sum::<Result<i64>>()?;
                let ws = possible_weights(a.func);
                let neg: i64 = ws.iter().filter(|w| **w < 0).sum();
                let pos: i64 = ws.iter().filter(|w| **w > 0).sum();
                defined(base.saturating_add(neg), base.saturating_add(pos))
            }
            AggFunc::Min | AggFunc::Max => {
                let cw = certain
                    .iter()
                    .map(|t| weight(a.func, t))
                    .collect::<Result<Vec<i64>>>()?;
                let pw = possible_weights(a.func);
                let all = cw.iter().chain(&pw);
                match (cw.is_empty(), pw.is_empty()) {
                    (true, true) => AggBounds {
                        lower: 0,
                        upper: 0,
                        maybe_undefined: true,
                        never_defined: true,
                    },
                    (true, false) => AggBounds {
                        lower: *pw.iter().min().unwrap(),
                        upper: *pw.iter().max().unwrap(),
                        maybe_undefined: true,
                        never_defined: false,
                    },
                    (false, _) if a.func == AggFunc::Min => defined(*all.min().unwrap(), *cw.iter().min().unwrap()),
                    (false, _) => defined(*cw.iter().max().unwrap(), *all.max().unwrap()),
                }
            }
        })
    }

    pub fn strongly_satisfied(&self, p: &Premise, i: &PartialInterpretation) -> Result<bool> {
        match p {
            Premise::Lit(l) => Ok(i.truth_value(l) == Truth::True),
            Premise::Agg(a) => {
                let b = self.bounds(a, i)?;
                Ok(!b.maybe_undefined && all_hold(a.relation, b.lower, b.upper, rhs(a)))
            }
        }
    }

    pub fn strongly_refuted(&self, p: &Premise, i: &PartialInterpretation) -> Result<bool> {
        match p {
            Premise::Lit(l) => Ok(i.truth_value(l) == Truth::False),
            Premise::Agg(a) => {
                let b = self.bounds(a, i)?;
                Ok(b.never_defined || none_hold(a.relation, b.lower, b.upper, rhs(a)))
            }
        }
    }

    /// Sound test that every extension of `I` falsifies some member: a
    /// member is strongly refuted, or aggregate members over one set name
    /// admit no common value.
    pub fn set_strongly_refuted<'a>(
        &self,
        set: impl IntoIterator<Item = &'a Premise>,
        i: &PartialInterpretation,
    ) -> Result<bool> {
        let mut groups: Vec<Vec<&AggregateAtom>> = Vec::new();
        for p in set {
            if self.strongly_refuted(p, i)? {
                return Ok(true);
            }
            if let Premise::Agg(a) = p {
                match groups.iter_mut().find(|g| g[0].same_set_name(a)) {
                    Some(g) => g.push(a),
                    None => groups.push(vec![a]),
                }
            }
        }
        for g in groups.into_iter().filter(|g| g.len() > 1) {
            let b = self.bounds(g[0], i)?;
            let (mut lo, mut hi) = (b.lower, b.upper);
            let mut excluded = Vec::new();
            for a in &g {
                let n = rhs(a);
                match a.relation {
                    Relation::Gt => lo = lo.max(n.saturating_add(1)),
                    Relation::Ge => lo = lo.max(n),
                    Relation::Lt => hi = hi.min(n.saturating_sub(1)),
                    Relation::Le => hi = hi.min(n),
                    Relation::Eq => {
                        lo = lo.max(n);
                        hi = hi.min(n);
                    }
                    Relation::Ne => excluded.push(n),
                }
            }
            if lo > hi || (lo == hi && excluded.contains(&lo)) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn rhs(a: &AggregateAtom) -> i64 {
    match a.rhs {
        Term::Int(n) => n,
        // ground programs only carry integer bounds
        _ => unreachable!("aggregate bound `{}` is not an integer", a.rhs),
    }
}

/// Relation holds for every value in `[lo, hi]`.
fn all_hold(rel: Relation, lo: i64, hi: i64, n: i64) -> bool {
    match rel {
        Relation::Gt => lo > n,
        Relation::Ge => lo >= n,
        Relation::Lt => hi < n,
        Relation::Le => hi <= n,
        Relation::Eq => lo == n && hi == n,
        Relation::Ne => n < lo || n > hi,
    }
}

/// Relation fails for every value in `[lo, hi]`.
fn none_hold(rel: Relation, lo: i64, hi: i64, n: i64) -> bool {
    match rel {
        Relation::Gt => hi <= n,
        Relation::Ge => hi < n,
        Relation::Lt => lo >= n,
        Relation::Le => lo > n,
        Relation::Eq => n < lo || n > hi,
        Relation::Ne => lo == n && hi == n,
    }
}

pub fn agg_truth_in_partial(a: &AggregateAtom, i: &PartialInterpretation, pool: &[Term]) -> Result<bool> {
    Evaluator::new(pool).truth_in_partial(a, i)
}

pub fn agg_bounds(a: &AggregateAtom, i: &PartialInterpretation, pool: &[Term]) -> Result<AggBounds> {
    Evaluator::new(pool).bounds(a, i)
}

pub fn strongly_satisfied(p: &Premise, i: &PartialInterpretation, pool: &[Term]) -> Result<bool> {
    Evaluator::new(pool).strongly_satisfied(p, i)
}

pub fn strongly_refuted(p: &Premise, i: &PartialInterpretation, pool: &[Term]) -> Result<bool> {
    Evaluator::new(pool).strongly_refuted(p, i)
}

pub fn set_strongly_refuted(set: &[Premise], i: &PartialInterpretation, pool: &[Term]) -> Result<bool> {
    Evaluator::new(pool).set_strongly_refuted(set, i)
}
