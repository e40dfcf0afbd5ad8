//! Answer sets through the aggregate reduct.
//!
//! For a ground program `P` and a candidate set `S` of ground literals, the
//! aggregate reduct of `P` w.r.t. `S` drops every rule with an aggregate
//! atom false in `S` and replaces each remaining aggregate atom by the
//! condition instances that hold in `S`. `S` is an answer set of `P` when it
//! is an ordinary answer set of that aggregate-free reduct.
//!
//! Everything here works on explicit sets and favours being obviously
//! correct over being fast; [`crate::asolver`] is the fast path and is
//! tested against [`enumerate_answer_sets_oracle`].

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grounder::{normalize_term, GroundProgram};
use crate::model::{AggFunc, AggregateAtom, CondItem, Literal, LiteralSet, Rule, Term};

pub const DEFAULT_ORACLE_CAP: usize = 24;

/// One substitution of the bound variables of a set name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    /// Values of the bound variables, in the order they are listed.
    pub tuple: Vec<Term>,
    /// Ground condition literals (comparisons already evaluated away).
    pub literals: Vec<Literal>,
}

/// Instances of a set name over `pool`. Substitutions that fail one of the
/// condition's comparisons, or whose arithmetic is undefined (an object
/// constant in an arithmetic position), are left out.
pub fn instances(a: &AggregateAtom, pool: &[Term]) -> Vec<Instance> {
    let n = a.bound_vars.len();
    let mut out = Vec::new();
    if pool.is_empty() {
        return out;
    }
    let mut choice = vec![0usize; n];
    'subst: loop {
        let tuple: Vec<Term> = choice.iter().map(|&i| pool[i].clone()).collect();
        let subst: BTreeMap<String, Term> = a.bound_vars.iter().cloned().zip(tuple.iter().cloned()).collect();
        if let Some(literals) = instantiate_condition(&a.cond, &subst) {
            out.push(Instance { tuple, literals });
        }
        let mut k = n;
        loop {
            if k == 0 {
                break 'subst;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < pool.len() {
                continue 'subst;
            }
            choice[k] = 0;
        }
    }
    out
}

fn instantiate_condition(cond: &[CondItem], subst: &BTreeMap<String, Term>) -> Option<Vec<Literal>> {
    let mut lits: Vec<Literal> = Vec::new();
    for item in cond {
        match item {
            CondItem::Lit(l) => {
                let l = l.substitute(subst);
                let args = l.args.iter().map(normalize_term).collect::<Result<Vec<_>>>().ok()?;
                let l = Literal { args, ..l };
                if !lits.contains(&l) {
                    lits.push(l);
                }
            }
            CondItem::Cmp(x, rel, y) => {
                let x = normalize_term(&x.substitute(subst)).ok()?;
                let y = normalize_term(&y.substitute(subst)).ok()?;
                if !rel.holds(&x, &y) {
                    return None;
                }
            }
        }
    }
    Some(lits)
}

/// Value of an aggregate function on a set of tuples. `None` is the
/// undefined value (min or max of the empty set).
pub type AggregateValue = Option<i64>;

/// Integer weight of a tuple for sum/min/max: its first component.
pub fn weight(func: AggFunc, tuple: &[Term]) -> Result<i64> {
    match tuple.first() {
        Some(Term::Int(n)) => Ok(*n),
        Some(t) => Err(Error::NonIntegerElement {
            func,
            element: t.clone(),
        }),
        None => Err(Error::NonIntegerElement {
            func,
            element: Term::Const(String::new()),
        }),
    }
}

pub fn aggregate_value<'a>(func: AggFunc, tuples: impl IntoIterator<Item = &'a [Term]>) -> Result<AggregateValue> {
    let tuples: Vec<&[Term]> = tuples.into_iter().collect();
    match func {
        AggFunc::Card | AggFunc::Count => Ok(Some(tuples.len() as i64)),
        AggFunc::Sum => {
            let mut total: i64 = 0;
            for t in tuples {
                total = total
                    .checked_add(weight(func, t)?)
                    .ok_or_else(|| Error::Overflow(t[0].clone()))?;
            }
            Ok(Some(total))
        }
        AggFunc::Min | AggFunc::Max => {
            let ws = tuples
                .into_iter()
                .map(|t| weight(func, t))
                .collect::<Result<Vec<_>>>()?;
            Ok(if func == AggFunc::Min {
                ws.into_iter().min()
            } else {
                ws.into_iter().max()
            })
        }
    }
}

fn bound_of(a: &AggregateAtom) -> Result<i64> {
    match &a.rhs {
        Term::Int(n) => Ok(*n),
        other => Err(Error::NonIntegerBound(other.clone())),
    }
}

/// Compares a function value with the atom's bound; undefined is false.
pub fn compare(a: &AggregateAtom, value: AggregateValue) -> Result<bool> {
    let n = bound_of(a)?;
    Ok(value.is_some_and(|v| a.relation.holds(&v, &n)))
}

/// Whether `a` is true in the set `s`: the function applied to the tuples
/// whose whole instantiated condition lies in `s`.
pub fn agg_true_in_set(a: &AggregateAtom, s: &LiteralSet, pool: &[Term]) -> Result<bool> {
    let inst = instances(a, pool);
    let holding = inst
        .iter()
        .filter(|i| i.literals.iter().all(|l| s.contains(l)))
        .map(|i| i.tuple.as_slice());
    compare(a, aggregate_value(a.func, holding)?)
}

/// Body of `r` holds in `s`, aggregates evaluated in `s`.
pub fn body_holds(s: &LiteralSet, r: &Rule, pool: &[Term]) -> Result<bool> {
    if !r.pos.iter().all(|l| s.contains(l)) || r.neg.iter().any(|l| s.contains(l)) {
        return Ok(false);
    }
    for a in &r.agg {
        if !agg_true_in_set(a, s, pool)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The aggregate reduct of `gp` with respect to `s`. The result has no
/// aggregate atoms; a surviving aggregate contributes the literals of every
/// instance whose condition holds in `s` to the positive body.
pub fn aggregate_reduct(gp: &GroundProgram, s: &LiteralSet) -> Result<GroundProgram> {
    let mut rules = Vec::new();
    'rules: for r in &gp.rules {
        let mut pos = r.pos.clone();
        for a in &r.agg {
            if !agg_true_in_set(a, s, &gp.constants)? {
                continue 'rules;
            }
            for inst in instances(a, &gp.constants) {
                if inst.literals.iter().all(|l| s.contains(l)) {
                    for l in inst.literals {
                        if !pos.contains(&l) {
                            pos.push(l);
                        }
                    }
                }
            }
        }
        rules.push(Rule {
            head: r.head.clone(),
            pos,
            neg: r.neg.clone(),
            agg: Vec::new(),
        });
    }
    Ok(GroundProgram::new(rules, gp.constants.clone()))
}

/// Satisfaction of an aggregate-free rule: some head literal is in `s`, or
/// the body fails.
pub fn satisfies(s: &LiteralSet, r: &Rule) -> bool {
    debug_assert!(r.agg.is_empty());
    r.head.iter().any(|h| s.contains(h)) || r.pos.iter().any(|l| !s.contains(l)) || r.neg.iter().any(|l| s.contains(l))
}

/// Reduct of an aggregate-free program by a candidate set: rules with a
/// `not l` for some `l` in `s` are dropped, the rest lose their `not` literals.
pub fn classical_reduct(gp: &GroundProgram, s: &LiteralSet) -> GroundProgram {
    let rules = gp
        .rules
        .iter()
        .filter(|r| !r.neg.iter().any(|l| s.contains(l)))
        .map(|r| Rule {
            head: r.head.clone(),
            pos: r.pos.clone(),
            neg: Vec::new(),
            agg: Vec::new(),
        })
        .collect();
    GroundProgram::new(rules, gp.constants.clone())
}

/// Whether some proper subset of `s` satisfies every rule of the positive
/// program `rules`. `s` itself is assumed to be a model.
///
/// Exhaustive backtracking over the members of `s` with unit propagation:
/// each rule whose body lies inside `s` becomes the clause
/// `not b1 or ... or not bm or h1 or ... or hk` (heads restricted to `s`),
/// plus one clause demanding that some member of `s` be dropped.
pub fn has_smaller_model(s: &LiteralSet, rules: &[Rule]) -> bool {
    let atoms: Vec<&Literal> = s.iter().collect();
    let index: BTreeMap<&Literal, usize> = atoms.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let mut clauses: Vec<Vec<(usize, bool)>> = Vec::new();
    for r in rules {
        if !r.pos.iter().all(|l| s.contains(l)) {
            continue;
        }
        let mut clause: Vec<(usize, bool)> = r.pos.iter().map(|l| (index[l], false)).collect();
        clause.extend(r.head.iter().filter_map(|h| index.get(h).map(|&i| (i, true))));
        clauses.push(clause);
    }
    clauses.push((0..atoms.len()).map(|i| (i, false)).collect());
    let mut assign = vec![None; atoms.len()];
    clause_search(&clauses, &mut assign)
}

fn clause_search(clauses: &[Vec<(usize, bool)>], assign: &mut [Option<bool>]) -> bool {
    loop {
        let mut changed = false;
        for c in clauses {
            let mut open = None;
            let mut open_count = 0;
            let mut satisfied = false;
            for &(v, sign) in c {
                match assign[v] {
                    Some(x) if x == sign => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open_count += 1;
                        open = Some((v, sign));
                    }
                }
            }
            if satisfied {
                continue;
            }
            match (open_count, open) {
                (0, _) => return false,
                (1, Some((v, sign))) => {
                    assign[v] = Some(sign);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let Some(v) = assign.iter().position(Option::is_none) else {
        return true;
    };
    for value in [false, true] {
        let mut next = assign.to_vec();
        next[v] = Some(value);
        if clause_search(clauses, &mut next) {
            return true;
        }
    }
    false
}

/// Ordinary answer-set test for an aggregate-free ground program.
pub fn is_answer_set_asp(s: &LiteralSet, gp: &GroundProgram) -> bool {
    debug_assert!(!gp.has_aggregates());
    if !s.is_consistent() {
        return false;
    }
    let reduct = classical_reduct(gp, s);
    if !reduct.rules.iter().all(|r| satisfies(s, r)) {
        return false;
    }
    !has_smaller_model(s, &reduct.rules)
}

/// `s` is an answer set of the aggregate reduct of `gp` w.r.t. `s`.
pub fn is_answer_set_alog(s: &LiteralSet, gp: &GroundProgram) -> Result<bool> {
    let reduct = aggregate_reduct(gp, s)?;
    Ok(is_answer_set_asp(s, &reduct))
}

/// Every answer set of `gp`, by testing each consistent subset of the
/// literals that occur in rule heads (no other literal can belong to an
/// answer set of the reduct). Sorted.
pub fn enumerate_answer_sets_oracle(gp: &GroundProgram, cap: usize) -> Result<Vec<LiteralSet>> {
    let base = gp.head_literals();
    if base.len() > cap || base.len() >= usize::BITS as usize {
        return Err(Error::OracleCap { size: base.len(), cap });
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << base.len()) {
        let s: LiteralSet = base
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, l)| l.clone())
            .collect();
        if s.is_consistent() && is_answer_set_alog(&s, gp)? {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}
