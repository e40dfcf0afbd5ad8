//! Ground instantiation.
//!
//! Only free variable occurrences are replaced. In
//!
//! ```text
//! r :- card{X : p(X)} >= 2, q(X).
//! ```
//!
//! the `X` of `q(X)` is substituted while the `X` inside the set name
//! stays symbolic, giving `r :- card{X : p(X)} >= 2, q(a).` and so on for
//! every constant of the program.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{AggregateAtom, ArithOp, CondItem, Literal, Program, Rule, Term};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundProgram {
    pub rules: Vec<Rule>,
    /// Domain of set-name variables: the source program's constants plus
    /// any integer produced by evaluating arithmetic. Sorted.
    pub constants: Vec<Term>,
}

impl GroundProgram {
    pub fn new(rules: Vec<Rule>, constants: Vec<Term>) -> GroundProgram {
        GroundProgram { rules, constants }
    }

    pub fn as_program(&self) -> Program {
        Program::new(self.rules.clone())
    }

    pub fn has_aggregates(&self) -> bool {
        self.rules.iter().any(Rule::has_aggregates)
    }

    /// Literals occurring in some rule head, sorted.
    pub fn head_literals(&self) -> Vec<Literal> {
        let set: BTreeSet<&Literal> = self.rules.iter().flat_map(|r| &r.head).collect();
        set.into_iter().cloned().collect()
    }

    pub fn classical_negation(&self) -> Option<&Literal> {
        self.rules.iter().flat_map(|r| r.literals()).find(|l| l.negated)
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// All object constants and integers occurring as terms of `p`, integers
/// first (numerically), then constants (lexicographically). The bound an
/// aggregate is compared against is a value, not a term, and is left out.
pub fn constant_pool(p: &Program) -> Vec<Term> {
    let mut out = BTreeSet::new();
    for r in &p.rules {
        for l in r.head.iter().chain(&r.pos).chain(&r.neg) {
            l.args.iter().for_each(|t| t.collect_constants(&mut out));
        }
        for a in &r.agg {
            for c in &a.cond {
                match c {
                    CondItem::Lit(l) => l.args.iter().for_each(|t| t.collect_constants(&mut out)),
                    CondItem::Cmp(x, _, y) => {
                        x.collect_constants(&mut out);
                        y.collect_constants(&mut out);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Evaluates a variable-free term built from integers and `+ - *`.
pub fn eval_arith(t: &Term) -> Result<i64> {
    match t {
        Term::Int(n) => Ok(*n),
        Term::Const(_) => Err(Error::NonIntegerArith(t.clone())),
        Term::Var(_) => Err(Error::NotGround(t.clone())),
        Term::Arith(op, l, r) => {
            let (a, b) = (eval_arith(l)?, eval_arith(r)?);
            let v = match op {
                ArithOp::Add => a.checked_add(b),
                ArithOp::Sub => a.checked_sub(b),
                ArithOp::Mul => a.checked_mul(b),
            };
            v.ok_or_else(|| Error::Overflow(t.clone()))
        }
    }
}

/// Folds every variable-free arithmetic subterm into an integer. Terms
/// that still mention variables (set-name variables) keep their shape.
pub fn normalize_term(t: &Term) -> Result<Term> {
    match t {
        Term::Arith(op, l, r) => {
            if t.has_vars() {
                Ok(Term::Arith(
                    *op,
                    Box::new(normalize_term(l)?),
                    Box::new(normalize_term(r)?),
                ))
            } else {
                eval_arith(t).map(Term::Int)
            }
        }
        _ => Ok(t.clone()),
    }
}

fn normalize_literal(l: &Literal) -> Result<Literal> {
    Ok(Literal {
        predicate: l.predicate.clone(),
        args: l.args.iter().map(normalize_term).collect::<Result<_>>()?,
        negated: l.negated,
    })
}

fn normalize_aggregate(a: &AggregateAtom) -> Result<AggregateAtom> {
    let rhs = match normalize_term(&a.rhs)? {
        n @ Term::Int(_) => n,
        other => return Err(Error::NonIntegerBound(other)),
    };
    let cond = a
        .cond
        .iter()
        .map(|c| {
            Ok(match c {
                CondItem::Lit(l) => CondItem::Lit(normalize_literal(l)?),
                CondItem::Cmp(x, rel, y) => CondItem::Cmp(normalize_term(x)?, *rel, normalize_term(y)?),
            })
        })
        .collect::<Result<_>>()?;
    Ok(AggregateAtom {
        func: a.func,
        bound_vars: a.bound_vars.clone(),
        cond,
        relation: a.relation,
        rhs,
    })
}

fn instantiate(rule: &Rule, subst: &BTreeMap<String, Term>) -> Result<Rule> {
    let lits = |ls: &[Literal]| -> Result<Vec<Literal>> {
        ls.iter().map(|l| normalize_literal(&l.substitute(subst))).collect()
    };
    Ok(Rule {
        head: lits(&rule.head)?,
        pos: lits(&rule.pos)?,
        neg: lits(&rule.neg)?,
        agg: rule
            .agg
            .iter()
            .map(|a| normalize_aggregate(&a.substitute_free(subst)))
            .collect::<Result<_>>()?,
    })
}

/// Instantiates every rule over all substitutions of its free variables by
/// the constant pool. Rules keep source order; instances of one rule are
/// ordered by the substitution (variables sorted by name, values in pool
/// order). Duplicate rules are dropped, keeping the first.
pub fn ground_program(p: &Program) -> Result<GroundProgram> {
    let pool = constant_pool(p);
    let mut seen = HashSet::new();
    let mut rules = Vec::new();

    for rule in &p.rules {
        let vars: Vec<String> = rule.free_variables().into_iter().collect();
        if !vars.is_empty() && pool.is_empty() {
            continue;
        }
        let mut choice = vec![0usize; vars.len()];
        'instances: loop {
            let subst: BTreeMap<String, Term> = vars
                .iter()
                .zip(&choice)
                .map(|(v, &i)| (v.clone(), pool[i].clone()))
                .collect();
            let g = instantiate(rule, &subst)?;
            if seen.insert(g.clone()) {
                rules.push(g);
            }
            // odometer, last variable fastest
            let mut k = vars.len();
            loop {
                if k == 0 {
                    break 'instances;
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < pool.len() {
                    continue 'instances;
                }
                choice[k] = 0;
            }
        }
    }

    let mut constants: BTreeSet<Term> = pool.into_iter().collect();
    constants.extend(constant_pool(&Program::new(rules.clone())));
    Ok(GroundProgram {
        rules,
        constants: constants.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn ground(src: &str) -> GroundProgram {
        ground_program(&parse_program(src).unwrap()).unwrap()
    }

    fn rules(src: &str) -> Vec<Rule> {
        parse_program(src).unwrap().rules
    }

    #[test]
    fn pool_examples() {
        let p2 = parse_program("q(Y) :- card{X:p(X,Y)} = 1, r(Y).\nr(a). r(b). p(a,b).").unwrap();
        assert_eq!(constant_pool(&p2), vec![Term::constant("a"), Term::constant("b")]);
        let p = parse_program("p(1). q(a).").unwrap();
        assert_eq!(constant_pool(&p), vec![Term::Int(1), Term::constant("a")]);
        assert!(constant_pool(&Program::default()).is_empty());
    }

    #[test]
    fn arithmetic() {
        let t = |s: &str| parse_program(&format!("p({s}).")).unwrap().rules[0].head[0].args[0].clone();
        assert_eq!(eval_arith(&t("2+3")), Ok(5));
        assert_eq!(eval_arith(&t("4*5-1")), Ok(19));
        assert_eq!(eval_arith(&t("a+1")), Err(Error::NonIntegerArith(Term::constant("a"))));
        assert!(matches!(
            eval_arith(&t("9223372036854775807+1")),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn grounding_with_bound_set_variable() {
        let g = ground("q(Y) :- card{X:p(X,Y)} = 1, r(Y).\nr(a). r(b). p(a,b).");
        let expected = rules(
            "q(a) :- card{X:p(X,a)} = 1, r(a).
             q(b) :- card{X:p(X,b)} = 1, r(b).
             r(a). r(b). p(a,b).",
        );
        assert_eq!(g.rules, expected);
    }

    #[test]
    fn grounding_with_variable_both_free_and_bound() {
        let g = ground("r :- card{X:p(X)} >= 2, q(X).\np(a). p(b). q(a).");
        let expected = rules(
            "r :- card{X:p(X)} >= 2, q(a).
             r :- card{X:p(X)} >= 2, q(b).
             p(a). p(b). q(a).",
        );
        assert_eq!(g.rules, expected);
    }

    #[test]
    fn variable_free_program_is_unchanged() {
        let src = "p(a) :- card{X : p(X)} = 1.\nq(a) or p(b).\n:- p(a).";
        assert_eq!(ground(src).rules, rules(src));
    }

    #[test]
    fn free_variables_inside_conditions_are_substituted() {
        let g = ground("val(W,0) :- gate(G,and), output(W,G), card{W : val(W,0), input(W,G)} > 0.\ngate(g,and).");
        // pool {0, and, g}; W and G range over it
        assert_eq!(g.rules.len(), 9 + 1);
        let r = &g.rules[0];
        assert_eq!(
            r.to_string(),
            "val(0,0) :- gate(0,and), output(0,0), card{W : val(W,0), input(W,0)} > 0."
        );
        assert!(g.rules.iter().all(|r| r.free_variables().is_empty()));
    }

    #[test]
    fn arithmetic_is_evaluated_and_extends_domain() {
        let g = ground("p(N+1) :- q(N), card{X : q(X)} > N*2.\nq(1).");
        assert_eq!(g.rules[0].to_string(), "p(2) :- q(1), card{X : q(X)} > 2.");
        assert_eq!(g.constants, vec![Term::Int(1), Term::Int(2)]);
    }

    #[test]
    fn non_integer_arithmetic_is_an_error() {
        let p = parse_program("p(X+1) :- q(X).\nq(a).").unwrap();
        assert_eq!(ground_program(&p), Err(Error::NonIntegerArith(Term::constant("a"))));
        let p = parse_program("p :- card{X : q(X)} > Y, r(Y).\nr(a).").unwrap();
        assert_eq!(ground_program(&p), Err(Error::NonIntegerBound(Term::constant("a"))));
    }

    #[test]
    fn duplicates_are_removed() {
        let g = ground("p(a). p(a). q :- r(X), r(Y).\nr(a).");
        assert_eq!(g.rules.len(), 3);
    }

    #[test]
    fn idempotent() {
        let g = ground("q(Y) :- card{X:p(X,Y)} = 1, r(Y), not s(Y).\nr(a). r(b). p(a,b).");
        let again = ground_program(&g.as_program()).unwrap();
        assert_eq!(again, g);
    }
}
