//! Abstract syntax of programs with aggregates and the interpretation
//! structures shared by the grounder, the reduct semantics and the solver.
//!
//! A rule has the shape
//!
//! ```text
//! h1 or ... or hk :- p1, ..., pm, not n1, ..., not nj, agg1, ..., aggl.
//! ```
//!
//! where every `agg` is `f{X1,...,Xn : cond} REL term`. Variables listed
//! before the colon are bound inside the set name; every other variable
//! occurrence in the rule is free.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Term of the language. The derived ordering puts integers first
/// (numerically), then object constants (lexicographically).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Int(i64),
    Const(String),
    Var(String),
    Arith(ArithOp, Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            ArithOp::Add | ArithOp::Sub => 1,
            ArithOp::Mul => 2,
        }
    }
}

impl Term {
    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// No variables and no arithmetic.
    pub fn is_ground(&self) -> bool {
        matches!(self, Term::Int(_) | Term::Const(_))
    }

    pub fn has_vars(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Arith(_, l, r) => l.has_vars() || r.has_vars(),
            _ => false,
        }
    }

    pub fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Var(v) => {
                out.insert(v);
            }
            Term::Arith(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            _ => {}
        }
    }

    pub fn collect_constants(&self, out: &mut BTreeSet<Term>) {
        match self {
            Term::Int(_) | Term::Const(_) => {
                out.insert(self.clone());
            }
            Term::Arith(_, l, r) => {
                l.collect_constants(out);
                r.collect_constants(out);
            }
            Term::Var(_) => {}
        }
    }

    /// Replaces variables found in `subst`; others are left in place.
    pub fn substitute(&self, subst: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => subst.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Arith(op, l, r) => Term::Arith(*op, Box::new(l.substitute(subst)), Box::new(r.substitute(subst))),
            _ => self.clone(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parent: u8, right: bool) -> fmt::Result {
        match self {
            Term::Int(n) => write!(f, "{n}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::Var(v) => write!(f, "{v}"),
            Term::Arith(op, l, r) => {
                let p = op.precedence();
                let paren = p < parent || (right && p == parent);
                if paren {
                    write!(f, "(")?;
                }
                l.fmt_prec(f, p, false)?;
                write!(f, "{}", op.symbol())?;
                r.fmt_prec(f, p, true)?;
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0, false)
    }
}

/// A possibly classically negated atom (`-p(a)` when `negated`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub predicate: String,
    pub args: Vec<Term>,
    pub negated: bool,
}

impl Literal {
    pub fn new(predicate: &str, args: Vec<Term>) -> Literal {
        Literal {
            predicate: predicate.to_string(),
            args,
            negated: false,
        }
    }

    /// Shorthand for a positive literal whose arguments are all constants
    /// or integers, e.g. `Literal::atom("p", &["a", "1"])`.
    pub fn atom(predicate: &str, args: &[&str]) -> Literal {
        let args = args
            .iter()
            .map(|a| match a.parse::<i64>() {
                Ok(n) => Term::Int(n),
                Err(_) => Term::constant(a),
            })
            .collect();
        Literal::new(predicate, args)
    }

    pub fn classically_negated(mut self) -> Literal {
        self.negated = !self.negated;
        self
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// The literal for the same atom with the opposite classical sign.
    pub fn complement(&self) -> Literal {
        self.clone().classically_negated()
    }

    pub fn substitute(&self, subst: &BTreeMap<String, Term>) -> Literal {
        Literal {
            predicate: self.predicate.clone(),
            args: self.args.iter().map(|t| t.substitute(subst)).collect(),
            negated: self.negated,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-")?;
        }
        write!(f, "{}", self.predicate)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A regular literal, possibly preceded by default negation `not`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ELiteral {
    pub literal: Literal,
    pub default_negated: bool,
}

impl ELiteral {
    pub fn pos(literal: Literal) -> ELiteral {
        ELiteral {
            literal,
            default_negated: false,
        }
    }

    pub fn not(literal: Literal) -> ELiteral {
        ELiteral {
            literal,
            default_negated: true,
        }
    }

    pub fn contrary(&self) -> ELiteral {
        ELiteral {
            literal: self.literal.clone(),
            default_negated: !self.default_negated,
        }
    }
}

impl fmt::Display for ELiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.default_negated {
            write!(f, "not ")?;
        }
        write!(f, "{}", self.literal)
    }
}

pub fn contrary(l: &ELiteral) -> ELiteral {
    l.contrary()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Gt,
    Ge,
    Lt,
    Le,
    Eq,
    Ne,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ne => "!=",
        }
    }

    pub fn holds<T: Ord>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Relation::Gt => lhs > rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ne => lhs != rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AggFunc {
    Card,
    /// Same function as `Card`, kept apart so programs print back as written.
    Count,
    Sum,
    Min,
    Max,
}

impl AggFunc {
    pub fn name(self) -> &'static str {
        match self {
            AggFunc::Card => "card",
            AggFunc::Count => "count",
            AggFunc::Sum => "sum",
            AggFunc::Min => "min",
            AggFunc::Max => "max",
        }
    }

    pub fn from_name(name: &str) -> Option<AggFunc> {
        Some(match name {
            "card" => AggFunc::Card,
            "count" => AggFunc::Count,
            "sum" => AggFunc::Sum,
            "min" => AggFunc::Min,
            "max" => AggFunc::Max,
            _ => return None,
        })
    }
}

impl fmt::Display for AggFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One element of a set-name condition: a regular literal, or a built-in
/// comparison that is evaluated per instance and never reaches a reduct.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CondItem {
    Lit(Literal),
    Cmp(Term, Relation, Term),
}

impl CondItem {
    pub fn substitute(&self, subst: &BTreeMap<String, Term>) -> CondItem {
        match self {
            CondItem::Lit(l) => CondItem::Lit(l.substitute(subst)),
            CondItem::Cmp(a, rel, b) => CondItem::Cmp(a.substitute(subst), *rel, b.substitute(subst)),
        }
    }

    pub fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            CondItem::Lit(l) => l.args.iter().for_each(|t| t.collect_vars(out)),
            CondItem::Cmp(a, _, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl fmt::Display for CondItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CondItem::Lit(l) => write!(f, "{l}"),
            CondItem::Cmp(a, rel, b) => write!(f, "{a} {rel} {b}"),
        }
    }
}

/// `func{bound_vars : cond} relation rhs`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AggregateAtom {
    pub func: AggFunc,
    pub bound_vars: Vec<String>,
    pub cond: Vec<CondItem>,
    pub relation: Relation,
    pub rhs: Term,
}

impl AggregateAtom {
    /// Regular literals of the condition, skipping comparisons.
    pub fn cond_literals(&self) -> impl Iterator<Item = &Literal> {
        self.cond.iter().filter_map(|c| match c {
            CondItem::Lit(l) => Some(l),
            CondItem::Cmp(..) => None,
        })
    }

    /// Variables occurring free in this aggregate (in `cond` but not
    /// bound, or anywhere in `rhs`).
    pub fn free_vars(&self) -> BTreeSet<&str> {
        let mut inner = BTreeSet::new();
        self.cond.iter().for_each(|c| c.collect_vars(&mut inner));
        let mut out: BTreeSet<&str> = inner
            .into_iter()
            .filter(|v| !self.bound_vars.iter().any(|b| b == v))
            .collect();
        self.rhs.collect_vars(&mut out);
        out
    }

    /// Substitutes only free occurrences; bound variables shadow `subst`.
    pub fn substitute_free(&self, subst: &BTreeMap<String, Term>) -> AggregateAtom {
        let mut inner = subst.clone();
        for b in &self.bound_vars {
            inner.remove(b);
        }
        AggregateAtom {
            func: self.func,
            bound_vars: self.bound_vars.clone(),
            cond: self.cond.iter().map(|c| c.substitute(&inner)).collect(),
            relation: self.relation,
            rhs: self.rhs.substitute(subst),
        }
    }

    /// True when both atoms denote the same set (identical set name).
    pub fn same_set_name(&self, other: &AggregateAtom) -> bool {
        self.func == other.func && self.bound_vars == other.bound_vars && self.cond == other.cond
    }

    pub fn fmt_set_name(&self, f: &mut impl fmt::Write) -> fmt::Result {
        write!(f, "{}{{{} : ", self.func, self.bound_vars.join(","))?;
        for (i, c) in self.cond.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for AggregateAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_set_name(f)?;
        write!(f, " {} {}", self.relation, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rule {
    pub head: Vec<Literal>,
    pub pos: Vec<Literal>,
    /// Literals under default negation.
    pub neg: Vec<Literal>,
    pub agg: Vec<AggregateAtom>,
}

impl Rule {
    pub fn fact(head: Literal) -> Rule {
        Rule {
            head: vec![head],
            ..Rule::default()
        }
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn has_aggregates(&self) -> bool {
        !self.agg.is_empty()
    }

    /// Every regular literal in head and body, plus condition literals.
    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.head
            .iter()
            .chain(&self.pos)
            .chain(&self.neg)
            .chain(self.agg.iter().flat_map(|a| a.cond_literals()))
    }

    /// Variables with at least one occurrence outside every set name of
    /// the rule (including occurrences in a set name where they are not
    /// bound).
    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for l in self.head.iter().chain(&self.pos).chain(&self.neg) {
            l.args.iter().for_each(|t| t.collect_vars(&mut out));
        }
        for a in &self.agg {
            out.extend(a.free_vars());
        }
        out.into_iter().map(str::to_string).collect()
    }

    pub fn is_ground(&self) -> bool {
        self.head
            .iter()
            .chain(&self.pos)
            .chain(&self.neg)
            .all(Literal::is_ground)
            && self.agg.iter().all(|a| a.rhs.is_ground() && a.free_vars().is_empty())
    }

    pub fn mentions_classical_negation(&self) -> bool {
        self.literals().any(|l| l.negated)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.head.iter().enumerate() {
            if i > 0 {
                write!(f, " or ")?;
            }
            write!(f, "{h}")?;
        }
        let body: Vec<String> = self
            .pos
            .iter()
            .map(ToString::to_string)
            .chain(self.neg.iter().map(|l| format!("not {l}")))
            .chain(self.agg.iter().map(ToString::to_string))
            .collect();
        if !body.is_empty() {
            if self.head.is_empty() {
                write!(f, ":- ")?;
            } else {
                write!(f, " :- ")?;
            }
            write!(f, "{}", body.join(", "))?;
        } else if self.head.is_empty() {
            // empty constraint; only reachable when built programmatically
            write!(f, ":-")?;
        }
        write!(f, ".")
    }
}

pub fn free_variables(rule: &Rule) -> BTreeSet<String> {
    rule.free_variables()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Program {
        Program { rules }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Undefined,
}

/// Consistent set of ground e-literals. An entry `l -> true` means `l` is
/// in the interpretation, `l -> false` means `not l` is.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartialInterpretation {
    members: BTreeMap<Literal, bool>,
}

/// Attempted insertion of an e-literal whose contrary (or whose classical
/// complement) is already present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistent(pub ELiteral);

impl PartialInterpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_literals(lits: impl IntoIterator<Item = ELiteral>) -> Result<Self, Inconsistent> {
        let mut i = Self::new();
        for l in lits {
            i.insert(l)?;
        }
        Ok(i)
    }

    /// Returns `Ok(true)` when `l` was not already a member.
    pub fn insert(&mut self, l: ELiteral) -> Result<bool, Inconsistent> {
        let value = !l.default_negated;
        match self.members.get(&l.literal) {
            Some(&v) if v == value => return Ok(false),
            Some(_) => return Err(Inconsistent(l)),
            None => {}
        }
        if value && self.members.get(&l.literal.complement()) == Some(&true) {
            return Err(Inconsistent(l));
        }
        self.members.insert(l.literal, value);
        Ok(true)
    }

    pub fn value(&self, l: &Literal) -> Truth {
        match self.members.get(l) {
            Some(true) => Truth::True,
            Some(false) => Truth::False,
            None => Truth::Undefined,
        }
    }

    pub fn truth_value(&self, l: &ELiteral) -> Truth {
        match (self.value(&l.literal), l.default_negated) {
            (Truth::Undefined, _) => Truth::Undefined,
            (t, false) => t,
            (Truth::True, true) => Truth::False,
            (Truth::False, true) => Truth::True,
        }
    }

    pub fn is_true(&self, l: &Literal) -> bool {
        self.value(l) == Truth::True
    }

    pub fn is_false(&self, l: &Literal) -> bool {
        self.value(l) == Truth::False
    }

    pub fn is_decided(&self, l: &Literal) -> bool {
        self.members.contains_key(l)
    }

    pub fn contains(&self, l: &ELiteral) -> bool {
        self.truth_value(l) == Truth::True
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// True when every member of `self` is a member of `other`.
    pub fn is_subset(&self, other: &PartialInterpretation) -> bool {
        self.members.iter().all(|(l, v)| other.members.get(l) == Some(v))
    }

    pub fn iter(&self) -> impl Iterator<Item = ELiteral> + '_ {
        self.members.iter().map(|(l, &v)| ELiteral {
            literal: l.clone(),
            default_negated: !v,
        })
    }

    /// Members that are regular literals (not default negated).
    pub fn positive_part(&self) -> LiteralSet {
        LiteralSet::from_iter(self.members.iter().filter(|(_, &v)| v).map(|(l, _)| l.clone()))
    }
}

impl fmt::Display for PartialInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

pub fn truth_value(l: &ELiteral, i: &PartialInterpretation) -> Truth {
    i.truth_value(l)
}

/// Set of ground regular literals, kept sorted. Consistency is a property
/// that can be queried, not an invariant enforced on construction, since
/// candidate sets are routinely inconsistent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LiteralSet(BTreeSet<Literal>);

impl LiteralSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, l: &Literal) -> bool {
        self.0.contains(l)
    }

    pub fn insert(&mut self, l: Literal) -> bool {
        self.0.insert(l)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Literal> {
        self.0.iter()
    }

    pub fn is_consistent(&self) -> bool {
        self.0
            .iter()
            .filter(|l| !l.negated)
            .all(|l| !self.0.contains(&l.complement()))
    }

    pub fn is_subset(&self, other: &LiteralSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn as_set(&self) -> &BTreeSet<Literal> {
        &self.0
    }
}

impl FromIterator<Literal> for LiteralSet {
    fn from_iter<I: IntoIterator<Item = Literal>>(iter: I) -> Self {
        LiteralSet(iter.into_iter().collect())
    }
}

impl IntoIterator for LiteralSet {
    type Item = Literal;
    type IntoIter = std::collections::btree_set::IntoIter<Literal>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a LiteralSet {
    type Item = &'a Literal;
    type IntoIter = std::collections::btree_set::Iter<'a, Literal>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for LiteralSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}
