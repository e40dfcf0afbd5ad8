//! Consequences of a partial interpretation: the four inference rules and
//! the simplify-and-propagate fixpoint around them.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::model::{AggregateAtom, ELiteral, Literal, PartialInterpretation, Rule, Truth};

use super::bounds::{Evaluator, Premise};

/// Aggregate atoms that must end up true (`ta`) and false (`fa`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AggregateConstraintSets {
    pub ta: BTreeSet<AggregateAtom>,
    pub fa: BTreeSet<AggregateAtom>,
}

/// What one inference rule adds for one rule of the program.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Delta {
    pub interpretation: Vec<ELiteral>,
    pub ta: Vec<AggregateAtom>,
    pub fa: Vec<AggregateAtom>,
}

impl Delta {
    pub fn is_empty(&self) -> bool {
        self.interpretation.is_empty() && self.ta.is_empty() && self.fa.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InferenceRule {
    /// Body strongly satisfied and all head atoms but one false: that one is true.
    Forward,
    /// A true atom with a single defining rule: that rule supports it.
    Support,
    /// Head false and all premises but one strongly satisfied: the last one fails.
    Backward,
    /// Every defining rule has a strongly refuted body: the atom is false.
    Unfounded,
}

impl InferenceRule {
    pub const ALL: [InferenceRule; 4] = [
        InferenceRule::Forward,
        InferenceRule::Support,
        InferenceRule::Backward,
        InferenceRule::Unfounded,
    ];

    /// 1-based number used when the rules are listed.
    pub fn from_number(i: usize) -> Option<InferenceRule> {
        InferenceRule::ALL.get(i.checked_sub(1)?).copied()
    }
}

pub fn premises(r: &Rule) -> Vec<Premise> {
    r.pos
        .iter()
        .map(|l| Premise::Lit(ELiteral::pos(l.clone())))
        .chain(r.neg.iter().map(|l| Premise::Lit(ELiteral::not(l.clone()))))
        .chain(r.agg.iter().map(|a| Premise::Agg(a.clone())))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsOutcome {
    pub program: Vec<Rule>,
    pub interpretation: PartialInterpretation,
    pub constraints: AggregateConstraintSets,
    pub ok: bool,
}

/// Propagation context: the atoms of the signature and the aggregate
/// evaluator. Holds no per-branch state.
#[derive(Debug, Clone)]
pub struct Propagator {
    pub(crate) eval: Evaluator,
    pub(crate) atoms: Vec<Literal>,
}

impl Propagator {
    pub fn new(eval: Evaluator, atoms: Vec<Literal>) -> Propagator {
        Propagator { eval, atoms }
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.eval
    }

    fn body_strongly_satisfied(&self, r: &Rule, i: &PartialInterpretation) -> Result<bool> {
        for p in premises(r) {
            if !self.eval.strongly_satisfied(&p, i)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn body_strongly_refuted(&self, r: &Rule, i: &PartialInterpretation) -> Result<bool> {
        self.eval.set_strongly_refuted(&premises(r), i)
    }

    /// Applies one inference rule to rule `r` of `program`. `Unfounded`
    /// looks at every atom and ignores `r`.
    pub fn icons(
        &self,
        rule: InferenceRule,
        i: &PartialInterpretation,
        sets: &AggregateConstraintSets,
        program: &[Rule],
        r: &Rule,
    ) -> Result<Delta> {
        let mut d = Delta::default();
        match rule {
            InferenceRule::Forward => {
                let open: Vec<&Literal> = r.head.iter().filter(|h| !i.is_false(h)).collect();
                if open.len() == 1 && !i.is_true(open[0]) && self.body_strongly_satisfied(r, i)? {
                    d.interpretation.push(ELiteral::pos(open[0].clone()));
                }
            }
            InferenceRule::Support => {
                for p in r.head.iter().filter(|h| i.is_true(h)) {
                    if program.iter().filter(|q| q.head.contains(p)).count() != 1 {
                        continue;
                    }
                    d.interpretation
                        .extend(r.head.iter().filter(|h| *h != p).map(|h| ELiteral::not(h.clone())));
                    d.interpretation.extend(r.pos.iter().map(|l| ELiteral::pos(l.clone())));
                    d.interpretation.extend(r.neg.iter().map(|l| ELiteral::not(l.clone())));
                    d.ta.extend(r.agg.iter().cloned());
                }
                d.interpretation.retain(|l| i.truth_value(l) != Truth::True);
                d.ta.retain(|a| !sets.ta.contains(a));
            }
            InferenceRule::Backward => {
                if !r.head.iter().all(|h| i.is_false(h)) {
                    return Ok(d);
                }
                let mut unresolved = Vec::new();
                for p in premises(r) {
                    if !self.eval.strongly_satisfied(&p, i)? {
                        unresolved.push(p);
                        if unresolved.len() > 1 {
                            return Ok(d);
                        }
                    }
                }
                match unresolved.pop() {
                    Some(Premise::Lit(l)) if i.truth_value(&l) == Truth::Undefined => {
                        d.interpretation.push(l.contrary());
                    }
                    Some(Premise::Agg(a)) if !sets.fa.contains(&a) => d.fa.push(a),
                    _ => {}
                }
            }
            InferenceRule::Unfounded => {
                for p in self.atoms.iter().filter(|p| !i.is_false(p)) {
                    let mut all_refuted = true;
                    for q in program.iter().filter(|q| q.head.contains(p)) {
                        if !self.body_strongly_refuted(q, i)? {
                            all_refuted = false;
                            break;
                        }
                    }
                    if all_refuted {
                        d.interpretation.push(ELiteral::not(p.clone()));
                    }
                }
            }
        }
        Ok(d)
    }

    /// Drops rules whose bodies are strongly refuted, then removes true
    /// negative e-atoms and strongly satisfied aggregate atoms from the
    /// remaining bodies.
    fn simplify(&self, program: &mut Vec<Rule>, i: &PartialInterpretation) -> Result<()> {
        let mut kept = Vec::with_capacity(program.len());
        for r in program.drain(..) {
            if self.body_strongly_refuted(&r, i)? {
                continue;
            }
            let mut r = r;
            r.neg.retain(|l| !i.is_false(l));
            let mut agg = Vec::with_capacity(r.agg.len());
            for a in r.agg {
                if !self.eval.strongly_satisfied(&Premise::Agg(a.clone()), i)? {
                    agg.push(a);
                }
            }
            r.agg = agg;
            kept.push(r);
        }
        *program = kept;
        Ok(())
    }

    /// `I` is compatible with `TA` (not strongly refuted as a set) and with
    /// `FA` (no member strongly satisfied); an atom in both is never
    /// compatible.
    pub fn compatible(&self, i: &PartialInterpretation, sets: &AggregateConstraintSets) -> Result<bool> {
        if sets.ta.intersection(&sets.fa).next().is_some() {
            return Ok(false);
        }
        let ta: Vec<Premise> = sets.ta.iter().cloned().map(Premise::Agg).collect();
        if self.eval.set_strongly_refuted(&ta, i)? {
            return Ok(false);
        }
        for a in &sets.fa {
            if self.eval.strongly_satisfied(&Premise::Agg(a.clone()), i)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Fixpoint of simplification plus inference rules 1-4 (applied in that
    /// order each round, each over every rule). On an inconsistent `I` or
    /// an incompatible `TA`/`FA` the inputs come back with `ok == false`.
    pub fn cons(
        &self,
        i0: &PartialInterpretation,
        sets0: &AggregateConstraintSets,
        program0: &[Rule],
    ) -> Result<ConsOutcome> {
        let failed = || ConsOutcome {
            program: program0.to_vec(),
            interpretation: i0.clone(),
            constraints: sets0.clone(),
            ok: false,
        };
        let mut i = i0.clone();
        let mut sets = sets0.clone();
        let mut program = program0.to_vec();

        loop {
            let before = (i.len(), sets.ta.len(), sets.fa.len());
            self.simplify(&mut program, &i)?;
            for rule in InferenceRule::ALL {
                let targets: Vec<Rule> = if rule == InferenceRule::Unfounded {
                    vec![Rule::default()]
                } else {
                    program.clone()
                };
                for r in &targets {
                    let d = self.icons(rule, &i, &sets, &program, r)?;
                    for l in d.interpretation {
                        if i.insert(l).is_err() {
                            return Ok(failed());
                        }
                    }
                    sets.ta.extend(d.ta);
                    sets.fa.extend(d.fa);
                }
            }
            if before == (i.len(), sets.ta.len(), sets.fa.len()) {
                break;
            }
        }

        if !self.compatible(&i, &sets)? {
            return Ok(failed());
        }
        Ok(ConsOutcome {
            program,
            interpretation: i,
            constraints: sets,
            ok: true,
        })
    }
}
