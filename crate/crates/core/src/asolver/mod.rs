//! Answer-set search by propagation and branching.
//!
//! The search threads a partial interpretation `I` together with two sets
//! of aggregate atoms, `TA` (must end up true) and `FA` (must end up
//! false). Each node runs [`Propagator::cons`]; when `I` decides every
//! atom, the positive part of `I` is checked against the original program
//! with the aggregate-reduct definition. Otherwise the first undecided
//! atom (in literal order) is set true, then false.
//!
//! Simplification may delete aggregate atoms from bodies, which changes
//! the reduct, so the leaf check always uses the program the search
//! started from.

pub mod bounds;
pub mod cons;

use std::collections::BTreeSet;

pub use bounds::{
    agg_bounds, agg_truth_in_partial, set_strongly_refuted, strongly_refuted, strongly_satisfied, AggBounds, Evaluator,
    Premise,
};
pub use cons::{premises, AggregateConstraintSets, ConsOutcome, Delta, InferenceRule, Propagator};

use crate::error::{Error, Result};
use crate::grounder::GroundProgram;
use crate::model::{ELiteral, Literal, LiteralSet, PartialInterpretation};
use crate::semantics::{instances, is_answer_set_alog};

#[derive(Debug, Clone)]
pub struct Asolver {
    program: GroundProgram,
    propagator: Propagator,
}

impl Asolver {
    /// Fails on programs with classical negation.
    pub fn new(gp: &GroundProgram) -> Result<Asolver> {
        if let Some(l) = gp.classical_negation() {
            return Err(Error::ClassicalNegation(l.clone()));
        }
        let aggs: Vec<_> = gp.rules.iter().flat_map(|r| &r.agg).collect();
        let eval = Evaluator::with_atoms(&gp.constants, aggs.iter().copied());
        let mut atoms: BTreeSet<Literal> = gp
            .rules
            .iter()
            .flat_map(|r| r.head.iter().chain(&r.pos).chain(&r.neg))
            .cloned()
            .collect();
        for a in aggs {
            for inst in instances(a, &gp.constants) {
                atoms.extend(inst.literals);
            }
        }
        Ok(Asolver {
            program: gp.clone(),
            propagator: Propagator::new(eval, atoms.into_iter().collect()),
        })
    }

    /// Atoms the search decides, in branching order.
    pub fn atoms(&self) -> &[Literal] {
        &self.propagator.atoms
    }

    pub fn propagator(&self) -> &Propagator {
        &self.propagator
    }

    pub fn cons(&self, i0: &PartialInterpretation, sets0: &AggregateConstraintSets) -> Result<ConsOutcome> {
        self.propagator.cons(i0, sets0, &self.program.rules)
    }

    /// Whether the positive part of a total interpretation is an answer
    /// set of the program.
    pub fn is_answer_set(&self, i: &PartialInterpretation) -> Result<bool> {
        is_answer_set_alog(&i.positive_part(), &self.program)
    }

    /// First answer set compatible with `I₀`, `TA₀` and `FA₀`, as a total
    /// interpretation over [`Asolver::atoms`]; `None` when there is none.
    pub fn solve(
        &self,
        i0: &PartialInterpretation,
        sets0: &AggregateConstraintSets,
    ) -> Result<Option<PartialInterpretation>> {
        let mut found = Vec::new();
        self.search(i0, sets0, &self.program.rules, Some(1), &mut found)?;
        Ok(found.pop())
    }

    /// Up to `limit` answer sets (all when `None`), sorted.
    pub fn enumerate(&self, limit: Option<usize>) -> Result<Vec<LiteralSet>> {
        let mut found = Vec::new();
        if limit != Some(0) {
            self.search(
                &PartialInterpretation::new(),
                &AggregateConstraintSets::default(),
                &self.program.rules,
                limit,
                &mut found,
            )?;
        }
        let mut out: Vec<LiteralSet> = found.iter().map(PartialInterpretation::positive_part).collect();
        out.sort();
        Ok(out)
    }

    fn search(
        &self,
        i0: &PartialInterpretation,
        sets0: &AggregateConstraintSets,
        program: &[crate::model::Rule],
        limit: Option<usize>,
        found: &mut Vec<PartialInterpretation>,
    ) -> Result<()> {
        let c = self.propagator.cons(i0, sets0, program)?;
        if !c.ok {
            return Ok(());
        }
        let i = c.interpretation;
        let Some(p) = self.atoms().iter().find(|a| !i.is_decided(a)) else {
            if self.is_answer_set(&i)? {
                found.push(i);
            }
            return Ok(());
        };
        for branch in [ELiteral::pos(p.clone()), ELiteral::not(p.clone())] {
            if limit.is_some_and(|n| found.len() >= n) {
                break;
            }
            let mut next = i.clone();
            next.insert(branch).expect("branch atom is undecided");
            self.search(&next, &c.constraints, &c.program, limit, found)?;
        }
        Ok(())
    }
}

/// Runs the search from the empty interpretation and returns the first
/// answer set found.
pub fn solver(gp: &GroundProgram) -> Result<Option<PartialInterpretation>> {
    Asolver::new(gp)?.solve(&PartialInterpretation::new(), &AggregateConstraintSets::default())
}

pub fn is_answer_set(i: &PartialInterpretation, gp: &GroundProgram) -> Result<bool> {
    is_answer_set_alog(&i.positive_part(), gp)
}

pub fn enumerate_answer_sets_solver(gp: &GroundProgram) -> Result<Vec<LiteralSet>> {
    Asolver::new(gp)?.enumerate(None)
}
