//! Property checks over generated instances. Each returns `Err` with a
//! readable counterexample.

use alog::asolver::{Asolver, Evaluator, Premise};
use alog::model::*;
use alog::semantics::{
    agg_true_in_set, body_holds, enumerate_answer_sets_oracle, is_answer_set_alog, DEFAULT_ORACLE_CAP,
};
use alog::{ground_program, GroundProgram};
use rand::Rng;

use super::*;

pub type Check = Result<(), String>;

fn oracle(gp: &GroundProgram) -> Result<Vec<LiteralSet>, String> {
    enumerate_answer_sets_oracle(gp, DEFAULT_ORACLE_CAP).map_err(|e| format!("{e}\n{gp}"))
}

pub fn anti_chain(gp: &GroundProgram) -> Check {
    let sets = oracle(gp)?;
    for a in &sets {
        for b in &sets {
            if a != b && a.is_subset(b) {
                return Err(format!("{a} is a proper subset of {b} in\n{gp}"));
            }
        }
    }
    Ok(())
}

pub fn satisfaction_and_support(gp: &GroundProgram) -> Check {
    let pool = &gp.constants;
    for a in oracle(gp)? {
        for r in &gp.rules {
            let body = body_holds(&a, r, pool).map_err(|e| e.to_string())?;
            if body && !r.head.iter().any(|h| a.contains(h)) {
                return Err(format!("{a} violates `{r}` in\n{gp}"));
            }
        }
        for p in a.iter() {
            let mut supported = false;
            for r in gp.rules.iter().filter(|r| r.head.contains(p)) {
                let only = r.head.iter().all(|h| h == p || !a.contains(h));
                if only && body_holds(&a, r, pool).map_err(|e| e.to_string())? {
                    supported = true;
                    break;
                }
            }
            if !supported {
                return Err(format!("{p} has no supporting rule in {a} for\n{gp}"));
            }
        }
    }
    Ok(())
}

/// `A` is an answer set of bottom ∪ top iff `A ∩ S` is one of the bottom
/// and `A` is one of `(A ∩ S) ∪ top`, over every `A` of candidate atoms.
pub fn splitting(inst: &SplitInstance) -> Check {
    let whole = GroundProgram::new(
        inst.bottom.iter().chain(&inst.top).cloned().collect(),
        inst.pool.clone(),
    );
    let bottom = GroundProgram::new(inst.bottom.clone(), inst.pool.clone());
    for a in subsets(&atoms(&["p", "q"], &inst.pool)) {
        let lower: LiteralSet = a.iter().filter(|l| inst.split.contains(l)).cloned().collect();
        let mut upper_rules: Vec<Rule> = lower.iter().cloned().map(Rule::fact).collect();
        upper_rules.extend(inst.top.iter().cloned());
        let upper = GroundProgram::new(upper_rules, inst.pool.clone());
        let lhs = is_answer_set_alog(&a, &whole).map_err(|e| e.to_string())?;
        let rhs = is_answer_set_alog(&lower, &bottom).map_err(|e| e.to_string())?
            && is_answer_set_alog(&a, &upper).map_err(|e| e.to_string())?;
        if lhs != rhs {
            return Err(format!("A = {a}: whole {lhs}, split {rhs}\n{whole}"));
        }
    }
    Ok(())
}

pub fn differential(gp: &GroundProgram) -> Check {
    let want = oracle(gp)?;
    let got = Asolver::new(gp)
        .and_then(|s| s.enumerate(None))
        .map_err(|e| format!("{e}\n{gp}"))?;
    if want != got {
        return Err(format!(
            "oracle {want:?} solver {got:?}\n{gp}",
            want = want.iter().map(ToString::to_string).collect::<Vec<_>>(),
            got = got.iter().map(ToString::to_string).collect::<Vec<_>>()
        ));
    }
    Ok(())
}

/// One random partial interpretation and a handful of premises over a
/// pool of at most four integers. Every strongly satisfied premise must be
/// true in all total extensions, every strongly refuted one false in all,
/// and a strongly refuted set must never be jointly true. Returns the
/// number of verdicts checked and how many of them were affirmative.
pub fn strong_soundness(rng: &mut impl Rng) -> Result<(usize, usize), String> {
    let pool = random_pool(rng, 4);
    let universe = atoms(&["p", "q"], &pool);
    let i = random_partial(rng, &universe);
    let exts = total_extensions(&i, &universe);
    let eval = Evaluator::new(&pool);
    let mut premises: Vec<Premise> = (0..rng.gen_range(1..=3))
        .map(|_| Premise::Agg(random_aggregate(rng, &["p", "q"], &pool)))
        .collect();
    if rng.gen_bool(0.3) {
        let l = universe[rng.gen_range(0..universe.len())].clone();
        premises.push(Premise::Lit(if rng.gen_bool(0.5) {
            ELiteral::pos(l)
        } else {
            ELiteral::not(l)
        }));
    }
    let holds = |p: &Premise, s: &LiteralSet| -> Result<bool, String> {
        match p {
            Premise::Lit(e) => Ok(s.contains(&e.literal) != e.default_negated),
            Premise::Agg(a) => agg_true_in_set(a, s, &pool).map_err(|e| e.to_string()),
        }
    };
    let mut verdicts = 0;
    let mut affirmative = 0;
    for p in &premises {
        let sat = eval.strongly_satisfied(p, &i).map_err(|e| e.to_string())?;
        let refuted = eval.strongly_refuted(p, &i).map_err(|e| e.to_string())?;
        verdicts += 2;
        affirmative += usize::from(sat) + usize::from(refuted);
        for s in &exts {
            let v = holds(p, s)?;
            if (sat && !v) || (refuted && v) {
                return Err(format!(
                    "{p:?} sat={sat} refuted={refuted} but value {v} in {s}; I = {i}"
                ));
            }
        }
    }
    let set_refuted = eval.set_strongly_refuted(&premises, &i).map_err(|e| e.to_string())?;
    verdicts += 1;
    if set_refuted {
        affirmative += 1;
        for s in &exts {
            let mut all = true;
            for p in &premises {
                all &= holds(p, s)?;
            }
            if all {
                return Err(format!("{premises:?} set-refuted but all true in {s}; I = {i}"));
            }
        }
    }
    Ok((verdicts, affirmative))
}

pub fn aggregate_free(gp: &GroundProgram) -> Check {
    let want = classical_stable_models(&gp.rules);
    let got = oracle(gp)?;
    if want != got {
        return Err(format!("classical {want:?} alog {got:?}\n{gp}"));
    }
    if gp.classical_negation().is_none() {
        let solver = Asolver::new(gp)
            .and_then(|s| s.enumerate(None))
            .map_err(|e| e.to_string())?;
        if solver != want {
            return Err(format!("classical {want:?} solver {solver:?}\n{gp}"));
        }
    }
    Ok(())
}

/// Renaming the set-name variable changes neither the grounding (up to the
/// renaming) nor the answer sets.
pub fn renaming(p: &Program) -> Check {
    let renamed = rename_bound(p, "Z");
    let g1 = ground_program(p).map_err(|e| e.to_string())?;
    let g2 = ground_program(&renamed).map_err(|e| e.to_string())?;
    let back = ground_program(&rename_bound(&g2.as_program(), "X")).map_err(|e| e.to_string())?;
    if back.rules != g1.rules {
        return Err(format!("groundings differ:\n{g1}\n{g2}"));
    }
    let a1 = Asolver::new(&g1)
        .and_then(|s| s.enumerate(None))
        .map_err(|e| e.to_string())?;
    let a2 = Asolver::new(&g2)
        .and_then(|s| s.enumerate(None))
        .map_err(|e| e.to_string())?;
    if a1 != a2 {
        return Err(format!("{a1:?} vs {a2:?} for\n{}", alog::format_program(p)));
    }
    Ok(())
}

pub fn renaming_instance(rng: &mut impl Rng) -> Program {
    let gp = random_program(rng, &GenConfig::default());
    lift(rng, &gp)
}
