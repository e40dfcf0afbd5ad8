//! Random program generators and brute-force reference procedures shared by
//! the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use alog::model::*;
use alog::{ground_program, GroundProgram};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const FUNCS: [AggFunc; 5] = [AggFunc::Card, AggFunc::Count, AggFunc::Sum, AggFunc::Min, AggFunc::Max];
pub const RELATIONS: [Relation; 6] = [
    Relation::Gt,
    Relation::Ge,
    Relation::Lt,
    Relation::Le,
    Relation::Eq,
    Relation::Ne,
];

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub max_pool: usize,
    pub max_rules: usize,
    pub head_preds: Vec<&'static str>,
    pub body_preds: Vec<&'static str>,
    pub aggregates: bool,
    pub classical: bool,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            max_pool: 3,
            max_rules: 8,
            head_preds: vec!["p", "q"],
            body_preds: vec!["p", "q"],
            aggregates: true,
            classical: false,
        }
    }
}

/// Between one and `max` distinct integers from {1, -1, 2, 0}, sorted.
pub fn random_pool(rng: &mut impl Rng, max: usize) -> Vec<Term> {
    let mut all = vec![1, -1, 2, 0];
    all.truncate(max.clamp(1, 4));
    all.shuffle(rng);
    let k = rng.gen_range(1..=all.len());
    let mut pool: Vec<Term> = all[..k].iter().map(|&n| Term::Int(n)).collect();
    pool.sort();
    pool
}

fn random_literal(rng: &mut impl Rng, preds: &[&str], pool: &[Term], classical: bool) -> Literal {
    let l = Literal::new(preds.choose(rng).unwrap(), vec![pool.choose(rng).unwrap().clone()]);
    if classical && rng.gen_bool(0.15) {
        l.classically_negated()
    } else {
        l
    }
}

fn distinct<R: Rng>(rng: &mut R, n: usize, mut f: impl FnMut(&mut R) -> Literal) -> Vec<Literal> {
    let mut out: Vec<Literal> = Vec::new();
    for _ in 0..n {
        let l = f(rng);
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

pub fn random_aggregate(rng: &mut impl Rng, preds: &[&str], pool: &[Term]) -> AggregateAtom {
    let x = Term::var("X");
    let mut cond = vec![CondItem::Lit(Literal::new(preds.choose(rng).unwrap(), vec![x.clone()]))];
    match rng.gen_range(0..10) {
        0..=1 => cond.push(CondItem::Cmp(
            x.clone(),
            Relation::Ne,
            pool.choose(rng).unwrap().clone(),
        )),
        2 => cond.push(CondItem::Lit(Literal::new(preds.choose(rng).unwrap(), vec![x.clone()]))),
        _ => {}
    }
    if let [CondItem::Lit(a), CondItem::Lit(b)] = cond.as_slice() {
        if a == b {
            cond.pop();
        }
    }
    AggregateAtom {
        func: *FUNCS.choose(rng).unwrap(),
        bound_vars: vec!["X".into()],
        cond,
        relation: *RELATIONS.choose(rng).unwrap(),
        rhs: Term::Int(rng.gen_range(-1..=3)),
    }
}

pub fn random_rule(rng: &mut impl Rng, cfg: &GenConfig, pool: &[Term]) -> Rule {
    let heads = match rng.gen_range(0..10) {
        0 => 0,
        1..=7 => 1,
        _ => 2,
    };
    let head = distinct(rng, heads, |r| random_literal(r, &cfg.head_preds, pool, cfg.classical));
    let npos = rng.gen_range(usize::from(heads == 0)..=2);
    let pos = distinct(rng, npos, |r| random_literal(r, &cfg.body_preds, pool, cfg.classical));
    let nneg = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(1..=2) };
    let neg = distinct(rng, nneg, |r| random_literal(r, &cfg.body_preds, pool, cfg.classical));
    let mut agg = Vec::new();
    if cfg.aggregates && rng.gen_bool(0.45) {
        agg.push(random_aggregate(rng, &cfg.body_preds, pool));
        if rng.gen_bool(0.1) {
            agg.push(random_aggregate(rng, &cfg.body_preds, pool));
        }
    }
    Rule { head, pos, neg, agg }
}

/// Ground rules only; constants are the pool the aggregates range over.
pub fn random_rules(rng: &mut impl Rng, cfg: &GenConfig, pool: &[Term]) -> Vec<Rule> {
    let n = rng.gen_range(1..=cfg.max_rules);
    let mut rules: Vec<Rule> = Vec::new();
    for _ in 0..n {
        let r = random_rule(rng, cfg, pool);
        if !rules.contains(&r) {
            rules.push(r);
        }
    }
    rules
}

pub fn random_program(rng: &mut impl Rng, cfg: &GenConfig) -> GroundProgram {
    let pool = random_pool(rng, cfg.max_pool);
    GroundProgram::new(random_rules(rng, cfg, &pool), pool)
}

/// A splitting instance: the bottom only mentions `p`, the top defines
/// `q` from `p` and `q`, and the splitting set is every `p` atom.
pub struct SplitInstance {
    pub bottom: Vec<Rule>,
    pub top: Vec<Rule>,
    pub split: LiteralSet,
    pub pool: Vec<Term>,
}

pub fn random_split(rng: &mut impl Rng) -> SplitInstance {
    let pool = random_pool(rng, 3);
    let bottom_cfg = GenConfig {
        max_rules: 4,
        head_preds: vec!["p"],
        body_preds: vec!["p"],
        ..GenConfig::default()
    };
    let top_cfg = GenConfig {
        max_rules: 4,
        head_preds: vec!["q"],
        body_preds: vec!["p", "q"],
        ..GenConfig::default()
    };
    let split = pool.iter().map(|c| Literal::new("p", vec![c.clone()])).collect();
    SplitInstance {
        bottom: random_rules(rng, &bottom_cfg, &pool),
        top: random_rules(rng, &top_cfg, &pool),
        split,
        pool,
    }
}

/// All atoms `pred(c)` over the pool, for `pred` in `preds`.
pub fn atoms(preds: &[&str], pool: &[Term]) -> Vec<Literal> {
    let mut out: Vec<Literal> = preds
        .iter()
        .flat_map(|p| pool.iter().map(move |c| Literal::new(p, vec![c.clone()])))
        .collect();
    out.sort();
    out
}

pub fn subsets(items: &[Literal]) -> Vec<LiteralSet> {
    assert!(items.len() < 20);
    (0u32..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, l)| l.clone())
                .collect()
        })
        .collect()
}

/// Stable models of an aggregate-free program straight from the
/// definition: `S` is a model of the reduct `P^S` and no proper subset of
/// `S` is. Consistent sets of head literals only.
pub fn classical_stable_models(rules: &[Rule]) -> Vec<LiteralSet> {
    assert!(rules.iter().all(|r| r.agg.is_empty()));
    let mut heads: Vec<Literal> = rules.iter().flat_map(|r| r.head.clone()).collect();
    heads.sort();
    heads.dedup();
    let model = |s: &LiteralSet, reduct: &[&Rule]| {
        reduct
            .iter()
            .all(|r| !r.pos.iter().all(|l| s.contains(l)) || r.head.iter().any(|h| s.contains(h)))
    };
    let mut out = Vec::new();
    for s in subsets(&heads) {
        if !s.is_consistent() {
            continue;
        }
        let reduct: Vec<&Rule> = rules.iter().filter(|r| !r.neg.iter().any(|l| s.contains(l))).collect();
        if !model(&s, &reduct) {
            continue;
        }
        let members: Vec<Literal> = s.iter().cloned().collect();
        let smaller = subsets(&members)
            .into_iter()
            .any(|t| t.len() < s.len() && model(&t, &reduct));
        if !smaller {
            out.push(s);
        }
    }
    out.sort();
    out
}

/// Every total extension of `i` over `universe`, as the set of true atoms.
pub fn total_extensions(i: &PartialInterpretation, universe: &[Literal]) -> Vec<LiteralSet> {
    let open: Vec<Literal> = universe.iter().filter(|l| !i.is_decided(l)).cloned().collect();
    let fixed = i.positive_part();
    subsets(&open)
        .into_iter()
        .map(|s| s.iter().chain(fixed.iter()).cloned().collect())
        .collect()
}

/// A random partial interpretation over `universe`.
pub fn random_partial(rng: &mut impl Rng, universe: &[Literal]) -> PartialInterpretation {
    let mut i = PartialInterpretation::new();
    for l in universe {
        match rng.gen_range(0..3) {
            0 => {
                i.insert(ELiteral::pos(l.clone())).unwrap();
            }
            1 => {
                i.insert(ELiteral::not(l.clone())).unwrap();
            }
            _ => {}
        }
    }
    i
}

/// Replaces one constant of each rule by a fresh variable outside the
/// aggregates, sometimes linking an aggregate condition to it.
pub fn lift(rng: &mut impl Rng, gp: &GroundProgram) -> Program {
    let mut rules = Vec::new();
    for r in &gp.rules {
        let mut r = r.clone();
        let consts: Vec<Term> = r
            .head
            .iter()
            .chain(&r.pos)
            .chain(&r.neg)
            .flat_map(|l| l.args.clone())
            .collect();
        if let Some(c) = consts.choose(rng).cloned() {
            if rng.gen_bool(0.6) {
                let swap = |l: &Literal| Literal {
                    args: l
                        .args
                        .iter()
                        .map(|t| if *t == c { Term::var("V") } else { t.clone() })
                        .collect(),
                    ..l.clone()
                };
                r.head = r.head.iter().map(swap).collect();
                r.pos = r.pos.iter().map(swap).collect();
                r.neg = r.neg.iter().map(swap).collect();
                if let Some(a) = r.agg.first_mut() {
                    if rng.gen_bool(0.5) {
                        a.cond.push(CondItem::Cmp(Term::var("X"), Relation::Ne, Term::var("V")));
                    }
                }
            }
        }
        rules.push(r);
    }
    Program::new(rules)
}

/// Renames the set-name variable of every aggregate to `to`. `to` must not
/// occur free in the rule.
pub fn rename_bound(p: &Program, to: &str) -> Program {
    let rules = p
        .rules
        .iter()
        .map(|r| {
            assert!(!r.free_variables().contains(to));
            let mut r = r.clone();
            for a in &mut r.agg {
                assert_eq!(a.bound_vars.len(), 1);
                let subst: BTreeMap<String, Term> = a.bound_vars.iter().map(|v| (v.clone(), Term::var(to))).collect();
                a.cond = a.cond.iter().map(|c| c.substitute(&subst)).collect();
                a.bound_vars = vec![to.to_string()];
            }
            r
        })
        .collect();
    Program::new(rules)
}

pub fn ground_text(src: &str) -> GroundProgram {
    ground_program(&alog::parse_program(src).unwrap()).unwrap()
}

pub fn lit(s: &str) -> Literal {
    alog::parse_program(&format!("{s}.")).unwrap().rules[0].head[0].clone()
}

pub fn set(items: &[&str]) -> LiteralSet {
    items.iter().map(|s| lit(s)).collect()
}
pub mod checks;
