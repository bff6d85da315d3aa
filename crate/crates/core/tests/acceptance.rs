//! One line per acceptance criterion, printed by a plain `main` so the lines always show. A
//! criterion prints FAIL without failing the run only when its target is known to be unreachable,
//! and the line says why.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use plog::bayes::{
    assignments, cbn_failures, check_cbn_theorem, net_to_plog, BayesNet, CbnFailure, InterventionalDistribution,
    Variable,
};
use plog::coherency::{
    causal_order_failures, check_leveling, coherency_report, DependencyGraph, InducedStructure, Verdict, Witness,
};
use plog::syntax::ground::AttrTerm;
use plog::syntax::program::Program;
use plog::updates::{apply_update, Update};
use plog::worlds::{Model, Truth, WorldTable};
use plog::{Error, Rational, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{corpus_programs, program, q, source};

#[derive(Default)]
struct Check {
    /// Mismatches nobody expected.
    broken: Vec<String>,
    /// Mismatches with a known cause.
    known: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        if got != want {
            self.broken.push(format!("{}: got {:?}, want {:?}", what, got, want));
        }
    }

    fn holds(&mut self, what: &str, ok: bool) {
        if !ok {
            self.broken.push(what.to_string());
        }
    }

    /// A target that cannot be met; `got` must still be what the semantics gives.
    fn unreachable(&mut self, what: &str, got: Rational, exact: Rational, target: Rational, why: &str) {
        if got == exact {
            self.known
                .push(format!("{} is {}, not {} ({})", what, got, target, why));
        } else {
            self.broken.push(format!("{}: got {}, want {}", what, got, exact));
        }
    }
}

struct Report {
    lines: Vec<String>,
    broken: Vec<String>,
}

impl Report {
    fn run(&mut self, n: usize, title: &str, f: impl FnOnce(&mut Check)) {
        let mut c = Check::default();
        f(&mut c);
        let status = if c.broken.is_empty() && c.known.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let mut line = format!("{} {:>2}. {}", status, n, title);
        for s in c.broken.iter().chain(&c.known).chain(&c.notes) {
            line += &format!("\n        {}", s);
        }
        self.broken
            .extend(c.broken.into_iter().map(|s| format!("{}. {}", n, s)));
        self.lines.push(line);
    }
}

/// A corpus program with extra statements, which may include `obs` and `do`.
fn with(names: &[&str], extra: &str) -> Program {
    let p = program(names);
    if extra.is_empty() {
        p
    } else {
        apply_update(&p, &Update::statements(extra).unwrap()).unwrap()
    }
}

fn prob(names: &[&str], extra: &str, query: &str) -> Rational {
    Model::new(&with(names, extra))
        .unwrap()
        .prob_of(query)
        .unwrap_or_else(|e| panic!("{:?} {} {}: {}", names, extra, query, e))
}

fn table(names: &[&str], extra: &str) -> (Model, WorldTable) {
    let m = Model::new(&with(names, extra)).unwrap();
    let t = m.table().unwrap();
    (m, t)
}

/// Unnormalized measure of the worlds satisfying `query`.
fn mu_hat(m: &Model, t: &WorldTable, query: &str) -> Rational {
    let f = m.formula(query).unwrap();
    t.worlds
        .iter()
        .filter(|w| f.truth(&w.world) == Truth::True)
        .map(|w| w.unnormalized.clone())
        .sum()
}

fn sorted(mut v: Vec<Rational>) -> Vec<Rational> {
    v.sort();
    v
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Condition numbers violated by the program, or an empty list.
fn violated(names: &[&str], extra: &str) -> Vec<u8> {
    match Model::new(&with(names, extra)).unwrap().table() {
        Err(Error::ConditionViolation(vs)) => vs.iter().map(|v| v.condition()).collect(),
        _ => Vec::new(),
    }
}

fn verdict(names: &[&str]) -> Verdict {
    coherency_report(&Model::new(&program(names)).unwrap().ground)
        .unwrap()
        .verdict
}

fn dice(c: &mut Check) {
    let (m, t) = table(&["dice.plog"], "");
    c.eq("worlds", t.worlds.len(), 36);
    let (six, other) = (r(1, 4) * r(1, 6), r(3, 20) * r(1, 6));
    c.eq(
        "mu-hat with roll(d1)=6",
        mu_hat(&m, &t, "roll(d1)=6 & roll(d2)=3"),
        six.clone(),
    );
    c.eq(
        "mu-hat with roll(d1)=2",
        mu_hat(&m, &t, "roll(d1)=2 & roll(d2)=3"),
        other.clone(),
    );
    c.eq(
        "mu-hat values",
        t.worlds.iter().map(|w| w.unnormalized.clone()).collect::<BTreeSet<_>>(),
        [six, other].into(),
    );
    c.eq("P(roll(d1)=6)", prob(&["dice.plog"], "", "roll(d1)=6"), q("1/4"));
    c.eq(
        "P(roll(d1)=6 & even(d2))",
        prob(&["dice.plog"], "", "roll(d1)=6 & even(d2)"),
        q("1/8"),
    );

    // Keep only the pr-atom for mike's six; the rest falls to defaults.
    let src: String = source("dice.plog")
        .lines()
        .filter(|l| !(l.starts_with("pr(") && !l.contains("= 1/4")))
        .map(|l| format!("{}\n", l))
        .collect();
    let t = Model::parse(&src).unwrap().table().unwrap();
    let mut seen = BTreeMap::new();
    for w in &t.worlds {
        for o in &w.outcomes {
            seen.insert(o.atom.to_string(), (o.prob.clone(), o.assigned));
        }
    }
    let default_d1 = (Rational::one() - r(1, 4)) / Rational::from_integer(5);
    for i in 1..=6 {
        let d1 = seen
            .get(&format!("roll(d1) = {}", i))
            .or(seen.get(&format!("roll(d1)={}", i)))
            .cloned();
        let d2 = seen
            .get(&format!("roll(d2) = {}", i))
            .or(seen.get(&format!("roll(d2)={}", i)))
            .cloned();
        let want = if i == 6 {
            (r(1, 4), true)
        } else {
            (default_d1.clone(), false)
        };
        c.eq(&format!("P(W, roll(d1)={})", i), d1, Some(want));
        c.eq(&format!("P(W, roll(d2)={})", i), d2, Some((r(1, 6), false)));
    }
}

fn guns(c: &mut Check) {
    let survive = |p: Rational| Rational::one() - p;
    let both = |p1: Rational, p2: Rational| Rational::one() - survive(p1) * survive(p2);
    c.eq(
        "P(is_dead)",
        prob(&["guns.plog"], "", "is_dead"),
        both(r(1, 6), r(1, 6)),
    );
    c.eq("P(is_dead) value", prob(&["guns.plog"], "", "is_dead"), q("11/36"));
    c.unreachable(
        "P(is_dead) with a fatal chance of 11/60",
        prob(&["guns_defective.plog"], "", "is_dead"),
        both(r(11, 60), r(1, 6)),
        q("8/25"),
        "0.32 is 23/72 rounded to two places",
    );
    c.eq(
        "conditions violated by one selection per gun",
        violated(&["guns_collapsed.plog"], ""),
        vec![1],
    );
}

fn roulette(c: &mut Check) {
    c.eq(
        "P(falls_in=zero)",
        prob(&["roulette.plog"], "", "falls_in=zero"),
        q("1/2"),
    );
    c.eq(
        "P(falls_in=1)",
        prob(&["roulette.plog"], "", "falls_in=1"),
        q("1/2") / Rational::from_integer(37),
    );
    c.eq(
        "conditions violated by one pr-atom per button",
        violated(&["roulette_twice.plog"], ""),
        vec![2],
    );
}

fn monty(c: &mut Check) {
    let (_, t) = table(&["monty.plog"], "");
    c.eq("worlds", t.worlds.len(), 12);
    let seen = "obs(selected=1). obs(open=2). obs(prize != 2).";
    c.eq("P(prize=1)", prob(&["monty.plog"], seen, "prize=1"), q("1/3"));
    c.eq("P(prize=3)", prob(&["monty.plog"], seen, "prize=3"), q("2/3"));
    c.eq(
        "naive P(prize=1)",
        prob(&["monty_naive.plog"], seen, "prize=1"),
        q("1/2"),
    );
    c.eq(
        "naive P(prize=3)",
        prob(&["monty_naive.plog"], seen, "prize=3"),
        q("1/2"),
    );
    let (stay, switch) = (
        prob(&["monty_biased.plog"], seen, "prize=1"),
        prob(&["monty_biased.plog"], seen, "prize=3"),
    );
    // prize=1 opens 2 with 4/5; prize=3 must open 2.
    let (w1, w3) = (r(1, 3) * r(4, 5), r(1, 3));
    c.eq("biased P(prize=3)", switch.clone(), &w3 / &(&w1 + &w3));
    c.holds("biased switching is strictly better", switch > stay);
    c.eq("verdict", verdict(&["monty.plog"]), Verdict::CoherentByTheorem);

    let g = Model::new(&program(&["monty.plog"])).unwrap().ground;
    let d = DependencyGraph::new(&g);
    let mut ranks = BTreeMap::from([
        (AttrTerm::new("prize", vec![]), 0),
        (AttrTerm::new("selected", vec![]), 1),
        (AttrTerm::new("open", vec![]), 2),
    ]);
    for i in 1..=3 {
        ranks.insert(AttrTerm::new("can_open", vec![Term::Int(i)]), 1);
    }
    match check_leveling(&g, &d, &ranks) {
        Ok(lev) => c.eq(
            "clause failures under the given leveling",
            causal_order_failures(&InducedStructure::new(&g, &d, &lev))
                .unwrap()
                .len(),
            0,
        ),
        Err(e) => c.holds(&format!("given leveling rejected: {}", e), false),
    }
}

fn simpson(c: &mut Check) {
    let (m, t) = table(&["simpson.plog"], "");
    let pr = |s: &str| q(s);
    let mut want = Vec::new();
    for male in [true, false] {
        let pm = pr("1/2");
        let pd = if male { pr("3/4") } else { pr("1/4") };
        for drug in [true, false] {
            let pdrug = if drug { pd.clone() } else { Rational::one() - &pd };
            let prec = match (male, drug) {
                (true, true) => pr("3/5"),
                (true, false) => pr("7/10"),
                (false, true) => pr("1/5"),
                (false, false) => pr("3/10"),
            };
            for rec in [true, false] {
                let prc = if rec { prec.clone() } else { Rational::one() - &prec };
                let query = format!(
                    "{}male & {}recover & {}drug",
                    if male { "" } else { "~" },
                    if rec { "" } else { "~" },
                    if drug { "" } else { "~" }
                );
                let oracle = &pm * &(&pdrug * &prc);
                c.eq(&format!("mu({})", query), mu_hat(&m, &t, &query), oracle.clone());
                want.push(oracle);
            }
        }
    }
    let listed: Vec<Rational> = ["0.225", "0.2625", "0.15", "0.1125", "0.025", "0.0375", "0.1", "0.0875"]
        .iter()
        .map(|s| q(s))
        .collect();
    c.eq(
        "measures as a multiset",
        sorted(t.worlds.iter().map(|w| w.measure.clone()).collect()),
        sorted(listed),
    );
    c.notes
        .push("the listed table pairs the drug factor 3/4 with male & ~drug; the multiset of values agrees".into());
    c.eq(
        "P(recover) under do(drug)",
        prob(&["simpson.plog"], "do(drug).", "recover"),
        q("2/5"),
    );
    c.eq(
        "P(recover) under do(~drug)",
        prob(&["simpson.plog"], "do(~drug).", "recover"),
        q("1/2"),
    );
    for (extra, want) in [
        ("obs(male). do(drug).", "3/5"),
        ("obs(male). do(~drug).", "7/10"),
        ("obs(~male). do(drug).", "1/5"),
        ("obs(~male). do(~drug).", "3/10"),
    ] {
        c.eq(
            &format!("P(recover) with {}", extra),
            prob(&["simpson.plog"], extra, "recover"),
            q(want),
        );
    }
}

fn rat(c: &mut Check) {
    let (m, t) = table(&["rat.plog"], "");
    for (w, want) in [
        ("arsenic & death", "0.32"),
        ("arsenic & ~death", "0.08"),
        ("~arsenic & death", "0.06"),
        ("~arsenic & ~death", "0.54"),
    ] {
        c.eq(&format!("mu-hat({})", w), mu_hat(&m, &t, w), q(want));
    }
    let p = |extra: &str, query: &str| prob(&["rat.plog"], extra, query);
    c.eq("P(arsenic)", p("", "arsenic"), q("2/5"));
    c.eq(
        "P(arsenic) after obs(death)",
        p("obs(death).", "arsenic"),
        q("0.32") / (q("0.32") + q("0.06")),
    );
    c.eq("P(arsenic) after do(death)", p("do(death).", "arsenic"), q("2/5"));
    c.eq("P(death)", p("", "death"), q("19/50"));
    c.eq("P(death) after do(arsenic)", p("do(arsenic).", "death"), q("4/5"));
    c.eq("P(death) after obs(arsenic)", p("obs(arsenic).", "death"), q("4/5"));
    c.notes
        .push("pr(death |c ~arsenic) is 1/10, the value the listed measures require".into());
}

fn robot(c: &mut Check) {
    let (_, t) = table(&["robot.plog"], "go_in(r0).");
    c.eq("worlds after go_in(r0)", t.worlds.len(), 1);
    c.eq(
        "P(in(1)=r0)",
        prob(&["robot.plog"], "go_in(r0).", "in(1)=r0"),
        Rational::one(),
    );
    let (_, t) = table(&["robot.plog"], "go_in(r0). break.");
    c.eq("worlds after go_in(r0) and break", t.worlds.len(), 3);
    c.eq(
        "measures",
        sorted(t.worlds.iter().map(|w| w.measure.clone()).collect()),
        vec![r(1, 4), r(1, 4), r(1, 2)],
    );
    c.eq(
        "P(in(1)=r0) after break",
        prob(&["robot.plog"], "go_in(r0). break.", "in(1)=r0"),
        r(1, 2),
    );
}

fn squirrel(c: &mut Check) {
    let s = &["squirrel.plog"];
    let day1 = "do(look(1)=p1).";
    let (h, f) = (r(4, 5), r(1, 5));
    for (w, want) in [
        ("hidden_in=p1 & found(p1,1)", &h * &f),
        ("hidden_in=p1 & ~found(p1,1)", &h * &(Rational::one() - &f)),
        ("hidden_in=p2", Rational::one() - &h),
    ] {
        c.eq(&format!("mu({})", w), prob(s, day1, w), want);
    }
    c.eq(
        "listed day-one measures",
        sorted(table(s, day1).1.worlds.iter().map(|w| w.measure.clone()).collect()),
        sorted(vec![q("0.16"), q("0.64"), q("0.2")]),
    );
    c.eq("P(hidden_in=p1)", prob(s, day1, "hidden_in=p1"), q("4/5"));
    c.eq("P(found(p1,1))", prob(s, day1, "found(p1,1)"), q("4/25"));
    let day2 = "do(look(1)=p1). obs(~found(p1,1)). do(look(2)=p1).";
    let stays = &h * &(Rational::one() - &f);
    let posterior = &stays / &(&stays + &(Rational::one() - &h));
    c.eq(
        "P(hidden_in=p1) on day two",
        prob(s, day2, "hidden_in=p1"),
        posterior.clone(),
    );
    c.eq(
        "P(found(p1,2)) on day two",
        prob(s, day2, "found(p1,2)"),
        &posterior * &f,
    );
    c.eq(
        "listed day-two values",
        (prob(s, day2, "hidden_in=p1"), prob(s, day2, "found(p1,2)")),
        (q("16/21"), q("16/105")),
    );
}

fn updates(c: &mut Check) {
    // Observing even(d2).
    let (_, t) = table(&["dice.plog"], "obs(even(d2)).");
    c.eq("worlds after obs(even(d2))", t.worlds.len(), 18);
    c.eq(
        "P(roll(d2)=4) after obs(even(d2))",
        prob(&["dice.plog"], "obs(even(d2)).", "roll(d2)=4"),
        q("1/3"),
    );

    // Facts versus observations when P(B) = 0.
    let zero = &["obs_vs_fact_zero.plog"];
    c.eq("P(q)", prob(zero, "", "q"), Rational::zero());
    let observed = Model::new(&with(zero, "obs(q). obs(p=y1).")).unwrap().prob_of("q");
    c.holds(
        "P(q) after obs(q), obs(p=y1) is undefined",
        matches!(observed, Err(Error::Inconsistent)),
    );
    c.eq("P(q) with facts q, p=y1", prob(zero, "q. p=y1.", "q"), Rational::one());
    let (_, t) = table(zero, "q. p=y1.");
    c.eq("worlds with facts q, p=y1", t.worlds.len(), 1);

    // Facts versus observations when P(B) > 0.
    let pos = &["obs_vs_fact.plog"];
    c.eq("P(p=y1) after obs(q)", prob(pos, "obs(q).", "p=y1"), Rational::one());
    c.eq("P(p=y1) with fact q", prob(pos, "q.", "p=y1"), r(1, 2));

    // A new defined attribute.
    c.eq(
        "P(max_score)",
        prob(&["dice.plog", "max_score.plog"], "", "max_score"),
        r(1, 4) * r(1, 6),
    );

    // New rules.
    let ex = &["exclusive.plog"];
    c.eq("P(p(1))", prob(ex, "", "p(1)"), r(1, 2));
    c.eq(
        "P(p(1)) with exclusion rules",
        prob(ex, "~p(1) :- p(2). ~p(2) :- p(1).", "p(1)"),
        r(1, 3),
    );

    // New randomness.
    let ar = &["add_randomness.plog"];
    c.eq("P(a1)", prob(ar, "", "a1"), Rational::one());
    c.eq(
        "P(a1) after ~a2 and random(a1) :- ~a2",
        prob(ar, "~a2. random(a1) :- ~a2.", "a1"),
        r(1, 2),
    );

    // New causal probability.
    c.eq("P(a) with indifference", prob(&["indifference.plog"], "", "a"), r(1, 2));
    c.eq("P(a) with a fair coin", prob(&["fair_coin.plog"], "", "a"), r(1, 2));
    c.eq(
        "P(a) after adding pr(a) = 1/3 to indifference",
        prob(&["indifference.plog"], "pr(a) = 1/3.", "a"),
        r(1, 3),
    );
    c.eq(
        "conditions violated by pr(a) = 1/3 on a fair coin",
        violated(&["fair_coin.plog"], "pr(a) = 1/3."),
        vec![2],
    );
}

fn clauses(name: &str) -> Vec<(u8, Vec<String>)> {
    let g = Model::new(&program(&[name])).unwrap().ground;
    let rep = coherency_report(&g).unwrap();
    rep.order
        .unwrap_or_default()
        .iter()
        .map(|f| {
            let world = match f {
                plog::coherency::OrderFailure::Base { .. } => Vec::new(),
                plog::coherency::OrderFailure::Outcome { world, .. }
                | plog::coherency::OrderFailure::Inactive { world, .. } => {
                    world.iter().map(|l| l.to_string()).collect()
                }
            };
            (f.clause(), world)
        })
        .collect()
}

fn coherency(c: &mut Check) {
    match verdict(&["forced.plog"]) {
        Verdict::Incoherent(Witness::PrMismatch { expected, actual, .. }) => {
            c.eq("forced: P(a) and pr(a)", (actual, expected), (Rational::one(), r(1, 2)));
        }
        v => c.holds(&format!("forced: verdict {}", v), false),
    }
    match verdict(&["over_assigned.plog"]) {
        Verdict::Incoherent(Witness::PrMismatch { pr, expected, actual }) => {
            c.eq(
                "over-assigned: P(a=0) and pr(a=0)",
                (pr.atom.to_string().replace(' ', ""), actual, expected),
                ("a=0".to_string(), r(1, 3), r(1, 2)),
            );
        }
        v => c.holds(&format!("over-assigned: verdict {}", v), false),
    }
    let fact = clauses("unordered_fact.plog");
    c.holds(
        &format!("fact program fails clause 2: {:?}", fact),
        fact.iter().any(|(k, _)| *k == 2),
    );
    let choice = clauses("unordered_choice.plog");
    c.holds(
        &format!("choice program fails clause 2: {:?}", choice),
        choice.iter().any(|(k, _)| *k == 2),
    );
    let constraint = clauses("unordered_constraint.plog");
    let neg: Vec<String> = vec!["~a".into(), "~c".into()];
    c.holds(
        &format!("constraint program fails clause 3 at {{~a, ~c}}: {:?}", constraint),
        constraint.iter().any(|(k, w)| *k == 3 && sorted_strings(w) == neg),
    );
    for name in [
        "unordered_fact.plog",
        "unordered_choice.plog",
        "unordered_constraint.plog",
    ] {
        c.holds(
            &format!("{} is not flagged incoherent", name),
            matches!(verdict(&[name]), Verdict::Unknown(_)),
        );
    }
    for name in ["rat.plog", "monty.plog", "simpson.plog"] {
        c.eq(
            &format!("{} verdict", name),
            verdict(&[name]),
            Verdict::CoherentByTheorem,
        );
    }
}

fn sorted_strings(v: &[String]) -> Vec<String> {
    let mut v: Vec<String> = v.iter().map(|s| s.replace(' ', "")).collect();
    v.sort();
    v
}

fn properties(c: &mut Check) {
    let mut programs = 0;
    for names in corpus_programs() {
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let m = Model::new(&program(&refs)).unwrap();
        let Ok(t) = m.table() else { continue };
        programs += 1;
        let total: Rational = t.worlds.iter().map(|w| w.measure.clone()).sum();
        c.holds(&format!("{:?}: measures sum to {}", names, total), total.is_one());
        c.holds(
            &format!("{:?}: negative measure", names),
            t.worlds.iter().all(|w| !w.measure.is_negative()),
        );
        let lits: BTreeSet<String> = t
            .worlds
            .iter()
            .flat_map(|w| w.world.lits.iter().map(|l| l.to_string()))
            .collect();
        for l in lits.iter().take(8) {
            let (p, n) = (m.prob_of(l).unwrap(), m.prob_of(&format!("not {}", l)).unwrap());
            c.eq(&format!("{:?}: P({}) + P(not {})", names, l, l), p + n, Rational::one());
        }
    }
    c.holds(
        &format!("only {} corpus programs with a defined measure", programs),
        programs >= 20,
    );
    let both = prob(&["dice.plog"], "", "roll(d2)=4 & even(d2)");
    let given = prob(&["dice.plog"], "obs(even(d2)).", "roll(d2)=4") * prob(&["dice.plog"], "", "even(d2)");
    c.eq("conditioning on even(d2)", given, both);
    c.notes.push(format!(
        "{} corpus programs here; generated suites: kernel.rs (500 programs), corpus.rs (200 triples, tableaux), facts_vs_observations.rs (100 instances), bayes_nets.rs",
        programs
    ));
}

/// A random net over at most 4 variables with at most 3 values each.
fn random_net(rng: &mut ChaCha8Rng) -> BayesNet {
    let n = rng.gen_range(1..=4);
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
    let vars = (0..n)
        .map(|i| {
            let parents: Vec<usize> = (0..i).filter(|_| rng.gen_bool(0.5)).collect();
            let psizes: Vec<usize> = parents.iter().map(|&p| sizes[p]).collect();
            let cpt = assignments(&psizes)
                .into_iter()
                .map(|key| {
                    let raw: Vec<i64> = (0..sizes[i]).map(|_| rng.gen_range(1..=5)).collect();
                    let total: i64 = raw.iter().sum();
                    (key, raw.iter().map(|&x| Rational::new(x, total)).collect())
                })
                .collect();
            let domain = (0..sizes[i] as i64).map(Term::Int).collect();
            Variable {
                name: format!("v{}", i),
                domain,
                parents,
                cpt,
            }
        })
        .collect();
    BayesNet::new(vars).unwrap()
}

fn bayes(c: &mut Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..100 {
        let b = random_net(&mut rng);
        let m = Model::new(&net_to_plog(&b).unwrap()).unwrap();
        let t = m.table().unwrap();
        for x in assignments(&b.sizes()) {
            let mut want = Rational::one();
            for (i, v) in b.vars.iter().enumerate() {
                let key: Vec<usize> = v.parents.iter().map(|&p| x[p]).collect();
                want = &want * &v.cpt[&key][x[i]];
            }
            let query: Vec<String> = x
                .iter()
                .enumerate()
                .map(|(i, &xi)| format!("v{} = {}", i, xi))
                .collect();
            let f = m.formula(&query.join(" & ")).unwrap();
            c.eq(&format!("net {} at {:?}", k, x), t.prob(&f), want);
        }
    }

    let net = BayesNet::from_json(&source("rat_net.json")).unwrap();
    let p = InterventionalDistribution::from_net(&net);
    c.eq("interventions", p.rows.len(), 9);
    for r in p.rows.keys() {
        c.holds(
            &format!("theorem rows for {:?}", r),
            check_cbn_theorem(&net, r).unwrap(),
        );
    }
    let listed: [(&[&str], [&str; 4]); 9] = [
        (&[], ["0.32", "0.08", "0.06", "0.54"]),
        (&["a=true"], ["0.8", "0.2", "0", "0"]),
        (&["a=false"], ["0", "0", "0.1", "0.9"]),
        (&["d=true"], ["0.4", "0", "0.6", "0"]),
        (&["d=false"], ["0", "0.4", "0", "0.6"]),
        (&["a=true", "d=true"], ["1", "0", "0", "0"]),
        (&["a=true", "d=false"], ["0", "1", "0", "0"]),
        (&["a=false", "d=true"], ["0", "0", "1", "0"]),
        (&["a=false", "d=false"], ["0", "0", "0", "1"]),
    ];
    for (items, row) in listed {
        let r = net.intervention(items).unwrap();
        let want: Vec<Rational> = row.iter().map(|s| q(s)).collect();
        c.eq(&format!("row do{:?}", items), p.rows[&r].clone(), want);
    }
    c.notes
        .push("row do(~a) is 1/10, 9/10; the printed 0.01, 0.99 contradicts the unintervened row".into());
    c.holds(
        "the arc a -> d is causal",
        cbn_failures(&p, &[vec![], vec![0]]).is_empty(),
    );
    let a_true = net.intervention(&["a=true"]).unwrap();
    let hit = cbn_failures(&p, &[vec![1], vec![]]).into_iter().find_map(|f| match f {
        CbnFailure::Mechanism {
            r,
            var: 1,
            parents,
            value: 0,
            lhs,
            rhs,
        } if r == a_true && parents.is_empty() => Some((lhs, rhs)),
        _ => None,
    });
    c.eq("reversed arc: P_a(d) against P(d)", hit, Some((q("0.8"), q("0.38"))));
}

fn intro(c: &mut Check) {
    c.eq("P(a=1)", prob(&["abnormal.plog"], "", "a=1"), Rational::one());
    c.eq(
        "P(a=1) with abnormal",
        prob(&["abnormal.plog"], "abnormal.", "a=1"),
        r(1, 3),
    );
    c.eq(
        "P(p(c) | ~p(c)) without randomness",
        prob(&["incomplete.plog"], "", "p(c) | ~p(c)"),
        Rational::zero(),
    );
    c.eq(
        "P(q(c)) without randomness",
        prob(&["incomplete.plog"], "", "q(c)"),
        Rational::one(),
    );
    c.eq(
        "P(p(c) | ~p(c)) with random(p(X))",
        prob(&["incomplete_random.plog"], "", "p(c) | ~p(c)"),
        Rational::one(),
    );
}

fn main() {
    let mut rep = Report {
        lines: Vec::new(),
        broken: Vec::new(),
    };
    rep.run(1, "dice: worlds, measures, probabilities, default fill-in", dice);
    rep.run(
        2,
        "guns: two independent causes, defective gun, collapsed selections",
        guns,
    );
    rep.run(3, "roulette: rigged wheel and doubly assigned variant", roulette);
    rep.run(
        4,
        "Monty Hall: worlds, switching, naive and biased variants, leveling",
        monty,
    );
    rep.run(5, "Simpson: measures, actions, actions with observations", simpson);
    rep.run(6, "rat: observation against action", rat);
    rep.run(7, "robot: broken mechanism", robot);
    rep.run(8, "squirrel: search over two days", squirrel);
    rep.run(
        9,
        "updates: observations, facts, rules, randomness, causal probabilities",
        updates,
    );
    rep.run(10, "coherency: witnesses and causal order clauses", coherency);
    rep.run(11, "property suites", properties);
    rep.run(12, "Bayes networks: joints, interventions, reversed arc", bayes);
    rep.run(13, "incomplete knowledge and defaults", intro);
    for l in &rep.lines {
        println!("{}", l);
    }
    if !rep.broken.is_empty() {
        eprintln!("unexpected failures:\n{}", rep.broken.join("\n"));
        std::process::exit(1);
    }
}
