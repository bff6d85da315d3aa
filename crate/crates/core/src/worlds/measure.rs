//! Causal probabilities and the measure over possible worlds.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::syntax::ground::{AttrTerm, GLit, GPr, GroundProgram};
use crate::syntax::term::Term;
use crate::worlds::conditions::check_conditions;
use crate::worlds::{Formula, Truth, World};

/// An atom possible in a world, with its causal probability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub atom: GLit,
    /// Name of the generating selection rule.
    pub rule: Term,
    pub prob: Rational,
    /// Whether the probability comes from a pr-atom rather than the default.
    pub assigned: bool,
}

/// Index of pr-atoms by rule name and atom.
pub(crate) struct PrIndex<'g> {
    by_atom: HashMap<&'g GLit, Vec<&'g GPr>>,
}

impl<'g> PrIndex<'g> {
    pub(crate) fn new(g: &'g GroundProgram) -> PrIndex<'g> {
        let mut by_atom: HashMap<_, Vec<_>> = HashMap::new();
        for p in &g.prs {
            by_atom.entry(&p.atom).or_default().push(p);
        }
        PrIndex { by_atom }
    }

    pub(crate) fn get<'s>(&'s self, rule: &'s Term, atom: &GLit) -> impl Iterator<Item = &'g GPr> + 's {
        self.by_atom
            .get(atom)
            .into_iter()
            .flatten()
            .copied()
            .filter(move |p| &p.name == rule)
    }
}

/// Values of `t` possible in `w`, restricted to the dynamic range if there is one.
pub(crate) fn possible_values<'g>(
    g: &'g GroundProgram,
    w: &World,
    dynamic: Option<&str>,
    t: &AttrTerm,
) -> Vec<&'g Term> {
    g.range(t)
        .iter()
        .filter(|y| match dynamic {
            None => true,
            Some(p) => g.dynamic_lit(p, y).map_or(false, |l| w.holds(&l)),
        })
        .collect()
}

/// Causal probabilities of every atom possible in `w`, grouped by term in selection order.
pub fn causal_probabilities(g: &GroundProgram, w: &World) -> Result<Vec<Outcome>> {
    outcomes(g, &PrIndex::new(g), w)
}

pub(crate) fn outcomes(g: &GroundProgram, idx: &PrIndex<'_>, w: &World) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    let mut seen: Vec<&AttrTerm> = Vec::new();
    for s in &g.selections {
        if seen.contains(&&s.term) || !w.satisfies(&s.body) {
            continue;
        }
        seen.push(&s.term);
        let t = &s.term;
        let intervened = w.intervened.contains(t);
        let mut alpha = Rational::zero();
        let mut beta = 0i64;
        let mut group: Vec<(GLit, Option<Rational>)> = Vec::new();
        for y in possible_values(g, w, s.dynamic.as_deref(), t) {
            let atom = g.assign(t, y);
            let pa = if intervened {
                None
            } else {
                idx.get(&s.name, &atom)
                    .find(|p| w.satisfies(&p.body))
                    .map(|p| p.value.clone())
            };
            match &pa {
                Some(v) => alpha += v,
                None => beta += 1,
            }
            group.push((atom, pa));
        }
        let default = if beta > 0 {
            Some((Rational::one() - &alpha) * Rational::new(1, beta))
        } else {
            None
        };
        for (atom, pa) in group {
            let (prob, assigned) = match pa {
                Some(v) => (v, true),
                None => {
                    if alpha > Rational::one() && w.holds(&atom) {
                        return Err(Error::NegativeDefault {
                            term: t.to_string(),
                            sum: alpha.to_string(),
                        });
                    }
                    (default.clone().expect("beta counts this atom"), false)
                }
            };
            out.push(Outcome {
                atom,
                rule: s.name.clone(),
                prob,
                assigned,
            });
        }
    }
    Ok(out)
}

/// A possible world with its unnormalized and normalized measure.
#[derive(Clone, Debug)]
pub struct WorldInfo {
    pub world: World,
    /// Possible atoms of the world that it contains, with their causal probabilities.
    pub outcomes: Vec<Outcome>,
    pub unnormalized: Rational,
    pub measure: Rational,
}

#[derive(Clone, Debug)]
pub struct WorldTable {
    pub worlds: Vec<WorldInfo>,
    pub total: Rational,
}

/// Unnormalized and normalized measures of every world.
pub fn measures(g: &GroundProgram, worlds: &[World]) -> Result<WorldTable> {
    if worlds.is_empty() {
        return Err(Error::Inconsistent);
    }
    let v = check_conditions(g, worlds);
    if !v.is_empty() {
        return Err(Error::ConditionViolation(v));
    }
    let idx = PrIndex::new(g);
    let mut infos = Vec::with_capacity(worlds.len());
    let mut total = Rational::zero();
    for w in worlds {
        let oc: Vec<Outcome> = outcomes(g, &idx, w)?.into_iter().filter(|o| w.holds(&o.atom)).collect();
        let mu: Rational = oc.iter().map(|o| o.prob.clone()).product();
        total += &mu;
        infos.push(WorldInfo {
            world: w.clone(),
            outcomes: oc,
            unnormalized: mu,
            measure: Rational::zero(),
        });
    }
    if total.is_zero() {
        return Err(Error::ProbabilityUndefined);
    }
    for i in &mut infos {
        i.measure = &i.unnormalized / &total;
    }
    Ok(WorldTable { worlds: infos, total })
}

impl WorldTable {
    pub fn prob(&self, f: &Formula) -> Rational {
        self.worlds
            .iter()
            .filter(|i| f.truth(&i.world) == Truth::True)
            .map(|i| i.measure.clone())
            .sum()
    }

    /// Worlds with positive measure.
    pub fn support(&self) -> impl Iterator<Item = &WorldInfo> {
        self.worlds.iter().filter(|i| !i.measure.is_zero())
    }

    pub fn to_json(&self) -> Value {
        let worlds: Vec<Value> = self
            .worlds
            .iter()
            .enumerate()
            .map(|(n, i)| {
                json!({
                    "index": n + 1,
                    "literals": i.world.lits.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                    "unnormalized": i.unnormalized.to_fraction_string(),
                    "measure": i.measure.to_fraction_string(),
                })
            })
            .collect();
        json!({ "worlds": worlds, "total": self.total.to_fraction_string() })
    }
}

#[cfg(test)]
mod tests {
    use crate::worlds::Model;
    use crate::Rational;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    const DICE: &str = "
        dice = {d1, d2}. score = {1..6}. person = {mike, john}.
        roll : dice -> score. owner : dice -> person. even : dice -> boolean.
        owner(d1) = mike. owner(d2) = john.
        even(D) :- roll(D) = Y, Y mod 2 = 0.
        ~even(D) :- not even(D).
        [r(D)] random(roll(D)).
        pr(roll(D) = Y |c owner(D) = john) = 1/6.
        pr(roll(D) = 6 |c owner(D) = mike) = 1/4.
        pr(roll(D) = Y |c Y <> 6, owner(D) = mike) = 3/20.
    ";

    #[test]
    fn dice_measures() {
        let m = Model::parse(DICE).unwrap();
        let t = m.table().unwrap();
        assert_eq!(t.worlds.len(), 36);
        let mut mus: Vec<Rational> = t.worlds.iter().map(|i| i.unnormalized.clone()).collect();
        mus.sort();
        mus.dedup();
        assert_eq!(mus, [r("1/40"), r("1/24")]);
        assert_eq!(m.prob_of("roll(d1) = 6").unwrap(), r("1/4"));
        assert_eq!(m.prob_of("roll(d1) = 6 & even(d2)").unwrap(), r("1/8"));
    }

    #[test]
    fn default_probabilities() {
        let m = Model::parse(
            "dice = {d1, d2}. score = {1..6}. person = {mike, john}.
             roll : dice -> score. owner : dice -> person.
             owner(d1) = mike. owner(d2) = john.
             [r(D)] random(roll(D)).
             pr(roll(D) = 6 |c owner(D) = mike) = 1/4.",
        )
        .unwrap();
        let w = &m.table().unwrap().worlds[0].outcomes;
        let d1: Vec<_> = w.iter().filter(|o| o.atom.term.to_string() == "roll(d1)").collect();
        let d2: Vec<_> = w.iter().filter(|o| o.atom.term.to_string() == "roll(d2)").collect();
        assert!(d1[0].prob == r("1/4") || d1[0].prob == r("3/20"));
        assert_eq!(d2[0].prob, r("1/6"));
        assert!(!d2[0].assigned);
    }

    #[test]
    fn zero_probability_world() {
        let m = Model::parse("a : boolean. random(a). pr(a) = 1.").unwrap();
        let t = m.table().unwrap();
        let mus: Vec<String> = t.worlds.iter().map(|i| i.measure.to_string()).collect();
        assert_eq!(mus, ["1", "0"]);
    }

    #[test]
    fn two_guns() {
        let m = Model::parse(
            "gun = {1,2}. pull_trigger : gun -> boolean. fatal : gun -> boolean. is_dead : boolean.
             [r(G)] random(fatal(G)) :- pull_trigger(G).
             is_dead :- fatal(G). ~is_dead :- not is_dead. pull_trigger(G).
             pr(fatal(1)) = 1/6. pr(fatal(2)) = 1/6.",
        )
        .unwrap();
        assert_eq!(m.prob_of("is_dead").unwrap(), r("11/36"));
    }

    #[test]
    fn negative_default() {
        let m = Model::parse("a : {1,2,3}. random(a). pr(a=1) = 3/4. pr(a=2) = 1/2.").unwrap();
        assert!(matches!(m.table(), Err(crate::Error::NegativeDefault { .. })));
    }

    #[test]
    fn inconsistent_and_undefined() {
        let m = Model::parse("a : boolean. a. ~a.").unwrap();
        assert!(matches!(m.table(), Err(crate::Error::Inconsistent)));
        let m = Model::parse("a : boolean. random(a). pr(a) = 1. obs(~a).").unwrap();
        assert!(matches!(m.table(), Err(crate::Error::ProbabilityUndefined)));
    }

    #[test]
    fn json_uses_fraction_strings() {
        let m = Model::parse("a : boolean. random(a).").unwrap();
        let j = m.table().unwrap().to_json();
        assert_eq!(j["worlds"][0]["measure"], "1/2");
        assert_eq!(j["total"], "1/1");
    }
}
