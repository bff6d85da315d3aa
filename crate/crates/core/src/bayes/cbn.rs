//! Interventional distributions given as tables, and whether a graph is a causal network for one.

use std::collections::BTreeMap;
use std::fmt;

use crate::bayes::{assignments, interventional_prob, BayesNet, Intervention};
use crate::rational::Rational;
use crate::syntax::term::Term;

/// A measure over total assignments for each intervention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterventionalDistribution {
    pub names: Vec<String>,
    pub domains: Vec<Vec<Term>>,
    /// For each intervention, the probability of every total assignment in `assignments` order.
    pub rows: BTreeMap<Intervention, Vec<Rational>>,
}

/// All partial assignments over the given domain sizes.
fn interventions(sizes: &[usize]) -> Vec<Intervention> {
    let choices: Vec<usize> = sizes.iter().map(|&n| n + 1).collect();
    assignments(&choices)
        .into_iter()
        .map(|c| {
            c.iter()
                .enumerate()
                .filter(|(i, &v)| v < sizes[*i])
                .map(|(i, &v)| (i, v))
                .collect()
        })
        .collect()
}

impl InterventionalDistribution {
    /// `P_r` of the network for every intervention `r`.
    pub fn from_net(b: &BayesNet) -> InterventionalDistribution {
        let sizes = b.sizes();
        let all = assignments(&sizes);
        let rows = interventions(&sizes)
            .into_iter()
            .map(|r| {
                let row = all.iter().map(|x| interventional_prob(b, &r, x)).collect();
                (r, row)
            })
            .collect();
        InterventionalDistribution {
            names: b.vars.iter().map(|v| v.name.clone()).collect(),
            domains: b.vars.iter().map(|v| v.domain.clone()).collect(),
            rows,
        }
    }

    fn sizes(&self) -> Vec<usize> {
        self.domains.iter().map(|d| d.len()).collect()
    }

    /// Probability under `P_r` of the assignments agreeing with `event`.
    pub fn prob(&self, r: &Intervention, event: &BTreeMap<usize, usize>) -> Rational {
        let row = &self.rows[r];
        assignments(&self.sizes())
            .iter()
            .zip(row)
            .filter(|(x, _)| event.iter().all(|(&i, &j)| x[i] == j))
            .map(|(_, p)| p.clone())
            .sum()
    }

    /// `P_r(event | given)`, or `None` when `given` has probability 0.
    pub fn conditional(
        &self,
        r: &Intervention,
        event: &BTreeMap<usize, usize>,
        given: &BTreeMap<usize, usize>,
    ) -> Option<Rational> {
        let pg = self.prob(r, given);
        if pg.is_zero() {
            return None;
        }
        let mut both = given.clone();
        for (&i, &j) in event {
            if both.insert(i, j).map_or(false, |old| old != j) {
                return Some(Rational::zero());
            }
        }
        Some(&self.prob(r, &both) / &pg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CbnFailure {
    /// Under `P_r`, `var` depends on a non-descendant given its parents.
    Compatibility { r: Intervention, var: usize },
    /// `P_r` does not force a manipulated variable.
    Obey { r: Intervention, var: usize },
    /// A variable left alone by `r` does not follow its parents as it does without intervention.
    Mechanism {
        r: Intervention,
        var: usize,
        parents: BTreeMap<usize, usize>,
        value: usize,
        lhs: Rational,
        rhs: Rational,
    },
}

fn descendants(parents: &[Vec<usize>], v: usize) -> Vec<bool> {
    let n = parents.len();
    let mut d = vec![false; n];
    d[v] = true;
    loop {
        let mut changed = false;
        for i in 0..n {
            if !d[i] && parents[i].iter().any(|&p| d[p]) {
                d[i] = true;
                changed = true;
            }
        }
        if !changed {
            return d;
        }
    }
}

fn sub_assignments(vars: &[usize], sizes: &[usize]) -> Vec<BTreeMap<usize, usize>> {
    let local: Vec<usize> = vars.iter().map(|&v| sizes[v]).collect();
    assignments(&local)
        .into_iter()
        .map(|a| vars.iter().copied().zip(a).collect())
        .collect()
}

/// Every failure of the three conditions for the graph given by `parents` to be a causal network
/// compatible with `p`.
pub fn cbn_failures(p: &InterventionalDistribution, parents: &[Vec<usize>]) -> Vec<CbnFailure> {
    let sizes = p.sizes();
    let n = sizes.len();
    let empty = Intervention::new();
    let mut out = Vec::new();
    for r in p.rows.keys() {
        for v in 0..n {
            let desc = descendants(parents, v);
            let others: Vec<usize> = (0..n).filter(|&u| !desc[u] && !parents[v].contains(&u)).collect();
            let independent = sub_assignments(&parents[v], &sizes).iter().all(|s| {
                sub_assignments(&others, &sizes).iter().all(|o| {
                    let mut given = s.clone();
                    given.extend(o.iter().map(|(&a, &b)| (a, b)));
                    (0..sizes[v]).all(|x| {
                        let ev = BTreeMap::from([(v, x)]);
                        match (p.conditional(r, &ev, &given), p.conditional(r, &ev, s)) {
                            (Some(a), Some(b)) => a == b,
                            _ => true,
                        }
                    })
                })
            });
            if !independent {
                out.push(CbnFailure::Compatibility { r: r.clone(), var: v });
            }
            if let Some(&x) = r.get(&v) {
                if !p.prob(r, &BTreeMap::from([(v, x)])).is_one() {
                    out.push(CbnFailure::Obey { r: r.clone(), var: v });
                }
                continue;
            }
            for s in sub_assignments(&parents[v], &sizes) {
                if s.iter().any(|(u, y)| r.get(u).map_or(false, |ry| ry != y)) {
                    continue;
                }
                for x in 0..sizes[v] {
                    let ev = BTreeMap::from([(v, x)]);
                    if let (Some(lhs), Some(rhs)) = (p.conditional(r, &ev, &s), p.conditional(&empty, &ev, &s)) {
                        if lhs != rhs {
                            out.push(CbnFailure::Mechanism {
                                r: r.clone(),
                                var: v,
                                parents: s.clone(),
                                value: x,
                                lhs,
                                rhs,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

impl CbnFailure {
    pub fn condition(&self) -> u8 {
        match self {
            CbnFailure::Compatibility { .. } => 1,
            CbnFailure::Obey { .. } => 2,
            CbnFailure::Mechanism { .. } => 3,
        }
    }
}

impl fmt::Display for CbnFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CbnFailure::Compatibility { r, var } => {
                write!(
                    f,
                    "condition 1: under {:?}, variable {} depends on a non-descendant given its parents",
                    r, var
                )
            }
            CbnFailure::Obey { r, var } => write!(
                f,
                "condition 2: under {:?}, variable {} ignores the intervention",
                r, var
            ),
            CbnFailure::Mechanism {
                r,
                var,
                parents,
                value,
                lhs,
                rhs,
            } => write!(
                f,
                "condition 3: under {:?}, P(v{} = #{} | {:?}) is {} but {} without intervention",
                r, var, value, parents, lhs, rhs
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayes::tests::RAT;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rat_graph_is_causal() {
        let b = BayesNet::from_json(RAT).unwrap();
        let p = InterventionalDistribution::from_net(&b);
        assert_eq!(p.rows.len(), 9);
        assert!(cbn_failures(&p, &[vec![], vec![0]]).is_empty());
    }

    #[test]
    fn reversed_graph_fails_mechanism() {
        let b = BayesNet::from_json(RAT).unwrap();
        let p = InterventionalDistribution::from_net(&b);
        let fails = cbn_failures(&p, &[vec![1], vec![]]);
        let a_true = Intervention::from([(0, 0)]);
        let hit = fails.iter().find(|f| {
            matches!(f, CbnFailure::Mechanism { r, var: 1, parents, value: 0, .. } if *r == a_true && parents.is_empty())
        });
        match hit {
            Some(CbnFailure::Mechanism { lhs, rhs, .. }) => {
                assert_eq!(*lhs, r("0.8"));
                assert_eq!(*rhs, r("0.38"));
            }
            _ => panic!("missing failure in {:?}", fails),
        }
    }

    #[test]
    fn ignored_intervention() {
        let b = BayesNet::from_json(RAT).unwrap();
        let mut p = InterventionalDistribution::from_net(&b);
        let empty = p.rows[&Intervention::new()].clone();
        p.rows.insert(Intervention::from([(0, 0)]), empty);
        assert!(cbn_failures(&p, &[vec![], vec![0]]).iter().any(|f| f.condition() == 2));
    }
}
