//! Adding literals of random attributes as facts agrees with observing them, for programs whose
//! selections are unconditional, pr-free and over the full range.

use plog::syntax::parser::parse_atomic;
use plog::syntax::program::Program;
use plog::updates::{apply_update, Update};
use plog::worlds::Model;
use proptest::prelude::*;

#[derive(Clone, Debug)]
struct Instance {
    /// Range size of each random attribute `a0..`; size 0 stands for boolean.
    sizes: Vec<usize>,
    /// Derived booleans `q_k :- a_i = v, a_j = w.`
    derived: Vec<((usize, usize), (usize, usize))>,
    /// Literals of `B`: attribute, value, polarity. At most one per attribute.
    b: Vec<(usize, usize, bool)>,
    /// Query as a disjunction of conjunctions of literal indices into `atoms()`.
    query: Vec<Vec<(usize, bool)>>,
}

fn value(size: usize, v: usize) -> String {
    if size == 0 {
        String::new()
    } else {
        format!("v{}", v % size)
    }
}

/// Text of `a_i = v` or its negation.
fn literal(sizes: &[usize], i: usize, v: usize, positive: bool) -> String {
    let i = i % sizes.len();
    match (sizes[i], positive) {
        (0, true) => format!("a{}", i),
        (0, false) => format!("~a{}", i),
        (n, true) => format!("a{} = {}", i, value(n, v)),
        (n, false) => format!("a{} != {}", i, value(n, v)),
    }
}

fn source(x: &Instance) -> String {
    let mut s = String::new();
    for (i, &n) in x.sizes.iter().enumerate() {
        if n == 0 {
            s += &format!("a{} : boolean.\n", i);
        } else {
            let vals: Vec<String> = (0..n).map(|v| value(n, v)).collect();
            s += &format!("s{} = {{{}}}.\na{} : s{}.\n", i, vals.join(", "), i, i);
        }
        s += &format!("random(a{}).\n", i);
    }
    for (k, ((i, v), (j, w))) in x.derived.iter().enumerate() {
        s += &format!("q{} : boolean.\n", k);
        s += &format!(
            "q{} :- {}, {}.\n",
            k,
            literal(&x.sizes, *i, *v, true),
            literal(&x.sizes, *j, *w, true)
        );
    }
    s
}

/// Query atoms: the random attributes' literals and the derived booleans.
fn atom(x: &Instance, idx: usize, positive: bool) -> String {
    let n = x.sizes.len();
    let k = idx % (n + x.derived.len());
    if k < n {
        literal(&x.sizes, k, idx / 7, positive)
    } else if positive {
        format!("q{}", k - n)
    } else {
        format!("not q{}", k - n)
    }
}

fn instance() -> impl Strategy<Value = Instance> {
    prop::collection::vec(prop_oneof![Just(0usize), 2usize..=3], 1..=3).prop_flat_map(|sizes| {
        let n = sizes.len();
        (
            Just(sizes),
            prop::collection::vec(((0..n, 0usize..3), (0..n, 0usize..3)), 0..3),
            prop::collection::btree_map(0..n, (0usize..3, any::<bool>()), 1..=n),
            prop::collection::vec(prop::collection::vec((0usize..40, any::<bool>()), 1..3), 1..3),
        )
            .prop_map(|(sizes, derived, b, query)| Instance {
                sizes,
                derived,
                b: b.into_iter().map(|(i, (v, p))| (i, v, p)).collect(),
                query,
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn facts_agree_with_observations(x in instance()) {
        let t = Program::parse(&source(&x)).unwrap();
        let b: Vec<_> = x.b.iter().map(|&(i, v, p)| parse_atomic(&literal(&x.sizes, i, v, p)).unwrap()).collect();
        let observed = Model::new(&apply_update(&t, &Update::Obs(b.clone())).unwrap()).unwrap();
        let asserted = Model::new(&apply_update(&t, &Update::facts(&b)).unwrap()).unwrap();
        // B holds one literal per attribute and no literal excludes a whole range, so B has positive probability.
        let (po, pf) = (observed.table().unwrap(), asserted.table().unwrap());
        let q: Vec<String> = x
            .query
            .iter()
            .map(|c| c.iter().map(|&(i, p)| atom(&x, i, p)).collect::<Vec<_>>().join(" & "))
            .collect();
        let q = q.iter().map(|c| format!("({})", c)).collect::<Vec<_>>().join(" | ");
        let f = observed.formula(&q).unwrap();
        prop_assert_eq!(pf.prob(&f), po.prob(&f), "{}\nB = {:?}\nA = {}", source(&x), x.b, q);
    }
}
