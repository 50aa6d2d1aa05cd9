mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use coax::prooftree::{
    approx_proof, approximating_sequence, proof_graph, tree_eq_n, tree_le, tree_le_n, unfold,
    validate_approximated, validate_proof_tree, wf_proof_search, PathTree,
};
use coax::regular::{bisim_equal, subterms, EqSystem};
use coax::system::reachable_universe;
use coax::verify::{bounded_coinduction, check_closed, check_consistent, refute_level};
use coax::{InferenceSystem, Judgement, JudgementSet, Rule, SystemBuilder, Universe};
use common::{name, unfold_string};
use proptest::collection::vec;
use proptest::prelude::*;

type RawSystem = (usize, Vec<(usize, Vec<usize>)>, Vec<bool>);

fn raw_system(max: usize) -> impl Strategy<Value = RawSystem> {
    (1..=max).prop_flat_map(|n| {
        (
            Just(n),
            vec((0..n, vec(0..n, 0..=3)), 0..=2 * n),
            vec(any::<bool>(), n),
        )
    })
}

fn build((n, rules, coax): &RawSystem) -> InferenceSystem {
    let mut b = SystemBuilder::new();
    for (c, ps) in rules {
        b.rule(Rule::new(ps.iter().map(|&p| name(p)), name(*c)));
    }
    for (i, &is) in coax.iter().enumerate() {
        if is {
            b.coaxiom(name(i));
        }
    }
    b.build_with_universe(Arc::new(Universe::new((0..*n).map(name)))).unwrap().0
}

fn subset(sys: &InferenceSystem, mask: u32) -> JudgementSet {
    let n = sys.universe().len();
    JudgementSet::from_positions(sys.universe(), (0..n).filter(|i| mask >> i & 1 == 1))
}

/// A random children-injective tree over labels `a..e`.
fn random_tree(seed: u64, depth: usize) -> PathTree {
    fn go(state: &mut u64, label: char, depth: usize) -> PathTree {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let kids = if depth == 0 { 0 } else { (*state >> 33) % 3 };
        let children: Vec<PathTree> = (0..kids)
            .map(|k| go(state, (b'a' + ((*state >> (40 + k)) % 5) as u8 + k as u8) as char, depth - 1))
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        let distinct = children.into_iter().filter(|c| seen.insert(c.label().clone()));
        PathTree::node(label.to_string(), distinct).unwrap()
    }
    let mut state = seed;
    go(&mut state, 'r', depth)
}

/// Removes everything below depth `k`.
fn truncate(t: &PathTree, k: usize) -> PathTree {
    if k == 0 {
        PathTree::leaf(t.label().clone())
    } else {
        PathTree::node(t.label().clone(), t.children().map(|c| truncate(c, k - 1))).unwrap()
    }
}

fn lasso_strategy() -> impl Strategy<Value = EqSystem> {
    (vec(-1i64..3, 0..4), vec(-1i64..3, 0..4)).prop_map(|(p, c)| {
        if c.is_empty() {
            EqSystem::finite_list(&p)
        } else {
            EqSystem::lasso(&p, &c)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn interpretations_are_ordered_fixed_points(raw in raw_system(10)) {
        let sys = build(&raw);
        let (ind, _) = sys.inductive();
        let (coind, _) = sys.coinductive();
        let gen = sys.generated();
        let closure = sys.closure_of();
        prop_assert!(ind.is_subset(&gen));
        prop_assert!(gen.is_subset(&coind));
        prop_assert!(gen.is_subset(&closure));
        prop_assert!(sys.coaxioms().is_subset(&closure));
        for s in [&ind, &coind, &gen] {
            prop_assert!(sys.is_fixed_point(s).unwrap());
        }
        prop_assert!(sys.infer_step(&closure).unwrap().is_subset(&closure));
        let restricted = sys.restrict_to(&closure).unwrap().coinductive().0;
        prop_assert_eq!(restricted.to_strings(), gen.to_strings());
        let (kernel, _) = sys.kernel_below(&closure).unwrap();
        prop_assert_eq!(kernel, gen);
    }

    #[test]
    fn generated_is_greatest_fixed_point_below_closure(raw in raw_system(8)) {
        let sys = build(&raw);
        let gen = sys.generated();
        let closure = sys.closure_of();
        for m in 0u32..1 << raw.0 {
            let s = subset(&sys, m);
            if s.is_subset(&closure) && sys.is_fixed_point(&s).unwrap() {
                prop_assert!(s.is_subset(&gen));
            }
        }
    }

    #[test]
    fn approximated_proofs_at_every_level_iff_generated(raw in raw_system(8)) {
        let sys = build(&raw);
        let gen = sys.generated();
        let n = raw.0;
        for j in sys.universe().iter() {
            let mut all = true;
            for level in 0..=n {
                match approx_proof(&sys, j.as_str(), level).unwrap() {
                    Some(t) => prop_assert!(validate_approximated(&sys, &t, level).is_ok()),
                    None => all = false,
                }
            }
            prop_assert_eq!(all, gen.contains_judgement(j.as_str()));
            prop_assert_eq!(refute_level(&sys, j.as_str()).unwrap().is_none(), gen.contains_judgement(j.as_str()));
        }
    }

    #[test]
    fn well_founded_proofs_iff_inductive(raw in raw_system(8)) {
        let sys = build(&raw);
        let (ind, _) = sys.inductive();
        for j in sys.universe().iter() {
            let t = wf_proof_search(&sys, j.as_str(), raw.0).unwrap();
            prop_assert_eq!(t.is_some(), ind.contains_judgement(j.as_str()));
            if let Some(t) = t {
                prop_assert!(validate_proof_tree(&sys, &t).is_ok());
                prop_assert!(t.height() <= raw.0);
            }
        }
    }

    #[test]
    fn unfolded_graph_agrees_with_approximating_sequence(raw in raw_system(8), depth in 0usize..5) {
        let sys = build(&raw);
        let gen = sys.generated();
        for j in gen.judgements() {
            let g = proof_graph(&sys, &gen, j.as_str()).unwrap();
            prop_assert!(g.support().is_subset(&gen));
            let seq = approximating_sequence(&sys, j.as_str(), depth).unwrap();
            prop_assert_eq!(seq.len(), depth + 1);
            prop_assert!(tree_eq_n(&unfold(&g, depth), &seq[depth], depth));
            for (n, t) in seq.iter().enumerate() {
                prop_assert!(validate_approximated(&sys, t, n).is_ok());
            }
        }
    }

    #[test]
    fn bounded_coinduction_accepts_only_generated_subsets(raw in raw_system(8), mask in any::<u32>()) {
        let sys = build(&raw);
        let s = subset(&sys, mask);
        let gen = sys.generated();
        if bounded_coinduction(&sys, &s).unwrap().ok() {
            prop_assert!(s.is_subset(&gen));
        }
        prop_assert!(bounded_coinduction(&sys, &gen).unwrap().ok());
        prop_assert!(check_closed(&sys, &sys.closure_of()).unwrap().ok());
        prop_assert!(check_consistent(&sys, &gen).unwrap().ok());
        prop_assert!(check_closed(&sys, &sys.inductive().0).unwrap().ok());
    }

    #[test]
    fn set_algebra(raw in raw_system(12), a in any::<u32>(), b in any::<u32>()) {
        let sys = build(&raw);
        let (x, y) = (subset(&sys, a), subset(&sys, b));
        prop_assert_eq!(x.complement().complement(), x.clone());
        prop_assert_eq!(x.union(&y).complement(), x.complement().intersection(&y.complement()));
        prop_assert!(x.intersection(&y).is_subset(&x));
        prop_assert!(x.is_subset(&x.union(&y)));
        prop_assert_eq!(x.union(&y).len() + x.intersection(&y).len(), x.len() + y.len());
    }

    #[test]
    fn reachable_universe_is_backward_closed(
        edges in vec((0usize..15, vec(0usize..15, 0..3)), 0..25),
        goal in 0usize..15,
    ) {
        let mut table: BTreeMap<String, Vec<Vec<Judgement>>> = BTreeMap::new();
        for (c, ps) in &edges {
            table.entry(name(*c)).or_default().push(ps.iter().map(|&p| Judgement::new(name(p))).collect());
        }
        let provider = |j: &Judgement| table.get(j.as_str()).cloned().unwrap_or_default();
        let u = reachable_universe(provider, [Judgement::new(name(goal))], 100).unwrap();
        prop_assert!(u.contains(&name(goal)));
        for j in u.iter() {
            for ps in provider(j) {
                for p in ps {
                    prop_assert!(u.contains(p.as_str()));
                }
            }
        }
        if u.len() > 1 {
            prop_assert!(reachable_universe(provider, [Judgement::new(name(goal))], 1).is_err());
        }
    }

    #[test]
    fn tree_orders(seed in any::<u64>(), n in 0usize..5, k in 0usize..5) {
        let t = random_tree(seed, 4);
        let u = random_tree(seed.wrapping_add(1), 4);
        prop_assert!(tree_le_n(&t, &t, n));
        prop_assert!(tree_le(&t, &t));
        let cut = truncate(&t, k);
        prop_assert!(tree_le(&cut, &t));
        prop_assert!(tree_le_n(&cut, &t, n));
        let cut2 = truncate(&cut, k / 2);
        prop_assert!(tree_le(&cut2, &cut) && tree_le(&cut2, &t));
        if tree_le_n(&t, &u, n) {
            for smaller in 0..=n {
                prop_assert!(tree_le_n(&t, &u, smaller));
            }
        }
        let bound = t.height().max(u.height()) + 1;
        prop_assert_eq!(tree_le(&t, &u), (0..=bound).all(|m| tree_le_n(&t, &u, m)));
        prop_assert_eq!(tree_eq_n(&t, &u, n), tree_eq_n(&u, &t, n));
        prop_assert!(tree_eq_n(&t, &cut, k.min(n)));
    }

    #[test]
    fn bisimilarity_is_an_equivalence(a in lasso_strategy(), b in lasso_strategy(), c in lasso_strategy()) {
        let eq = |x: &EqSystem, y: &EqSystem| bisim_equal(x, y).unwrap();
        prop_assert!(eq(&a, &a));
        prop_assert_eq!(eq(&a, &b), eq(&b, &a));
        if eq(&a, &b) && eq(&b, &c) {
            prop_assert!(eq(&a, &c));
        }
        // canonical forms are minimal, so equality of representations decides bisimilarity
        prop_assert_eq!(eq(&a, &b), a == b);
        let k = a.len() + b.len() + 1;
        prop_assert_eq!(eq(&a, &b), unfold_string(&a, 0, k) == unfold_string(&b, 0, k));
    }

    #[test]
    fn lasso_cycles_can_be_unrolled(p in vec(-1i64..3, 0..4), c in vec(-1i64..3, 1..4), times in 2usize..4) {
        let a = EqSystem::lasso(&p, &c);
        let rolled: Vec<i64> = c.iter().copied().cycle().take(c.len() * times).collect();
        let mut longer_prefix = p.clone();
        longer_prefix.extend(&c);
        prop_assert_eq!(&a, &EqSystem::lasso(&p, &rolled));
        prop_assert_eq!(&a, &EqSystem::lasso(&longer_prefix, &c));
    }

    #[test]
    fn equations_round_trip_and_subterms_close(a in lasso_strategy()) {
        prop_assert_eq!(EqSystem::parse(&a.to_equations()).unwrap(), a.clone());
        let subs = subterms(&a);
        prop_assert!(subs.contains(&a));
        prop_assert_eq!(subs.len(), a.len());
        for s in &subs {
            for inner in subterms(s) {
                prop_assert!(subs.contains(&inner));
            }
        }
    }
}
