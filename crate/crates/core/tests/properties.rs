use proptest::prelude::*;
use proptest::sample::subsequence;

use ultratree::document::{parse_labeled_tree_json, parse_space_json, to_json, SpaceDocument, TreeDocument};
use ultratree::oracle::{
    oracle_is_centered_sphere, oracle_is_ugvl, oracle_open_balls, random_space, RandomSpec,
};
use ultratree::{
    delta, generating_tree, is_ugvl, isometric, minimal_extension, representing_tree, LabeledTree, Rat,
    UltraSpace,
};

fn labels() -> Vec<Rat> {
    vec![Rat::zero(), Rat::new(1, 2), Rat::from_integer(1), Rat::from_integer(2), Rat::from_integer(3)]
}

/// Random trees on up to 10 vertices; vertex `i > 0` hangs off a lower index.
fn arb_tree() -> impl Strategy<Value = LabeledTree> {
    (1usize..=10)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|i| (0..i, any::<bool>())).collect();
            (parents, proptest::collection::vec(0..labels().len(), n))
        })
        .prop_map(|(parents, picks)| {
            let n = picks.len();
            let edges = parents
                .into_iter()
                .enumerate()
                .map(|(i, (p, flip))| if flip { (i + 1, p) } else { (p, i + 1) })
                .collect();
            let names = (0..n).map(|i| format!("v{i}")).collect();
            let pool = labels();
            LabeledTree::new(names, picks.into_iter().map(|k| pool[k].clone()).collect(), edges).unwrap()
        })
}

/// Maximum label along the path found by exhaustive depth-first search.
fn path_max_oracle(tree: &LabeledTree, u: usize, v: usize) -> Rat {
    fn search(tree: &LabeledTree, at: usize, goal: usize, seen: &mut Vec<usize>) -> Option<Rat> {
        seen.push(at);
        if at == goal {
            return seen.iter().map(|&w| tree.label(w).clone()).max();
        }
        for &(a, b) in tree.edges() {
            let next = if a == at {
                b
            } else if b == at {
                a
            } else {
                continue;
            };
            if !seen.contains(&next) {
                if let Some(m) = search(tree, next, goal, seen) {
                    return Some(m);
                }
            }
        }
        seen.pop();
        None
    }
    if u == v {
        return Rat::zero();
    }
    search(tree, u, v, &mut Vec::new()).expect("trees are connected")
}

fn arb_space() -> impl Strategy<Value = UltraSpace> {
    (any::<u64>(), 1usize..=8).prop_map(|(seed, max)| random_space(&RandomSpec::new(seed, max)).unwrap())
}

fn arb_permuted_space() -> impl Strategy<Value = (UltraSpace, Vec<usize>)> {
    arb_space().prop_flat_map(|s| {
        let n = s.len();
        (Just(s), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn d_l_matches_path_oracle(tree in arb_tree()) {
        let matrix = tree.distance_matrix();
        for (u, row) in matrix.iter().enumerate() {
            for (v, entry) in row.iter().enumerate() {
                let expected = path_max_oracle(&tree, u, v);
                prop_assert_eq!(&tree.d_l(u, v).unwrap(), &expected);
                prop_assert_eq!(entry, &expected);
            }
        }
    }

    #[test]
    fn edge_condition_decides_metric(tree in arb_tree()) {
        let zero_edge = tree.edges().iter().any(|&(a, b)| tree.label(a).is_zero() && tree.label(b).is_zero());
        prop_assert_eq!(tree.generates_ultrametric(), !zero_edge);
        prop_assert_eq!(tree.to_space().is_ok(), !zero_edge);
    }

    #[test]
    fn delta_and_verdict_match_oracles(s in arb_space()) {
        let balls = oracle_open_balls(&s);
        prop_assert_eq!(&s.open_balls(), &balls);
        let oracle_delta = balls.iter().filter(|b| !oracle_is_centered_sphere(&s, b.members())).count();
        prop_assert_eq!(delta(&s).unwrap(), oracle_delta);
        prop_assert_eq!(is_ugvl(&s).unwrap(), oracle_is_ugvl(&s));
        prop_assert_eq!(is_ugvl(&s).unwrap(), oracle_delta == 0);
        prop_assert_eq!(minimal_extension(&s).unwrap().extended.len(), s.len() + oracle_delta);
    }

    #[test]
    fn invariants_survive_reordering((s, perm) in arb_permuted_space()) {
        let p = s.induced_subspace(&perm).unwrap();
        prop_assert!(isometric(&s, &p));
        prop_assert_eq!(delta(&s).unwrap(), delta(&p).unwrap());
        prop_assert_eq!(
            representing_tree(&s).unwrap().canonical_code(),
            representing_tree(&p).unwrap().canonical_code()
        );
    }

    #[test]
    fn subspaces_of_ugvl_spaces_are_ugvl(s in arb_space(), keep in subsequence((0..8).collect::<Vec<usize>>(), 1..=8)) {
        let subset: Vec<usize> = keep.into_iter().filter(|&i| i < s.len()).collect();
        prop_assume!(!subset.is_empty());
        let sub = s.induced_subspace(&subset).unwrap();
        if is_ugvl(&s).unwrap() {
            prop_assert!(is_ugvl(&sub).unwrap());
        }
    }

    #[test]
    fn documents_round_trip(s in arb_space()) {
        let text = to_json(&SpaceDocument::from_space(&s));
        prop_assert_eq!(&parse_space_json(&text).unwrap(), &s);
        if let Ok(tree) = generating_tree(&s) {
            let text = to_json(&TreeDocument::from_labeled_tree(&tree));
            let back = parse_labeled_tree_json(&text).unwrap();
            prop_assert_eq!(&back, &tree);
            prop_assert_eq!(&back.to_space().unwrap(), &s);
        }
    }

    #[test]
    fn rationals_print_in_lowest_terms(p in -1000i64..1000, q in 1i64..1000) {
        let r = Rat::new(p, q);
        let text = r.to_string();
        prop_assert_eq!(&text.parse::<Rat>().unwrap(), &r);
        let g = num_gcd(p.unsigned_abs(), q as u64);
        let expected = if q as u64 / g == 1 {
            format!("{}", p / g as i64)
        } else {
            format!("{}/{}", p / g as i64, q / g as i64)
        };
        prop_assert_eq!(text, expected);
    }
}

fn num_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
