use proptest::prelude::*;

use twodom::canon::canonical_code;
use twodom::construct::{random_member, GenConfig};
use twodom::enumerate::prufer_decode;
use twodom::graph6;
use twodom::recognize::{recognize, verify_certificate};
use twodom::solvers::{
    brute_alpha2, brute_gamma2, is_2dominating, is_2independent, solve_alpha2, solve_gamma2,
    Constraint,
};
use twodom::tree::Tree;

fn trees(max_n: usize) -> impl Strategy<Value = Tree> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(0..n, n - 2).prop_map(move |s| prufer_decode(n, &s))
    })
}

fn relabel(t: &Tree, perm: &[usize]) -> Tree {
    let edges: Vec<_> = t
        .edges()
        .into_iter()
        .map(|(a, b)| (perm[a], perm[b]))
        .collect();
    Tree::new(t.order(), &edges).unwrap()
}

proptest! {
    #[test]
    fn dp_matches_brute_force(t in trees(18)) {
        let g = solve_gamma2(&t, &Constraint::none()).unwrap();
        let a = solve_alpha2(&t, &Constraint::none()).unwrap();
        prop_assert_eq!(g.value, brute_gamma2(&t).unwrap());
        prop_assert_eq!(a.value, brute_alpha2(&t).unwrap());
        prop_assert!(is_2dominating(&t, &g.witness));
        prop_assert_eq!(g.witness.len(), g.value);
        prop_assert!(is_2independent(&t, &a.witness));
        prop_assert_eq!(a.witness.len(), a.value);
        prop_assert!(g.value <= a.value);
    }

    #[test]
    fn graph6_round_trip(t in trees(40)) {
        prop_assert_eq!(graph6::decode(&graph6::encode(&t)).unwrap(), t);
    }

    #[test]
    fn json_round_trip(t in trees(20)) {
        let text = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<Tree>(&text).unwrap(), t);
    }

    #[test]
    fn canonical_code_ignores_labels(
        (t, perm) in trees(30).prop_flat_map(|t| {
            let n = t.order();
            (Just(t), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        prop_assert_eq!(canonical_code(&relabel(&t, &perm)), canonical_code(&t));
    }

    #[test]
    fn generated_members_are_recognized(seed in any::<u64>(), steps in 0usize..7) {
        let (t, cert) = random_member(seed, steps, &GenConfig::default());
        let v = recognize(&t).unwrap();
        prop_assert!(v.accepted);
        prop_assert_eq!(v.gamma2, v.alpha2);
        prop_assert_eq!(verify_certificate(&cert, &t), Ok(()));
        prop_assert_eq!(verify_certificate(&v.certificate.unwrap(), &t), Ok(()));
    }

    #[test]
    fn recognizer_agrees_with_solvers(t in trees(22)) {
        let v = recognize(&t).unwrap();
        prop_assert_eq!(v.accepted, v.gamma2 == v.alpha2);
        if let Some(c) = v.certificate {
            prop_assert_eq!(verify_certificate(&c, &t), Ok(()));
        }
    }
}
