use num_traits::{One, Zero};
use proptest::prelude::*;
use windmill_core::counter::Problem;
use windmill_core::holant::{brute_strata, disagreement, weight, Assignment, HolantInstance};
use windmill_core::mcmc::{transition_matrix, PathBuilder};
use windmill_core::rational::{frac, int, to_f64, Rational};

/// A loop-free multigraph with `vertices` vertices and the given number of
/// edges, picked from a flat list of candidate endpoint pairs.
fn graph(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_vertices).prop_flat_map(move |n| {
        let pair = (0..n, 1..n).prop_map(move |(u, k)| (u, (u + k) % n));
        (Just(n), prop::collection::vec(pair, 1..=max_edges))
    })
}

fn problem() -> impl Strategy<Value = Problem> {
    prop_oneof![(0usize..=3).prop_map(Problem::BMatching), (0usize..=2).prop_map(Problem::BEdgeCover)]
}

fn edge_weight() -> impl Strategy<Value = Rational> {
    prop_oneof![Just(frac(1, 3)), Just(frac(1, 2)), Just(int(1)), Just(int(2)), Just(frac(7, 2))]
}

fn instance(max_edges: usize) -> impl Strategy<Value = HolantInstance> {
    (graph(4, max_edges), problem()).prop_map(|((n, edges), p)| p.instance(n, &edges, None).unwrap())
}

/// Weighted instance with at most `max_edges` edges after subdivision.
fn weighted_instance(max_edges: usize) -> impl Strategy<Value = HolantInstance> {
    (graph(3, max_edges / 2), problem()).prop_flat_map(|((n, edges), p)| {
        let m = edges.len();
        prop::collection::vec(edge_weight(), m).prop_map(move |w| p.instance(n, &edges, Some(&w)).unwrap())
    })
}

fn check_kernel(inst: &HolantInstance) -> Result<(), TestCaseError> {
    let p = transition_matrix(inst).unwrap();
    let strata = brute_strata(inst).unwrap();
    let z2 = strata.get(2).cloned().unwrap_or_else(Rational::zero);
    prop_assert_eq!(p.normalizer(), &strata[0] + z2);
    prop_assert!(p.is_stochastic());
    if let Some(d) = p.min_diagonal() {
        prop_assert!(d >= frac(1, 2));
    }
    let mu = p.stationary();
    prop_assert!(p.is_stationary(&mu));
    prop_assert_eq!(p.detailed_balance_violation(&mu), None);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn kernel_is_reversible(inst in instance(5)) {
        check_kernel(&inst)?;
    }

    #[test]
    fn weighted_kernel_is_reversible(inst in weighted_instance(5)) {
        check_kernel(&inst)?;
    }

    #[test]
    fn kernel_is_irreducible(inst in instance(5)) {
        let p = transition_matrix(&inst).unwrap();
        prop_assert!(p.is_irreducible());
    }

    #[test]
    fn tv_decreases_and_respects_bound(inst in instance(4)) {
        let p = transition_matrix(&inst).unwrap();
        prop_assume!(!p.is_empty());
        let start = (0..p.len()).find(|&i| p.disagreements()[i] == 0);
        prop_assume!(start.is_some());
        let start = start.unwrap();
        let curve = p.tv_curve(start, 30);
        for w in curve.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        for (t, tv) in curve.iter().enumerate() {
            prop_assert!(to_f64(tv) <= p.mixing_bound(start, t));
        }
    }

    #[test]
    fn flow_identity(inst in instance(4)) {
        let builder = PathBuilder::new(&inst).unwrap();
        prop_assume!(!builder.normalizer().is_zero());
        let n = inst.num_half_edges();
        let states: Vec<Assignment> = (0..1u64 << n)
            .map(|m| Assignment::from_mask(m, n))
            .filter(|a| weight(&inst, a).unwrap() > Rational::zero())
            .collect();
        for sigma in states.iter().filter(|a| disagreement(&inst, a).unwrap() == 0) {
            for pi in states.iter().filter(|a| matches!(disagreement(&inst, a).unwrap(), 0 | 2)) {
                let paths = builder.all_paths(sigma, pi).unwrap();
                let mut total = Rational::zero();
                for path in &paths {
                    prop_assert_eq!(path.states.first(), Some(sigma));
                    prop_assert_eq!(path.states.last(), Some(pi));
                    for w in path.states.windows(2) {
                        prop_assert_eq!(w[0].hamming(&w[1]), 2);
                    }
                    total += &path.weight;
                }
                prop_assert_eq!(total, builder.mu(sigma).unwrap() * builder.mu(pi).unwrap());
            }
        }
    }

    #[test]
    fn strata_bounds(inst in instance(8)) {
        let s = brute_strata(&inst).unwrap();
        let z = |k: usize| s.get(k).cloned().unwrap_or_else(Rational::zero);
        prop_assert!(z(0) * z(4) <= z(2) * z(2));
        let m = int(inst.num_edges() as i64);
        prop_assert!(z(2) <= int(4) * &m * &m * z(0));
    }

    #[test]
    fn strata_sum_to_total_weight(inst in instance(5)) {
        let total = brute_strata(&inst).unwrap().into_iter().fold(Rational::zero(), |a, b| a + b);
        let n = inst.num_half_edges();
        let direct = (0..1u64 << n).fold(Rational::zero(), |acc, m| acc + weight(&inst, &Assignment::from_mask(m, n)).unwrap());
        prop_assert_eq!(total, direct);
    }
}

#[test]
fn trivial_path_weight() {
    let inst = Problem::BMatching(1).instance(3, &[(0, 1), (1, 2), (2, 0)], None).unwrap();
    let builder = PathBuilder::new(&inst).unwrap();
    let sigma = Assignment::zeros(6);
    let pairings = builder.pairing_choices(&sigma, &sigma).unwrap();
    assert!(pairings.iter().all(|c| c.len() == 1));
    let paths = builder.all_paths(&sigma, &sigma).unwrap();
    assert_eq!(paths.len(), 1);
    assert_eq!(paths[0].weight, Rational::one() / (builder.normalizer() * builder.normalizer()));
}
