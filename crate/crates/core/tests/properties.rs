use epp_core::constructions::{elementary_wall, label_wall, random_graph, Labelling};
use epp_core::graph::{enumerate_a_paths, enumerate_a_paths_with, enumerate_cycles, Filter};
use epp_core::group::{epp_condition, epp_mod, halve_negate, Group};
use epp_core::linkage::{max_pure_sublinkage, Linkage};
use epp_core::oracle::{certify, witnesses, Query, WitnessKind};
use epp_core::wall::{extract_zero_subwall, ExtractionResult};
use epp_core::LabelledGraph;
use proptest::prelude::*;
use std::collections::BTreeSet;

fn small_group() -> impl Strategy<Value = Group> {
    prop::sample::select(vec![vec![2], vec![3], vec![4], vec![5], vec![2, 2], vec![6], vec![2, 4]])
        .prop_map(|m| Group::new(&m).unwrap())
}

/// (group, graph) with up to `max_n` vertices.
fn instance(max_n: usize, max_m: usize) -> impl Strategy<Value = LabelledGraph> {
    (small_group(), 2..=max_n, 0..=max_m, 0..=max_n, any::<u64>())
        .prop_map(|(g, n, m, t, seed)| random_graph(&g, n, m, t, seed).unwrap())
}

fn sorted_sets(paths: &[epp_core::PathWitness]) -> Vec<Vec<usize>> {
    let mut v: Vec<Vec<usize>> = paths.iter().map(|p| p.vertices.clone()).collect();
    v.sort();
    v
}

/// Smallest vertex set meeting every set, by trying all subsets in size order.
fn brute_tau(n: usize, sets: &[BTreeSet<usize>]) -> usize {
    (0u32..1 << n)
        .filter(|mask| sets.iter().all(|s| s.iter().any(|&v| mask >> v & 1 == 1)))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap()
}

/// Largest family of pairwise disjoint sets, by plain recursion.
fn brute_nu(sets: &[BTreeSet<usize>], used: &BTreeSet<usize>) -> usize {
    match sets.split_first() {
        None => 0,
        Some((first, rest)) => {
            let skip = brute_nu(rest, used);
            if first.is_disjoint(used) {
                let mut more = used.clone();
                more.extend(first);
                skip.max(1 + brute_nu(rest, &more))
            } else {
                skip
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reversal_preserves_weight(g in instance(7, 11)) {
        for p in enumerate_a_paths(&g, None, 0).unwrap() {
            let mut rev = p.edges.clone();
            rev.reverse();
            prop_assert_eq!(g.walk_weight(&rev).unwrap(), p.weight.clone());
            prop_assert_eq!(g.walk_weight(&p.edges).unwrap(), p.weight);
        }
    }

    #[test]
    fn weights_partition_the_paths(g in instance(7, 11)) {
        let all = enumerate_a_paths(&g, None, 0).unwrap();
        let mut parts = Vec::new();
        for x in g.group().elements() {
            let some = enumerate_a_paths(&g, Some(&x), 0).unwrap();
            prop_assert!(some.iter().all(|p| p.weight == x));
            parts.extend(some);
        }
        prop_assert_eq!(sorted_sets(&all), sorted_sets(&parts));
    }

    #[test]
    fn all_ones_weight_is_length(m in 2i64..9, n in 2usize..8, e in 0usize..12, seed: u64) {
        let g = Group::new(&[m]).unwrap();
        let base = random_graph(&g, n, e, n, seed).unwrap();
        let ones = epp_core::constructions::label_graph(&base, &Labelling::Constant(g.element(&[1]).unwrap())).unwrap();
        for p in enumerate_a_paths(&ones, None, 0).unwrap() {
            prop_assert_eq!(p.weight, g.element(&[p.edges.len() as i64 % m]).unwrap());
        }
        for c in enumerate_cycles(&ones, None, 3).unwrap() {
            prop_assert_eq!(c.weight, g.element(&[c.edges.len() as i64 % m]).unwrap());
        }
    }

    #[test]
    fn oracle_matches_brute_force(g in instance(7, 10), pick: u64, cycles: bool) {
        let weight = g.group().decode((pick % g.group().order() as u64) as u32);
        let kind = if cycles { WitnessKind::Cycles } else { WitnessKind::APaths };
        let q = Query::new(kind, weight);
        let sets: Vec<BTreeSet<usize>> =
            witnesses(&g, &q).unwrap().iter().map(|w| w.vertices.iter().copied().collect()).collect();
        let c = certify(&g, &q).unwrap();
        prop_assert!(c.exhaustive);
        prop_assert!(c.nu <= c.tau);
        prop_assert_eq!(c.tau, brute_tau(g.vertex_count(), &sets));
        prop_assert_eq!(c.nu, brute_nu(&sets, &BTreeSet::new()));
    }

    #[test]
    fn unfiltered_a_paths_have_tau_at_most_twice_nu(n in 2usize..10, e in 0usize..16, t in 2usize..10, seed: u64) {
        // All labels zero, so weight 0 selects every A-path.
        let g = Group::new(&[2]).unwrap();
        let graph = random_graph(&g, n, e, t, seed).unwrap();
        let zeroed = epp_core::constructions::label_graph(&graph, &Labelling::Constant(g.zero())).unwrap();
        let c = certify(&zeroed, &Query::new(WitnessKind::APaths, g.zero())).unwrap();
        prop_assert!(c.tau <= 2 * c.nu, "nu = {}, tau = {}", c.nu, c.tau);
        let f = Filter::new(None, 0);
        prop_assert_eq!(c.nu == 0, enumerate_a_paths_with(&zeroed, &f).unwrap().is_empty());
    }

    #[test]
    fn cyclic_verdicts_agree(m in 2i64..40, raw in 0i64..1000, off in 0i64..50) {
        let d = raw % m;
        let g = Group::new(&[m]).unwrap();
        let direct = epp_condition(&g, &g.element(&[d]).unwrap()).unwrap();
        let cyclic = epp_mod(d, m).unwrap();
        prop_assert!(epp_mod(m + off, m).is_err() && epp_mod(-1 - off, m).is_err());
        prop_assert_eq!(direct.holds, cyclic.holds);
        prop_assert_eq!(direct.witness, cyclic.witness);
    }

    #[test]
    fn halving_matches_search(g in small_group(), pick: u32) {
        let t = g.decode(pick % g.order());
        let found = halve_negate(&g, &t).unwrap();
        let exists = g.elements().any(|x| g.is_zero(&g.add(&g.add(&x, &x), &t)));
        prop_assert_eq!(found.is_some(), exists);
        if let Some(d) = found {
            prop_assert!(g.is_zero(&g.add(&g.add(&d, &d), &t)));
        }
    }

    #[test]
    fn element_order_is_least_annihilator(g in small_group(), pick: u32) {
        let x = g.decode(pick % g.order());
        let k = g.element_order(&x).unwrap();
        prop_assert!(g.is_zero(&g.scalar_mul(&x, k as i64).unwrap()));
        prop_assert!((1..k).all(|j| !g.is_zero(&g.scalar_mul(&x, j as i64).unwrap())));
        prop_assert_eq!(g.order() as u64 % k, 0);
    }

    #[test]
    fn pure_sublinkage_is_maximum(perm in Just((0i64..18).collect::<Vec<_>>()).prop_shuffle(), k in 1usize..=8) {
        let intervals: Vec<(i64, i64)> = perm[..2 * k].chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
        let l = Linkage::new(intervals).unwrap();
        let (class, sub) = max_pure_sublinkage(&l);
        prop_assert!(sub.len() == 1 || sub.purity() == Some(class));
        let best = (0u32..1 << k)
            .filter(|mask| Linkage { intervals: (0..k).filter(|i| mask >> i & 1 == 1).map(|i| l.intervals[i]).collect() }.purity().is_some())
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap();
        prop_assert_eq!(sub.len(), best);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn extraction_is_sound(rows in 6usize..20, extra in 0usize..30, p in 0.0f64..0.05, seed: u64, target in 1usize..3, four: bool) {
        let g = Group::new(if four { &[4] } else { &[2] }).unwrap();
        let w = elementary_wall(&g, rows, rows + extra).unwrap();
        let w = label_wall(&w, &Labelling::Sparse { seed, p }).unwrap();
        let report = extract_zero_subwall(&w, target).unwrap();
        if let ExtractionResult::Success { wall } = &report.result {
            prop_assert!(wall.validate().is_ok());
            prop_assert!(wall.is_zero_wall());
            prop_assert!(wall.is_subwall_of(&w));
            prop_assert!(wall.size() >= target);
        }
    }
}
