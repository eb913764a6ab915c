//! End-to-end acceptance checks. Runs as a plain binary so every criterion
//! prints its own PASS/FAIL line; exits non-zero if any criterion fails.

use epp_core::anchors::{anchor_weights, verify_all_b_paths_zero, zero_anchor_pairs};
use epp_core::bounds::thomassen_bound;
use epp_core::constructions::{
    boolean_counterexample, counterexample_for, elementary_wall, label_wall, random_graph, zero_triangles, Labelling,
};
use epp_core::graph::{enumerate_a_paths_with, enumerate_cycles_with, Filter};
use epp_core::group::{epp_condition, epp_mod, halve_negate, Group, GroupElement};
use epp_core::linkage::{max_pure_sublinkage, Linkage};
use epp_core::oracle::{certify, verify_certificate, Certificate, Query, WitnessKind};
use epp_core::reduction::{prune_and_match, reduce, verify_reduction};
use epp_core::wall::{extract_zero_subwall, ExtractionResult};
use epp_core::LabelledGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn z(moduli: &[i64]) -> Group {
    Group::new(moduli).unwrap()
}

fn mod_table() -> Outcome {
    let primes = [2, 3, 5, 7, 11];
    let mut checked = 0;
    for m in 2..=12i64 {
        for d in 0..m {
            let holds = epp_mod(d, m).map_err(|e| e.to_string())?.holds;
            let expected = if primes.contains(&m) {
                Some(true)
            } else if m == 4 {
                Some(d % 2 == 0)
            } else if d == 0 {
                Some(false)
            } else {
                None
            };
            if let Some(want) = expected {
                ensure(holds == want, || format!("m={m} d={d}: got {holds}, expected {want}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} stated verdicts match"))
}

fn family_pattern(name: &str, graphs: Vec<(usize, LabelledGraph)>, weight: GroupElement) -> Outcome {
    let mut taus = Vec::new();
    for (n, g) in graphs {
        let q = Query::new(WitnessKind::APaths, weight.clone());
        let c = certify(&g, &q).map_err(|e| e.to_string())?;
        verify_certificate(&g, &q, &c).map_err(|e| format!("{name} n={n}: {e}"))?;
        ensure(c.exhaustive, || format!("{name} n={n}: search not exhaustive"))?;
        ensure(c.nu == 1, || format!("{name} n={n}: nu = {}", c.nu))?;
        taus.push(c.tau);
    }
    ensure(taus.windows(2).all(|w| w[0] <= w[1]), || format!("{name}: tau decreases {taus:?}"))?;
    ensure(taus.last() > taus.first(), || format!("{name}: tau does not grow {taus:?}"))?;
    Ok(format!("{name} tau={taus:?}"))
}

fn counterexamples() -> Outcome {
    let z4 = z(&[4]);
    let one = z4.element(&[1]).unwrap();
    let grids = (2..=5).map(|n| (n, counterexample_for(&z4, &one, n).unwrap().graph)).collect();
    let a = family_pattern("Z4 grid", grids, one)?;
    let k = z(&[2, 2]);
    let bools = (2..=4).map(|n| (n, boolean_counterexample(&k, n).unwrap())).collect();
    let b = family_pattern("Z2xZ2 boolean", bools, k.zero())?;
    Ok(format!("{a}; {b}; nu = 1 throughout"))
}

fn a_query(weight: &GroupElement) -> Query {
    Query::new(WitnessKind::APaths, weight.clone())
}

fn reduction_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let groups = [z(&[5]), z(&[2, 4])];
    let mut with_a_edges = 0;
    for case in 0..100 {
        let g = &groups[case % 2];
        let gammas: Vec<GroupElement> =
            g.elements().filter(|x| halve_negate(g, x).unwrap().is_some()).collect();
        let gamma = gammas.choose(&mut rng).unwrap().clone();
        let n = rng.gen_range(3..=9);
        let m = rng.gen_range(n - 1..=16);
        let t = rng.gen_range(2..=n.min(4));
        let input = random_graph(g, n, m, t, rng.gen()).map_err(|e| e.to_string())?;
        let pruned = prune_and_match(&input, &gamma).map_err(|e| e.to_string())?;
        with_a_edges += usize::from(!pruned.removed.is_empty());
        let r = reduce(&input, &gamma).map_err(|e| e.to_string())?;
        let check = verify_reduction(&pruned.graph, &r.h, &gamma).map_err(|e| e.to_string())?;
        ensure(check.equal, || format!("case {case}: {:?}", check.discrepancy))?;
        let before = certify(&pruned.graph, &a_query(&gamma)).map_err(|e| e.to_string())?;
        let after = certify(&r.h, &a_query(&g.zero())).map_err(|e| e.to_string())?;
        ensure(before.exhaustive && after.exhaustive, || format!("case {case}: not exhaustive"))?;
        ensure((before.nu, before.tau) == (after.nu, after.tau), || {
            format!("case {case}: (nu, tau) {:?} vs {:?}", (before.nu, before.tau), (after.nu, after.tau))
        })?;
    }
    Ok(format!("100 instances, {with_a_edges} needed pruning"))
}

/// All ordered factorizations into moduli >= 2 with product at most `limit`.
fn factorizations(limit: i64) -> Vec<Vec<i64>> {
    fn go(prefix: &mut Vec<i64>, product: i64, limit: i64, out: &mut Vec<Vec<i64>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        for m in 2..=limit / product {
            prefix.push(m);
            go(prefix, product * m, limit, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 1, limit, &mut out);
    out
}

fn condition_transfer() -> Outcome {
    let all = factorizations(16);
    let mut pairs = 0;
    for moduli in &all {
        let g = z(moduli);
        let zero_holds = epp_condition(&g, &g.zero()).map_err(|e| e.to_string())?.holds;
        for gamma in g.elements() {
            let holds = epp_condition(&g, &gamma).map_err(|e| e.to_string())?.holds;
            ensure(!holds || zero_holds, || format!("{g}: holds for {gamma} but not for 0"))?;
            pairs += 1;
        }
    }
    Ok(format!("{} groups, {pairs} (group, gamma) pairs", all.len()))
}

fn zero_walls() -> Outcome {
    ensure(thomassen_bound(2, 1) == Ok(9330), || format!("thomassen_bound(2,1) = {:?}", thomassen_bound(2, 1)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut successes, mut insufficient) = (0, 0);
    for case in 0..50 {
        let g = if case % 2 == 0 { z(&[2]) } else { z(&[4]) };
        let size = rng.gen_range(60..=300);
        let cols = size + rng.gen_range(0..=size);
        let (rows, cols) = if rng.gen_bool(0.5) { (size, cols) } else { (cols, size) };
        let strategy = match case % 3 {
            0 => Labelling::Random(rng.gen()),
            _ => Labelling::Sparse { seed: rng.gen(), p: rng.gen_range(0.0..0.002) },
        };
        let w = label_wall(&elementary_wall(&g, rows, cols).unwrap(), &strategy).map_err(|e| e.to_string())?;
        let target = rng.gen_range(1..=4);
        let report = extract_zero_subwall(&w, target).map_err(|e| e.to_string())?;
        match &report.result {
            ExtractionResult::Success { wall } => {
                wall.validate().map_err(|e| format!("case {case}: {e}"))?;
                ensure(wall.is_zero_wall(), || format!("case {case}: extracted wall is not zero"))?;
                ensure(wall.is_subwall_of(&w), || format!("case {case}: not a subwall"))?;
                ensure(wall.size() >= target, || format!("case {case}: size {} < {target}", wall.size()))?;
                successes += 1;
            }
            ExtractionResult::Insufficient { .. } => insufficient += 1,
        }
    }
    for size in [60, 137, 300] {
        let w = elementary_wall(&z(&[4]), size, size).unwrap();
        let report = extract_zero_subwall(&w, size - 1).map_err(|e| e.to_string())?;
        ensure(matches!(report.result, ExtractionResult::Success { .. }), || {
            format!("zero wall of size {size} failed at target {}", size - 1)
        })?;
    }
    Ok(format!("{successes} verified successes, {insufficient} insufficient; zero walls succeed; bound 9330"))
}

fn brute_force_pure(l: &Linkage) -> usize {
    let k = l.len();
    (0u32..1 << k)
        .filter(|mask| {
            let sub = Linkage { intervals: (0..k).filter(|i| mask >> i & 1 == 1).map(|i| l.intervals[i]).collect() };
            sub.purity().is_some()
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn random_linkage(rng: &mut ChaCha8Rng, k: usize) -> Linkage {
    let mut ends: Vec<i64> = (0..4 * k as i64 + 4).collect();
    ends.shuffle(rng);
    let intervals = ends[..2 * k].chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
    Linkage::new(intervals).unwrap()
}

fn pure_linkages() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..200 {
        let k = rng.gen_range(1..=12);
        let l = random_linkage(&mut rng, k);
        let (class, sub) = max_pure_sublinkage(&l);
        ensure(sub.purity() == Some(class) || sub.len() == 1, || format!("case {case}: output not {class}"))?;
        ensure(sub.intervals.iter().all(|iv| l.intervals.contains(iv)), || format!("case {case}: not a subset"))?;
        let best = brute_force_pure(&l);
        ensure(sub.len() == best, || format!("case {case}: size {} but brute force finds {best}", sub.len()))?;
    }
    Ok("200 linkages match brute force".into())
}

/// A wall host plus zero triangles glued at single vertices, labelled by a
/// potential `phi` with values of order at most 2 and `phi = 0` on `B`.
/// Returns the graph, `B` and `phi`.
fn anchor_instance(rng: &mut ChaCha8Rng, g: &Group, wall_size: usize) -> (LabelledGraph, Vec<usize>, Vec<GroupElement>) {
    let w = elementary_wall(g, wall_size, wall_size).unwrap();
    let host = w.host();
    let mut n = host.vertex_count();
    let mut pairs: Vec<(usize, usize)> = host.edges().iter().map(|e| (e.u, e.v)).collect();
    for _ in 0..rng.gen_range(1..=3) {
        let at = rng.gen_range(0..n);
        pairs.extend([(at, n), (n, n + 1), (n + 1, at)]);
        n += 2;
    }
    let b = w.branch_vertices();
    let half = g.gamma2();
    let phi: Vec<GroupElement> =
        (0..n).map(|v| if b.contains(&v) { g.zero() } else { half.choose(rng).unwrap().clone() }).collect();
    let edges = pairs.into_iter().map(|(u, v)| (u, v, g.add(&phi[u], &phi[v]))).collect();
    (LabelledGraph::new(g.clone(), n, &[], edges).unwrap(), b, phi)
}

fn anchor_lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let groups = [z(&[2]), z(&[4]), z(&[2, 2]), z(&[2, 4])];
    let mut anchors = 0;
    for case in 0..70 {
        let g = &groups[case % groups.len()];
        let second = case >= 50;
        let size = if second { 2 } else { rng.gen_range(2..=3) };
        let (graph, b, phi) = anchor_instance(&mut rng, g, size);
        ensure(verify_all_b_paths_zero(&graph, &b).map_err(|e| e.to_string())?.is_none(), || {
            format!("case {case}: generator broke the hypothesis")
        })?;
        let report = anchor_weights(&graph, &b, 2).map_err(|e| format!("case {case}: {e}"))?;
        ensure(report.consistent, || format!("case {case}: conflict {:?}", report.conflict))?;
        ensure(!report.m.is_empty(), || format!("case {case}: no anchors"))?;
        for (v, w) in &report.weights {
            ensure(g.is_zero(&g.add(w, w)), || format!("case {case}: 2*gamma_{v} != 0"))?;
            ensure(*w == phi[*v], || format!("case {case}: gamma_{v} = {w}, potential gives {}", phi[*v]))?;
        }
        anchors += report.m.len();
        if second {
            let bad = zero_anchor_pairs(&graph, &report).map_err(|e| e.to_string())?;
            ensure(bad.is_none(), || format!("case {case}: non-zero path between zero anchors {bad:?}"))?;
        }
    }
    Ok(format!("50 + 20 instances, {anchors} anchors checked"))
}

fn independent_check(g: &LabelledGraph, q: &Query, c: &Certificate) -> Result<(), String> {
    let filter = Filter::new(Some(q.weight.clone()), q.min_length);
    let find = |h: &LabelledGraph| match q.kind {
        WitnessKind::APaths => enumerate_a_paths_with(h, &filter),
        WitnessKind::Cycles => enumerate_cycles_with(h, &Filter::new(Some(q.weight.clone()), q.min_length.max(3))),
    };
    ensure(c.nu <= c.tau, || format!("nu {} > tau {}", c.nu, c.tau))?;
    ensure(c.packing.len() == c.nu && c.cover.len() == c.tau, || "certificate sizes disagree".into())?;
    let mut seen = std::collections::HashSet::new();
    for p in &c.packing {
        ensure(p.weight == q.weight, || format!("packing member {:?} has wrong weight", p.vertices))?;
        for &v in &p.vertices {
            ensure(seen.insert(v), || format!("packing reuses vertex {v}"))?;
        }
    }
    let left = find(&g.without_vertices(&c.cover)).map_err(|e| e.to_string())?;
    ensure(left.is_empty(), || format!("cover misses {:?}", left[0].vertices))?;
    let all = find(g).map_err(|e| e.to_string())?;
    ensure(all.is_empty() == (c.nu == 0), || "nu = 0 disagrees with enumeration".into())
}

fn duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let groups = [z(&[2]), z(&[3]), z(&[2, 2]), z(&[4])];
    let mut nonzero = 0;
    for case in 0..200 {
        let g = &groups[case % groups.len()];
        let n = rng.gen_range(4..=9);
        let m = rng.gen_range(n..=14);
        let t = rng.gen_range(2..=n.min(5));
        let graph = random_graph(g, n, m, t, rng.gen()).map_err(|e| e.to_string())?;
        let weight = g.decode(rng.gen_range(0..g.order()));
        let kind = if case % 2 == 0 { WitnessKind::APaths } else { WitnessKind::Cycles };
        let q = Query::new(kind, weight);
        let c = certify(&graph, &q).map_err(|e| e.to_string())?;
        ensure(c.exhaustive, || format!("case {case}: not exhaustive"))?;
        independent_check(&graph, &q, &c).map_err(|e| format!("case {case} ({kind}): {e}"))?;
        nonzero += usize::from(c.nu > 0);
    }
    Ok(format!("200 instances, {nonzero} with witnesses"))
}

fn zero_cycles() -> Outcome {
    let g = z(&[2]);
    for k in 1..=4 {
        let graph = zero_triangles(&g, k);
        let q = Query::new(WitnessKind::Cycles, g.zero());
        let c = certify(&graph, &q).map_err(|e| e.to_string())?;
        ensure(c.nu == k && c.tau == k && c.exhaustive, || format!("k={k}: nu={} tau={}", c.nu, c.tau))?;
    }
    Ok("nu = tau = k for k = 1..4".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("mod-m verdict table", mod_table, 1),
        ("counterexample certification", counterexamples, 120),
        ("reduction equivalence", reduction_equivalence, 60),
        ("group-condition transfer", condition_transfer, 10),
        ("zero-wall soundness", zero_walls, 120),
        ("pure-linkage oracle", pure_linkages, 30),
        ("anchor-weight lemma", anchor_lemma, 60),
        ("duality and validity", duality, 60),
        ("zero-cycle sanity", zero_cycles, 5),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > Duration::from_secs(*limit) => Err(format!("{detail}; over the {limit} s limit")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({:.2} s / {limit} s): {detail}", i + 1, took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({:.2} s / {limit} s): {why}", i + 1, took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
