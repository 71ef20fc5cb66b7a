use proptest::prelude::*;

use matdom::baselines::{
    exact_best_permutation, exact_min_dominating, greedy_dominate, OracleBudget,
};
use matdom::certificate::{verify_certificate, CertificateQuery};
use matdom::coverage::adjacency_coverage;
use matdom::fitness::{fitness, influence, occupancy, penalty};
use matdom::ga::{crossover_permutation, mutate, Genome, Individual, Objective};
use matdom::generate::{random_permutation, random_placement, rng_from_seed};
use matdom::repair::repair;
use matdom::woc::build_consensus;
use matdom::{Dims, DominationModel, Instance, PermutationPlacement, Placement};

const ADJ: DominationModel = DominationModel::Adjacency;

fn dims_and_cells(max: usize) -> impl Strategy<Value = (Dims, Placement)> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec((0..r, 0..c), 0..=r * c)
            .prop_map(move |v| (Dims::new(r, c).unwrap(), Placement::new(v)))
    })
}

fn instance_and_cells(max: usize) -> impl Strategy<Value = (Instance, Placement)> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        (
            prop::collection::vec(any::<bool>(), r * c),
            prop::collection::vec((0..r, 0..c), 0..=r * c),
        )
            .prop_map(move |(bits, cells)| {
                let d = Dims::new(r, c).unwrap();
                (
                    Instance::from_fn(d, |i, j| bits[i * c + j]),
                    Placement::new(cells),
                )
            })
    })
}

fn permutation(max: usize) -> impl Strategy<Value = PermutationPlacement> {
    (1..=max)
        .prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| PermutationPlacement::new(v).unwrap())
}

fn is_permutation_occupancy(s: &[Vec<u8>]) -> bool {
    let n = s.len();
    s.iter()
        .all(|r| r.len() == n && r.iter().map(|&x| x as usize).sum::<usize>() == 1)
        && (0..n).all(|j| s.iter().map(|r| r[j] as usize).sum::<usize>() == 1)
}

/// Coverage re-derived cell by cell from the definition.
fn brute_dominated(
    instance: &Instance,
    placement: &Placement,
    model: DominationModel,
    i: usize,
    j: usize,
) -> bool {
    placement.iter().any(|(a, b)| match model {
        DominationModel::Adjacency => a.abs_diff(i) + b.abs_diff(j) <= 1,
        DominationModel::Line => instance.get(i, j) && instance.get(a, b) && (a == i || b == j),
    })
}

fn brute_verify(
    instance: &Instance,
    placement: &Placement,
    k: usize,
    model: DominationModel,
) -> bool {
    let d = instance.dims();
    if placement.len() > k || placement.iter().any(|c| !d.contains(c)) {
        return false;
    }
    if model == DominationModel::Line && placement.iter().any(|(a, b)| !instance.get(a, b)) {
        return false;
    }
    (0..d.rows).all(|i| {
        (0..d.cols).all(|j| {
            let required = model == DominationModel::Adjacency || instance.get(i, j);
            !required || brute_dominated(instance, placement, model, i, j)
        })
    })
}

type CellMap = Box<dyn Fn((usize, usize)) -> (usize, usize)>;

/// The eight symmetries of the square, as maps on an n x n grid.
fn symmetries(n: usize) -> [CellMap; 8] {
    let m = n - 1;
    [
        Box::new(|(i, j)| (i, j)),
        Box::new(move |(i, j)| (j, m - i)),
        Box::new(move |(i, j)| (m - i, m - j)),
        Box::new(move |(i, j)| (m - j, i)),
        Box::new(move |(i, j)| (i, m - j)),
        Box::new(move |(i, j)| (m - i, j)),
        Box::new(|(i, j)| (j, i)),
        Box::new(move |(i, j)| (m - j, m - i)),
    ]
}

proptest! {
    #[test]
    fn penalty_zero_iff_permutation((d, p) in dims_and_cells(6)) {
        let s = occupancy(&p, d).unwrap();
        prop_assert_eq!(penalty(&s).unwrap() == 0, is_permutation_occupancy(&s));
    }

    #[test]
    fn permutation_penalty_is_zero(p in permutation(8)) {
        let s = occupancy(&p.to_placement(), Dims::square(p.len()).unwrap()).unwrap();
        prop_assert_eq!(penalty(&s).unwrap(), 0);
    }

    #[test]
    fn adjacency_influence_bounds((d, p) in dims_and_cells(7)) {
        let total = influence(d, &p, ADJ, None).unwrap();
        prop_assert!(total as usize <= d.cells());
        let mut prev = 0u64;
        let mut grown = Vec::new();
        for c in p.iter() {
            grown.push(c);
            let now = influence(d, &Placement::new(grown.iter().copied()), ADJ, None).unwrap();
            prop_assert!(now >= prev && now - prev <= 5);
            prev = now;
        }
        prop_assert_eq!(prev, total);
    }

    #[test]
    fn fitness_is_influence_minus_penalty((inst, p) in instance_and_cells(6), line in any::<bool>()) {
        let model = if line { DominationModel::Line } else { ADJ };
        if let Ok(f) = fitness(&inst, &p, model) {
            prop_assert_eq!(f.fitness, f.influence as i64 - f.penalty as i64);
        }
    }

    #[test]
    fn repair_is_idempotent_and_feasible(n in 1usize..8, cells in prop::collection::vec((0usize..8, 0usize..8), 0..40)) {
        let p = Placement::new(cells.into_iter().filter(|&(i, j)| i < n && j < n));
        let r = repair(&p, n);
        prop_assert_eq!(repair(&r.to_placement(), n), r.clone());
        let s = occupancy(&r.to_placement(), Dims::square(n).unwrap()).unwrap();
        prop_assert_eq!(penalty(&s).unwrap(), 0);
    }

    #[test]
    fn coverage_commutes_with_symmetries(n in 1usize..7, cells in prop::collection::vec((0usize..7, 0usize..7), 0..20)) {
        let d = Dims::square(n).unwrap();
        let p = Placement::new(cells.into_iter().filter(|&(i, j)| i < n && j < n));
        let base = adjacency_coverage(d, &p).unwrap();
        for g in symmetries(n) {
            let moved = adjacency_coverage(d, &Placement::new(p.iter().map(&g))).unwrap();
            prop_assert_eq!(moved.count(), base.count());
            for i in 0..n {
                for j in 0..n {
                    let (a, b) = g((i, j));
                    prop_assert_eq!(moved.is_covered(a, b), base.is_covered(i, j));
                }
            }
        }
    }

    #[test]
    fn greedy_certificate_verifies((inst, _) in instance_and_cells(6), line in any::<bool>()) {
        let model = if line { DominationModel::Line } else { ADJ };
        let g = greedy_dominate(&inst, model);
        let q = CertificateQuery { instance: inst, bound: g.len(), candidate: g, model };
        prop_assert!(verify_certificate(&q).is_accepted());
    }

    #[test]
    fn exact_never_beats_greedy_from_below((inst, _) in instance_and_cells(5), line in any::<bool>()) {
        let model = if line { DominationModel::Line } else { ADJ };
        let e = exact_min_dominating(&inst, model, OracleBudget::default()).unwrap();
        prop_assert!(e.len() <= greedy_dominate(&inst, model).len());
        let q = CertificateQuery { instance: inst, bound: e.len(), candidate: e, model };
        prop_assert!(verify_certificate(&q).is_accepted());
    }

    #[test]
    fn generators_are_pure(n in 1usize..9, k in 0usize..10, seed in any::<u64>()) {
        let p = random_permutation(n, seed).unwrap();
        prop_assert_eq!(&p, &random_permutation(n, seed).unwrap());
        prop_assert!(PermutationPlacement::new(p.into_vec()).is_ok());
        let k = k.min(n * n);
        let q = random_placement(n, n, k, seed).unwrap();
        prop_assert_eq!(q.len(), k);
        prop_assert_eq!(q, random_placement(n, n, k, seed).unwrap());
    }

    #[test]
    fn consensus_rows_sum_to_one(perms in prop::collection::vec(Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(), 1..8)) {
        let d = Dims::square(5).unwrap();
        let elites: Vec<Placement> =
            perms.into_iter().map(|v| PermutationPlacement::new(v).unwrap().to_placement()).collect();
        let f = build_consensus(d, &elites).unwrap();
        for i in 0..5 {
            let total: u32 = (0..5).map(|j| f.count(i, j)).sum();
            prop_assert_eq!(total, f.contributors());
        }
    }
}

#[test]
fn certificate_matches_brute_force() {
    let mut rng = rng_from_seed(0xC0FFEE);
    use rand::Rng;
    for _ in 0..1000 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let d = Dims::new(r, c).unwrap();
        let inst = Instance::from_fn(d, |_, _| rng.gen_bool(0.6));
        let cells: Vec<_> = (0..rng.gen_range(0..=r * c / 2 + 1))
            .map(|_| (rng.gen_range(0..=r), rng.gen_range(0..c)))
            .collect();
        let p = Placement::new(cells);
        let k = rng.gen_range(0..=p.len() + 1);
        let model = if rng.gen_bool(0.5) {
            ADJ
        } else {
            DominationModel::Line
        };
        let q = CertificateQuery {
            instance: inst.clone(),
            candidate: p.clone(),
            bound: k,
            model,
        };
        assert_eq!(
            verify_certificate(&q).is_accepted(),
            brute_verify(&inst, &p, k, model),
            "{q:?}"
        );
    }
}

#[test]
fn best_permutation_dominates_samples() {
    for n in 1..=6 {
        let (_, best) = exact_best_permutation(n, OracleBudget::default()).unwrap();
        let d = Dims::square(n).unwrap();
        for seed in 0..1000 {
            let p = random_permutation(n, seed).unwrap();
            assert!(influence(d, &p.to_placement(), ADJ, None).unwrap() as usize <= best);
        }
    }
}

#[test]
fn operators_preserve_permutations() {
    let obj = Objective::new(Instance::ones(Dims::square(9).unwrap()), ADJ);
    let mut rng = rng_from_seed(11);
    for t in 0..10_000u64 {
        let a = random_permutation(9, 2 * t).unwrap();
        let b = random_permutation(9, 2 * t + 1).unwrap();
        let c = crossover_permutation(&a, &b, &mut rng).unwrap();
        assert!(PermutationPlacement::new(c.as_slice().to_vec()).is_ok());
        assert!(
            (0..9).all(|i| c.column_of(i) == a.column_of(i) || c.column_of(i) == b.column_of(i))
        );
        let ind = Individual::evaluated(Genome::Permutation(c), &obj);
        let m = mutate(&ind, 0.5, &mut rng, None, 0.0, &obj);
        let Genome::Permutation(p) = &m.genome else {
            panic!("genome changed encoding")
        };
        assert!(PermutationPlacement::new(p.as_slice().to_vec()).is_ok());
        assert_eq!(m.fitness, obj.evaluate(&m.genome));
    }
}

#[test]
fn random_permutation_is_uniform() {
    let mut counts = std::collections::HashMap::new();
    let trials = 60_000;
    for seed in 0..trials {
        *counts
            .entry(random_permutation(3, seed).unwrap().into_vec())
            .or_insert(0u32) += 1;
    }
    assert_eq!(counts.len(), 6);
    for (p, c) in counts {
        let share = f64::from(c) / trials as f64;
        assert!((share - 1.0 / 6.0).abs() <= 0.02, "{p:?}: {share}");
    }
}
