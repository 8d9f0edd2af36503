use binomial_cayley::cayley::{format_weight_file, parse_weight_file, WeightFunction};
use binomial_cayley::exactla::{
    kernel_basis, lp_feasible, polytope_dimension, rank, rank_nullity, solve, Feasibility, PolytopeQuery, RatMatrix,
};
use binomial_cayley::groups::GroupSpec;
use binomial_cayley::particlebox::files::{format_family, format_measure, parse_distribution, parse_family};
use binomial_cayley::particlebox::{
    compatibility_check, degeneracy, gram_matrix, observability_check, restrict, restriction_matrix, Distribution,
    Observability, RowKey, Sigma, SystemSpec,
};
use binomial_cayley::partitions::{enumerate_partitions, syt_count};
use binomial_cayley::rational::{int, rat};
use binomial_cayley::rsk::{lis, rsk};
use binomial_cayley::spectra::cyclic_rank;
use binomial_cayley::Rat;
use num_traits::Zero;
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

/// Matrices with many zeros so that kernels are usually nontrivial.
fn sparse_matrix(max: usize) -> impl Strategy<Value = RatMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop_oneof![3 => Just(int(0)), 2 => small_rat()], r * c)
            .prop_map(move |data| RatMatrix::from_vec(r, c, data).unwrap())
    })
}

fn system() -> impl Strategy<Value = SystemSpec> {
    prop_oneof![
        (1usize..=3, 2usize..=3)
            .prop_flat_map(|(n, m)| (0..=n).prop_map(move |k| SystemSpec::new(n, m, k, Sigma::All).unwrap())),
        (2usize..=4).prop_flat_map(|m| (0..=m).prop_map(move |k| SystemSpec::new(m, m, k, Sigma::Bij).unwrap())),
    ]
}

fn distribution(s: SystemSpec) -> impl Strategy<Value = Distribution> {
    prop::collection::vec(prop_oneof![1 => Just(0u32), 2 => 1u32..5], s.arrangement_count()).prop_map(move |w| {
        let mut w = w;
        if w.iter().all(|&x| x == 0) {
            w[0] = 1;
        }
        let total: u32 = w.iter().sum();
        Distribution::new(w.iter().map(|&x| rat(x as i64, total as i64)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_plus_nullity_is_column_count(m in sparse_matrix(9)) {
        let (r, nullity) = rank_nullity(&m);
        prop_assert_eq!(r + nullity, m.cols());
        let basis = kernel_basis(&m);
        prop_assert_eq!(basis.len(), nullity);
        for v in &basis {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
        prop_assert_eq!(rank(&m.transpose()), r);
    }

    #[test]
    fn row_scaling_preserves_kernel(m in sparse_matrix(7), scale in prop::collection::vec(1i64..=5, 7)) {
        let scaled = RatMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j) * int(scale[i]));
        prop_assert_eq!(kernel_basis(&scaled), kernel_basis(&m));
    }

    #[test]
    fn solve_returns_solutions(m in sparse_matrix(7), x in prop::collection::vec(small_rat(), 7)) {
        let x = &x[..m.cols()];
        let b = m.mul_vec(x).unwrap();
        let y = solve(&m, &b).unwrap().expect("consistent system");
        prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
    }

    #[test]
    fn feasibility_answers_carry_proof(k in sparse_matrix(6), offsets in prop::collection::vec(small_rat(), 6)) {
        let offsets = offsets[..k.rows()].to_vec();
        let q = PolytopeQuery::new(k, offsets).unwrap();
        match lp_feasible(&q).unwrap() {
            Feasibility::Feasible { witness } => prop_assert!(q.contains(&witness).unwrap()),
            Feasibility::Infeasible { certificate } => prop_assert!(q.verifies_infeasibility(&certificate).unwrap()),
        }
    }

    #[test]
    fn restrictions_are_compatible_and_observable((s, p) in system().prop_flat_map(|s| (Just(s), distribution(s)))) {
        let fam = restrict(&s, &p.as_signed()).unwrap();
        prop_assert!(compatibility_check(&fam).unwrap().compatible);
        match observability_check(&fam).unwrap() {
            Observability::Observable { witness } => {
                let w = Distribution::new(witness).unwrap();
                prop_assert_eq!(restrict(&s, &w.as_signed()).unwrap(), fam);
            }
            other => prop_assert!(false, "{:?}", other),
        }
        let report = degeneracy(&s, &p).unwrap();
        prop_assert!(report.dimension <= report.nullity);
        if p.is_interior() {
            prop_assert_eq!(report.dimension, report.nullity);
        }
    }

    #[test]
    fn gram_and_restriction_share_kernel(s in system()) {
        let m = restriction_matrix(&s).unwrap().to_rat();
        let g = gram_matrix(&s).unwrap();
        prop_assert_eq!(rank_nullity(&g).1, rank_nullity(&m).1);
        for v in kernel_basis(&m) {
            prop_assert!(g.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn distribution_and_family_files_round_trip((s, p) in system().prop_flat_map(|s| (Just(s), distribution(s)))) {
        let text = format_measure(&s, &p.values);
        prop_assert_eq!(parse_distribution(&s, &text).unwrap(), p.clone());
        let fam = restrict(&s, &p.as_signed()).unwrap();
        prop_assert_eq!(parse_family(&s, &format_family(&fam)).unwrap(), fam.clone());
        for key in fam.keys() {
            prop_assert_eq!(key.to_string().parse::<RowKey>().unwrap(), key);
        }
    }

    #[test]
    fn weight_files_round_trip(m in 2usize..=5, values in prop::collection::vec(0u64..20, 5)) {
        let g = GroupSpec::cyclic_power(m, 1).unwrap();
        // symmetric under negation
        let v: Vec<u64> = (0..m).map(|i| values[i.min(m - i)]).collect();
        let w = WeightFunction::new(g, v).unwrap();
        prop_assert_eq!(parse_weight_file(&format_weight_file(&w).unwrap()).unwrap(), w);
    }

    #[test]
    fn matrix_csv_round_trips(m in sparse_matrix(6)) {
        prop_assert_eq!(RatMatrix::from_csv(&m.to_csv()).unwrap(), m);
    }

    #[test]
    fn rsk_shape_matches_lis(p in (1usize..=8).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())) {
        let (insertion, recording) = rsk(&p).unwrap();
        prop_assert_eq!(insertion.shape(), recording.shape());
        prop_assert_eq!(insertion.shape().first_row(), lis(&p));
        prop_assert_eq!(insertion.shape().conjugate().first_row(), lis(&p.iter().rev().copied().collect::<Vec<_>>()));
    }
}

#[test]
fn large_sparse_rank_nullity() {
    let n = 200;
    let m = RatMatrix::from_fn(n, n, |i, j| {
        if (i * 7 + j * 13) % 11 == 0 {
            int(((i + 2 * j) % 5) as i64 - 2)
        } else {
            int(0)
        }
    });
    let (r, nullity) = rank_nullity(&m);
    assert_eq!(r + nullity, n);
    for v in kernel_basis(&m) {
        assert!(m.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
    }
}

#[test]
fn all_rank_equals_closed_form() {
    for n in 1..=6 {
        for m in 2..=3 {
            for k in 0..=n {
                let s = SystemSpec::new(n, m, k, Sigma::All).unwrap();
                let r = rank(&restriction_matrix(&s).unwrap().to_rat());
                assert_eq!(r as u128, cyclic_rank(n, m, k).unwrap(), "n={n} m={m} k={k}");
            }
        }
    }
}

#[test]
fn bijection_rank_counts_long_first_rows() {
    for m in 1..=5 {
        for k in 0..=m {
            let s = SystemSpec::new(m, m, k, Sigma::Bij).unwrap();
            let r = rank(&restriction_matrix(&s).unwrap().to_rat()) as u128;
            let expected: u128 = enumerate_partitions(m)
                .iter()
                .filter(|mu| mu.first_row() >= m - k)
                .map(|mu| syt_count(mu).pow(2))
                .sum();
            assert_eq!(r, expected, "m={m} k={k}");
        }
    }
}

#[test]
fn interior_points_have_full_fibers() {
    let s = SystemSpec::new(3, 2, 1, Sigma::All).unwrap();
    let q = PolytopeQuery::new(
        RatMatrix::from_fn(8, 4, |i, j| kernel_basis(&restriction_matrix(&s).unwrap().to_rat())[j][i].clone()),
        Distribution::uniform(&s).values,
    )
    .unwrap();
    assert_eq!(polytope_dimension(&q).unwrap(), 4);
}
