use cgkit::lmo::{
    lp_ball_lmo, BirkhoffPolytope, EnumeratedVertices, KSparsePolytope, L1Ball, L2Ball, LInfBall, LpNorm,
    NuclearNormBall, OracleStatus, ProbabilitySimplex, VertexCache,
};
use cgkit::{Atom, LinearMinimizationOracle, Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn value<S: Scalar>(atom: &Atom<S>, d: &[S]) -> S {
    atom.inner(d).unwrap()
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn assert_same_optimum(a: &dyn LinearMinimizationOracle<f64>, b: &dyn LinearMinimizationOracle<f64>, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..50 {
        let d = random_direction(&mut rng, a.dim());
        let va = value(&a.compute_extreme_point(&d).unwrap(), &d);
        let vb = value(&b.compute_extreme_point(&d).unwrap(), &d);
        assert!((va - vb).abs() <= 1e-12 * (1.0 + va.abs()), "{va} vs {vb}");
    }
}

#[test]
fn closed_forms_agree_with_enumerated_vertices() {
    for n in [1, 4, 7] {
        assert_same_optimum(
            &ProbabilitySimplex::new(n, 2.0),
            &EnumeratedVertices::simplex(n, 2.0).unwrap(),
            1,
        );
        assert_same_optimum(&L1Ball::new(n, 0.7), &EnumeratedVertices::l1_ball(n, 0.7).unwrap(), 2);
        assert_same_optimum(
            &LInfBall::new(n, 1.3),
            &EnumeratedVertices::linf_ball(n, 1.3).unwrap(),
            3,
        );
    }
    assert_same_optimum(
        &KSparsePolytope::new(6, 3, 1.0).unwrap(),
        &EnumeratedVertices::ksparse(6, 3, 1.0).unwrap(),
        4,
    );
    for n in 1..=4 {
        assert_same_optimum(&BirkhoffPolytope::new(n), &EnumeratedVertices::birkhoff(n).unwrap(), 5);
    }
}

#[test]
fn l2_ball_answer_is_the_scaled_negative_direction() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let lmo = L2Ball::new(5, 3.0);
    for _ in 0..20 {
        let d = random_direction(&mut rng, 5);
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        let v = lmo.compute_extreme_point(&d).unwrap().materialize();
        for (vi, di) in v.iter().zip(&d) {
            assert!((vi + 3.0 * di / norm).abs() < 1e-12);
        }
        assert!((value(&Atom::Dense(v.clone()), &d) + 3.0 * norm).abs() < 1e-12);
    }
}

#[test]
fn zero_direction_is_reported_as_degenerate() {
    let answer = lp_ball_lmo(&[0.0; 4], 1.0, LpNorm::L2).unwrap();
    assert_eq!(answer.status, OracleStatus::DegenerateDirection);
    let v = answer.atom.materialize();
    assert!(v.iter().map(|x| x * x).sum::<f64>() <= 1.0 + 1e-12);
}

#[test]
fn rational_oracles_return_exact_vertices() {
    let tau = Rational::from_ratio(3, 7);
    let d = vec![
        Rational::from_ratio(1, 3),
        Rational::from_ratio(-5, 2),
        Rational::from_ratio(-5, 3),
    ];
    let v = L1Ball::new(3, tau.clone())
        .compute_extreme_point(&d)
        .unwrap()
        .materialize();
    assert_eq!(v, vec![Rational::from_i64(0), tau.clone(), Rational::from_i64(0)]);
    let s = ProbabilitySimplex::new(3, tau.clone())
        .compute_extreme_point(&d)
        .unwrap();
    assert_eq!(value(&s, &d), Rational::from_ratio(-15, 14));
    let box_v = LInfBall::new(3, tau.clone())
        .compute_extreme_point(&d)
        .unwrap()
        .materialize();
    assert_eq!(box_v, vec![-tau.clone(), tau.clone(), tau]);
}

#[test]
fn birkhoff_vertices_are_permutation_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 9;
    let lmo = BirkhoffPolytope::new(n);
    for _ in 0..20 {
        let d = random_direction(&mut rng, n * n);
        let m = lmo.compute_extreme_point(&d).unwrap().materialize();
        for i in 0..n {
            let row: f64 = (0..n).map(|j| m[i * n + j]).sum();
            let col: f64 = (0..n).map(|j| m[j * n + i]).sum();
            assert_eq!((row, col), (1.0, 1.0));
        }
        assert!(m.iter().all(|&x| x == 0.0 || x == 1.0));
    }
}

#[test]
fn nuclear_vertex_has_unit_nuclear_norm_times_radius() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (rows, cols, tau) = (7, 4, 2.5);
    let d = random_direction(&mut rng, rows * cols);
    let v = NuclearNormBall::new(rows, cols, tau).compute_extreme_point(&d).unwrap();
    let m = nalgebra::DMatrix::from_row_slice(rows, cols, &v.materialize());
    let nuclear: f64 = m.singular_values().iter().sum();
    assert!((nuclear - tau).abs() < 1e-9, "{nuclear}");
}

#[test]
fn cache_respects_capacity_and_threshold() {
    let mut cache = VertexCache::new(Some(2));
    for i in 0..3 {
        cache.insert(Atom::scaled_unit(3, i, 1.0).unwrap());
    }
    assert_eq!(cache.len(), 2);
    assert_eq!(cache.evictions(), 1);
    let gradient = [0.0, -1.0, 0.5];
    let x = [1.0 / 3.0; 3];
    // <g, x - e_1> = -1/6 + 1 clears 0.5; e_0 was evicted.
    let hit = cache.lookup(&gradient, &x, &0.5).unwrap();
    assert!(hit.is_some_and(|(a, _)| a == Atom::scaled_unit(3, 1, 1.0).unwrap()));
    assert!(cache.lookup(&gradient, &x, &0.9).unwrap().is_none());
}

#[test]
fn dimension_mismatch_is_an_error() {
    assert!(ProbabilitySimplex::new(3, 1.0)
        .compute_extreme_point(&[1.0, 2.0])
        .is_err());
    assert!(BirkhoffPolytope::new(3).compute_extreme_point(&[0.0; 8]).is_err());
    assert!(KSparsePolytope::new(3, 4, 1.0).is_err());
}
