//! Property tests for the exact kernels: algebraic identities on random
//! inputs, chain invariants on matrices with forced rational spectra, and
//! the graph/matrix correspondence.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kronctrl_core::diffcheck::{random_instance, random_rational_spectrum_matrix};
use kronctrl_core::{
    check_kron, check_kron_diagonalizable, collision_classes, eigenstructure, eigenvalues,
    is_diagonalizable, kalman_oracle, left_jordan_chains, verify_eigenstructure, InputSelection,
    Mat, Poly, Rational, RowVec, Verdict, WeightedDigraph,
};

fn rational_entry() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(p, q)| Rational::ratio(p, q))
}

fn square_mat(max: usize) -> impl Strategy<Value = Mat> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(rational_entry(), n * n)
            .prop_map(move |v| Mat::from_fn(n, n, |i, j| v[i * n + j].clone()))
    })
}

fn rect_mat(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Mat> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(rational_entry(), r * c)
            .prop_map(move |v| Mat::from_fn(r, c, |i, j| v[i * c + j].clone()))
    })
}

fn graph_strategy(max_nodes: usize) -> impl Strategy<Value = WeightedDigraph> {
    (1..=max_nodes).prop_flat_map(|n| {
        prop::collection::vec((-3i64..=3, 1i64..=2), n * n).prop_map(move |weights| {
            let edges = weights.iter().enumerate().filter_map(|(k, &(p, q))| {
                if p == 0 {
                    None
                } else {
                    Some((k / n + 1, k % n + 1, Rational::ratio(p, q)))
                }
            });
            WeightedDigraph::new(n, edges).expect("generated edges are valid")
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity_is_row_count(m in rect_mat(5, 5)) {
        let basis = m.left_null_space();
        prop_assert_eq!(m.rank() + basis.len(), m.rows());
        for v in &basis {
            prop_assert!(v.mul_mat(&m).unwrap().is_zero());
        }
    }

    #[test]
    fn kron_mixed_product(
        dims in (1usize..=3, 1usize..=3, 1usize..=3, 1usize..=3, 1usize..=3, 1usize..=3),
        entries in prop::collection::vec(rational_entry(), 4 * 9),
    ) {
        // Conforming shapes: a (m x k) with c (k x n), b (p x r) with d (r x s).
        let (m, k, n, p, r, s) = dims;
        let mut feed = entries.into_iter().cycle();
        let mut take = |rows: usize, cols: usize| {
            Mat::from_fn(rows, cols, |_, _| feed.next().unwrap())
        };
        let a = take(m, k);
        let c = take(k, n);
        let b = take(p, r);
        let d = take(r, s);
        let left = a.kron(&b).matmul(&c.kron(&d)).unwrap();
        let right = a.matmul(&c).unwrap().kron(&b.matmul(&d).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn cayley_hamilton(m in square_mat(5)) {
        let p = m.charpoly().unwrap();
        let n = m.rows();
        let mut acc = Mat::zeros(n, n);
        let mut power = Mat::identity(n);
        for k in 0..=p.degree().unwrap() {
            acc = acc.add(&power.scale(&p.coeff(k))).unwrap();
            power = power.matmul(&m).unwrap();
        }
        prop_assert!(acc.is_zero());
    }

    #[test]
    fn adjacency_commutes_with_graph_kron(
        g1 in graph_strategy(4),
        g2 in graph_strategy(4),
    ) {
        let composite = g1.kron_graph(&g2);
        prop_assert_eq!(
            composite.adjacency(),
            g1.adjacency().kron(&g2.adjacency())
        );
    }

    #[test]
    fn graph_text_round_trip(g in graph_strategy(4)) {
        let text = g.serialize();
        prop_assert_eq!(WeightedDigraph::parse(&text).unwrap(), g);
    }

    #[test]
    fn selection_has_full_column_rank(
        n in 1usize..=6,
        picks in prop::collection::vec(any::<bool>(), 6),
    ) {
        let nodes = (1..=n).filter(|&i| picks[i - 1]);
        let s = InputSelection::new(n, nodes).unwrap();
        prop_assert_eq!(s.matrix().rank(), s.count());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn laplacian_annihilates_ones(g in graph_strategy(4)) {
        prop_assume!(!g.has_self_loop());
        let l = g.laplacian().unwrap();
        let ones = Mat::from_fn(g.node_count(), 1, |_, _| Rational::one());
        prop_assert!(l.matmul(&ones).unwrap().is_zero());
    }

    #[test]
    fn rational_roots_match_brute_force_divisor_trial(
        roots in prop::collection::vec((-4i64..=4, 1i64..=2), 1..4),
        lead in prop_oneof![Just(1i64), Just(2), Just(-3)],
        tack_on_irreducible in any::<bool>(),
    ) {
        let mut p = Poly::from_coeffs(vec![Rational::from(lead)]);
        for &(num, den) in &roots {
            p = p.mul(&Poly::linear(&Rational::ratio(num, den)));
        }
        if tack_on_irreducible {
            // (s^2 + 1) contributes no rational roots.
            p = p.mul(&Poly::from_coeffs(vec![
                Rational::one(),
                Rational::zero(),
                Rational::one(),
            ]));
        }
        let (found, full) = p.rational_roots();
        let expected = brute_force_roots(&p);
        prop_assert_eq!(found.clone(), expected);
        let count: usize = found.iter().map(|(_, m)| m).sum();
        prop_assert_eq!(full, count == p.degree().unwrap());
        prop_assert_eq!(full, !tack_on_irreducible);
    }
}

/// Independent root oracle: trial over all divisor pairs of the cleared
/// constant and leading coefficients, multiplicity by a local synthetic
/// division that shares no code with the implementation.
fn brute_force_roots(p: &Poly) -> Vec<(Rational, usize)> {
    fn divides(r: &Rational, coeffs: &[Rational]) -> Option<Vec<Rational>> {
        // coeffs lowest-first; returns quotient of division by (s - r).
        let n = coeffs.len();
        let mut quotient = vec![Rational::zero(); n - 1];
        let mut acc = Rational::zero();
        for k in (1..n).rev() {
            acc = coeffs[k].clone() + acc * r;
            quotient[k - 1] = acc.clone();
        }
        let remainder = coeffs[0].clone() + acc * r;
        remainder.is_zero().then_some(quotient)
    }

    let mut coeffs: Vec<Rational> = p.coeffs().to_vec();
    let mut out: Vec<(Rational, usize)> = Vec::new();

    let mut zero_mult = 0usize;
    while coeffs.len() > 1 && coeffs[0].is_zero() {
        coeffs.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        out.push((Rational::zero(), zero_mult));
    }

    // Clear denominators by brute multiplication.
    let mut scale = Rational::one();
    for c in &coeffs {
        scale = scale * Rational::from(c.denom().clone());
    }
    let ints: Vec<i128> = coeffs
        .iter()
        .map(|c| {
            let v = c * &scale;
            let digits = v.numer().to_string();
            digits.parse::<i128>().expect("test coefficients stay small")
        })
        .collect();
    let a0 = ints[0].unsigned_abs();
    let an = ints.last().unwrap().unsigned_abs();

    let mut candidates: Vec<Rational> = Vec::new();
    for num in 1..=a0 {
        if !a0.is_multiple_of(num) {
            continue;
        }
        for den in 1..=an {
            if !an.is_multiple_of(den) {
                continue;
            }
            candidates.push(Rational::ratio(num as i64, den as i64));
            candidates.push(Rational::ratio(-(num as i64), den as i64));
        }
    }
    candidates.sort();
    candidates.dedup();

    for cand in candidates {
        let mut mult = 0usize;
        while let Some(q) = divides(&cand, &coeffs) {
            if q.is_empty() {
                coeffs = vec![coeffs.last().unwrap().clone()];
            } else {
                coeffs = q;
            }
            mult += 1;
            if coeffs.len() == 1 {
                break;
            }
        }
        if mult > 0 {
            out.push((cand, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Chain invariants on matrices with forced rational spectra: strict chain
/// relations, Segre counts from rank differences, joint independence, and
/// the stacked similarity to the block-diagonal normal form.
#[test]
fn chain_invariants_on_forced_spectra() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240811);
    for trial in 0..60 {
        let size = 1 + (trial % 4);
        let a = random_rational_spectrum_matrix(&mut rng, size);
        let es = eigenstructure(&a).unwrap();
        assert!(es.complete, "forced spectrum must factor: {a:?}");
        assert!(verify_eigenstructure(&a, &es));

        for lambda in es.eigenvalues() {
            let shifted = a.shift(&lambda).unwrap();
            let chains = left_jordan_chains(&a, &lambda).unwrap();
            for chain in &chains {
                for (k, v) in chain.chain.iter().enumerate() {
                    let image = v.mul_mat(&shifted).unwrap();
                    if k == 0 {
                        assert!(image.is_zero());
                    } else {
                        assert_eq!(image, chain.chain[k - 1]);
                    }
                }
                // v^size (A - lambda I)^(size-1) = v^1 != 0.
                assert!(!chain.chain[0].is_zero());
            }
            // Number of blocks of size >= k equals
            // rank M^(k-1) - rank M^k for every k up to the dimension.
            let max_size = chains.iter().map(|c| c.size).max().unwrap();
            for k in 1..=size {
                let at_least = chains.iter().filter(|c| c.size >= k).count();
                let low = shifted.pow(k - 1).unwrap().rank();
                let high = shifted.pow(k).unwrap().rank();
                assert_eq!(at_least, low - high, "Segre mismatch at k={k} for {a:?}");
                if k > max_size {
                    assert_eq!(at_least, 0);
                }
            }
            // Geometric multiplicity from chains matches the null space.
            assert_eq!(chains.len(), shifted.left_null_space().len());
        }

        // Stacked chains give V invertible with V A = J V.
        let mut rows: Vec<RowVec> = Vec::new();
        let mut jordan = Mat::zeros(size, size);
        let mut offset = 0usize;
        for block in &es.blocks {
            for v in block.chain.iter().rev() {
                rows.push(v.clone());
            }
            for k in 0..block.size {
                jordan.set(offset + k, offset + k, block.eigenvalue.clone());
                if k + 1 < block.size {
                    jordan.set(offset + k, offset + k + 1, Rational::one());
                }
            }
            offset += block.size;
        }
        let v = Mat::from_rows(&rows);
        assert_eq!(v.rank(), size);
        assert_eq!(v.matmul(&a).unwrap(), jordan.matmul(&v).unwrap());
    }
}

/// Composite spectrum is the multiset of pairwise eigenvalue products, and
/// the lifted class bases span each brute-force eigenspace exactly.
#[test]
fn composite_spectrum_and_span_equality() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..25 {
        let n1 = 1 + (trial % 3);
        let n2 = 1 + ((trial / 3) % 3);
        let a1 = random_rational_spectrum_matrix(&mut rng, n1);
        let a2 = random_rational_spectrum_matrix(&mut rng, n2);
        let es1 = eigenstructure(&a1).unwrap();
        let es2 = eigenstructure(&a2).unwrap();
        let composite = a1.kron(&a2);

        let mut products: Vec<Rational> = Vec::new();
        for (l1, m1) in eigenvalues(&a1).unwrap().0 {
            for (l2, m2) in eigenvalues(&a2).unwrap().0 {
                for _ in 0..m1 * m2 {
                    products.push(&l1 * &l2);
                }
            }
        }
        products.sort();
        let mut spectrum: Vec<Rational> = Vec::new();
        for (sigma, mult) in eigenvalues(&composite).unwrap().0 {
            for _ in 0..mult {
                spectrum.push(sigma.clone());
            }
        }
        assert_eq!(spectrum, products);

        for class in collision_classes(&es1, &es2) {
            let oracle = kronctrl_core::brute_eigenspace(&composite, &class.product);
            assert_eq!(class.basis.len(), oracle.len(), "dimension mismatch");
            let ra = Mat::from_rows(&class.basis).rank();
            assert_eq!(ra, class.basis.len(), "lifted basis dependent");
            let mut both = class.basis.clone();
            both.extend(oracle);
            assert_eq!(Mat::from_rows(&both).rank(), ra, "span mismatch");
        }
    }
}

/// Enlarging an actuated set never flips controllable to uncontrollable.
#[test]
fn monotonicity_of_actuation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5150);
    let mut checked = 0;
    for _ in 0..120 {
        let (a1, b1, a2, b2) = random_instance(&mut rng, 3);
        let Some(base) = check_kron(&a1, &b1, &a2, &b2).unwrap().is_controllable() else {
            continue;
        };
        if !base || b1.is_full() {
            continue;
        }
        let extra = (1..=b1.total_nodes()).find(|&i| !b1.contains(i)).unwrap();
        let mut nodes: Vec<usize> = b1.indices().to_vec();
        nodes.push(extra);
        let larger = InputSelection::new(b1.total_nodes(), nodes).unwrap();
        let enlarged = check_kron(&a1, &larger, &a2, &b2).unwrap();
        assert_eq!(enlarged.is_controllable(), Some(true));
        checked += 1;
    }
    assert!(checked > 5, "population produced too few controllable cases");
}

/// Composite controllable implies both factor pairs controllable; the
/// converse fails on the defective square fixture.
#[test]
fn factor_controllability_is_necessary_but_not_sufficient() {
    let mut rng = ChaCha8Rng::seed_from_u64(616);
    for _ in 0..120 {
        let (a1, b1, a2, b2) = random_instance(&mut rng, 3);
        let Some(composite_ok) = check_kron(&a1, &b1, &a2, &b2).unwrap().is_controllable() else {
            continue;
        };
        if composite_ok {
            assert!(kalman_oracle(&a1, &b1.matrix()).unwrap());
            assert!(kalman_oracle(&a2, &b2.matrix()).unwrap());
        }
    }

    let a = kronctrl_core::fixtures::defective_factor();
    let b = InputSelection::new(3, [2]).unwrap();
    assert!(kalman_oracle(&a, &b.matrix()).unwrap());
    let report = check_kron(&a, &b, &a, &b).unwrap();
    assert_eq!(report.verdict, Verdict::Uncontrollable);
}

/// Wherever the diagonalizable fast path applies, it agrees with the full
/// collision-rank test.
#[test]
fn fast_path_agrees_with_full_test() {
    let mut rng = ChaCha8Rng::seed_from_u64(90210);
    let mut compared = 0;
    for _ in 0..200 {
        let (a1, b1, a2, b2) = random_instance(&mut rng, 3);
        let d1 = match is_diagonalizable(&a1) {
            Ok(d) => d,
            Err(_) => continue,
        };
        let d2 = match is_diagonalizable(&a2) {
            Ok(d) => d,
            Err(_) => continue,
        };
        if !d1 && !d2 {
            continue;
        }
        let full = check_kron(&a1, &b1, &a2, &b2).unwrap();
        let fast = check_kron_diagonalizable(&a1, &b1, &a2, &b2).unwrap();
        assert_eq!(
            full.is_controllable(),
            fast.is_controllable(),
            "fast path disagrees on a1={a1:?} b1={:?} a2={a2:?} b2={:?}",
            b1.indices(),
            b2.indices()
        );
        compared += 1;
    }
    assert!(compared > 20, "population produced too few comparable cases");
}

/// Full measurement is always observable (dually, full actuation is always
/// controllable), for any factor matrices.
#[test]
fn full_measurement_is_always_observable() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..40 {
        let (a1, _, a2, _) = random_instance(&mut rng, 3);
        let c1 = InputSelection::full(a1.rows());
        let c2 = InputSelection::full(a2.rows());
        let report = kronctrl_core::check_kron_observability(&a1, &c1, &a2, &c2).unwrap();
        assert_eq!(report.is_controllable(), Some(true));
    }
}

/// Every uncontrollable report carries a witness that is exactly a left
/// eigenvector of the composite annihilating the input matrix.
#[test]
fn witnesses_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    let mut seen = 0;
    for _ in 0..150 {
        let (a1, b1, a2, b2) = random_instance(&mut rng, 3);
        let report = check_kron(&a1, &b1, &a2, &b2).unwrap();
        if report.verdict != Verdict::Uncontrollable {
            continue;
        }
        let witness = report.witness.as_ref().expect("uncontrollable needs witness");
        assert!(!witness.is_zero());
        let composite = a1.kron(&a2);
        let input = b1.matrix().kron(&b2.matrix());
        assert!(witness.mul_mat(&input).unwrap().is_zero());
        // witness · K = sigma · witness for the sigma of its failing class.
        let sigma = &report
            .classes
            .iter()
            .find(|c| !c.pass)
            .expect("some class failed")
            .sigma;
        assert_eq!(
            witness.mul_mat(&composite).unwrap(),
            witness.scaled(sigma)
        );
        seen += 1;
    }
    assert!(seen > 10, "population produced too few uncontrollable cases");
}
